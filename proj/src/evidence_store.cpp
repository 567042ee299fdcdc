#include "evidence_store.hpp"

#include <fstream>
#include <sstream>

#include "hash.hpp"

namespace bcoc {

namespace fs = std::filesystem;

EvidenceId generateId(std::span<const std::uint8_t> blob, std::uint64_t nonce) {
  if (blob.empty()) throw Error(ErrorCode::EmptyEvidence, "evidence blob is empty");
  const Digest d = Sha256().update(blob).updateU64(nonce).finish();
  EvidenceId id;
  id.bytes = d.bytes;
  return id;
}

// ---------------------------------------------------------------------------
// EvidenceStore

EvidenceStore::EvidenceStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + root_.string() + ": " + ec.message());
  loadIndex();
}

fs::path EvidenceStore::blobPath(const EvidenceId& id) const { return root_ / (id.hex() + ".bin"); }

std::vector<EvidenceId> EvidenceStore::ids() const {
  std::vector<EvidenceId> out;
  out.reserve(index_.size());
  for (const auto& [id, meta] : index_) out.push_back(id);
  return out;
}

void EvidenceStore::loadIndex() {
  const fs::path p = root_ / "index.tsv";
  std::ifstream in(p);
  if (!in) return;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string hexId;
    Meta meta{};
    if (!std::getline(fields, hexId, '\t') || !(fields >> meta.nonce) || !(fields >> meta.size)) {
      throw Error(ErrorCode::IoError,
                  p.string() + ":" + std::to_string(lineNo) + ": malformed index line");
    }
    index_[EvidenceId::fromHexOrThrow(hexId)] = meta;
  }
}

void EvidenceStore::saveIndex() const {
  const fs::path p = root_ / "index.tsv";
  const fs::path tmp = root_ / "index.tsv.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    for (const auto& [id, meta] : index_) {
      out << id.hex() << '\t' << meta.nonce << '\t' << meta.size << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + p.string() + ": " + ec.message());
}

void EvidenceStore::put(const EvidenceId& id, std::uint64_t nonce,
                        std::span<const std::uint8_t> blob) {
  if (index_.contains(id)) throw Error(ErrorCode::IdCollision, "id already stored: " + id.hex());
  {
    std::ofstream out(blobPath(id), std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + blobPath(id).string());
  }
  index_[id] = Meta{nonce, blob.size()};
  saveIndex();
}

std::optional<StoredEvidence> EvidenceStore::get(const EvidenceId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  std::ifstream in(blobPath(id), std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "blob missing for " + id.hex());
  StoredEvidence s;
  s.id = id;
  s.nonce = it->second.nonce;
  s.size = it->second.size;
  s.blob.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return s;
}

bool EvidenceStore::erase(const EvidenceId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  index_.erase(it);
  std::error_code ec;
  fs::remove(blobPath(id), ec);
  saveIndex();
  return true;
}

// ---------------------------------------------------------------------------
// LocalLedger

LocalLedger::LocalLedger(bool autoCommit, std::uint64_t gasLimit)
    : autoCommit_(autoCommit), gasLimit_(gasLimit) {
  Block genesis;
  genesis.header.txRoot = transactionRoot({});
  chain_.push_back(std::move(genesis));
}

void LocalLedger::issue(Transaction tx) {
  mempool_.submit(std::move(tx));
  if (autoCommit_) commit();
}

std::vector<Receipt> LocalLedger::commit() {
  BuildResult r = buildBlock(mempool_, gasLimit_, chain_.size(), chain_.back().digest(), 0, now_);
  std::vector<Receipt> receipts;
  const std::uint64_t t = static_cast<std::uint64_t>(now_.count() / 1'000'000'000);
  for (const auto& tx : r.block.transactions) {
    receipts.push_back(applyTransaction(state_, tx, t));
    outcomes_.push_back(Outcome{tx, receipts.back()});
  }
  mempool_.removeIncluded(r.block);
  chain_.push_back(std::move(r.block));
  return receipts;
}

std::vector<LedgerGateway::Outcome> LocalLedger::drainOutcomes() {
  std::vector<Outcome> out;
  out.swap(outcomes_);
  return out;
}

// ---------------------------------------------------------------------------
// Frontend

Frontend::Frontend(EvidenceStore& store, LedgerGateway& ledger, std::uint64_t seed,
                   IdGenerator idGen)
    : store_(store), ledger_(ledger), rng_(seed), idGen_(std::move(idGen)) {}

EvidenceId Frontend::submitEvidence(const Address& creator, std::span<const std::uint8_t> blob,
                                    std::string description) {
  if (blob.empty()) throw Error(ErrorCode::EmptyEvidence, "evidence blob is empty");
  if (creator.isZero()) throw Error(ErrorCode::InvalidAddress, "zero address cannot create evidence");
  if (description.size() > kMaxDescriptionLength) {
    throw Error(ErrorCode::DescriptionTooLong,
                "description is " + std::to_string(description.size()) +
                    " characters; the limit is 1024");
  }
  for (int attempt = 0; attempt < kMaxIdAttempts; ++attempt) {
    const std::uint64_t nonce = rng_.next();
    const EvidenceId id = idGen_(blob, nonce);
    if (id.isZero() || store_.contains(id) || ledger_.committed().find(id) != nullptr) continue;
    Transaction tx = makeCreateEvidence(ledger_.nextSeq(), creator, id, std::move(description),
                                        ledger_.now());
    store_.put(id, nonce, blob);
    ledger_.issue(std::move(tx));
    return id;
  }
  throw Error(ErrorCode::IdCollision,
              "no unique id after " + std::to_string(kMaxIdAttempts) + " nonces");
}

std::vector<std::uint8_t> Frontend::acquireEvidence(const Address& requester,
                                                    const EvidenceId& id) {
  const EvidenceEntry& entry = ledger_.committed().getEvidence(id);
  if (entry.owner != requester) {
    throw Error(ErrorCode::NotOwner, requester.hex() + " is not the owner of " + id.hex());
  }
  auto stored = store_.get(id);
  if (!stored) throw Error(ErrorCode::EvidenceNotFound, "no stored blob for " + id.hex());
  if (stored->blob.empty() || idGen_(stored->blob, stored->nonce) != id) {
    throw Error(ErrorCode::IntegrityViolation, "stored blob does not hash to " + id.hex());
  }
  return std::move(stored->blob);
}

std::uint64_t Frontend::transferEvidence(const Address& owner, const EvidenceId& id,
                                         const Address& newOwner) {
  const std::uint64_t seq = ledger_.nextSeq();
  ledger_.issue(makeTransfer(seq, owner, id, newOwner, ledger_.now()));
  return seq;
}

std::uint64_t Frontend::discardEvidence(const Address& requester, const EvidenceId& id) {
  const EvidenceEntry& entry = ledger_.committed().getEvidence(id);
  if (entry.creator != requester) {
    throw Error(ErrorCode::NotCreator, requester.hex() + " is not the creator of " + id.hex());
  }
  const std::uint64_t seq = ledger_.nextSeq();
  pendingDiscards_[seq] = id;
  ledger_.issue(makeRemoveEvidence(seq, requester, id, ledger_.now()));
  return seq;
}

std::vector<LedgerGateway::Outcome> Frontend::sync() {
  std::vector<LedgerGateway::Outcome> outcomes = ledger_.drainOutcomes();
  for (const auto& o : outcomes) {
    auto it = pendingDiscards_.find(o.tx.seq);
    if (it == pendingDiscards_.end()) continue;
    if (o.receipt.succeeded()) store_.erase(it->second);
    pendingDiscards_.erase(it);
  }
  return outcomes;
}

}  // namespace bcoc
