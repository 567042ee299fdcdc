#include "ledger.hpp"

#include <algorithm>

#include "hash.hpp"

namespace bcoc {

const char* txKindName(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::CreateEvidence: return "CreateEvidence";
    case TxKind::Transfer: return "Transfer";
    case TxKind::RemoveEvidence: return "RemoveEvidence";
  }
  return "Unknown";
}

const char* revertName(Revert r) noexcept {
  switch (r) {
    case Revert::None: return "Succeeded";
    case Revert::InvalidId: return "InvalidId";
    case Revert::EvidenceAlreadyExists: return "EvidenceAlreadyExists";
    case Revert::DescriptionTooLong: return "DescriptionTooLong";
    case Revert::EvidenceNotFound: return "EvidenceNotFound";
    case Revert::NotOwner: return "NotOwner";
    case Revert::NotCreator: return "NotCreator";
    case Revert::InvalidAddress: return "InvalidAddress";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Cost model

CostModel::CostModel()
    : transfer_{174, 80502},
      remove_{142, 236478},
      createZero_{207, 170207},
      createMax_{1233, 897367} {}

const CostModel& CostModel::standard() {
  static const CostModel model;
  return model;
}

void CostModel::setCreateEndpoints(TxCost atZero, TxCost atMax) {
  createZero_ = atZero;
  createMax_ = atMax;
}

void CostModel::overrideCreate(std::uint32_t length, TxCost c) {
  if (length > kMaxDescriptionLength) {
    throw Error(ErrorCode::InvalidDescriptionLength,
                "description length " + std::to_string(length) + " exceeds 1024");
  }
  createOverrides_[length] = c;
}

namespace {
// a + round(l * (b - a) / 1024), rounding half away from zero.
std::uint64_t interpolate(std::uint64_t a, std::uint64_t b, std::uint32_t l) {
  const std::int64_t span = static_cast<std::int64_t>(b) - static_cast<std::int64_t>(a);
  const std::int64_t num = span * static_cast<std::int64_t>(l);
  const std::int64_t half = kMaxDescriptionLength / 2;
  const std::int64_t step = num >= 0 ? (num + half) / kMaxDescriptionLength
                                     : -((-num + half) / kMaxDescriptionLength);
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(a) + step);
}
}  // namespace

TxCost CostModel::cost(TxType type) const {
  switch (type.kind) {
    case TxKind::Transfer: return transfer_;
    case TxKind::RemoveEvidence: return remove_;
    case TxKind::CreateEvidence: break;
  }
  const std::uint32_t l = type.descriptionLength;
  if (l > kMaxDescriptionLength) {
    throw Error(ErrorCode::InvalidDescriptionLength,
                "description length " + std::to_string(l) + " exceeds 1024");
  }
  if (auto it = createOverrides_.find(l); it != createOverrides_.end()) return it->second;
  return {interpolate(createZero_.size, createMax_.size, l),
          interpolate(createZero_.gas, createMax_.gas, l)};
}

std::uint64_t txGas(TxType type) { return CostModel::standard().gas(type); }
std::uint64_t txSize(TxType type) { return CostModel::standard().size(type); }

// ---------------------------------------------------------------------------
// Transactions

Digest Transaction::hash() const {
  Sha256 h;
  h.updateU64(seq).updateU64(static_cast<std::uint64_t>(kind));
  h.update(std::span<const std::uint8_t>(issuer.bytes));
  h.update(std::span<const std::uint8_t>(evidence.bytes));
  h.update(std::span<const std::uint8_t>(newOwner.bytes));
  h.updateU64(description.size()).update(description);
  h.updateU64(static_cast<std::uint64_t>(issueTime.count()));
  return h.finish();
}

namespace {
Transaction base(std::uint64_t seq, TxKind kind, const Address& issuer, const EvidenceId& id,
                 SimTime issueTime) {
  Transaction tx;
  tx.seq = seq;
  tx.kind = kind;
  tx.issuer = issuer;
  tx.evidence = id;
  tx.issueTime = issueTime;
  return tx;
}

void price(Transaction& tx, const CostModel& costs) {
  const TxCost c = costs.cost(tx.type());
  tx.gas = c.gas;
  tx.size = c.size;
}
}  // namespace

Transaction makeCreateEvidence(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                               std::string description, SimTime issueTime,
                               const CostModel& costs) {
  if (description.size() > kMaxDescriptionLength) {
    throw Error(ErrorCode::DescriptionTooLong,
                "description is " + std::to_string(description.size()) +
                    " characters; the limit is 1024");
  }
  Transaction tx = base(seq, TxKind::CreateEvidence, issuer, id, issueTime);
  tx.description = std::move(description);
  price(tx, costs);
  return tx;
}

Transaction makeTransfer(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                         const Address& newOwner, SimTime issueTime, const CostModel& costs) {
  Transaction tx = base(seq, TxKind::Transfer, issuer, id, issueTime);
  tx.newOwner = newOwner;
  price(tx, costs);
  return tx;
}

Transaction makeRemoveEvidence(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                               SimTime issueTime, const CostModel& costs) {
  Transaction tx = base(seq, TxKind::RemoveEvidence, issuer, id, issueTime);
  price(tx, costs);
  return tx;
}

// ---------------------------------------------------------------------------
// State machine

Revert LedgerState::createEvidence(const Address& sender, const EvidenceId& id,
                                   std::string description, std::uint64_t now) {
  if (id.isZero()) return Revert::InvalidId;
  if (sender.isZero()) return Revert::InvalidAddress;
  if (description.size() > kMaxDescriptionLength) return Revert::DescriptionTooLong;
  if (evidences_.contains(id)) return Revert::EvidenceAlreadyExists;

  EvidenceEntry& e = evidences_[id];
  e.id = id;
  e.owner = sender;
  e.creator = sender;
  e.description = std::move(description);
  e.taddr.push_back(sender);
  e.ttime.push_back(now);
  return Revert::None;
}

Revert LedgerState::transfer(const Address& sender, const EvidenceId& id,
                             const Address& newOwner, std::uint64_t now) {
  auto it = evidences_.find(id);
  if (it == evidences_.end()) return Revert::EvidenceNotFound;
  EvidenceEntry& e = it->second;
  if (sender != e.owner) return Revert::NotOwner;
  if (newOwner.isZero()) return Revert::InvalidAddress;

  e.owner = newOwner;
  e.taddr.push_back(newOwner);
  e.ttime.push_back(std::max(now, e.ttime.back()));
  return Revert::None;
}

Revert LedgerState::removeEvidence(const Address& sender, const EvidenceId& id) {
  auto it = evidences_.find(id);
  if (it == evidences_.end()) return Revert::EvidenceNotFound;
  if (sender != it->second.creator) return Revert::NotCreator;
  evidences_.erase(it);
  return Revert::None;
}

const EvidenceEntry* LedgerState::find(const EvidenceId& id) const {
  auto it = evidences_.find(id);
  return it == evidences_.end() ? nullptr : &it->second;
}

const EvidenceEntry& LedgerState::getEvidence(const EvidenceId& id) const {
  if (const EvidenceEntry* e = find(id)) return *e;
  throw Error(ErrorCode::EvidenceNotFound, "no evidence with id " + id.hex());
}

Digest LedgerState::digest() const {
  Sha256 h;
  h.updateU64(evidences_.size());
  for (const auto& [id, e] : evidences_) {
    h.update(std::span<const std::uint8_t>(id.bytes));
    h.update(std::span<const std::uint8_t>(e.creator.bytes));
    h.update(std::span<const std::uint8_t>(e.owner.bytes));
    h.updateU64(e.description.size()).update(e.description);
    h.updateU64(e.taddr.size());
    for (std::size_t i = 0; i < e.taddr.size(); ++i) {
      h.update(std::span<const std::uint8_t>(e.taddr[i].bytes));
      h.updateU64(e.ttime[i]);
    }
  }
  return h.finish();
}

void LedgerState::restore(EvidenceEntry entry) {
  if (entry.id.isZero()) throw Error(ErrorCode::InvalidId, "zero evidence id");
  if (auto problem = checkEntryInvariants(entry); !problem.empty()) {
    throw Error(ErrorCode::InvalidArgument, "entry " + entry.id.hex() + ": " + problem);
  }
  const EvidenceId id = entry.id;
  evidences_[id] = std::move(entry);
}

std::string checkEntryInvariants(const EvidenceEntry& e) {
  if (e.taddr.empty()) return "empty custody history";
  if (e.taddr.size() != e.ttime.size()) return "taddr/ttime length mismatch";
  if (e.taddr.front() != e.creator) return "first custodian is not the creator";
  if (e.taddr.back() != e.owner) return "last custodian is not the owner";
  if (!std::is_sorted(e.ttime.begin(), e.ttime.end())) return "ttime is not sorted";
  if (e.description.size() > kMaxDescriptionLength) return "description too long";
  return {};
}

Receipt applyTransaction(LedgerState& state, const Transaction& tx, std::uint64_t ledgerTime) {
  Receipt r;
  r.txSeq = tx.seq;
  r.gasCharged = tx.gas;
  switch (tx.kind) {
    case TxKind::CreateEvidence:
      r.status = state.createEvidence(tx.issuer, tx.evidence, tx.description, ledgerTime);
      break;
    case TxKind::Transfer:
      r.status = state.transfer(tx.issuer, tx.evidence, tx.newOwner, ledgerTime);
      break;
    case TxKind::RemoveEvidence:
      r.status = state.removeEvidence(tx.issuer, tx.evidence);
      break;
  }
  return r;
}

}  // namespace bcoc
