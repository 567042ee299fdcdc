#include "block.hpp"

#include "hash.hpp"

namespace bcoc {

Digest Block::digest() const {
  Sha256 h;
  h.updateU64(header.height);
  h.update(std::span<const std::uint8_t>(header.parent.bytes));
  h.updateU64(header.proposer);
  h.updateU64(static_cast<std::uint64_t>(header.timestamp.count()));
  h.updateU64(header.extra);
  h.update(std::span<const std::uint8_t>(header.txRoot.bytes));
  h.updateU64(header.gasUsed);
  return h.finish();
}

std::uint64_t Block::gasUsed() const {
  std::uint64_t g = 0;
  for (const auto& tx : transactions) g += tx.gas;
  return g;
}

Digest transactionRoot(const std::vector<Transaction>& txs) {
  Sha256 h;
  h.updateU64(txs.size());
  for (const auto& tx : txs) h.update(std::span<const std::uint8_t>(tx.hash().bytes));
  return h.finish();
}

std::uint64_t blockSize(const Block& block, std::uint64_t headerSize) {
  std::uint64_t s = headerSize;
  for (const auto& tx : block.transactions) s += tx.size;
  return s;
}

void Mempool::submit(Transaction tx) {
  if (index_.contains(tx.seq)) return;
  const std::uint64_t seq = tx.seq;
  pending_.push_back(std::move(tx));
  index_.emplace(seq, std::prev(pending_.end()));
}

void Mempool::submit(Transaction tx, SimTime issueTime) {
  tx.issueTime = issueTime;
  submit(std::move(tx));
}

bool Mempool::remove(std::uint64_t seq) {
  auto it = index_.find(seq);
  if (it == index_.end()) return false;
  pending_.erase(it->second);
  index_.erase(it);
  return true;
}

void Mempool::removeIncluded(const Block& block) {
  for (const auto& tx : block.transactions) remove(tx.seq);
}

BuildResult buildBlock(const Mempool& mempool, std::uint64_t gasLimit, std::uint64_t height,
                       const Digest& parent, std::uint32_t proposer, SimTime periodStart,
                       const BuildOptions& options) {
  BuildResult result;
  Block& b = result.block;
  b.header.height = height;
  b.header.parent = parent;
  b.header.proposer = proposer;
  b.header.timestamp = periodStart;
  b.header.extra = options.extra;

  std::optional<LedgerState> scratch;
  if (options.prevalidateAgainst != nullptr) scratch = *options.prevalidateAgainst;
  const auto ledgerTime = static_cast<std::uint64_t>(periodStart.count() / 1'000'000'000);

  std::uint64_t gas = 0;
  for (const auto& tx : mempool.pending()) {
    if (options.cutoff && tx.issueTime >= *options.cutoff) break;
    if (tx.gas > gasLimit) {
      result.oversizedHead = true;
      break;
    }
    if (gas + tx.gas > gasLimit) break;
    if (scratch) {
      if (!applyTransaction(*scratch, tx, ledgerTime).succeeded()) {
        result.rejected.push_back(tx.seq);
        continue;
      }
    }
    gas += tx.gas;
    b.transactions.push_back(tx);
  }
  b.header.gasUsed = gas;
  b.header.txRoot = transactionRoot(b.transactions);
  return result;
}

}  // namespace bcoc
