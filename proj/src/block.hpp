#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ledger.hpp"
#include "types.hpp"

namespace bcoc {

inline constexpr std::uint64_t kHeaderSize = 1909;

struct BlockHeader {
  std::uint64_t height = 0;
  Digest parent;
  std::uint32_t proposer = 0;
  SimTime timestamp{0};  // start of the block period
  std::uint64_t extra = 0;
  Digest txRoot;
  std::uint64_t gasUsed = 0;
};

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;

  /// Hash of the serialized header.
  Digest digest() const;
  std::uint64_t gasUsed() const;
};

Digest transactionRoot(const std::vector<Transaction>& txs);

/// headerSize + sum of transaction sizes.
std::uint64_t blockSize(const Block& block, std::uint64_t headerSize = kHeaderSize);

/// FIFO transaction queue. A transaction leaves only when a committed block
/// includes it.
class Mempool {
 public:
  /// Duplicate sequence numbers are ignored.
  void submit(Transaction tx);
  void submit(Transaction tx, SimTime issueTime);

  /// Removes every transaction the block includes.
  void removeIncluded(const Block& block);
  bool remove(std::uint64_t seq);

  std::size_t size() const { return pending_.size(); }
  bool empty() const { return pending_.empty(); }
  const std::list<Transaction>& pending() const { return pending_; }

 private:
  std::list<Transaction> pending_;
  std::unordered_map<std::uint64_t, std::list<Transaction>::iterator> index_;
};

struct BuildOptions {
  /// Only transactions issued strictly before the cutoff are eligible.
  std::optional<SimTime> cutoff;
  /// Drop transactions that would revert against this state (with the
  /// effects of earlier picks applied) instead of including them.
  const LedgerState* prevalidateAgainst = nullptr;
  std::uint64_t extra = 0;
};

struct BuildResult {
  Block block;
  /// The FIFO head needs more gas than the whole block allows and can never
  /// be included.
  bool oversizedHead = false;
  std::vector<std::uint64_t> rejected;
};

/// Strict FIFO filling: take transactions in order while the cumulative gas
/// stays within gasLimit; the first one that does not fit stops the block.
BuildResult buildBlock(const Mempool& mempool, std::uint64_t gasLimit, std::uint64_t height,
                       const Digest& parent, std::uint32_t proposer, SimTime periodStart,
                       const BuildOptions& options = {});

}  // namespace bcoc
