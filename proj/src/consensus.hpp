#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "block.hpp"
#include "ledger.hpp"
#include "net_sim.hpp"

namespace bcoc {

enum class Phase { AwaitingProposal, PrePrepared, Prepared, Committed };
/// Decided announces a commit (height, digest) so lagging peers can fetch
/// the sealed block without waiting for a round timeout.
enum class MessageType { PrePrepare, Prepare, Commit, Decided, BlockRequest, BlockResponse };
enum class Behavior { Honest, Silent, Equivocator };

const char* phaseName(Phase p) noexcept;
const char* behaviorName(Behavior b) noexcept;

struct ConsensusMessage {
  MessageType type = MessageType::Prepare;
  std::uint64_t height = 0;
  std::uint32_t round = 0;
  Digest digest;
  std::uint32_t sender = 0;
  std::shared_ptr<const Block> block;  // PrePrepare and BlockResponse only
  std::vector<std::uint32_t> seals;    // BlockResponse: commit voters of a committed block
  std::uint64_t wireSize = 0;
};

struct ConsensusParams {
  std::uint32_t validators = 4;
  std::uint64_t gasLimit = 0;
  SimTime period = std::chrono::seconds(300);
  SimTime roundTimeout{0};  // zero means 2 * period
  std::uint64_t headerSize = kHeaderSize;
  std::uint64_t ppOverhead = 256;
  std::uint64_t prepareSize = 128;
  std::uint64_t commitSize = 128;
  bool rejectInvalidAtMempool = false;

  SimTime effectiveTimeout() const { return roundTimeout.count() > 0 ? roundTimeout : 2 * period; }
};

/// f = floor((n - 1) / 3).
std::uint32_t maxFaulty(std::uint32_t n);
/// 2f + 1.
std::uint32_t quorumSize(std::uint32_t n);
/// Round robin over (height + round).
std::uint32_t selectProposer(std::uint64_t height, std::uint32_t round, std::uint32_t n);

/// Block at height h (h >= 1) covers the period [(h-1)T, hT) and is proposed
/// at hT, once every transaction of its period has been issued.
inline SimTime blockTimestamp(std::uint64_t height, SimTime period) {
  return period * static_cast<std::int64_t>(height == 0 ? 0 : height - 1);
}
inline SimTime nominalProposalTime(std::uint64_t height, SimTime period) {
  return period * static_cast<std::int64_t>(height);
}
inline std::uint64_t ledgerSeconds(SimTime t) {
  return static_cast<std::uint64_t>(t.count() / 1'000'000'000);
}

Block genesisBlock();

/// What a validator needs from its environment.
class ValidatorContext {
 public:
  virtual ~ValidatorContext() = default;
  virtual SimTime now() const = 0;
  virtual void broadcast(std::uint32_t from, const ConsensusMessage& msg) = 0;
  virtual void multicast(std::uint32_t from, const std::vector<std::uint32_t>& to,
                         const ConsensusMessage& msg) = 0;
  virtual void send(std::uint32_t from, std::uint32_t to, const ConsensusMessage& msg) = 0;
  virtual EventId setTimer(SimTime at, std::function<void()> fn) = 0;
  virtual void cancelTimer(EventId id) = 0;
  virtual void onProposed(std::uint32_t /*proposer*/, const Block& /*block*/,
                          std::uint32_t /*round*/) {}
  virtual void onCommitted(std::uint32_t /*validator*/, const Block& /*block*/,
                           const std::vector<Receipt>& /*receipts*/) {}
};

struct ValidatorStats {
  std::uint64_t invalidProposals = 0;
  std::uint64_t staleMessages = 0;
  std::uint64_t roundChanges = 0;
  std::uint64_t syncRequests = 0;
  std::uint64_t oversizedHeads = 0;
};

/// IBFT validator: pre-prepare / prepare / commit with 2f+1 quorums, a
/// timeout-driven round change, and a lock on any block it has seen
/// prepared. Commit votes are counted per digest across rounds. A validator
/// that sees a commit quorum for a block it never received fetches it from
/// one of the committers; one that times out while holding messages for
/// later heights fetches the committed block, with its seals, from a peer
/// that is ahead.
class Validator {
 public:
  Validator(std::uint32_t index, const ConsensusParams& params, ValidatorContext& ctx,
            Behavior behavior = Behavior::Honest,
            const CostModel& costs = CostModel::standard());

  /// Enters height 1. Silent validators never start.
  void start();

  void onMessage(const ConsensusMessage& msg);
  void onPrePrepare(const ConsensusMessage& msg);
  void onPrepare(const ConsensusMessage& msg);
  void onCommit(const ConsensusMessage& msg);
  void onRoundTimeout();

  /// Broadcasts a pre-prepare carrying the block. Throws NotProposer unless
  /// this validator is the proposer of the current (height, round).
  void propose(const Block& block);
  /// Builds the block this validator would propose now (re-proposing its
  /// lock if it has one).
  Block buildProposal();

  void submit(const Transaction& tx) { mempool_.submit(tx); }

  std::uint32_t index() const { return index_; }
  Behavior behavior() const { return behavior_; }
  std::uint64_t height() const { return chain_.size(); }
  std::uint32_t round() const { return round_; }
  Phase phase() const { return phase_; }
  const std::vector<Block>& chain() const { return chain_; }
  /// Commit voters recorded for each committed height (genesis has none).
  const std::vector<std::vector<std::uint32_t>>& seals() const { return seals_; }
  const Digest& headDigest() const { return headDigest_; }
  std::uint64_t committedBlocks() const { return chain_.size() - 1; }
  /// Prepared lock if any, otherwise the block accepted in this round.
  const Block* lockedBlock() const;
  const Block* preparedLock() const { return lock_.get(); }
  std::size_t prepareCount(const Digest& d) const;
  std::size_t commitCount(const Digest& d) const;
  const LedgerState& ledger() const { return ledger_; }
  const Mempool& mempool() const { return mempool_; }
  const ValidatorStats& stats() const { return stats_; }

 private:
  void enterHeight();
  void startRound(std::uint32_t round);
  void scheduleRoundTimer();
  void proposeScheduled(std::uint64_t height, std::uint32_t round);
  void equivocate(const Block& block);
  bool validate(const Block& block) const;
  void tryPrepared();
  void tryCommit(const Digest& d);
  void commitBlock(std::shared_ptr<const Block> block, std::vector<std::uint32_t> seals);
  void requestSync(const Digest& d);
  void maybeCatchUp();
  void onDecided(const ConsensusMessage& msg);
  void requestCatchUp();
  void onBlockRequest(const ConsensusMessage& msg);
  void onBlockResponse(const ConsensusMessage& msg);
  void replayBuffered();
  ConsensusMessage vote(MessageType type, const Digest& d) const;

  std::uint32_t index_;
  ConsensusParams params_;
  ValidatorContext& ctx_;
  Behavior behavior_;
  const CostModel& costs_;
  std::uint32_t quorum_;

  std::vector<Block> chain_;
  std::vector<std::vector<std::uint32_t>> seals_;
  Digest headDigest_;
  LedgerState ledger_;
  Mempool mempool_;
  std::unordered_set<std::uint64_t> includedSeqs_;

  std::uint32_t round_ = 0;
  Phase phase_ = Phase::AwaitingProposal;
  std::shared_ptr<const Block> proposal_;
  std::shared_ptr<const Block> lock_;
  std::map<Digest, std::shared_ptr<const Block>> candidates_;
  std::map<std::uint32_t, std::map<Digest, std::set<std::uint32_t>>> prepareVotes_;
  std::map<std::uint32_t, std::set<std::uint32_t>> prepareSeen_;
  std::map<Digest, std::set<std::uint32_t>> commitVotes_;
  std::map<std::uint32_t, std::set<std::uint32_t>> commitSeen_;
  std::map<std::uint32_t, std::vector<ConsensusMessage>> futureProposals_;
  std::map<std::uint64_t, std::vector<ConsensusMessage>> futureHeights_;
  std::optional<Digest> syncing_;
  std::uint32_t syncAttempts_ = 0;
  std::set<std::uint32_t> askedPeers_;  // fetch requests sent at this height
  std::optional<std::uint64_t> catchUpHeight_;  // height a catch-up was last requested at
  bool equivocatingRound_ = false;
  bool started_ = false;

  std::optional<EventId> roundTimer_;
  std::optional<EventId> proposalTimer_;
  ValidatorStats stats_;
};

struct ClusterConfig {
  ConsensusParams params;
  LinkModel link;
  std::vector<Behavior> behaviors;  // empty: all honest
  std::uint64_t seed = 1;
};

struct CommitEvent {
  std::uint32_t validator;
  const Block& block;
  const std::vector<Receipt>& receipts;
  SimTime time;
};

/// A validator set wired to a simulated network. Transactions are handed to
/// every validator's mempool at issue time.
class Cluster final : public ValidatorContext {
 public:
  using CommitObserver = std::function<void(const CommitEvent&)>;

  Cluster(Scheduler& scheduler, ClusterConfig config,
          const CostModel& costs = CostModel::standard());

  void start();
  void submitTransaction(const Transaction& tx);

  std::size_t size() const { return validators_.size(); }
  Validator& validator(std::uint32_t i) { return *validators_.at(i); }
  const Validator& validator(std::uint32_t i) const { return *validators_.at(i); }
  std::vector<std::uint32_t> honest() const;
  Network& network() { return network_; }
  const ClusterConfig& config() const { return config_; }

  void setCommitObserver(CommitObserver obs) { observer_ = std::move(obs); }

  /// Time of the latest pre-prepare broadcast for a digest.
  std::optional<SimTime> proposalTime(const Digest& d) const;

  /// True when no two honest validators hold different blocks at a height.
  bool agreement() const;

  // ValidatorContext
  SimTime now() const override { return scheduler_.now(); }
  void broadcast(std::uint32_t from, const ConsensusMessage& msg) override;
  void multicast(std::uint32_t from, const std::vector<std::uint32_t>& to,
                 const ConsensusMessage& msg) override;
  void send(std::uint32_t from, std::uint32_t to, const ConsensusMessage& msg) override;
  EventId setTimer(SimTime at, std::function<void()> fn) override;
  void cancelTimer(EventId id) override { scheduler_.cancel(id); }
  void onProposed(std::uint32_t proposer, const Block& block, std::uint32_t round) override;
  void onCommitted(std::uint32_t validator, const Block& block,
                   const std::vector<Receipt>& receipts) override;

 private:
  Network::Deliver deliverer(const ConsensusMessage& msg);

  Scheduler& scheduler_;
  ClusterConfig config_;
  Network network_;
  std::vector<std::unique_ptr<Validator>> validators_;
  std::map<Digest, SimTime> proposalTimes_;
  CommitObserver observer_;
};

}  // namespace bcoc
