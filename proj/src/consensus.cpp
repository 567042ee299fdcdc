#include "consensus.hpp"

#include <algorithm>

namespace bcoc {

namespace {
constexpr std::uint64_t kMaxBufferedHeights = 64;
}  // namespace

const char* phaseName(Phase p) noexcept {
  switch (p) {
    case Phase::AwaitingProposal: return "AwaitingProposal";
    case Phase::PrePrepared: return "PrePrepared";
    case Phase::Prepared: return "Prepared";
    case Phase::Committed: return "Committed";
  }
  return "Unknown";
}

const char* behaviorName(Behavior b) noexcept {
  switch (b) {
    case Behavior::Honest: return "honest";
    case Behavior::Silent: return "silent";
    case Behavior::Equivocator: return "equivocator";
  }
  return "unknown";
}

std::uint32_t maxFaulty(std::uint32_t n) { return n == 0 ? 0 : (n - 1) / 3; }

std::uint32_t quorumSize(std::uint32_t n) { return 2 * maxFaulty(n) + 1; }

std::uint32_t selectProposer(std::uint64_t height, std::uint32_t round, std::uint32_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty validator set");
  return static_cast<std::uint32_t>((height + round) % n);
}

Block genesisBlock() {
  Block g;
  g.header.height = 0;
  g.header.extra = 0x62636f63;  // "bcoc"
  g.header.txRoot = transactionRoot({});
  return g;
}

// ---------------------------------------------------------------------------
// Validator

Validator::Validator(std::uint32_t index, const ConsensusParams& params, ValidatorContext& ctx,
                     Behavior behavior, const CostModel& costs)
    : index_(index),
      params_(params),
      ctx_(ctx),
      behavior_(behavior),
      costs_(costs),
      quorum_(quorumSize(params.validators)) {
  if (params.validators == 0 || index >= params.validators) {
    throw Error(ErrorCode::InvalidArgument, "validator index out of range");
  }
  chain_.push_back(genesisBlock());
  seals_.emplace_back();
  headDigest_ = chain_.back().digest();
}

void Validator::start() {
  if (behavior_ == Behavior::Silent || started_) return;
  started_ = true;
  enterHeight();
}

const Block* Validator::lockedBlock() const {
  if (lock_) return lock_.get();
  return proposal_.get();
}

std::size_t Validator::prepareCount(const Digest& d) const {
  auto r = prepareVotes_.find(round_);
  if (r == prepareVotes_.end()) return 0;
  auto it = r->second.find(d);
  return it == r->second.end() ? 0 : it->second.size();
}

std::size_t Validator::commitCount(const Digest& d) const {
  auto it = commitVotes_.find(d);
  return it == commitVotes_.end() ? 0 : it->second.size();
}

ConsensusMessage Validator::vote(MessageType type, const Digest& d) const {
  ConsensusMessage m;
  m.type = type;
  m.height = height();
  m.round = round_;
  m.digest = d;
  m.sender = index_;
  m.wireSize = type == MessageType::Commit ? params_.commitSize : params_.prepareSize;
  return m;
}

void Validator::enterHeight() {
  if (roundTimer_) ctx_.cancelTimer(*roundTimer_);
  if (proposalTimer_) ctx_.cancelTimer(*proposalTimer_);
  roundTimer_.reset();
  proposalTimer_.reset();
  proposal_.reset();
  lock_.reset();
  candidates_.clear();
  askedPeers_.clear();
  prepareVotes_.clear();
  prepareSeen_.clear();
  commitVotes_.clear();
  commitSeen_.clear();
  futureProposals_.clear();
  syncing_.reset();
  syncAttempts_ = 0;
  startRound(0);
  replayBuffered();
}

void Validator::replayBuffered() {
  auto it = futureHeights_.find(height());
  if (it == futureHeights_.end()) {
    futureHeights_.erase(futureHeights_.begin(), futureHeights_.lower_bound(height()));
    return;
  }
  std::vector<ConsensusMessage> msgs = std::move(it->second);
  futureHeights_.erase(futureHeights_.begin(), futureHeights_.upper_bound(height()));
  const std::uint64_t h = height();
  for (const auto& m : msgs) {
    if (height() != h) break;  // committed mid-replay; later heights stay buffered
    onMessage(m);
  }
}

void Validator::startRound(std::uint32_t round) {
  round_ = round;
  phase_ = Phase::AwaitingProposal;
  proposal_.reset();
  equivocatingRound_ = false;
  scheduleRoundTimer();

  if (selectProposer(height(), round_, params_.validators) == index_) {
    const SimTime at = std::max(ctx_.now(), nominalProposalTime(height(), params_.period));
    const std::uint64_t h = height();
    const std::uint32_t r = round_;
    if (proposalTimer_) ctx_.cancelTimer(*proposalTimer_);
    proposalTimer_ = ctx_.setTimer(at, [this, h, r] { proposeScheduled(h, r); });
  }

  auto it = futureProposals_.find(round_);
  if (it != futureProposals_.end()) {
    std::vector<ConsensusMessage> msgs = std::move(it->second);
    futureProposals_.erase(futureProposals_.begin(), std::next(it));
    for (const auto& m : msgs) onPrePrepare(m);
  }
}

void Validator::scheduleRoundTimer() {
  if (roundTimer_) ctx_.cancelTimer(*roundTimer_);
  const SimTime start = std::max(ctx_.now(), nominalProposalTime(height(), params_.period));
  roundTimer_ = ctx_.setTimer(start + params_.effectiveTimeout(), [this] {
    roundTimer_.reset();
    onRoundTimeout();
  });
}

void Validator::onRoundTimeout() {
  ++stats_.roundChanges;
  if (syncing_) {
    const Digest d = *syncing_;
    syncing_.reset();
    ++syncAttempts_;
    requestSync(d);
  }
  if (!futureHeights_.empty()) requestCatchUp();
  // lock_ survives: it is only ever set once the block was prepared.
  startRound(round_ + 1);
}

void Validator::proposeScheduled(std::uint64_t h, std::uint32_t r) {
  proposalTimer_.reset();
  if (height() != h || round_ != r || phase_ != Phase::AwaitingProposal) return;
  propose(buildProposal());
}

Block Validator::buildProposal() {
  if (lock_) return *lock_;
  BuildOptions opts;
  opts.cutoff = nominalProposalTime(height(), params_.period);
  if (params_.rejectInvalidAtMempool) opts.prevalidateAgainst = &ledger_;
  BuildResult r = buildBlock(mempool_, params_.gasLimit, height(), headDigest_, index_,
                             blockTimestamp(height(), params_.period), opts);
  if (r.oversizedHead) ++stats_.oversizedHeads;
  for (std::uint64_t seq : r.rejected) mempool_.remove(seq);
  return std::move(r.block);
}

void Validator::propose(const Block& block) {
  if (selectProposer(height(), round_, params_.validators) != index_) {
    throw Error(ErrorCode::NotProposer,
                "validator " + std::to_string(index_) + " is not the proposer for height " +
                    std::to_string(height()) + " round " + std::to_string(round_));
  }
  if (behavior_ == Behavior::Equivocator && !lock_) {
    equivocate(block);
    return;
  }
  ConsensusMessage m;
  m.type = MessageType::PrePrepare;
  m.height = height();
  m.round = round_;
  m.block = std::make_shared<const Block>(block);
  m.digest = m.block->digest();
  m.sender = index_;
  m.wireSize = params_.ppOverhead + blockSize(block, params_.headerSize);
  ctx_.onProposed(index_, block, round_);
  ctx_.broadcast(index_, m);
}

void Validator::equivocate(const Block& block) {
  Block other = block;
  other.header.extra ^= 1;
  std::vector<std::uint32_t> first{index_};
  std::vector<std::uint32_t> second;
  std::vector<std::uint32_t> others;
  for (std::uint32_t v = 0; v < params_.validators; ++v) {
    if (v != index_) others.push_back(v);
  }
  const std::size_t half = (others.size() + 1) / 2;
  for (std::size_t i = 0; i < others.size(); ++i) {
    (i < half ? first : second).push_back(others[i]);
  }

  equivocatingRound_ = true;
  using Half = std::pair<const Block*, const std::vector<std::uint32_t>*>;
  for (const auto& [blk, group] : {Half{&block, &first}, Half{&other, &second}}) {
    ConsensusMessage pp;
    pp.type = MessageType::PrePrepare;
    pp.height = height();
    pp.round = round_;
    pp.block = std::make_shared<const Block>(*blk);
    pp.digest = pp.block->digest();
    pp.sender = index_;
    pp.wireSize = params_.ppOverhead + blockSize(*blk, params_.headerSize);
    ctx_.onProposed(index_, *blk, round_);
    ctx_.multicast(index_, *group, pp);
    // Vote for each half's block towards that half only.
    ctx_.multicast(index_, *group, vote(MessageType::Prepare, pp.digest));
    ctx_.multicast(index_, *group, vote(MessageType::Commit, pp.digest));
  }
}

bool Validator::validate(const Block& b) const {
  const BlockHeader& h = b.header;
  if (h.height != height()) return false;
  if (h.parent != headDigest_) return false;
  if (h.proposer >= params_.validators) return false;
  if (h.timestamp != blockTimestamp(h.height, params_.period)) return false;
  if (h.txRoot != transactionRoot(b.transactions)) return false;
  const std::uint64_t gas = b.gasUsed();
  if (gas != h.gasUsed || gas > params_.gasLimit) return false;
  const SimTime cutoff = h.timestamp + params_.period;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& tx : b.transactions) {
    if (tx.issueTime >= cutoff) return false;
    if (!seen.insert(tx.seq).second || includedSeqs_.contains(tx.seq)) return false;
    if (tx.gas != costs_.gas(tx.type()) || tx.size != costs_.size(tx.type())) return false;
  }
  return true;
}

void Validator::onMessage(const ConsensusMessage& msg) {
  if (behavior_ == Behavior::Silent || !started_) return;
  if (msg.sender >= params_.validators) return;
  switch (msg.type) {
    case MessageType::BlockRequest: onBlockRequest(msg); return;
    case MessageType::BlockResponse: onBlockResponse(msg); return;
    case MessageType::Decided: onDecided(msg); return;
    default: break;
  }
  if (msg.height < height()) {
    ++stats_.staleMessages;
    return;
  }
  if (msg.height > height()) {
    if (msg.height <= height() + kMaxBufferedHeights) {
      futureHeights_[msg.height].push_back(msg);
      maybeCatchUp();
    }
    return;
  }
  switch (msg.type) {
    case MessageType::PrePrepare: onPrePrepare(msg); break;
    case MessageType::Prepare: onPrepare(msg); break;
    case MessageType::Commit: onCommit(msg); break;
    default: break;
  }
}

void Validator::onPrePrepare(const ConsensusMessage& msg) {
  if (msg.height != height() || msg.round < round_) {
    ++stats_.staleMessages;
    return;
  }
  if (msg.round > round_) {
    futureProposals_[msg.round].push_back(msg);
    return;
  }
  if (msg.sender != selectProposer(height(), round_, params_.validators) || !msg.block ||
      msg.block->digest() != msg.digest) {
    ++stats_.invalidProposals;
    return;
  }
  if (phase_ != Phase::AwaitingProposal) return;
  if (lock_ && lock_->digest() != msg.digest) {
    ++stats_.invalidProposals;
    return;
  }
  if (!validate(*msg.block)) {
    ++stats_.invalidProposals;
    return;
  }
  candidates_[msg.digest] = msg.block;
  proposal_ = msg.block;
  phase_ = Phase::PrePrepared;
  if (!equivocatingRound_) ctx_.broadcast(index_, vote(MessageType::Prepare, msg.digest));
  tryPrepared();
  if (height() == msg.height) tryCommit(msg.digest);
}

void Validator::onPrepare(const ConsensusMessage& msg) {
  if (msg.height != height()) return;
  if (!prepareSeen_[msg.round].insert(msg.sender).second) return;
  prepareVotes_[msg.round][msg.digest].insert(msg.sender);
  if (msg.round == round_) tryPrepared();
}

void Validator::tryPrepared() {
  if (phase_ != Phase::PrePrepared || !proposal_) return;
  const Digest d = proposal_->digest();
  if (prepareCount(d) < quorum_) return;
  phase_ = Phase::Prepared;
  lock_ = proposal_;
  if (!equivocatingRound_) ctx_.broadcast(index_, vote(MessageType::Commit, d));
  tryCommit(d);
}

void Validator::onCommit(const ConsensusMessage& msg) {
  if (msg.height != height()) return;
  if (!commitSeen_[msg.round].insert(msg.sender).second) return;
  commitVotes_[msg.digest].insert(msg.sender);
  tryCommit(msg.digest);
}

void Validator::tryCommit(const Digest& d) {
  if (commitCount(d) < quorum_) return;
  auto it = candidates_.find(d);
  if (it == candidates_.end()) {
    requestSync(d);
    return;
  }
  const auto& voters = commitVotes_[d];
  commitBlock(it->second, std::vector<std::uint32_t>(voters.begin(), voters.end()));
}

void Validator::commitBlock(std::shared_ptr<const Block> block,
                            std::vector<std::uint32_t> seals) {
  phase_ = Phase::Committed;
  const std::uint64_t ledgerTime = ledgerSeconds(block->header.timestamp);
  std::vector<Receipt> receipts;
  receipts.reserve(block->transactions.size());
  for (const auto& tx : block->transactions) {
    receipts.push_back(applyTransaction(ledger_, tx, ledgerTime));
    includedSeqs_.insert(tx.seq);
  }
  mempool_.removeIncluded(*block);
  chain_.push_back(*block);
  seals_.push_back(std::move(seals));
  headDigest_ = chain_.back().digest();
  ConsensusMessage announce;
  announce.type = MessageType::Decided;
  announce.height = chain_.size() - 1;
  announce.digest = headDigest_;
  announce.sender = index_;
  announce.wireSize = params_.commitSize;
  ctx_.broadcast(index_, announce);
  ctx_.onCommitted(index_, chain_.back(), receipts);
  enterHeight();
}

void Validator::requestSync(const Digest& d) {
  if (syncing_ && *syncing_ == d) return;
  auto it = commitVotes_.find(d);
  if (it == commitVotes_.end()) return;
  std::vector<std::uint32_t> peers;
  for (std::uint32_t v : it->second) {
    if (v != index_) peers.push_back(v);
  }
  if (peers.empty()) return;
  syncing_ = d;
  ++stats_.syncRequests;
  ConsensusMessage m;
  m.type = MessageType::BlockRequest;
  m.height = height();
  m.round = round_;
  m.digest = d;
  m.sender = index_;
  m.wireSize = params_.prepareSize;
  ctx_.multicast(index_, peers, m);
}

void Validator::onDecided(const ConsensusMessage& msg) {
  if (msg.sender == index_ || msg.height < height()) return;
  if (!askedPeers_.insert(msg.sender).second) return;
  ++stats_.syncRequests;
  ConsensusMessage m;
  m.type = MessageType::BlockRequest;
  m.height = height();
  m.round = round_;
  m.sender = index_;
  m.wireSize = params_.prepareSize;
  ctx_.send(index_, msg.sender, m);
}

void Validator::maybeCatchUp() {
  if (catchUpHeight_ == height()) return;
  std::set<std::uint32_t> ahead;
  for (const auto& [h, msgs] : futureHeights_) {
    for (const auto& m : msgs) ahead.insert(m.sender);
  }
  // f + 1 senders include at least one honest validator that moved on.
  if (ahead.size() <= maxFaulty(params_.validators)) return;
  catchUpHeight_ = height();
  requestCatchUp();
}

void Validator::requestCatchUp() {
  const auto& [h, msgs] = *futureHeights_.begin();
  if (msgs.empty()) return;
  ++stats_.syncRequests;
  ConsensusMessage m;
  m.type = MessageType::BlockRequest;
  m.height = height();
  m.round = round_;
  m.sender = index_;
  m.wireSize = params_.prepareSize;
  ctx_.send(index_, msgs[syncAttempts_++ % msgs.size()].sender, m);
}

void Validator::onBlockRequest(const ConsensusMessage& msg) {
  std::shared_ptr<const Block> found;
  std::vector<std::uint32_t> seals;
  if (msg.height > 0 && msg.height < chain_.size()) {
    // A zero digest asks for whatever was committed at that height.
    if (msg.digest.isZero() || chain_[msg.height].digest() == msg.digest) {
      found = std::make_shared<const Block>(chain_[msg.height]);
      seals = seals_[msg.height];
    }
  } else if (msg.height == height()) {
    if (auto it = candidates_.find(msg.digest); it != candidates_.end()) found = it->second;
  }
  if (!found) return;
  ConsensusMessage r;
  r.type = MessageType::BlockResponse;
  r.height = msg.height;
  r.round = msg.round;
  r.sender = index_;
  r.digest = found->digest();
  r.block = std::move(found);
  r.seals = std::move(seals);
  r.wireSize = params_.ppOverhead + blockSize(*r.block, params_.headerSize);
  ctx_.send(index_, msg.sender, r);
}

void Validator::onBlockResponse(const ConsensusMessage& msg) {
  if (msg.height != height() || !msg.block || msg.block->digest() != msg.digest) return;
  if (!validate(*msg.block)) {
    ++stats_.invalidProposals;
    return;
  }
  candidates_[msg.digest] = msg.block;
  if (syncing_ && *syncing_ == msg.digest) syncing_.reset();
  if (commitCount(msg.digest) >= quorum_) {
    tryCommit(msg.digest);
    return;
  }
  std::set<std::uint32_t> sealSet;
  for (std::uint32_t v : msg.seals) {
    if (v < params_.validators) sealSet.insert(v);
  }
  if (sealSet.size() >= quorum_) {
    commitBlock(msg.block, std::vector<std::uint32_t>(sealSet.begin(), sealSet.end()));
  }
}

// ---------------------------------------------------------------------------
// Cluster

Cluster::Cluster(Scheduler& scheduler, ClusterConfig config, const CostModel& costs)
    : scheduler_(scheduler),
      config_(std::move(config)),
      network_(scheduler, config_.params.validators, config_.link, config_.seed) {
  const std::uint32_t n = config_.params.validators;
  if (n == 0) throw Error(ErrorCode::ConfigError, "at least one validator is required");
  if (config_.behaviors.empty()) config_.behaviors.assign(n, Behavior::Honest);
  if (config_.behaviors.size() != n) {
    throw Error(ErrorCode::ConfigError, "behaviour list does not match validator count");
  }
  std::uint32_t faulty = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (config_.behaviors[i] != Behavior::Honest) ++faulty;
  }
  if (faulty > maxFaulty(n)) {
    throw Error(ErrorCode::ConfigError, std::to_string(faulty) + " faulty validators exceed f = " +
                                            std::to_string(maxFaulty(n)));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    validators_.push_back(
        std::make_unique<Validator>(i, config_.params, *this, config_.behaviors[i], costs));
    if (config_.behaviors[i] == Behavior::Silent) network_.setMuted(i, true);
  }
}

void Cluster::start() {
  for (auto& v : validators_) v->start();
}

void Cluster::submitTransaction(const Transaction& tx) {
  for (auto& v : validators_) {
    if (v->behavior() != Behavior::Silent) v->submit(tx);
  }
}

std::vector<std::uint32_t> Cluster::honest() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < validators_.size(); ++i) {
    if (validators_[i]->behavior() == Behavior::Honest) out.push_back(i);
  }
  return out;
}

std::optional<SimTime> Cluster::proposalTime(const Digest& d) const {
  auto it = proposalTimes_.find(d);
  if (it == proposalTimes_.end()) return std::nullopt;
  return it->second;
}

bool Cluster::agreement() const {
  const auto ids = honest();
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const auto& ca = validators_[ids[a]]->chain();
      const auto& cb = validators_[ids[b]]->chain();
      const std::size_t common = std::min(ca.size(), cb.size());
      for (std::size_t h = 0; h < common; ++h) {
        if (ca[h].digest() != cb[h].digest()) return false;
      }
    }
  }
  return true;
}

Network::Deliver Cluster::deliverer(const ConsensusMessage& msg) {
  auto shared = std::make_shared<const ConsensusMessage>(msg);
  return [this, shared](NodeIndex r) { validators_[r]->onMessage(*shared); };
}

void Cluster::broadcast(std::uint32_t from, const ConsensusMessage& msg) {
  network_.broadcast(from, msg.wireSize, deliverer(msg));
}

void Cluster::multicast(std::uint32_t from, const std::vector<std::uint32_t>& to,
                        const ConsensusMessage& msg) {
  network_.multicast(from, to, msg.wireSize, deliverer(msg));
}

void Cluster::send(std::uint32_t from, std::uint32_t to, const ConsensusMessage& msg) {
  network_.send(from, to, msg.wireSize, deliverer(msg));
}

EventId Cluster::setTimer(SimTime at, std::function<void()> fn) {
  return scheduler_.schedule(at, std::move(fn));
}

void Cluster::onProposed(std::uint32_t, const Block& block, std::uint32_t) {
  proposalTimes_[block.digest()] = scheduler_.now();
}

void Cluster::onCommitted(std::uint32_t validator, const Block& block,
                          const std::vector<Receipt>& receipts) {
  if (observer_) observer_(CommitEvent{validator, block, receipts, scheduler_.now()});
}

}  // namespace bcoc
