#include "net_sim.hpp"

#include <cmath>

namespace bcoc {

EventId Scheduler::schedule(SimTime fireTime, Action action) {
  if (fireTime < now_) {
    throw Error(ErrorCode::SchedulingInPast,
                "event at " + std::to_string(fireTime.count()) + " ns is before now (" +
                    std::to_string(now_.count()) + " ns)");
  }
  const EventId id = nextSeq_++;
  queue_.push(Entry{fireTime, id, std::move(action)});
  live_.insert(id);
  return id;
}

bool Scheduler::cancel(EventId id) {
  if (live_.erase(id) == 0) return false;
  cancelled_.insert(id);
  return true;
}

bool Scheduler::step() {
  while (!queue_.empty()) {
    Entry e = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    if (auto it = cancelled_.find(e.seq); it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    live_.erase(e.seq);
    now_ = e.fireTime;
    ++executed_;
    if (trace_) trace_(now_, e.seq);
    e.action();
    return true;
  }
  return false;
}

void Scheduler::runUntil(SimTime t) {
  if (t < now_) {
    throw Error(ErrorCode::SchedulingInPast, "runUntil target precedes the clock");
  }
  while (!queue_.empty()) {
    const Entry& top = queue_.top();
    if (cancelled_.contains(top.seq)) {
      cancelled_.erase(top.seq);
      queue_.pop();
      continue;
    }
    if (top.fireTime > t) break;
    step();
  }
  now_ = t;
}

SimTime transmissionDelay(std::uint64_t size, const LinkModel& link) {
  const double ns = static_cast<double>(size) * 1e9 / link.bandwidth;
  return link.baseDelay + SimTime(static_cast<std::int64_t>(std::llround(ns)));
}

std::uint64_t DeterministicRng::uniformInt(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return engine_();  // full 64-bit range
  // Rejection sampling keeps the result unbiased and portable.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + x % span;
}

Network::Network(Scheduler& scheduler, std::size_t nodes, LinkModel defaultLink,
                 std::uint64_t seed)
    : scheduler_(scheduler),
      nodes_(nodes),
      links_(nodes * nodes, defaultLink),
      muted_(nodes, false),
      rng_(seed) {
  if (defaultLink.bandwidth <= 0) throw Error(ErrorCode::ConfigError, "bandwidth must be positive");
  if (defaultLink.baseDelay.count() < 0 || defaultLink.jitter.count() < 0) {
    throw Error(ErrorCode::ConfigError, "link delays must be non-negative");
  }
}

void Network::checkNode(NodeIndex n) const {
  if (n >= nodes_) throw Error(ErrorCode::UnknownNode, "unknown node " + std::to_string(n));
}

void Network::setLink(NodeIndex from, NodeIndex to, LinkModel link) {
  checkNode(from);
  checkNode(to);
  if (link.bandwidth <= 0) throw Error(ErrorCode::ConfigError, "bandwidth must be positive");
  links_[from * nodes_ + to] = link;
}

const LinkModel& Network::link(NodeIndex from, NodeIndex to) const {
  checkNode(from);
  checkNode(to);
  return links_[from * nodes_ + to];
}

void Network::setMuted(NodeIndex node, bool muted) {
  checkNode(node);
  muted_[node] = muted;
}

bool Network::muted(NodeIndex node) const {
  checkNode(node);
  return muted_[node];
}

SimTime Network::delay(NodeIndex from, NodeIndex to, std::uint64_t wireSize) {
  if (from == to) return SimTime(0);
  const LinkModel& l = links_[from * nodes_ + to];
  SimTime d = transmissionDelay(wireSize, l);
  if (l.jitter.count() > 0) {
    d += SimTime(static_cast<std::int64_t>(
        rng_.uniformInt(0, static_cast<std::uint64_t>(l.jitter.count()))));
  }
  return d;
}

bool Network::send(NodeIndex sender, NodeIndex recipient, std::uint64_t wireSize,
                   const Deliver& deliver) {
  checkNode(sender);
  checkNode(recipient);
  if (muted_[sender]) return false;
  const SimTime d = delay(sender, recipient, wireSize);
  scheduler_.scheduleAfter(d, [deliver, recipient] { deliver(recipient); });
  if (sender != recipient) {
    bytesSent_ += wireSize;
    ++messagesSent_;
  }
  return true;
}

std::size_t Network::multicast(NodeIndex sender, const std::vector<NodeIndex>& recipients,
                               std::uint64_t wireSize, const Deliver& deliver) {
  std::size_t n = 0;
  for (NodeIndex r : recipients) {
    if (send(sender, r, wireSize, deliver)) ++n;
  }
  return n;
}

std::size_t Network::broadcast(NodeIndex sender, std::uint64_t wireSize, const Deliver& deliver) {
  checkNode(sender);
  std::size_t n = 0;
  for (NodeIndex r = 0; r < nodes_; ++r) {
    if (send(sender, r, wireSize, deliver)) ++n;
  }
  return n;
}

}  // namespace bcoc
