#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <unordered_set>
#include <vector>

#include "types.hpp"

namespace bcoc {

using NodeIndex = std::uint32_t;
using EventId = std::uint64_t;

/// Discrete-event scheduler. Events run in (fireTime, insertion sequence)
/// order, so equal-time events keep their scheduling order.
class Scheduler {
 public:
  using Action = std::function<void()>;
  using TraceHook = std::function<void(SimTime, EventId)>;

  SimTime now() const { return now_; }

  // Throws SchedulingInPast if fireTime < now().
  EventId schedule(SimTime fireTime, Action action);
  EventId scheduleAfter(SimTime delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  /// Returns false if the event already fired or was never scheduled.
  bool cancel(EventId id);

  /// Executes every event with fireTime <= t, then sets the clock to t.
  void runUntil(SimTime t);

  /// Runs the next event, if any. Returns false on an empty queue.
  bool step();

  std::size_t pending() const { return live_.size(); }
  std::uint64_t executed() const { return executed_; }

  void setTraceHook(TraceHook hook) { trace_ = std::move(hook); }

 private:
  struct Entry {
    SimTime fireTime;
    EventId seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fireTime != b.fireTime) return a.fireTime > b.fireTime;
      return a.seq > b.seq;
    }
  };

  SimTime now_{0};
  EventId nextSeq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<EventId> live_;
  std::unordered_set<EventId> cancelled_;
  TraceHook trace_;
};

/// Point-to-point link: fixed propagation delay plus size / bandwidth, with
/// optional uniform jitter in [0, jitter] drawn by the network.
struct LinkModel {
  double bandwidth = 1e6;  // bytes per second
  SimTime baseDelay{0};
  SimTime jitter{0};
};

/// baseDelay + size / bandwidth, rounded to the nearest nanosecond.
SimTime transmissionDelay(std::uint64_t size, const LinkModel& link);

/// mt19937_64 with hand-rolled distributions; the std ones are not
/// portable across standard libraries.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [lo, hi].
  std::uint64_t uniformInt(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Fully connected network of nodes over a scheduler. Self-delivery has zero
/// delay; every other delivery takes transmissionDelay plus jitter.
class Network {
 public:
  using Deliver = std::function<void(NodeIndex recipient)>;

  Network(Scheduler& scheduler, std::size_t nodes, LinkModel defaultLink, std::uint64_t seed);

  std::size_t size() const { return nodes_; }
  void setLink(NodeIndex from, NodeIndex to, LinkModel link);
  const LinkModel& link(NodeIndex from, NodeIndex to) const;

  /// A muted node's sends are discarded (silent fault).
  void setMuted(NodeIndex node, bool muted);
  bool muted(NodeIndex node) const;

  /// Schedules one delivery per node, sender included. Returns the number of
  /// deliveries scheduled. Throws UnknownNode.
  std::size_t broadcast(NodeIndex sender, std::uint64_t wireSize, const Deliver& deliver);
  /// Broadcast restricted to the given recipients.
  std::size_t multicast(NodeIndex sender, const std::vector<NodeIndex>& recipients,
                        std::uint64_t wireSize, const Deliver& deliver);
  bool send(NodeIndex sender, NodeIndex recipient, std::uint64_t wireSize, const Deliver& deliver);

  std::uint64_t bytesSent() const { return bytesSent_; }
  std::uint64_t messagesSent() const { return messagesSent_; }

 private:
  void checkNode(NodeIndex n) const;
  SimTime delay(NodeIndex from, NodeIndex to, std::uint64_t wireSize);

  Scheduler& scheduler_;
  std::size_t nodes_;
  std::vector<LinkModel> links_;
  std::vector<bool> muted_;
  DeterministicRng rng_;
  std::uint64_t bytesSent_ = 0;
  std::uint64_t messagesSent_ = 0;
};

}  // namespace bcoc
