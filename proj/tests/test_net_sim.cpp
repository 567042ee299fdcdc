#include <gtest/gtest.h>

#include <vector>

#include "net_sim.hpp"

using namespace bcoc;
using namespace std::chrono_literals;

TEST(Scheduler, OrdersByTimeThenInsertion) {
  Scheduler s;
  std::vector<int> order;
  s.schedule(SimTime(20), [&] { order.push_back(3); });
  s.schedule(SimTime(10), [&] { order.push_back(1); });
  s.schedule(SimTime(10), [&] { order.push_back(2); });
  s.runUntil(SimTime(100));
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(s.now(), SimTime(100));
  EXPECT_EQ(s.executed(), 3u);
}

TEST(Scheduler, RejectsPastEvents) {
  Scheduler s;
  s.runUntil(SimTime(50));
  try {
    s.schedule(SimTime(10), [] {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchedulingInPast);
  }
}

TEST(Scheduler, CancelAndPending) {
  Scheduler s;
  int fired = 0;
  const EventId a = s.schedule(SimTime(5), [&] { ++fired; });
  const EventId b = s.schedule(SimTime(6), [&] { ++fired; });
  EXPECT_EQ(s.pending(), 2u);
  EXPECT_TRUE(s.cancel(a));
  EXPECT_FALSE(s.cancel(a));
  EXPECT_EQ(s.pending(), 1u);
  s.runUntil(SimTime(10));
  EXPECT_EQ(fired, 1);
  EXPECT_FALSE(s.cancel(b));
  EXPECT_EQ(s.pending(), 0u);
}

TEST(Scheduler, EventsMayScheduleEvents) {
  Scheduler s;
  std::vector<SimTime> times;
  s.schedule(SimTime(1), [&] {
    times.push_back(s.now());
    s.scheduleAfter(SimTime(4), [&] { times.push_back(s.now()); });
  });
  while (s.step()) {
  }
  EXPECT_EQ(times, (std::vector<SimTime>{SimTime(1), SimTime(5)}));
}

TEST(Scheduler, RunUntilLeavesLaterEvents) {
  Scheduler s;
  int fired = 0;
  s.schedule(SimTime(10), [&] { ++fired; });
  s.schedule(SimTime(11), [&] { ++fired; });
  s.runUntil(SimTime(10));
  EXPECT_EQ(fired, 1);
  EXPECT_EQ(s.pending(), 1u);
}

TEST(Link, TransmissionDelay) {
  LinkModel l;
  l.bandwidth = 1e6;
  EXPECT_EQ(transmissionDelay(1000, l), 1ms);
  l.baseDelay = 2ms;
  EXPECT_EQ(transmissionDelay(500, l), 2500us);
  l.bandwidth = 2e6;
  l.baseDelay = SimTime{0};
  EXPECT_EQ(transmissionDelay(1000, l), 500us);
}

TEST(Rng, DeterministicAndInRange) {
  DeterministicRng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.uniformInt(3, 9);
    EXPECT_EQ(x, b.uniformInt(3, 9));
    EXPECT_GE(x, 3u);
    EXPECT_LE(x, 9u);
    const double u = a.uniform01();
    EXPECT_EQ(u, b.uniform01());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, FrozenFirstDraw) {
  // mt19937_64 with the default seed produces this value by definition.
  DeterministicRng r(5489);
  EXPECT_EQ(r.next(), 14514284786278117030ull);
}

TEST(Network, BroadcastDeliversToAllIncludingSelf) {
  Scheduler s;
  LinkModel link;
  link.bandwidth = 1e6;
  Network net(s, 4, link, 1);
  std::vector<std::pair<NodeIndex, SimTime>> got;
  EXPECT_EQ(net.broadcast(2, 1000, [&](NodeIndex r) { got.emplace_back(r, s.now()); }), 4u);
  s.runUntil(1s);
  ASSERT_EQ(got.size(), 4u);
  for (const auto& [r, t] : got) EXPECT_EQ(t, r == 2 ? SimTime{0} : SimTime(1ms));
  EXPECT_EQ(net.messagesSent(), 3u);
  EXPECT_EQ(net.bytesSent(), 3000u);
}

TEST(Network, MutedNodeSendsNothing) {
  Scheduler s;
  Network net(s, 4, LinkModel{}, 1);
  net.setMuted(1, true);
  int got = 0;
  EXPECT_EQ(net.broadcast(1, 10, [&](NodeIndex) { ++got; }), 0u);
  EXPECT_FALSE(net.send(1, 2, 10, [&](NodeIndex) { ++got; }));
  s.runUntil(1s);
  EXPECT_EQ(got, 0);
}

TEST(Network, PerLinkOverrideAndUnknownNode) {
  Scheduler s;
  Network net(s, 3, LinkModel{}, 1);
  LinkModel slow;
  slow.bandwidth = 1e3;
  net.setLink(0, 2, slow);
  SimTime at{};
  net.send(0, 2, 1000, [&](NodeIndex) { at = s.now(); });
  s.runUntil(10s);
  EXPECT_EQ(at, 1s);
  EXPECT_THROW(net.send(0, 7, 1, [](NodeIndex) {}), Error);
}

TEST(Network, JitterIsSeededAndBounded) {
  auto run = [](std::uint64_t seed) {
    Scheduler s;
    LinkModel l;
    l.jitter = 5ms;
    Network net(s, 5, l, seed);
    std::vector<SimTime> times;
    for (int i = 0; i < 20; ++i) net.broadcast(0, 100, [&](NodeIndex) { times.push_back(s.now()); });
    s.runUntil(1s);
    return times;
  };
  const auto a = run(3);
  EXPECT_EQ(a, run(3));
  EXPECT_NE(a, run(4));
  for (auto t : a) EXPECT_LE(t, 100us + 5ms);
}
