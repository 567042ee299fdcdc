#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "analytics.hpp"

using namespace bcoc;

namespace {

/// Textbook capacity-indexed unbounded knapsack, O(items * G).
std::uint64_t knapsackByCapacity(const Catalog& items, std::uint64_t g) {
  std::vector<std::uint64_t> best(g + 1, 0);
  for (std::uint64_t c = 1; c <= g; ++c) {
    best[c] = best[c - 1];
    for (const auto& it : items) {
      if (it.gas <= c) best[c] = std::max(best[c], best[c - it.gas] + it.size);
    }
  }
  return best[g];
}

Catalog tinyCatalog(std::mt19937_64& rng) {
  Catalog c;
  const std::size_t n = 2 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    CatalogItem it;
    it.type = i == 0 ? TxType::transfer() : TxType::create(static_cast<std::uint32_t>(i));
    it.size = 1 + rng() % 60;
    it.gas = 5 + rng() % 400;
    c.push_back(it);
  }
  return c;
}

}  // namespace

TEST(Latency, InclusionLatency) {
  EXPECT_DOUBLE_EQ(blockInclusionLatency(100, 0, 300), 200);
  EXPECT_DOUBLE_EQ(blockInclusionLatency(299, 0, 300), 1);
  EXPECT_DOUBLE_EQ(blockInclusionLatency(0, 0, 300), 300);
}

TEST(Latency, ConsensusLatencyOfEmptyBlock) {
  ChainParams p;
  EXPECT_DOUBLE_EQ(consensusLatency(1909, p), 2421e-6);
  p.bandwidth = 0;
  EXPECT_THROW(consensusLatency(1909, p), Error);
}

TEST(MaxBlockSize, ClosedForm) {
  const Catalog c = standardCatalog();
  EXPECT_EQ(c.size(), 2u + 1025u);
  EXPECT_EQ(maxBlockSizeClosedForm(0, c), 1909u);
  EXPECT_EQ(maxBlockSizeClosedForm(80501, c), 1909u);
  EXPECT_EQ(maxBlockSizeClosedForm(80502, c), 1909u + 174);
  EXPECT_EQ(maxBlockSizeClosedForm(8'000'000, c), 1909u + 99 * 174);
}

TEST(MaxBlockSize, TransferDominatesStandardCatalog) {
  const Catalog c = standardCatalog();
  const auto k = dominanceCheck(c);
  ASSERT_TRUE(k);
  EXPECT_EQ(c[*k].type, TxType::transfer());
}

TEST(MaxBlockSize, NoDominanceDetected) {
  Catalog c;
  c.push_back({TxType::transfer(), 10, 100});
  c.push_back({TxType::remove(), 19, 150});
  EXPECT_FALSE(dominanceCheck(c));
}

TEST(Ukp, MatchesCapacityDpOnSmallCatalogs) {
  std::mt19937_64 rng(17);
  for (int run = 0; run < 40; ++run) {
    const Catalog c = tinyCatalog(rng);
    const std::uint64_t maxG = 3000;
    UkpSolver solver(c, maxG);
    for (std::uint64_t g = 0; g <= maxG; g += 1 + rng() % 37) {
      ASSERT_EQ(solver.optimum(g), knapsackByCapacity(c, g)) << "run " << run << " G " << g;
      std::uint64_t gas = 0, size = 0;
      for (const auto& [type, count] : solver.solution(g)) {
        const auto it = std::find_if(c.begin(), c.end(), [&](const auto& x) { return x.type == type; });
        ASSERT_NE(it, c.end());
        gas += it->gas * count;
        size += it->size * count;
      }
      EXPECT_LE(gas, g);
      EXPECT_EQ(size, solver.optimum(g));
    }
  }
}

TEST(Ukp, StandardCatalogAgreesWithClosedForm) {
  const Catalog c = standardCatalog();
  UkpSolver solver(c, 2'000'000);
  for (std::uint64_t g : {0ull, 80501ull, 80502ull, 170207ull, 897367ull, 1'000'000ull, 2'000'000ull}) {
    EXPECT_EQ(1909 + solver.optimum(g), maxBlockSizeClosedForm(g, c)) << g;
  }
  EXPECT_EQ(maxBlockSizeUKP(1'000'000, c), maxBlockSizeClosedForm(1'000'000, c));
  EXPECT_EQ(maxBlockSizeUKP(170207, c), 2257u);
}

TEST(Ukp, RejectsBadInputs) {
  const Catalog c = standardCatalog();
  try {
    UkpSolver(c, 200'000'000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityTooLargeForExactDP);
  }
  Catalog zero{{TxType::transfer(), 0, 10}};
  EXPECT_THROW(UkpSolver(zero, 100), Error);
  UkpSolver s(c, 1000);
  EXPECT_THROW(s.optimum(1001), Error);
}

TEST(GasLimitRange, InvertsClosedForm) {
  const Catalog c = standardCatalog();
  const auto [lo, hi] = gasLimitRangeForMaxSize(1909 + 3 * 174, c);
  EXPECT_EQ(lo, 3u * 80502);
  EXPECT_EQ(hi, 4u * 80502 - 1);
  EXPECT_EQ(maxBlockSizeClosedForm(lo, c), 1909u + 3 * 174);
  EXPECT_EQ(maxBlockSizeClosedForm(hi, c), 1909u + 3 * 174);
  EXPECT_EQ(maxBlockSizeClosedForm(hi + 1, c), 1909u + 4 * 174);
  try {
    gasLimitRangeForMaxSize(1909 + 100, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMaxSize);
  }
}

TEST(Overhead, HeaderBytesPerYear) {
  EXPECT_DOUBLE_EQ(headerOverhead(kSecondsPerYear, 300), 200'674'080.0);
  EXPECT_NEAR(headerOverhead(kSecondsPerYear, 300) / kMiB, 191.38, 0.005);
  EXPECT_DOUBLE_EQ(headerOverhead(kSecondsPerYear, 600), 100'337'040.0);
}

TEST(Overhead, GrowthRate) {
  TxMultiset m{{TxType::transfer(), 2}, {TxType::create(512), 1}};
  EXPECT_DOUBLE_EQ(growthRate(0, 600, 300, m), 2 * 1909 + 2 * 174 + 720);
}

TEST(Table2, MatchesPublishedValues) {
  const auto rows = reproduceTable2(300);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].contentBytes, 31'150'000u);
  EXPECT_EQ(rows[1].contentBytes, 311'500'000u);
  EXPECT_EQ(rows[2].contentBytes, 3'115'000'000u);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.headerBytes, 200'674'080.0);
    EXPECT_DOUBLE_EQ(r.totalBytes, r.headerBytes + static_cast<double>(r.contentBytes));
  }
  EXPECT_NEAR(rows[0].totalBytes / kMiB, 221.08, 0.01);
  EXPECT_NEAR(rows[0].overheadPct, 86.56, 0.01);
  EXPECT_NEAR(rows[1].totalBytes / kMiB, 488.45, 0.01);
  EXPECT_NEAR(rows[1].overheadPct, 39.18, 0.01);
  EXPECT_NEAR(rows[2].totalBytes / kGiB, 3.09, 0.005);
  EXPECT_NEAR(rows[2].overheadPct, 6.05, 0.01);
}

TEST(Table2, WorkloadMultiset) {
  const auto m = table2Workload(10'000);
  EXPECT_EQ(m.at(TxType::create(1024)), 10'000u);
  EXPECT_EQ(m.at(TxType::remove()), 10'000u);
  EXPECT_EQ(m.at(TxType::transfer()), 100'000u);
}

TEST(Fig3, ScalesInverselyWithPeriod) {
  const auto pts = reproduceFig3();
  ASSERT_EQ(pts.size(), 7u);
  const double at5 = pts[2].annualHeaderBytes;
  EXPECT_DOUBLE_EQ(pts[2].periodSeconds, 300);
  EXPECT_DOUBLE_EQ(pts[0].annualHeaderBytes, 5 * at5);
  EXPECT_DOUBLE_EQ(pts[3].annualHeaderBytes, at5 / 2);
}

TEST(Plan, Classification) {
  auto p = planGasLimit(100, 50, 300);
  EXPECT_EQ(p.tag, "ideal");
  EXPECT_EQ(p.recommended, 200u);
  EXPECT_EQ(p.rangeLow, 100u);
  EXPECT_EQ(p.rangeHigh, 300u);

  p = planGasLimit(400, 50, 300);
  EXPECT_EQ(p.tag, "average-bounded");
  EXPECT_EQ(p.recommended, 300u);

  p = planGasLimit(400, 350, 300);
  EXPECT_EQ(p.tag, "latency-tradeoff");
  EXPECT_EQ(p.recommended, 350u);

  EXPECT_THROW(planGasLimit(10, 20, 30), Error);
}

TEST(Plan, UpperBoundFromLatency) {
  const Catalog c = standardCatalog();
  ChainParams p;
  // 10 ms at 1 MB/s leaves 10000 - 2421 bytes of content: 43 transfers.
  const std::uint64_t g = upperGasLimitForLatency(0.01, p, c);
  EXPECT_EQ(g, 44u * 80502 - 1);
  EXPECT_LE(consensusLatency(maxBlockSizeClosedForm(g, c), p), 0.01);
  EXPECT_GT(consensusLatency(maxBlockSizeClosedForm(g + 1, c), p), 0.01);
  EXPECT_EQ(upperGasLimitForLatency(0.001, p, c), 0u);
}

TEST(GasRate, BucketsByPeriod) {
  const auto s = gasRate({{0, 10}, {299.9, 5}, {300, 7}, {900, 1}}, 300);
  EXPECT_EQ(s.perPeriod, (std::vector<std::uint64_t>{15, 7, 0, 1}));
  EXPECT_EQ(s.max, 15u);
  EXPECT_DOUBLE_EQ(s.mean, 23.0 / 4);
  EXPECT_EQ(s.firstAbove(7), 0u);
  EXPECT_EQ(s.firstAbove(15), std::nullopt);
}
