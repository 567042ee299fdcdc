#include <gtest/gtest.h>

#include <sstream>

#include "analytics.hpp"
#include "experiment.hpp"

using namespace bcoc;
using namespace std::chrono_literals;

namespace {

std::map<TxKind, std::uint64_t> kinds(const std::vector<Transaction>& txs) {
  std::map<TxKind, std::uint64_t> m;
  for (const auto& t : txs) ++m[t.kind];
  return m;
}

ExperimentConfig smallConfig() {
  ExperimentConfig c;
  c.period = 10;
  c.periods = 20;
  c.workload.rate = 3;
  return c;
}

}  // namespace

TEST(Workload, ConstantRatePerPeriod) {
  WorkloadSpec s;
  s.rate = 2;
  const auto txs = genWorkload(s, 1, 300s, 10);
  ASSERT_EQ(txs.size(), 20u);
  std::vector<int> perPeriod(10, 0);
  for (std::size_t i = 0; i < txs.size(); ++i) {
    EXPECT_EQ(txs[i].seq, i + 1);
    if (i) {
      EXPECT_GE(txs[i].issueTime, txs[i - 1].issueTime);
    }
    ++perPeriod.at(static_cast<std::size_t>(txs[i].issueTime / 300s));
  }
  for (int n : perPeriod) EXPECT_EQ(n, 2);
}

TEST(Workload, FractionalRateCarries) {
  WorkloadSpec s;
  s.rate = 0.5;
  EXPECT_EQ(genWorkload(s, 1, 10s, 10).size(), 5u);
}

TEST(Workload, DeterministicPerSeed) {
  WorkloadSpec s;
  s.rate = 5;
  const auto a = genWorkload(s, 4, 10s, 30);
  const auto b = genWorkload(s, 4, 10s, 30);
  const auto c = genWorkload(s, 5, 10s, 30);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].hash(), b[i].hash());
  bool differs = a.size() != c.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a[i].hash() != c[i].hash();
  EXPECT_TRUE(differs);
}

TEST(Workload, EveryOperationSucceedsInIssueOrder) {
  WorkloadSpec s;
  s.rate = 20;
  s.users = 3;
  LedgerState state;
  for (const auto& tx : genWorkload(s, 2, 10s, 50)) {
    const auto r = applyTransaction(state, tx, static_cast<std::uint64_t>(tx.issueTime / 1s));
    ASSERT_TRUE(r.succeeded()) << tx.seq << " " << revertName(r.status);
  }
}

TEST(Workload, AnnualMultiset) {
  WorkloadSpec s;
  s.mode = RateMode::Annual;
  s.annualN = 25;
  const auto txs = genWorkload(s, 3, 300s, 0);
  const auto m = kinds(txs);
  EXPECT_EQ(m.at(TxKind::CreateEvidence), 25u);
  EXPECT_EQ(m.at(TxKind::RemoveEvidence), 25u);
  EXPECT_EQ(m.at(TxKind::Transfer), 250u);
  for (const auto& t : txs) {
    if (t.kind == TxKind::CreateEvidence) {
      EXPECT_EQ(t.description.size(), 1024u);
    }
    EXPECT_LT(t.issueTime, fromSeconds(kSecondsPerYear));
  }
}

TEST(Workload, GasRampCrossesNearMidpoint) {
  const std::uint64_t g = 2'000'000;
  WorkloadSpec s;
  s.mode = RateMode::Ramp;
  s.unit = RateUnit::Gas;
  s.rateStart = 0;
  s.rateEnd = 2.0 * g;
  const auto txs = genWorkload(s, 1, 300s, 200);
  std::vector<IssuedTx> issued;
  for (const auto& t : txs) issued.push_back({toSeconds(t.issueTime), t.gas});
  const auto rate = gasRate(issued, 300, 200);
  const auto cross = rate.firstAbove(g);
  ASSERT_TRUE(cross);
  EXPECT_GE(*cross, 97u);
  EXPECT_LE(*cross, 103u);
  for (std::size_t p = 0; p < *cross; ++p) EXPECT_LE(rate.perPeriod[p], g);
}

TEST(Workload, RejectsBadSpecs) {
  WorkloadSpec s;
  s.descMin = 10;
  s.descMax = 5;
  try {
    genWorkload(s, 1, 10s, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
  s = {};
  s.rate = -1;
  EXPECT_THROW(genWorkload(s, 1, 10s, 1), Error);
  s = {};
  s.createWeight = 0;
  EXPECT_THROW(genWorkload(s, 1, 10s, 1), Error);
}

TEST(Config, ParsesKeyValueText) {
  std::istringstream in(R"(# experiment
period = 60
gas_limit=1000000   # inline comment
validators = 7
byzantine = 1:silent,equivocator
workload.mode = ramp
workload.unit = gas
workload.rate_end = 5e5
workload.mix = 1:2:1
)");
  const auto c = ExperimentConfig::parse(in, ExperimentConfig{});
  EXPECT_DOUBLE_EQ(c.period, 60);
  EXPECT_EQ(c.gasLimit, 1'000'000u);
  EXPECT_EQ(c.validators, 7u);
  EXPECT_EQ(c.workload.mode, RateMode::Ramp);
  EXPECT_EQ(c.workload.unit, RateUnit::Gas);
  EXPECT_DOUBLE_EQ(c.workload.rateEnd, 5e5);
  EXPECT_DOUBLE_EQ(c.workload.transferWeight, 2);
  const auto b = c.behaviors();
  ASSERT_EQ(b.size(), 7u);
  EXPECT_EQ(b[1], Behavior::Silent);
  EXPECT_EQ(b[6], Behavior::Equivocator);
  c.validate();
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  ExperimentConfig c;
  auto code = [&](const std::string& k, const std::string& v) {
    try {
      c.set(k, v);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code("nope", "1"), ErrorCode::ConfigError);
  EXPECT_EQ(code("period", "abc"), ErrorCode::ConfigError);
  EXPECT_EQ(code("workload.mode", "sine"), ErrorCode::ConfigError);
  std::istringstream bad("period 60\n");
  EXPECT_THROW(ExperimentConfig::parse(bad, ExperimentConfig{}), Error);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/cfg", ExperimentConfig{}), Error);
}

TEST(Config, ValidatorCountMustCoverFaults) {
  ExperimentConfig c;
  c.byzantine = "0:silent,1:silent";
  EXPECT_THROW(c.validate(), Error);
  c.validators = 7;
  c.validate();
  c.period = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Experiment, LightLoadLatencyNearHalfPeriod) {
  ExperimentConfig c = smallConfig();
  c.periods = 40;
  const auto r = runExperiment(c);
  ASSERT_EQ(r.rows.size(), 40u);
  double sum = 0;
  std::uint64_t chain = 0;
  for (const auto& row : r.rows) {
    EXPECT_LE(row.maxLB, c.period);
    EXPECT_GE(row.committedBlockSize, 1909u);
    EXPECT_GT(row.chainSizeBytes, chain);
    chain = row.chainSizeBytes;
    EXPECT_NEAR(row.meanLC, 0.0, 0.05);
    sum += row.meanLB;
  }
  EXPECT_NEAR(sum / 40, c.period / 2, c.period * 0.15);
  EXPECT_TRUE(r.summary.agreement);
  EXPECT_EQ(r.summary.issuedTxs, 120u);
  EXPECT_EQ(r.summary.includedTxs, 120u);
  EXPECT_EQ(r.summary.revertedTxs, 0u);
  EXPECT_EQ(r.summary.committedBlocks, 40u);
}

TEST(Experiment, CsvIsByteIdenticalAcrossRuns) {
  ExperimentConfig c = smallConfig();
  c.byzantine = "2:equivocator";
  c.jitterMs = 2;
  auto csv = [&] {
    const auto r = runExperiment(c);
    std::ostringstream out;
    writeMetricsCsv(out, r.rows);
    writeSummaryCsv(out, r.summary);
    return out.str();
  };
  const std::string a = csv();
  EXPECT_EQ(a, csv());
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "periodIndex,gasRate,meanLB,maxLB,meanLC,committedBlockSize,chainSizeBytes,"
            "mempoolDepth");
}

TEST(Experiment, SilentValidatorAgreement) {
  ExperimentConfig c = smallConfig();
  c.byzantine = "3:silent";
  const auto r = runExperiment(c);
  EXPECT_TRUE(r.summary.agreement);
  ASSERT_EQ(r.summary.validators.size(), 4u);
  const auto& v = r.summary.validators;
  EXPECT_EQ(v[0].headDigest, v[1].headDigest);
  EXPECT_EQ(v[1].headDigest, v[2].headDigest);
  EXPECT_EQ(v[0].stateDigest, v[2].stateDigest);
}

TEST(Experiment, SweepMatchesSequentialRuns) {
  std::vector<ExperimentConfig> cfgs;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    ExperimentConfig c = smallConfig();
    c.seed = seed;
    c.periods = 8;
    cfgs.push_back(c);
  }
  const auto parallel = runSweep(cfgs, 3);
  ASSERT_EQ(parallel.size(), cfgs.size());
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    std::ostringstream a, b;
    writeMetricsCsv(a, parallel[i].rows);
    writeMetricsCsv(b, runExperiment(cfgs[i]).rows);
    EXPECT_EQ(a.str(), b.str()) << i;
  }
}

TEST(Csv, PrefixAndFixedFormatting) {
  MetricsRow row;
  row.periodIndex = 3;
  row.meanLB = 1.5;
  std::ostringstream out;
  writeMetricsCsv(out, {row}, "gasLimit,seed", "100,7");
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 14), "gasLimit,seed,");
  EXPECT_NE(s.find("\n100,7,3,0,1.500000,"), std::string::npos);
  EXPECT_EQ(formatFixed(0.25, 2), "0.25");
}
