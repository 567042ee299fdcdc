#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "consensus.hpp"
#include "ledger.hpp"
#include "types.hpp"

namespace bcoc {

enum class RateMode { Constant, Ramp, Annual };
enum class RateUnit { Transactions, Gas };

struct WorkloadSpec {
  RateMode mode = RateMode::Constant;
  RateUnit unit = RateUnit::Transactions;
  double rate = 2;       // constant mode, per period
  double rateStart = 0;  // ramp mode, per period
  double rateEnd = 0;
  std::uint64_t annualN = 0;  // annual mode: n creates, n removes, 10n transfers per year
  double createWeight = 1;
  double transferWeight = 4;
  double removeWeight = 1;
  std::uint32_t descMin = 0;
  std::uint32_t descMax = 64;
  std::uint32_t users = 16;
};

struct ExperimentConfig {
  double period = 300;  // seconds
  std::uint64_t gasLimit = 8'000'000;
  std::uint32_t validators = 4;
  std::string byzantine;  // e.g. "3:silent" or "0:equivocator,2:silent"
  double bandwidth = 1e6;
  double baseDelayMs = 0;
  double jitterMs = 0;
  std::uint64_t headerSize = kHeaderSize;
  std::uint64_t prepareSize = 128;
  std::uint64_t commitSize = 128;
  std::uint64_t ppOverhead = 256;
  double roundTimeout = 0;  // seconds; 0 means twice the period
  bool rejectInvalid = false;
  std::uint64_t periods = 200;
  std::uint64_t drainPeriods = 0;
  std::uint64_t seed = 1;
  WorkloadSpec workload;

  /// Applies one "key = value" setting. Throws ConfigError for unknown keys
  /// or malformed values.
  void set(const std::string& key, const std::string& value);
  /// Parses line-oriented "key = value" text; '#' starts a comment.
  /// Settings are applied on top of base.
  static ExperimentConfig parse(std::istream& in, ExperimentConfig base);
  static ExperimentConfig load(const std::string& path, ExperimentConfig base);
  /// Throws ConfigError when the configuration cannot run.
  void validate() const;

  std::vector<Behavior> behaviors() const;
  ClusterConfig clusterConfig() const;
};

/// Documented configuration keys with their meaning, for help text.
const std::vector<std::pair<std::string, std::string>>& configKeys();

/// Deterministic per seed. Transactions are valid against a shadow ledger
/// that applies them in issue order; sequence numbers follow issue order.
/// Throws InvalidSpec.
std::vector<Transaction> genWorkload(const WorkloadSpec& spec, std::uint64_t seed, SimTime period,
                                     std::uint64_t periods,
                                     const CostModel& costs = CostModel::standard());

struct MetricsRow {
  std::uint64_t periodIndex = 0;
  std::uint64_t gasRate = 0;      // gas of transactions issued in the period
  double meanLB = 0;              // seconds, over the period's block
  double maxLB = 0;               // seconds
  std::uint64_t includedTxs = 0;  // transactions in the period's block
  double meanLC = 0;              // seconds, proposal to commit, honest mean
  std::uint64_t committedBlockSize = 0;
  std::uint64_t chainSizeBytes = 0;
  std::uint64_t mempoolDepth = 0;  // left behind when the period's block committed
};

struct ValidatorSummary {
  std::uint32_t index = 0;
  Behavior behavior = Behavior::Honest;
  std::uint64_t height = 0;  // committed blocks
  std::string headDigest;
  std::string stateDigest;
  std::uint64_t roundChanges = 0;
};

struct ExperimentSummary {
  std::uint64_t periods = 0;
  std::uint64_t issuedTxs = 0;
  std::uint64_t includedTxs = 0;
  std::uint64_t revertedTxs = 0;
  std::uint64_t committedBlocks = 0;  // reference validator
  bool agreement = true;
  std::uint64_t messages = 0;
  std::uint64_t bytesSent = 0;
  std::vector<ValidatorSummary> validators;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  ExperimentSummary summary;
};

/// One deterministic simulation: the first honest validator is the
/// reference for per-period metrics. Throws ConfigError.
ExperimentResult runExperiment(const ExperimentConfig& config);

/// Runs each configuration with its own scheduler; results keep input order.
std::vector<ExperimentResult> runSweep(const std::vector<ExperimentConfig>& configs,
                                       unsigned threads = 1);

/// Column names and descriptions of the metrics CSV.
const std::vector<std::pair<std::string, std::string>>& metricsColumns();
const std::vector<std::pair<std::string, std::string>>& summaryColumns();

void writeMetricsCsv(std::ostream& out, const std::vector<MetricsRow>& rows,
                     const std::string& prefixHeader = {}, const std::string& prefixValue = {},
                     bool header = true);
void writeSummaryCsv(std::ostream& out, const ExperimentSummary& summary);

std::string formatFixed(double value, int precision = 6);

}  // namespace bcoc
