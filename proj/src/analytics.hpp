#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ledger.hpp"
#include "types.hpp"

namespace bcoc {

inline constexpr double kSecondsPerYear = 365.0 * 24 * 3600;
inline constexpr double kMiB = 1024.0 * 1024.0;
inline constexpr double kGiB = 1024.0 * kMiB;

struct ChainParams {
  double period = 300;           // seconds
  std::uint64_t gasLimit = 0;
  std::uint64_t headerSize = 1909;
  double bandwidth = 1e6;        // bytes per second on the slowest link
  std::uint64_t prepareSize = 128;
  std::uint64_t commitSize = 128;
  std::uint64_t ppOverhead = 256;
  std::uint64_t genesisSize = 4096;
};

struct CatalogItem {
  TxType type;
  std::uint64_t size = 0;
  std::uint64_t gas = 0;
};
using Catalog = std::vector<CatalogItem>;

/// Transfer, RemoveEvidence and CreateEvidence(l) for l = 0..1024.
Catalog standardCatalog(const CostModel& costs = CostModel::standard());

/// Count of included transactions per type.
using TxMultiset = std::map<TxType, std::uint64_t>;

/// blockCreationTime + period - txIssueTime, seconds.
double blockInclusionLatency(double txIssueTime, double blockCreationTime, double period);

/// (ppOverhead + blockSize + prepareSize + commitSize) / bandwidth, seconds.
double consensusLatency(std::uint64_t blockSize, const ChainParams& params);

/// header + floor(G / transferGas) * transferSize.
std::uint64_t maxBlockSizeClosedForm(std::uint64_t gasLimit, const Catalog& catalog,
                                     std::uint64_t headerSize = 1909);

/// Exact unbounded-knapsack solver (values = sizes, weights = gas). The DP
/// runs over attainable block content sizes: minGas[v] is the least gas of
/// any transaction mix of exactly v bytes. Content is bounded above by
/// G * max(size/gas), so the table stays small even for large G.
class UkpSolver {
 public:
  static constexpr std::uint64_t kDefaultCapacityCeiling = 100'000'000;

  /// Prepares tables for every capacity up to maxCapacity. Throws
  /// CapacityTooLargeForExactDP above the ceiling.
  UkpSolver(Catalog catalog, std::uint64_t maxCapacity,
            std::uint64_t capacityCeiling = kDefaultCapacityCeiling);

  /// Optimal content bytes for capacity G (<= maxCapacity).
  std::uint64_t optimum(std::uint64_t gasLimit) const;
  /// An optimal multiset for capacity G.
  std::vector<std::pair<TxType, std::uint64_t>> solution(std::uint64_t gasLimit) const;

  std::uint64_t maxCapacity() const { return maxCapacity_; }

 private:
  std::uint64_t valueBound(std::uint64_t gasLimit) const;

  Catalog catalog_;
  std::uint64_t maxCapacity_;
  std::vector<std::uint64_t> minGas_;
  std::vector<std::uint32_t> lastItem_;
};

/// header + exact knapsack optimum for G.
std::uint64_t maxBlockSizeUKP(std::uint64_t gasLimit, const Catalog& catalog,
                              std::uint64_t headerSize = 1909,
                              std::uint64_t capacityCeiling = UkpSolver::kDefaultCapacityCeiling);

/// Index of a catalog item K such that every other item J satisfies
/// floor(gas(J) / gas(K)) * size(K) >= size(J): J can always be swapped for
/// copies of K without using more gas or losing bytes.
std::optional<std::size_t> dominanceCheck(const Catalog& catalog);

/// G range whose closed-form maximum block size is exactly maxSize.
/// Throws InvalidMaxSize when maxSize is not header + k * transferSize.
std::pair<std::uint64_t, std::uint64_t> gasLimitRangeForMaxSize(
    std::uint64_t maxSize, const Catalog& catalog, std::uint64_t headerSize = 1909);

/// Total header bytes after t seconds: headerSize * t / period.
double headerOverhead(double t, double period, std::uint64_t headerSize = 1909);

/// headerSize * (t2 - t1) / period + sum of included transaction sizes.
double growthRate(double t1, double t2, double period, const TxMultiset& included,
                  const CostModel& costs = CostModel::standard(),
                  std::uint64_t headerSize = 1909);

struct GasLimitPlan {
  std::uint64_t lower = 0;         // max gas rate
  std::uint64_t lowerAverage = 0;  // mean gas rate
  std::uint64_t upper = 0;         // consensus-latency bound
  std::uint64_t recommended = 0;
  std::uint64_t rangeLow = 0;
  std::uint64_t rangeHigh = 0;
  std::string tag;  // ideal | average-bounded | latency-tradeoff
};

/// Throws InvalidBounds when lowerAverage > lower.
GasLimitPlan planGasLimit(std::uint64_t lower, std::uint64_t lowerAverage, std::uint64_t upper);

/// Largest G whose worst-case block keeps consensus latency within the bound.
std::uint64_t upperGasLimitForLatency(double maxLatencySeconds, const ChainParams& params,
                                      const Catalog& catalog);

struct IssuedTx {
  double issueTime = 0;  // seconds
  std::uint64_t gas = 0;
};

struct GasRateSeries {
  std::vector<std::uint64_t> perPeriod;
  std::uint64_t max = 0;
  double mean = 0;
  /// First period whose gas rate exceeds the given limit, if requested.
  std::optional<std::size_t> firstAbove(std::uint64_t gasLimit) const;
};

/// Gas issued per block period. periods == 0 sizes the series to the last
/// issue time.
GasRateSeries gasRate(const std::vector<IssuedTx>& txs, double period, std::size_t periods = 0);

struct Table2Row {
  std::uint64_t n = 0;
  std::uint64_t contentBytes = 0;
  double headerBytes = 0;
  double totalBytes = 0;
  double overheadPct = 0;
};

/// n CreateEvidence(1024), n RemoveEvidence and 10n Transfer per year.
TxMultiset table2Workload(std::uint64_t n);
std::vector<Table2Row> reproduceTable2(double period,
                                       const std::vector<std::uint64_t>& ns = {10'000, 100'000,
                                                                               1'000'000});

struct Fig3Point {
  double periodSeconds = 0;
  double annualHeaderBytes = 0;
};
std::vector<Fig3Point> reproduceFig3(const std::vector<double>& periodsMinutes = {1, 2, 5, 10, 15,
                                                                                   30, 60},
                                     std::uint64_t headerSize = 1909);

}  // namespace bcoc
