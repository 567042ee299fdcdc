#include "analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcoc {

namespace {

const CatalogItem& transferItem(const Catalog& catalog) {
  for (const auto& item : catalog) {
    if (item.type.kind == TxKind::Transfer) return item;
  }
  throw Error(ErrorCode::InvalidArgument, "catalog has no Transfer entry");
}

}  // namespace

Catalog standardCatalog(const CostModel& costs) {
  Catalog c;
  c.reserve(kMaxDescriptionLength + 3);
  for (TxType t : {TxType::transfer(), TxType::remove()}) {
    const TxCost cost = costs.cost(t);
    c.push_back({t, cost.size, cost.gas});
  }
  for (std::uint32_t len = 0; len <= kMaxDescriptionLength; ++len) {
    const TxCost cost = costs.cost(TxType::create(len));
    c.push_back({TxType::create(len), cost.size, cost.gas});
  }
  return c;
}

double blockInclusionLatency(double txIssueTime, double blockCreationTime, double period) {
  return blockCreationTime + period - txIssueTime;
}

double consensusLatency(std::uint64_t blockSize, const ChainParams& params) {
  if (params.bandwidth <= 0) throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  const double bytes = static_cast<double>(params.ppOverhead + blockSize + params.prepareSize +
                                           params.commitSize);
  return bytes / params.bandwidth;
}

std::uint64_t maxBlockSizeClosedForm(std::uint64_t gasLimit, const Catalog& catalog,
                                     std::uint64_t headerSize) {
  const CatalogItem& t = transferItem(catalog);
  return headerSize + (gasLimit / t.gas) * t.size;
}

// ---------------------------------------------------------------------------
// UkpSolver

UkpSolver::UkpSolver(Catalog catalog, std::uint64_t maxCapacity, std::uint64_t capacityCeiling)
    : catalog_(std::move(catalog)), maxCapacity_(maxCapacity) {
  if (catalog_.empty()) throw Error(ErrorCode::InvalidArgument, "empty catalog");
  for (const auto& item : catalog_) {
    if (item.size == 0 || item.gas == 0) {
      throw Error(ErrorCode::InvalidArgument, "catalog sizes and gas must be positive");
    }
  }
  if (maxCapacity > capacityCeiling) {
    throw Error(ErrorCode::CapacityTooLargeForExactDP,
                "capacity " + std::to_string(maxCapacity) + " exceeds the exact-DP ceiling " +
                    std::to_string(capacityCeiling));
  }
  const std::uint64_t bound = valueBound(maxCapacity);
  if (bound > capacityCeiling) {
    throw Error(ErrorCode::CapacityTooLargeForExactDP,
                "value range " + std::to_string(bound) + " exceeds the exact-DP ceiling");
  }

  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  minGas_.assign(bound + 1, kInf);
  lastItem_.assign(bound + 1, 0);
  minGas_[0] = 0;
  for (std::uint64_t v = 1; v <= bound; ++v) {
    std::uint64_t best = kInf;
    std::uint32_t arg = 0;
    for (std::uint32_t i = 0; i < catalog_.size(); ++i) {
      const auto& item = catalog_[i];
      if (item.size > v) continue;
      const std::uint64_t prev = minGas_[v - item.size];
      if (prev == kInf) continue;
      const std::uint64_t g = prev + item.gas;
      if (g < best) {
        best = g;
        arg = i;
      }
    }
    minGas_[v] = best;
    lastItem_[v] = arg;
  }
}

std::uint64_t UkpSolver::valueBound(std::uint64_t gasLimit) const {
  std::uint64_t bound = 0;
  for (const auto& item : catalog_) {
    const auto v = static_cast<unsigned __int128>(gasLimit) * item.size / item.gas;
    bound = std::max<std::uint64_t>(bound, static_cast<std::uint64_t>(v));
  }
  return bound;
}

std::uint64_t UkpSolver::optimum(std::uint64_t gasLimit) const {
  if (gasLimit > maxCapacity_) {
    throw Error(ErrorCode::InvalidArgument, "capacity above the prepared maximum");
  }
  for (std::uint64_t v = valueBound(gasLimit);; --v) {
    if (minGas_[v] <= gasLimit) return v;
    if (v == 0) break;
  }
  return 0;
}

std::vector<std::pair<TxType, std::uint64_t>> UkpSolver::solution(std::uint64_t gasLimit) const {
  std::map<TxType, std::uint64_t> counts;
  for (std::uint64_t v = optimum(gasLimit); v > 0;) {
    const auto& item = catalog_[lastItem_[v]];
    ++counts[item.type];
    v -= item.size;
  }
  return {counts.begin(), counts.end()};
}

std::uint64_t maxBlockSizeUKP(std::uint64_t gasLimit, const Catalog& catalog,
                              std::uint64_t headerSize, std::uint64_t capacityCeiling) {
  return headerSize + UkpSolver(catalog, gasLimit, capacityCeiling).optimum(gasLimit);
}

std::optional<std::size_t> dominanceCheck(const Catalog& catalog) {
  if (catalog.empty()) throw Error(ErrorCode::InvalidArgument, "empty catalog");
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const auto& dom = catalog[k];
    bool dominates = dom.gas > 0;
    for (std::size_t j = 0; dominates && j < catalog.size(); ++j) {
      if (j == k) continue;
      const auto& other = catalog[j];
      dominates = (other.gas / dom.gas) * dom.size >= other.size;
    }
    if (dominates) return k;
  }
  return std::nullopt;
}

std::pair<std::uint64_t, std::uint64_t> gasLimitRangeForMaxSize(std::uint64_t maxSize,
                                                                const Catalog& catalog,
                                                                std::uint64_t headerSize) {
  const CatalogItem& t = transferItem(catalog);
  if (maxSize < headerSize || (maxSize - headerSize) % t.size != 0) {
    throw Error(ErrorCode::InvalidMaxSize,
                std::to_string(maxSize) + " is not " + std::to_string(headerSize) + " + k*" +
                    std::to_string(t.size));
  }
  const std::uint64_t k = (maxSize - headerSize) / t.size;
  return {k * t.gas, k * t.gas + t.gas - 1};
}

double headerOverhead(double t, double period, std::uint64_t headerSize) {
  if (period <= 0) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  return static_cast<double>(headerSize) * t / period;
}

double growthRate(double t1, double t2, double period, const TxMultiset& included,
                  const CostModel& costs, std::uint64_t headerSize) {
  if (t2 < t1) throw Error(ErrorCode::InvalidArgument, "t2 precedes t1");
  double content = 0;
  for (const auto& [type, count] : included) {
    content += static_cast<double>(costs.size(type)) * static_cast<double>(count);
  }
  return headerOverhead(t2 - t1, period, headerSize) + content;
}

GasLimitPlan planGasLimit(std::uint64_t lower, std::uint64_t lowerAverage, std::uint64_t upper) {
  if (lowerAverage > lower) {
    throw Error(ErrorCode::InvalidBounds, "average gas rate " + std::to_string(lowerAverage) +
                                              " exceeds max gas rate " + std::to_string(lower));
  }
  GasLimitPlan p{lower, lowerAverage, upper, 0, 0, 0, {}};
  if (lower <= upper) {
    p.tag = "ideal";
    p.rangeLow = lower;
    p.rangeHigh = upper;
    p.recommended = lower + (upper - lower) / 2;
  } else if (lowerAverage <= upper) {
    p.tag = "average-bounded";
    p.recommended = p.rangeLow = p.rangeHigh = upper;
  } else {
    p.tag = "latency-tradeoff";
    p.recommended = p.rangeLow = p.rangeHigh = lowerAverage;
  }
  return p;
}

std::uint64_t upperGasLimitForLatency(double maxLatencySeconds, const ChainParams& params,
                                      const Catalog& catalog) {
  const CatalogItem& t = transferItem(catalog);
  const double budget = std::floor(maxLatencySeconds * params.bandwidth) -
                        static_cast<double>(params.ppOverhead + params.prepareSize +
                                            params.commitSize + params.headerSize);
  if (budget < 0) return 0;
  const auto k = static_cast<std::uint64_t>(budget) / t.size;
  return k * t.gas + t.gas - 1;
}

std::optional<std::size_t> GasRateSeries::firstAbove(std::uint64_t gasLimit) const {
  for (std::size_t i = 0; i < perPeriod.size(); ++i) {
    if (perPeriod[i] > gasLimit) return i;
  }
  return std::nullopt;
}

GasRateSeries gasRate(const std::vector<IssuedTx>& txs, double period, std::size_t periods) {
  if (period <= 0) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  GasRateSeries s;
  std::size_t n = periods;
  if (n == 0) {
    for (const auto& tx : txs) {
      n = std::max(n, static_cast<std::size_t>(std::floor(tx.issueTime / period)) + 1);
    }
  }
  s.perPeriod.assign(n, 0);
  for (const auto& tx : txs) {
    if (tx.issueTime < 0) continue;
    const auto idx = static_cast<std::size_t>(std::floor(tx.issueTime / period));
    if (idx < n) s.perPeriod[idx] += tx.gas;
  }
  double sum = 0;
  for (auto g : s.perPeriod) {
    s.max = std::max(s.max, g);
    sum += static_cast<double>(g);
  }
  s.mean = n == 0 ? 0 : sum / static_cast<double>(n);
  return s;
}

TxMultiset table2Workload(std::uint64_t n) {
  return {{TxType::create(kMaxDescriptionLength), n},
          {TxType::remove(), n},
          {TxType::transfer(), 10 * n}};
}

std::vector<Table2Row> reproduceTable2(double period, const std::vector<std::uint64_t>& ns) {
  std::vector<Table2Row> rows;
  for (auto n : ns) {
    Table2Row r;
    r.n = n;
    for (const auto& [type, count] : table2Workload(n)) r.contentBytes += txSize(type) * count;
    r.headerBytes = headerOverhead(kSecondsPerYear, period);
    r.totalBytes = growthRate(0, kSecondsPerYear, period, table2Workload(n));
    r.overheadPct = 100.0 * r.headerBytes / r.totalBytes;
    rows.push_back(r);
  }
  return rows;
}

std::vector<Fig3Point> reproduceFig3(const std::vector<double>& periodsMinutes,
                                     std::uint64_t headerSize) {
  std::vector<Fig3Point> out;
  for (double m : periodsMinutes) {
    out.push_back({m * 60, headerOverhead(kSecondsPerYear, m * 60, headerSize)});
  }
  return out;
}

}  // namespace bcoc
