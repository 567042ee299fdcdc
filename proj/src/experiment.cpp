#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "analytics.hpp"
#include "net_sim.hpp"

namespace bcoc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void badValue(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::ConfigError, "invalid value for " + key + ": '" + value + "'");
}

std::uint64_t parseUnsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || p != end) badValue(key, value);
  return v;
}

double parseDouble(const std::string& key, const std::string& value) {
  double v = 0;
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v)) badValue(key, value);
  return v;
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  badValue(key, value);
}

std::uint32_t parseU32(const std::string& key, const std::string& value) {
  const std::uint64_t v = parseUnsigned(key, value);
  if (v > UINT32_MAX) badValue(key, value);
  return static_cast<std::uint32_t>(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig

const std::vector<std::pair<std::string, std::string>>& configKeys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"period", "block period in seconds (default 300)"},
      {"gas_limit", "block gas limit (default 8000000)"},
      {"validators", "number of validators (default 4)"},
      {"byzantine", "faulty validators, e.g. '3:silent' or '0:equivocator'"},
      {"bandwidth", "link bandwidth in bytes per second (default 1e6)"},
      {"base_delay_ms", "fixed per-message link delay in milliseconds (default 0)"},
      {"jitter_ms", "uniform extra link delay bound in milliseconds (default 0)"},
      {"header_size", "block header bytes (default 1909)"},
      {"prepare_size", "prepare message bytes (default 128)"},
      {"commit_size", "commit message bytes (default 128)"},
      {"pp_overhead", "pre-prepare framing bytes (default 256)"},
      {"round_timeout", "round timeout in seconds, 0 for twice the period (default 0)"},
      {"reject_invalid", "drop reverting transactions when building blocks (default false)"},
      {"periods", "number of block periods with issued transactions (default 200)"},
      {"drain_periods", "extra periods simulated without new transactions (default 0)"},
      {"seed", "random seed (default 1)"},
      {"workload.mode", "constant | ramp | annual (default constant)"},
      {"workload.unit", "tx | gas: unit of the per-period rate (default tx)"},
      {"workload.rate", "constant per-period rate (default 2)"},
      {"workload.rate_start", "ramp rate of the first period"},
      {"workload.rate_end", "ramp rate reached at the end of the run"},
      {"workload.annual_n", "annual mode: n creates, n removes, 10n transfers per year"},
      {"workload.mix", "create:transfer:remove weights (default 1:4:1)"},
      {"workload.desc_min", "minimum description length (default 0)"},
      {"workload.desc_max", "maximum description length (default 64)"},
      {"workload.users", "number of distinct user identities (default 16)"},
  };
  return keys;
}

void ExperimentConfig::set(const std::string& rawKey, const std::string& rawValue) {
  const std::string key = trim(rawKey);
  const std::string value = trim(rawValue);
  if (key == "period") period = parseDouble(key, value);
  else if (key == "gas_limit") gasLimit = parseUnsigned(key, value);
  else if (key == "validators") validators = parseU32(key, value);
  else if (key == "byzantine") byzantine = value;
  else if (key == "bandwidth") bandwidth = parseDouble(key, value);
  else if (key == "base_delay_ms") baseDelayMs = parseDouble(key, value);
  else if (key == "jitter_ms") jitterMs = parseDouble(key, value);
  else if (key == "header_size") headerSize = parseUnsigned(key, value);
  else if (key == "prepare_size") prepareSize = parseUnsigned(key, value);
  else if (key == "commit_size") commitSize = parseUnsigned(key, value);
  else if (key == "pp_overhead") ppOverhead = parseUnsigned(key, value);
  else if (key == "round_timeout") roundTimeout = parseDouble(key, value);
  else if (key == "reject_invalid") rejectInvalid = parseBool(key, value);
  else if (key == "periods") periods = parseUnsigned(key, value);
  else if (key == "drain_periods") drainPeriods = parseUnsigned(key, value);
  else if (key == "seed") seed = parseUnsigned(key, value);
  else if (key == "workload.mode") {
    if (value == "constant") workload.mode = RateMode::Constant;
    else if (value == "ramp") workload.mode = RateMode::Ramp;
    else if (value == "annual") workload.mode = RateMode::Annual;
    else badValue(key, value);
  } else if (key == "workload.unit") {
    if (value == "tx") workload.unit = RateUnit::Transactions;
    else if (value == "gas") workload.unit = RateUnit::Gas;
    else badValue(key, value);
  } else if (key == "workload.rate") workload.rate = parseDouble(key, value);
  else if (key == "workload.rate_start") workload.rateStart = parseDouble(key, value);
  else if (key == "workload.rate_end") workload.rateEnd = parseDouble(key, value);
  else if (key == "workload.annual_n") workload.annualN = parseUnsigned(key, value);
  else if (key == "workload.mix") {
    std::istringstream in(value);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c)) {
      badValue(key, value);
    }
    workload.createWeight = parseDouble(key, trim(a));
    workload.transferWeight = parseDouble(key, trim(b));
    workload.removeWeight = parseDouble(key, trim(c));
  } else if (key == "workload.desc_min") workload.descMin = parseU32(key, value);
  else if (key == "workload.desc_max") workload.descMax = parseU32(key, value);
  else if (key == "workload.users") workload.users = parseU32(key, value);
  else throw Error(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in, ExperimentConfig base) {
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(lineNo) + ": expected 'key = value'");
    }
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig ExperimentConfig::load(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
  return parse(in, std::move(base));
}

std::vector<Behavior> ExperimentConfig::behaviors() const {
  std::vector<Behavior> out(validators, Behavior::Honest);
  if (trim(byzantine).empty() || trim(byzantine) == "none") return out;
  std::istringstream in(byzantine);
  std::string item;
  std::uint32_t nextFree = validators;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::string idx, kind = item;
    if (auto colon = item.find(':'); colon != std::string::npos) {
      idx = trim(item.substr(0, colon));
      kind = trim(item.substr(colon + 1));
    }
    Behavior b;
    if (kind == "silent") b = Behavior::Silent;
    else if (kind == "equivocator" || kind == "equivocating") b = Behavior::Equivocator;
    else badValue("byzantine", byzantine);
    std::uint32_t i;
    if (idx.empty()) {
      if (nextFree == 0) badValue("byzantine", byzantine);
      i = --nextFree;
    } else {
      i = parseU32("byzantine", idx);
    }
    if (i >= validators || out[i] != Behavior::Honest) badValue("byzantine", byzantine);
    out[i] = b;
  }
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (!(period > 0)) fail("period must be positive");
  if (validators == 0) fail("at least one validator is required");
  if (!(bandwidth > 0)) fail("bandwidth must be positive");
  if (baseDelayMs < 0 || jitterMs < 0) fail("link delays must be non-negative");
  if (roundTimeout < 0) fail("round_timeout must be non-negative");
  if (headerSize == 0) fail("header_size must be positive");
  if (periods == 0) fail("periods must be positive");
  const auto b = behaviors();
  const auto faulty =
      static_cast<std::uint32_t>(std::count_if(b.begin(), b.end(), [](Behavior x) {
        return x != Behavior::Honest;
      }));
  if (faulty > 0 && validators < 3 * faulty + 1) {
    fail(std::to_string(faulty) + " faulty validators need at least " +
         std::to_string(3 * faulty + 1) + " validators");
  }
}

ClusterConfig ExperimentConfig::clusterConfig() const {
  ClusterConfig c;
  c.params.validators = validators;
  c.params.gasLimit = gasLimit;
  c.params.period = fromSeconds(period);
  c.params.roundTimeout = fromSeconds(roundTimeout);
  c.params.headerSize = headerSize;
  c.params.ppOverhead = ppOverhead;
  c.params.prepareSize = prepareSize;
  c.params.commitSize = commitSize;
  c.params.rejectInvalidAtMempool = rejectInvalid;
  c.link.bandwidth = bandwidth;
  c.link.baseDelay = fromSeconds(baseDelayMs / 1000);
  c.link.jitter = fromSeconds(jitterMs / 1000);
  c.behaviors = behaviors();
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------
// Workload generation

namespace {

struct LiveEvidence {
  EvidenceId id;
  std::uint32_t creator;
  std::uint32_t owner;
};

struct Planned {
  TxKind kind;
  std::uint32_t descLength;
};

class WorkloadBuilder {
 public:
  WorkloadBuilder(const WorkloadSpec& spec, std::uint64_t seed, const CostModel& costs)
      : spec_(spec), rng_(seed), costs_(costs) {
    for (std::uint32_t u = 0; u < spec.users; ++u) {
      users_.push_back(addressFromName("user-" + std::to_string(u)));
    }
  }

  Planned plan() {
    const double total = spec_.createWeight + spec_.transferWeight + spec_.removeWeight;
    const double x = rng_.uniform01() * total;
    TxKind kind = TxKind::CreateEvidence;
    if (x >= spec_.createWeight) {
      kind = x < spec_.createWeight + spec_.transferWeight ? TxKind::Transfer
                                                           : TxKind::RemoveEvidence;
    }
    if (kind != TxKind::CreateEvidence && plannedLive_ == 0) kind = TxKind::CreateEvidence;
    if (kind == TxKind::CreateEvidence) ++plannedLive_;
    if (kind == TxKind::RemoveEvidence) --plannedLive_;
    std::uint32_t len = 0;
    if (kind == TxKind::CreateEvidence) {
      len = static_cast<std::uint32_t>(rng_.uniformInt(spec_.descMin, spec_.descMax));
    }
    return {kind, len};
  }

  std::uint64_t gas(const Planned& p) const {
    return costs_.gas(p.kind == TxKind::CreateEvidence ? TxType::create(p.descLength)
                                                       : TxType{p.kind, 0});
  }

  Transaction create(SimTime at, std::uint32_t descLength, std::optional<std::uint32_t> creator = {}) {
    const auto u = creator ? *creator : pickUser();
    EvidenceId id;
    do {
      for (std::size_t i = 0; i < id.bytes.size(); i += 8) {
        const std::uint64_t r = rng_.next();
        for (std::size_t j = 0; j < 8; ++j) id.bytes[i + j] = static_cast<std::uint8_t>(r >> (8 * j));
      }
    } while (id.isZero());
    live_.push_back({id, u, u});
    liveIndex_[id] = live_.size() - 1;
    std::string desc(descLength, ' ');
    for (std::uint32_t i = 0; i < descLength; ++i) desc[i] = static_cast<char>('a' + i % 26);
    return makeCreateEvidence(0, users_[u], id, std::move(desc), at, costs_);
  }

  Transaction transfer(SimTime at, std::optional<EvidenceId> which = {}) {
    LiveEvidence& e = which ? live_[liveIndex_.at(*which)] : live_[pickLive()];
    std::uint32_t to = e.owner;
    if (users_.size() > 1) {
      to = static_cast<std::uint32_t>(rng_.uniformInt(0, users_.size() - 2));
      if (to >= e.owner) ++to;
    }
    Transaction tx = makeTransfer(0, users_[e.owner], e.id, users_[to], at, costs_);
    e.owner = to;
    return tx;
  }

  Transaction remove(SimTime at, std::optional<EvidenceId> which = {}) {
    const std::size_t i = which ? liveIndex_.at(*which) : pickLive();
    const LiveEvidence e = live_[i];
    live_[i] = live_.back();
    liveIndex_[live_[i].id] = i;
    live_.pop_back();
    liveIndex_.erase(e.id);
    return makeRemoveEvidence(0, users_[e.creator], e.id, at, costs_);
  }

  Transaction emit(const Planned& p, SimTime at) {
    switch (p.kind) {
      case TxKind::CreateEvidence: return create(at, p.descLength);
      case TxKind::Transfer: return transfer(at);
      case TxKind::RemoveEvidence: return remove(at);
    }
    return create(at, p.descLength);
  }

  std::uint32_t pickUser() { return static_cast<std::uint32_t>(rng_.uniformInt(0, users_.size() - 1)); }
  std::size_t pickLive() { return static_cast<std::size_t>(rng_.uniformInt(0, live_.size() - 1)); }
  DeterministicRng& rng() { return rng_; }

 private:
  const WorkloadSpec& spec_;
  DeterministicRng rng_;
  const CostModel& costs_;
  std::vector<Address> users_;
  std::vector<LiveEvidence> live_;
  std::map<EvidenceId, std::size_t> liveIndex_;
  std::size_t plannedLive_ = 0;  // live count once every planned op is emitted
};

std::vector<SimTime> sortedTimes(DeterministicRng& rng, SimTime start, SimTime span,
                                 std::size_t count) {
  std::vector<SimTime> times(count);
  const auto width = static_cast<std::uint64_t>(span.count());
  for (auto& t : times) t = start + SimTime(static_cast<std::int64_t>(rng.uniformInt(0, width - 1)));
  std::sort(times.begin(), times.end());
  return times;
}

void checkSpec(const WorkloadSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  if (spec.users == 0) fail("workload needs at least one user");
  if (spec.descMin > spec.descMax) fail("desc_min exceeds desc_max");
  if (spec.descMax > kMaxDescriptionLength) fail("desc_max exceeds 1024");
  if (spec.mode == RateMode::Annual) return;
  if (spec.createWeight < 0 || spec.transferWeight < 0 || spec.removeWeight < 0) {
    fail("mix weights must be non-negative");
  }
  if (!(spec.createWeight + spec.transferWeight + spec.removeWeight > 0)) {
    fail("mix weights sum to zero");
  }
  if (!(spec.createWeight > 0)) fail("a mix without creates cannot produce valid operations");
  const double lo = spec.mode == RateMode::Constant ? spec.rate
                                                    : std::min(spec.rateStart, spec.rateEnd);
  if (!(lo >= 0) || !std::isfinite(spec.rate) || !std::isfinite(spec.rateStart) ||
      !std::isfinite(spec.rateEnd)) {
    fail("rates must be finite and non-negative");
  }
}

std::vector<Transaction> annualWorkload(const WorkloadSpec& spec, std::uint64_t seed,
                                        const CostModel& costs) {
  WorkloadBuilder b(spec, seed, costs);
  const SimTime year = fromSeconds(kSecondsPerYear);
  struct Op {
    SimTime at;
    std::uint64_t evidence;
    int step;  // 0 create, 1..10 transfer, 11 remove
  };
  std::vector<Op> ops;
  ops.reserve(spec.annualN * 12);
  for (std::uint64_t e = 0; e < spec.annualN; ++e) {
    const auto times = sortedTimes(b.rng(), SimTime{0}, year, 12);
    for (int s = 0; s < 12; ++s) ops.push_back({times[static_cast<std::size_t>(s)], e, s});
  }
  std::sort(ops.begin(), ops.end(), [](const Op& x, const Op& y) {
    if (x.at != y.at) return x.at < y.at;
    if (x.evidence != y.evidence) return x.evidence < y.evidence;
    return x.step < y.step;
  });
  std::vector<EvidenceId> ids(spec.annualN);
  std::vector<Transaction> out;
  out.reserve(ops.size());
  for (const Op& op : ops) {
    if (op.step == 0) {
      out.push_back(b.create(op.at, kMaxDescriptionLength));
      ids[op.evidence] = out.back().evidence;
    } else if (op.step == 11) {
      out.push_back(b.remove(op.at, ids[op.evidence]));
    } else {
      out.push_back(b.transfer(op.at, ids[op.evidence]));
    }
  }
  return out;
}

}  // namespace

std::vector<Transaction> genWorkload(const WorkloadSpec& spec, std::uint64_t seed, SimTime period,
                                     std::uint64_t periods, const CostModel& costs) {
  checkSpec(spec);
  std::vector<Transaction> out;
  if (spec.mode == RateMode::Annual) {
    out = annualWorkload(spec, seed, costs);
  } else {
    if (period.count() <= 0) throw Error(ErrorCode::InvalidSpec, "period must be positive");
    WorkloadBuilder b(spec, seed, costs);
    double carry = 0;
    std::optional<Planned> deferred;
    for (std::uint64_t p = 0; p < periods; ++p) {
      const double target =
          spec.mode == RateMode::Constant
              ? spec.rate
              : spec.rateStart + (spec.rateEnd - spec.rateStart) * static_cast<double>(p) /
                                     static_cast<double>(periods);
      const double budget = target + carry;
      std::vector<Planned> picks;
      if (spec.unit == RateUnit::Transactions) {
        const auto count = static_cast<std::uint64_t>(std::floor(budget));
        carry = budget - static_cast<double>(count);
        for (std::uint64_t i = 0; i < count; ++i) picks.push_back(b.plan());
      } else {
        double used = 0;
        for (;;) {
          Planned next = deferred ? *deferred : b.plan();
          deferred.reset();
          const auto g = static_cast<double>(b.gas(next));
          if (used + g > budget) {
            deferred = next;
            break;
          }
          used += g;
          picks.push_back(next);
        }
        carry = budget - used;
      }
      const SimTime start = period * static_cast<std::int64_t>(p);
      const auto times = sortedTimes(b.rng(), start, period, picks.size());
      for (std::size_t i = 0; i < picks.size(); ++i) out.push_back(b.emit(picks[i], times[i]));
    }
  }
  std::uint64_t seq = 1;
  for (auto& tx : out) tx.seq = seq++;
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

ExperimentResult runExperiment(const ExperimentConfig& config) {
  config.validate();
  const SimTime period = fromSeconds(config.period);
  const std::vector<Transaction> txs =
      genWorkload(config.workload, config.seed, period, config.periods);

  Scheduler scheduler;
  Cluster cluster(scheduler, config.clusterConfig());
  const auto honest = cluster.honest();
  if (honest.empty()) throw Error(ErrorCode::ConfigError, "no honest validator");
  const std::uint32_t reference = honest.front();

  const std::uint64_t totalPeriods = config.periods + config.drainPeriods;
  ExperimentResult result;
  result.rows.resize(totalPeriods);
  for (std::uint64_t p = 0; p < totalPeriods; ++p) result.rows[p].periodIndex = p;

  for (const auto& tx : txs) {
    const auto p = static_cast<std::uint64_t>(tx.issueTime / period);
    if (p < totalPeriods) result.rows[p].gasRate += tx.gas;
  }

  std::vector<double> lcSum(totalPeriods, 0);
  std::vector<std::uint64_t> lcCount(totalPeriods, 0);
  std::uint64_t reverted = 0;
  std::uint64_t included = 0;

  cluster.setCommitObserver([&](const CommitEvent& ev) {
    const std::uint64_t h = ev.block.header.height;
    if (h == 0 || h > totalPeriods) return;
    const Validator& v = cluster.validator(ev.validator);
    if (v.behavior() != Behavior::Honest) return;
    if (auto proposed = cluster.proposalTime(ev.block.digest())) {
      lcSum[h - 1] += toSeconds(ev.time - *proposed);
      ++lcCount[h - 1];
    }
    if (ev.validator != reference) return;
    MetricsRow& row = result.rows[h - 1];
    row.committedBlockSize = blockSize(ev.block, config.headerSize);
    row.includedTxs = ev.block.transactions.size();
    const double created = toSeconds(ev.block.header.timestamp);
    double sum = 0;
    for (const auto& tx : ev.block.transactions) {
      const double lb = blockInclusionLatency(toSeconds(tx.issueTime), created, config.period);
      sum += lb;
      row.maxLB = std::max(row.maxLB, lb);
    }
    row.meanLB = ev.block.transactions.empty() ? 0 : sum / static_cast<double>(row.includedTxs);
    row.mempoolDepth = v.mempool().size();
    included += row.includedTxs;
    for (const auto& r : ev.receipts) reverted += r.succeeded() ? 0 : 1;
  });

  for (const auto& tx : txs) {
    scheduler.schedule(tx.issueTime, [&cluster, &tx] { cluster.submitTransaction(tx); });
  }
  cluster.start();
  scheduler.runUntil(period * static_cast<std::int64_t>(totalPeriods) + period / 2);

  std::uint64_t chainSize = 0;
  for (std::uint64_t p = 0; p < totalPeriods; ++p) {
    MetricsRow& row = result.rows[p];
    chainSize += row.committedBlockSize;
    row.chainSizeBytes = chainSize;
    row.meanLC = lcCount[p] == 0 ? 0 : lcSum[p] / static_cast<double>(lcCount[p]);
  }

  ExperimentSummary& s = result.summary;
  s.periods = totalPeriods;
  s.issuedTxs = txs.size();
  s.includedTxs = included;
  s.revertedTxs = reverted;
  s.committedBlocks = cluster.validator(reference).committedBlocks();
  s.agreement = cluster.agreement();
  s.messages = cluster.network().messagesSent();
  s.bytesSent = cluster.network().bytesSent();
  for (std::uint32_t i = 0; i < cluster.size(); ++i) {
    const Validator& v = cluster.validator(i);
    s.validators.push_back({i, v.behavior(), v.committedBlocks(), v.headDigest().hex(),
                            v.ledger().digest().hex(), v.stats().roundChanges});
  }
  return result;
}

std::vector<ExperimentResult> runSweep(const std::vector<ExperimentConfig>& configs,
                                       unsigned threads) {
  std::vector<ExperimentResult> results(configs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) results[i] = runExperiment(configs[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        results[i] = runExperiment(configs[i]);
      }
    }));
  }
  for (auto& w : workers) w.get();
  return results;
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::pair<std::string, std::string>>& metricsColumns() {
  static const std::vector<std::pair<std::string, std::string>> cols = {
      {"periodIndex", "block period index, starting at 0"},
      {"gasRate", "gas of the transactions issued during the period"},
      {"meanLB", "mean block inclusion latency (s) of the transactions in the period's block"},
      {"maxLB", "maximum block inclusion latency (s) in the period's block"},
      {"meanLC", "mean time (s) from proposal to commit of the period's block, honest validators"},
      {"committedBlockSize", "bytes of the period's block, header included (0 if not committed)"},
      {"chainSizeBytes", "cumulative bytes of committed blocks up to this period"},
      {"mempoolDepth", "pending transactions left when the period's block committed"},
  };
  return cols;
}

const std::vector<std::pair<std::string, std::string>>& summaryColumns() {
  static const std::vector<std::pair<std::string, std::string>> cols = {
      {"validator", "validator index"},
      {"behavior", "honest | silent | equivocator"},
      {"height", "committed blocks, genesis excluded"},
      {"headDigest", "hex digest of the last committed block header"},
      {"stateDigest", "hex digest of the evidence-log state"},
      {"roundChanges", "round timeouts seen by the validator"},
      {"agreement", "1 if all honest validators agree on every common height"},
  };
  return cols;
}

std::string formatFixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

void writeMetricsCsv(std::ostream& out, const std::vector<MetricsRow>& rows,
                     const std::string& prefixHeader, const std::string& prefixValue,
                     bool header) {
  if (header) {
    if (!prefixHeader.empty()) out << prefixHeader << ',';
    bool first = true;
    for (const auto& [name, desc] : metricsColumns()) {
      out << (first ? "" : ",") << name;
      first = false;
    }
    out << '\n';
  }
  for (const auto& r : rows) {
    if (!prefixValue.empty()) out << prefixValue << ',';
    out << r.periodIndex << ',' << r.gasRate << ',' << formatFixed(r.meanLB) << ','
        << formatFixed(r.maxLB) << ',' << formatFixed(r.meanLC, 9) << ','
        << r.committedBlockSize << ',' << r.chainSizeBytes << ',' << r.mempoolDepth << '\n';
  }
}

void writeSummaryCsv(std::ostream& out, const ExperimentSummary& s) {
  bool first = true;
  for (const auto& [name, desc] : summaryColumns()) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  out << '\n';
  for (const auto& v : s.validators) {
    out << v.index << ',' << behaviorName(v.behavior) << ',' << v.height << ',' << v.headDigest
        << ',' << v.stateDigest << ',' << v.roundChanges << ',' << (s.agreement ? 1 : 0) << '\n';
  }
}

}  // namespace bcoc
