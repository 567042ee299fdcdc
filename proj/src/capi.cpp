#include "bcoc/bcoc.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "analytics.hpp"
#include "evidence_store.hpp"
#include "experiment.hpp"

struct bcoc_ukp_solver {
  bcoc::UkpSolver solver;
};

struct bcoc_config {
  bcoc::ExperimentConfig config;
};

struct bcoc_experiment {
  bcoc::ExperimentResult result;
};

namespace {

thread_local std::string lastError;

bcoc_status statusOf(bcoc::ErrorCode code) {
  using bcoc::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return BCOC_ERR_INVALID_ARGUMENT;
    case ErrorCode::ConfigError: return BCOC_ERR_CONFIG;
    case ErrorCode::InvalidSpec: return BCOC_ERR_INVALID_SPEC;
    case ErrorCode::EvidenceNotFound: return BCOC_ERR_EVIDENCE_NOT_FOUND;
    case ErrorCode::EvidenceAlreadyExists: return BCOC_ERR_EVIDENCE_ALREADY_EXISTS;
    case ErrorCode::InvalidId: return BCOC_ERR_INVALID_ID;
    case ErrorCode::DescriptionTooLong: return BCOC_ERR_DESCRIPTION_TOO_LONG;
    case ErrorCode::InvalidDescriptionLength: return BCOC_ERR_INVALID_DESCRIPTION_LENGTH;
    case ErrorCode::InvalidAddress: return BCOC_ERR_INVALID_ADDRESS;
    case ErrorCode::NotOwner: return BCOC_ERR_NOT_OWNER;
    case ErrorCode::NotCreator: return BCOC_ERR_NOT_CREATOR;
    case ErrorCode::EmptyEvidence: return BCOC_ERR_EMPTY_EVIDENCE;
    case ErrorCode::IntegrityViolation: return BCOC_ERR_INTEGRITY_VIOLATION;
    case ErrorCode::IdCollision: return BCOC_ERR_ID_COLLISION;
    case ErrorCode::IoError: return BCOC_ERR_IO;
    case ErrorCode::SchedulingInPast: return BCOC_ERR_SCHEDULING_IN_PAST;
    case ErrorCode::UnknownNode: return BCOC_ERR_UNKNOWN_NODE;
    case ErrorCode::NotProposer: return BCOC_ERR_NOT_PROPOSER;
    case ErrorCode::InvalidMaxSize: return BCOC_ERR_INVALID_MAX_SIZE;
    case ErrorCode::InvalidBounds: return BCOC_ERR_INVALID_BOUNDS;
    case ErrorCode::CapacityTooLargeForExactDP: return BCOC_ERR_CAPACITY_TOO_LARGE;
  }
  return BCOC_ERR_INTERNAL;
}

bcoc_status statusOf(bcoc::Revert r) {
  using bcoc::Revert;
  switch (r) {
    case Revert::None: return BCOC_OK;
    case Revert::InvalidId: return BCOC_ERR_INVALID_ID;
    case Revert::EvidenceAlreadyExists: return BCOC_ERR_EVIDENCE_ALREADY_EXISTS;
    case Revert::DescriptionTooLong: return BCOC_ERR_DESCRIPTION_TOO_LONG;
    case Revert::EvidenceNotFound: return BCOC_ERR_EVIDENCE_NOT_FOUND;
    case Revert::NotOwner: return BCOC_ERR_NOT_OWNER;
    case Revert::NotCreator: return BCOC_ERR_NOT_CREATOR;
    case Revert::InvalidAddress: return BCOC_ERR_INVALID_ADDRESS;
  }
  return BCOC_ERR_INTERNAL;
}

bcoc_status fail(bcoc_status s, std::string message) {
  lastError = std::move(message);
  return s;
}

template <class F>
bcoc_status guarded(F&& f) {
  try {
    lastError.clear();
    return f();
  } catch (const bcoc::Error& e) {
    return fail(statusOf(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BCOC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BCOC_ERR_INTERNAL, e.what());
  }
}

#define BCOC_REQUIRE(cond)                                                       \
  do {                                                                           \
    if (!(cond)) return fail(BCOC_ERR_INVALID_ARGUMENT, "null or invalid " #cond); \
  } while (0)

char* dupString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bcoc::TxType txType(bcoc_tx_kind kind, std::uint32_t descLength) {
  switch (kind) {
    case BCOC_TX_CREATE_EVIDENCE: return bcoc::TxType::create(descLength);
    case BCOC_TX_TRANSFER: return bcoc::TxType::transfer();
    case BCOC_TX_REMOVE_EVIDENCE: return bcoc::TxType::remove();
  }
  throw bcoc::Error(bcoc::ErrorCode::InvalidArgument, "unknown transaction kind");
}

bcoc::ChainParams chainParams(const bcoc_chain_params& p) {
  bcoc::ChainParams c;
  c.period = p.period;
  c.gasLimit = p.gas_limit;
  c.headerSize = p.header_size;
  c.bandwidth = p.bandwidth;
  c.prepareSize = p.prepare_size;
  c.commitSize = p.commit_size;
  c.ppOverhead = p.pp_overhead;
  return c;
}

const bcoc::Catalog& catalog() {
  static const bcoc::Catalog c = bcoc::standardCatalog();
  return c;
}

bcoc_status describe(const std::vector<std::pair<std::string, std::string>>& items, size_t index,
                     const char** name, const char** description) {
  if (index >= items.size()) return fail(BCOC_ERR_INVALID_ARGUMENT, "index out of range");
  if (name) *name = items[index].first.c_str();
  if (description) *description = items[index].second.c_str();
  return BCOC_OK;
}

bcoc::Address resolveActor(const char* actor) {
  if (!actor || !*actor) throw bcoc::Error(bcoc::ErrorCode::InvalidAddress, "empty actor");
  std::string_view s(actor);
  if (s.starts_with("0x")) s.remove_prefix(2);
  bcoc::Address a;
  if (s.size() == 40 && bcoc::fromHex(s, a.bytes.data(), a.bytes.size())) return a;
  return bcoc::addressFromName(actor);
}

bcoc::EvidenceId parseId(const char* hex) {
  if (!hex) throw bcoc::Error(bcoc::ErrorCode::InvalidId, "missing evidence id");
  std::string_view s(hex);
  if (s.starts_with("0x")) s.remove_prefix(2);
  bcoc::EvidenceId id;
  if (s.size() != 64 || !bcoc::fromHex(s, id.bytes.data(), id.bytes.size())) {
    throw bcoc::Error(bcoc::ErrorCode::InvalidId, "expected 64 hex digits, got '" +
                                                      std::string(hex) + "'");
  }
  return id;
}

}  // namespace

// ---------------------------------------------------------------------------
// custody

struct bcoc_custody {
  std::filesystem::path dir;
  bcoc::EvidenceStore store;
  bcoc::LocalLedger ledger{true};
  std::unique_ptr<bcoc::Frontend> frontend;

  explicit bcoc_custody(const std::filesystem::path& d) : dir(d), store(d / "store") {
    load();
    frontend = std::make_unique<bcoc::Frontend>(store, ledger, seedFromState());
  }

  std::filesystem::path statePath() const { return dir / "ledger.json"; }

  std::uint64_t nextSeq = 1;

  std::uint64_t seedFromState() const {
    return 0x9e3779b97f4a7c15ULL * (nextSeq + 1) ^ store.size();
  }

  void load() {
    std::ifstream in(statePath());
    if (!in) return;
    nlohmann::json j;
    try {
      in >> j;
      nextSeq = j.at("next_seq").get<std::uint64_t>();
      for (const auto& e : j.at("entries")) {
        bcoc::EvidenceEntry entry;
        entry.id = bcoc::EvidenceId::fromHexOrThrow(e.at("id").get<std::string>());
        entry.creator = bcoc::Address::fromHexOrThrow(e.at("creator").get<std::string>());
        entry.owner = bcoc::Address::fromHexOrThrow(e.at("owner").get<std::string>());
        entry.description = e.at("description").get<std::string>();
        for (const auto& h : e.at("history")) {
          entry.taddr.push_back(bcoc::Address::fromHexOrThrow(h.at("address").get<std::string>()));
          entry.ttime.push_back(h.at("time").get<std::uint64_t>());
        }
        ledger.mutableState().restore(std::move(entry));
      }
    } catch (const nlohmann::json::exception& e) {
      throw bcoc::Error(bcoc::ErrorCode::IoError,
                        "corrupt ledger file " + statePath().string() + ": " + e.what());
    }
    ledger.setNextSeq(nextSeq);
  }

  static nlohmann::json entryJson(const bcoc::EvidenceEntry& e) {
    nlohmann::json history = nlohmann::json::array();
    for (std::size_t i = 0; i < e.taddr.size(); ++i) {
      history.push_back({{"address", e.taddr[i].hex()}, {"time", e.ttime[i]}});
    }
    return {{"id", e.id.hex()},
            {"creator", e.creator.hex()},
            {"owner", e.owner.hex()},
            {"description", e.description},
            {"history", history}};
  }

  void save() {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [id, e] : ledger.committed().entries()) entries.push_back(entryJson(e));
    nlohmann::json j = {{"next_seq", ledger.nextSeq()}, {"entries", entries}};
    nextSeq = j["next_seq"].get<std::uint64_t>();
    ledger.setNextSeq(nextSeq);
    const auto tmp = dir / "ledger.json.tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw bcoc::Error(bcoc::ErrorCode::IoError, "cannot write " + tmp.string());
      out << j.dump(2) << '\n';
      if (!out) throw bcoc::Error(bcoc::ErrorCode::IoError, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, statePath(), ec);
    if (ec) throw bcoc::Error(bcoc::ErrorCode::IoError, "cannot replace " + statePath().string());
  }

  /// Receipt status of the transaction with the given sequence number among
  /// the outcomes committed since the previous call.
  bcoc::Revert settle(std::uint64_t seq) {
    bcoc::Revert status = bcoc::Revert::None;
    for (const auto& o : frontend->sync()) {
      if (o.tx.seq == seq) status = o.receipt.status;
    }
    return status;
  }
};

extern "C" {

const char* bcoc_version(void) { return "0.1.0"; }

const char* bcoc_status_name(bcoc_status status) {
  switch (status) {
    case BCOC_OK: return "Ok";
    case BCOC_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= BCOC_ERR_INVALID_ARGUMENT && status <= BCOC_ERR_CAPACITY_TOO_LARGE) {
    return bcoc::errorName(static_cast<bcoc::ErrorCode>(status - 1));
  }
  return "Unknown";
}

const char* bcoc_last_error(void) { return lastError.c_str(); }

void bcoc_free(void* ptr) { std::free(ptr); }

bcoc_status bcoc_tx_cost(bcoc_tx_kind kind, uint32_t desc_length, uint64_t* size, uint64_t* gas) {
  return guarded([&] {
    const bcoc::TxType t = txType(kind, kind == BCOC_TX_CREATE_EVIDENCE ? desc_length : 0);
    const bcoc::TxCost c = bcoc::CostModel::standard().cost(t);
    if (size) *size = c.size;
    if (gas) *gas = c.gas;
    return BCOC_OK;
  });
}

void bcoc_chain_params_default(bcoc_chain_params* p) {
  if (!p) return;
  const bcoc::ChainParams c;
  *p = bcoc_chain_params{c.period,    c.gasLimit,   c.headerSize, c.bandwidth,
                         c.prepareSize, c.commitSize, c.ppOverhead};
}

bcoc_status bcoc_block_inclusion_latency(double tx_issue_time, double block_time, double period,
                                         double* seconds) {
  BCOC_REQUIRE(seconds);
  *seconds = bcoc::blockInclusionLatency(tx_issue_time, block_time, period);
  return BCOC_OK;
}

bcoc_status bcoc_consensus_latency(uint64_t block_size, const bcoc_chain_params* params,
                                   double* seconds) {
  BCOC_REQUIRE(params && seconds);
  return guarded([&] {
    *seconds = bcoc::consensusLatency(block_size, chainParams(*params));
    return BCOC_OK;
  });
}

bcoc_status bcoc_max_block_size_closed_form(uint64_t gas_limit, uint64_t header_size,
                                            uint64_t* bytes) {
  BCOC_REQUIRE(bytes);
  return guarded([&] {
    *bytes = bcoc::maxBlockSizeClosedForm(gas_limit, catalog(), header_size);
    return BCOC_OK;
  });
}

bcoc_status bcoc_max_block_size_ukp(uint64_t gas_limit, uint64_t header_size,
                                    uint64_t capacity_ceiling, uint64_t* bytes) {
  BCOC_REQUIRE(bytes);
  return guarded([&] {
    *bytes = bcoc::maxBlockSizeUKP(gas_limit, catalog(), header_size,
                                   capacity_ceiling ? capacity_ceiling
                                                    : bcoc::UkpSolver::kDefaultCapacityCeiling);
    return BCOC_OK;
  });
}

bcoc_status bcoc_gas_limit_range(uint64_t max_size, uint64_t header_size, uint64_t* gas_min,
                                 uint64_t* gas_max) {
  BCOC_REQUIRE(gas_min && gas_max);
  return guarded([&] {
    const auto [lo, hi] = bcoc::gasLimitRangeForMaxSize(max_size, catalog(), header_size);
    *gas_min = lo;
    *gas_max = hi;
    return BCOC_OK;
  });
}

bcoc_status bcoc_header_overhead(double t, double period, uint64_t header_size, double* bytes) {
  BCOC_REQUIRE(bytes);
  return guarded([&] {
    *bytes = bcoc::headerOverhead(t, period, header_size);
    return BCOC_OK;
  });
}

bcoc_status bcoc_growth_rate(double t1, double t2, double period, uint64_t header_size,
                             const bcoc_tx_kind* kinds, const uint32_t* desc_lengths,
                             const uint64_t* counts, size_t n, double* bytes) {
  BCOC_REQUIRE(bytes && (n == 0 || (kinds && counts)));
  return guarded([&] {
    bcoc::TxMultiset m;
    for (size_t i = 0; i < n; ++i) {
      m[txType(kinds[i], desc_lengths ? desc_lengths[i] : 0)] += counts[i];
    }
    *bytes = bcoc::growthRate(t1, t2, period, m, bcoc::CostModel::standard(), header_size);
    return BCOC_OK;
  });
}

bcoc_status bcoc_dominant_kind(bcoc_tx_kind* kind, uint32_t* desc_length) {
  BCOC_REQUIRE(kind);
  return guarded([&] {
    const auto idx = bcoc::dominanceCheck(catalog());
    if (!idx) return fail(BCOC_ERR_INVALID_ARGUMENT, "no dominating transaction type");
    const bcoc::TxType t = catalog()[*idx].type;
    *kind = static_cast<bcoc_tx_kind>(t.kind);
    if (desc_length) *desc_length = t.descriptionLength;
    return BCOC_OK;
  });
}

bcoc_status bcoc_upper_gas_limit(double max_latency, const bcoc_chain_params* params,
                                 uint64_t* gas_limit) {
  BCOC_REQUIRE(params && gas_limit);
  return guarded([&] {
    *gas_limit = bcoc::upperGasLimitForLatency(max_latency, chainParams(*params), catalog());
    return BCOC_OK;
  });
}

bcoc_status bcoc_plan_gas_limit(uint64_t lower, uint64_t lower_average, uint64_t upper,
                                bcoc_gas_plan* plan) {
  BCOC_REQUIRE(plan);
  return guarded([&] {
    const bcoc::GasLimitPlan p = bcoc::planGasLimit(lower, lower_average, upper);
    *plan = bcoc_gas_plan{p.lower, p.lowerAverage, p.upper, p.recommended, p.rangeLow,
                          p.rangeHigh, {}};
    std::snprintf(plan->tag, sizeof plan->tag, "%s", p.tag.c_str());
    return BCOC_OK;
  });
}

bcoc_status bcoc_table2(double period, const uint64_t* ns, size_t count, bcoc_table2_row* rows) {
  BCOC_REQUIRE(count == 0 || (ns && rows));
  return guarded([&] {
    const auto out = bcoc::reproduceTable2(period, std::vector<std::uint64_t>(ns, ns + count));
    for (size_t i = 0; i < out.size(); ++i) {
      rows[i] = bcoc_table2_row{out[i].n, out[i].contentBytes, out[i].headerBytes,
                                out[i].totalBytes, out[i].overheadPct};
    }
    return BCOC_OK;
  });
}

bcoc_status bcoc_fig3(const double* period_minutes, size_t count, uint64_t header_size,
                      double* annual_bytes) {
  BCOC_REQUIRE(count == 0 || (period_minutes && annual_bytes));
  return guarded([&] {
    const auto pts = bcoc::reproduceFig3(
        std::vector<double>(period_minutes, period_minutes + count), header_size);
    for (size_t i = 0; i < pts.size(); ++i) annual_bytes[i] = pts[i].annualHeaderBytes;
    return BCOC_OK;
  });
}

bcoc_status bcoc_ukp_solver_new(uint64_t max_capacity, uint64_t capacity_ceiling,
                                bcoc_ukp_solver** solver) {
  BCOC_REQUIRE(solver);
  return guarded([&] {
    *solver = new bcoc_ukp_solver{bcoc::UkpSolver(
        catalog(), max_capacity,
        capacity_ceiling ? capacity_ceiling : bcoc::UkpSolver::kDefaultCapacityCeiling)};
    return BCOC_OK;
  });
}

bcoc_status bcoc_ukp_solver_optimum(const bcoc_ukp_solver* solver, uint64_t gas_limit,
                                    uint64_t* content_bytes) {
  BCOC_REQUIRE(solver && content_bytes);
  return guarded([&] {
    *content_bytes = solver->solver.optimum(gas_limit);
    return BCOC_OK;
  });
}

void bcoc_ukp_solver_free(bcoc_ukp_solver* solver) { delete solver; }

// ---- experiments

bcoc_status bcoc_config_new(bcoc_config** config) {
  BCOC_REQUIRE(config);
  return guarded([&] {
    *config = new bcoc_config{};
    return BCOC_OK;
  });
}

bcoc_status bcoc_config_clone(const bcoc_config* config, bcoc_config** copy) {
  BCOC_REQUIRE(config && copy);
  return guarded([&] {
    *copy = new bcoc_config{*config};
    return BCOC_OK;
  });
}

void bcoc_config_free(bcoc_config* config) { delete config; }

bcoc_status bcoc_config_load(bcoc_config* config, const char* path) {
  BCOC_REQUIRE(config && path);
  return guarded([&] {
    config->config = bcoc::ExperimentConfig::load(path, config->config);
    return BCOC_OK;
  });
}

bcoc_status bcoc_config_set(bcoc_config* config, const char* key, const char* value) {
  BCOC_REQUIRE(config && key && value);
  return guarded([&] {
    config->config.set(key, value);
    return BCOC_OK;
  });
}

bcoc_status bcoc_config_validate(const bcoc_config* config) {
  BCOC_REQUIRE(config);
  return guarded([&] {
    config->config.validate();
    return BCOC_OK;
  });
}

size_t bcoc_config_key_count(void) { return bcoc::configKeys().size(); }
bcoc_status bcoc_config_key(size_t index, const char** name, const char** description) {
  return describe(bcoc::configKeys(), index, name, description);
}
size_t bcoc_metrics_column_count(void) { return bcoc::metricsColumns().size(); }
bcoc_status bcoc_metrics_column(size_t index, const char** name, const char** description) {
  return describe(bcoc::metricsColumns(), index, name, description);
}
size_t bcoc_summary_column_count(void) { return bcoc::summaryColumns().size(); }
bcoc_status bcoc_summary_column(size_t index, const char** name, const char** description) {
  return describe(bcoc::summaryColumns(), index, name, description);
}

bcoc_status bcoc_run(const bcoc_config* config, bcoc_experiment** experiment) {
  BCOC_REQUIRE(config && experiment);
  return guarded([&] {
    *experiment = new bcoc_experiment{bcoc::runExperiment(config->config)};
    return BCOC_OK;
  });
}

bcoc_status bcoc_sweep(const bcoc_config* const* configs, size_t count, unsigned threads,
                       bcoc_experiment** experiments) {
  BCOC_REQUIRE(count == 0 || (configs && experiments));
  return guarded([&] {
    std::vector<bcoc::ExperimentConfig> cs;
    for (size_t i = 0; i < count; ++i) {
      if (!configs[i]) return fail(BCOC_ERR_INVALID_ARGUMENT, "null configuration");
      cs.push_back(configs[i]->config);
    }
    auto results = bcoc::runSweep(cs, threads);
    for (size_t i = 0; i < count; ++i) experiments[i] = new bcoc_experiment{std::move(results[i])};
    return BCOC_OK;
  });
}

void bcoc_experiment_free(bcoc_experiment* experiment) { delete experiment; }

size_t bcoc_experiment_row_count(const bcoc_experiment* experiment) {
  return experiment ? experiment->result.rows.size() : 0;
}

bcoc_status bcoc_experiment_row(const bcoc_experiment* experiment, size_t index,
                                bcoc_metrics_row* row) {
  BCOC_REQUIRE(experiment && row);
  if (index >= experiment->result.rows.size()) {
    return fail(BCOC_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const bcoc::MetricsRow& r = experiment->result.rows[index];
  *row = bcoc_metrics_row{r.periodIndex, r.gasRate,           r.meanLB,         r.maxLB,
                          r.includedTxs, r.meanLC,            r.committedBlockSize,
                          r.chainSizeBytes, r.mempoolDepth};
  return BCOC_OK;
}

int bcoc_experiment_agreement(const bcoc_experiment* experiment) {
  return experiment && experiment->result.summary.agreement ? 1 : 0;
}

uint64_t bcoc_experiment_committed_blocks(const bcoc_experiment* experiment) {
  return experiment ? experiment->result.summary.committedBlocks : 0;
}

bcoc_status bcoc_experiment_metrics_csv(const bcoc_experiment* experiment,
                                        const char* prefix_header, const char* prefix_value,
                                        int with_header, char** csv) {
  BCOC_REQUIRE(experiment && csv);
  return guarded([&] {
    std::ostringstream out;
    bcoc::writeMetricsCsv(out, experiment->result.rows, prefix_header ? prefix_header : "",
                          prefix_value ? prefix_value : "", with_header != 0);
    *csv = dupString(out.str());
    return BCOC_OK;
  });
}

bcoc_status bcoc_experiment_summary_csv(const bcoc_experiment* experiment, char** csv) {
  BCOC_REQUIRE(experiment && csv);
  return guarded([&] {
    std::ostringstream out;
    bcoc::writeSummaryCsv(out, experiment->result.summary);
    *csv = dupString(out.str());
    return BCOC_OK;
  });
}

// ---- custody

bcoc_status bcoc_custody_open(const char* directory, bcoc_custody** custody) {
  BCOC_REQUIRE(directory && custody);
  return guarded([&] {
    *custody = new bcoc_custody(directory);
    return BCOC_OK;
  });
}

void bcoc_custody_close(bcoc_custody* custody) { delete custody; }

void bcoc_custody_set_time(bcoc_custody* custody, uint64_t seconds) {
  if (custody) custody->ledger.setNow(std::chrono::seconds(seconds));
}

bcoc_status bcoc_custody_create(bcoc_custody* custody, const char* actor, const uint8_t* blob,
                                size_t size, const char* description, char id_hex[65]) {
  BCOC_REQUIRE(custody && id_hex && (blob || size == 0));
  return guarded([&] {
    const bcoc::Address creator = resolveActor(actor);
    const std::uint64_t seq = custody->ledger.nextSeq();
    custody->ledger.setNextSeq(seq);
    const bcoc::EvidenceId id = custody->frontend->submitEvidence(
        creator, std::span<const std::uint8_t>(blob, size), description ? description : "");
    const bcoc::Revert r = custody->settle(seq);
    if (r != bcoc::Revert::None) {
      custody->store.erase(id);
      custody->save();
      return fail(statusOf(r), std::string("create reverted: ") + bcoc::revertName(r));
    }
    custody->save();
    std::snprintf(id_hex, 65, "%s", id.hex().c_str());
    return BCOC_OK;
  });
}

bcoc_status bcoc_custody_transfer(bcoc_custody* custody, const char* actor, const char* id_hex,
                                  const char* new_owner) {
  BCOC_REQUIRE(custody);
  return guarded([&] {
    const bcoc::EvidenceId id = parseId(id_hex);
    const std::uint64_t seq =
        custody->frontend->transferEvidence(resolveActor(actor), id, resolveActor(new_owner));
    const bcoc::Revert r = custody->settle(seq);
    custody->save();
    if (r != bcoc::Revert::None) {
      return fail(statusOf(r), std::string("transfer reverted: ") + bcoc::revertName(r));
    }
    return BCOC_OK;
  });
}

bcoc_status bcoc_custody_remove(bcoc_custody* custody, const char* actor, const char* id_hex) {
  BCOC_REQUIRE(custody);
  return guarded([&] {
    const bcoc::EvidenceId id = parseId(id_hex);
    const std::uint64_t seq = custody->ledger.nextSeq();
    custody->ledger.issue(
        bcoc::makeRemoveEvidence(seq, resolveActor(actor), id, custody->ledger.now()));
    const bcoc::Revert r = custody->settle(seq);
    custody->save();
    if (r != bcoc::Revert::None) {
      return fail(statusOf(r), std::string("remove reverted: ") + bcoc::revertName(r));
    }
    return BCOC_OK;
  });
}

bcoc_status bcoc_custody_discard(bcoc_custody* custody, const char* actor, const char* id_hex) {
  BCOC_REQUIRE(custody);
  return guarded([&] {
    const bcoc::EvidenceId id = parseId(id_hex);
    const std::uint64_t seq = custody->frontend->discardEvidence(resolveActor(actor), id);
    const bcoc::Revert r = custody->settle(seq);
    custody->save();
    if (r != bcoc::Revert::None) {
      return fail(statusOf(r), std::string("discard reverted: ") + bcoc::revertName(r));
    }
    return BCOC_OK;
  });
}

bcoc_status bcoc_custody_acquire(bcoc_custody* custody, const char* actor, const char* id_hex,
                                 uint8_t** blob, size_t* size) {
  BCOC_REQUIRE(custody && blob && size);
  return guarded([&] {
    const auto data = custody->frontend->acquireEvidence(resolveActor(actor), parseId(id_hex));
    auto* out = static_cast<uint8_t*>(std::malloc(data.empty() ? 1 : data.size()));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, data.data(), data.size());
    *blob = out;
    *size = data.size();
    return BCOC_OK;
  });
}

bcoc_status bcoc_custody_show(const bcoc_custody* custody, const char* id_hex, char** json) {
  BCOC_REQUIRE(custody && json);
  return guarded([&] {
    const auto& entry = custody->ledger.committed().getEvidence(parseId(id_hex));
    nlohmann::json j = bcoc_custody::entryJson(entry);
    j["stored"] = custody->store.contains(entry.id);
    *json = dupString(j.dump(2));
    return BCOC_OK;
  });
}

bcoc_status bcoc_resolve_actor(const char* actor, char address_hex[41]) {
  BCOC_REQUIRE(address_hex);
  return guarded([&] {
    std::snprintf(address_hex, 41, "%s", resolveActor(actor).hex().c_str());
    return BCOC_OK;
  });
}

}  // extern "C"
