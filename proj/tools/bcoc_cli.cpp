// Command-line front end. Talks to the simulator only through the C API.

#include <bcoc/bcoc.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperation = 1;
constexpr int kExitConfig = 2;

struct CliFailure {
  int exitCode;
  std::string message;
};

int exitCodeFor(bcoc_status s) {
  if (s == BCOC_OK) return kExitOk;
  if (s == BCOC_ERR_CONFIG || s == BCOC_ERR_INVALID_SPEC) return kExitConfig;
  return kExitOperation;
}

void check(bcoc_status s) {
  if (s == BCOC_OK) return;
  throw CliFailure{exitCodeFor(s), std::string(bcoc_status_name(s)) + ": " + bcoc_last_error()};
}

struct CStringDeleter {
  void operator()(void* p) const { bcoc_free(p); }
};
using CString = std::unique_ptr<char, CStringDeleter>;

struct ConfigDeleter {
  void operator()(bcoc_config* c) const { bcoc_config_free(c); }
};
using ConfigPtr = std::unique_ptr<bcoc_config, ConfigDeleter>;

struct ExperimentDeleter {
  void operator()(bcoc_experiment* e) const { bcoc_experiment_free(e); }
};
using ExperimentPtr = std::unique_ptr<bcoc_experiment, ExperimentDeleter>;

struct CustodyDeleter {
  void operator()(bcoc_custody* c) const { bcoc_custody_close(c); }
};
using CustodyPtr = std::unique_ptr<bcoc_custody, CustodyDeleter>;

/// Output sink: the --out file when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw CliFailure{kExitOperation, "cannot write " + path};
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string columnHelp(const char* title, size_t (*count)(),
                       bcoc_status (*get)(size_t, const char**, const char**)) {
  std::string s = std::string(title) + ":\n";
  for (size_t i = 0; i < count(); ++i) {
    const char* name = nullptr;
    const char* desc = nullptr;
    get(i, &name, &desc);
    s += "  " + std::string(name) + "  " + desc + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// sim

struct SimOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string summary;
  std::optional<double> period;
  std::optional<std::uint64_t> gasLimit;
  std::optional<std::uint32_t> validators;
  std::optional<std::string> byzantine;
  std::vector<std::string> settings;
  std::vector<std::uint64_t> gasLimits;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
};

void addSimFlags(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--out", o.out, "metrics CSV path (default stdout)");
  cmd->add_option("--period", o.period, "block period in seconds");
  cmd->add_option("--gas-limit", o.gasLimit, "block gas limit");
  cmd->add_option("--validators", o.validators, "number of validators");
  cmd->add_option("--byzantine", o.byzantine,
                  "faulty validators: INDEX:silent or INDEX:equivocator, comma separated");
  cmd->add_option("--set", o.settings, "extra configuration as key=value (repeatable)");
}

ConfigPtr buildConfig(const SimOptions& o) {
  bcoc_config* raw = nullptr;
  check(bcoc_config_new(&raw));
  ConfigPtr cfg(raw);
  auto configError = [](bcoc_status s) {
    if (s != BCOC_OK) {
      throw CliFailure{kExitConfig, std::string(bcoc_status_name(s)) + ": " + bcoc_last_error()};
    }
  };
  if (!o.config.empty()) configError(bcoc_config_load(cfg.get(), o.config.c_str()));
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliFailure{kExitConfig, "--set expects key=value: " + kv};
    configError(bcoc_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (o.seed) configError(bcoc_config_set(cfg.get(), "seed", std::to_string(*o.seed).c_str()));
  if (o.period) configError(bcoc_config_set(cfg.get(), "period", fixed(*o.period, 9).c_str()));
  if (o.gasLimit) {
    configError(bcoc_config_set(cfg.get(), "gas_limit", std::to_string(*o.gasLimit).c_str()));
  }
  if (o.validators) {
    configError(bcoc_config_set(cfg.get(), "validators", std::to_string(*o.validators).c_str()));
  }
  if (o.byzantine) configError(bcoc_config_set(cfg.get(), "byzantine", o.byzantine->c_str()));
  configError(bcoc_config_validate(cfg.get()));
  return cfg;
}

void writeSummary(const bcoc_experiment* exp, const SimOptions& o) {
  char* raw = nullptr;
  check(bcoc_experiment_summary_csv(exp, &raw));
  CString csv(raw);
  std::string path = o.summary;
  if (path.empty() && !o.out.empty() && o.out != "-") path = o.out + ".summary.csv";
  if (path.empty()) {
    std::cerr << csv.get();
    return;
  }
  Output out(path);
  out.stream() << csv.get();
}

int simRun(const SimOptions& o) {
  ConfigPtr cfg = buildConfig(o);
  bcoc_experiment* raw = nullptr;
  check(bcoc_run(cfg.get(), &raw));
  ExperimentPtr exp(raw);
  char* csvRaw = nullptr;
  check(bcoc_experiment_metrics_csv(exp.get(), nullptr, nullptr, 1, &csvRaw));
  CString csv(csvRaw);
  Output out(o.out);
  out.stream() << csv.get();
  writeSummary(exp.get(), o);
  return bcoc_experiment_agreement(exp.get()) ? kExitOk : kExitOperation;
}

int simSweep(SimOptions o) {
  if (o.gasLimits.empty() && o.gasLimit) o.gasLimits.push_back(*o.gasLimit);
  if (o.seeds.empty() && o.seed) o.seeds.push_back(*o.seed);
  ConfigPtr base = buildConfig(o);
  std::vector<ConfigPtr> configs;
  std::vector<std::string> labels;
  const std::vector<std::optional<std::uint64_t>> gs =
      o.gasLimits.empty() ? std::vector<std::optional<std::uint64_t>>{std::nullopt}
                          : std::vector<std::optional<std::uint64_t>>(o.gasLimits.begin(),
                                                                      o.gasLimits.end());
  const std::vector<std::optional<std::uint64_t>> ss =
      o.seeds.empty() ? std::vector<std::optional<std::uint64_t>>{std::nullopt}
                      : std::vector<std::optional<std::uint64_t>>(o.seeds.begin(), o.seeds.end());
  for (const auto& g : gs) {
    for (const auto& s : ss) {
      bcoc_config* raw = nullptr;
      check(bcoc_config_clone(base.get(), &raw));
      ConfigPtr c(raw);
      if (g) check(bcoc_config_set(c.get(), "gas_limit", std::to_string(*g).c_str()));
      if (s) check(bcoc_config_set(c.get(), "seed", std::to_string(*s).c_str()));
      labels.push_back((g ? std::to_string(*g) : std::string("default")) + "," +
                       (s ? std::to_string(*s) : std::string("default")));
      configs.push_back(std::move(c));
    }
  }
  std::vector<const bcoc_config*> ptrs;
  for (const auto& c : configs) ptrs.push_back(c.get());
  std::vector<bcoc_experiment*> raws(configs.size(), nullptr);
  check(bcoc_sweep(ptrs.data(), ptrs.size(), o.threads, raws.data()));
  std::vector<ExperimentPtr> exps;
  for (auto* e : raws) exps.emplace_back(e);

  Output out(o.out);
  bool agree = true;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    char* csvRaw = nullptr;
    check(bcoc_experiment_metrics_csv(exps[i].get(), "gasLimit,seed", labels[i].c_str(), i == 0,
                                      &csvRaw));
    CString csv(csvRaw);
    out.stream() << csv.get();
    agree = agree && bcoc_experiment_agreement(exps[i].get());
  }
  return agree ? kExitOk : kExitOperation;
}

// ---------------------------------------------------------------------------
// analyze

int analyzeTable2(double period, const std::string& outPath) {
  const std::vector<std::uint64_t> ns = {10'000, 100'000, 1'000'000};
  std::vector<bcoc_table2_row> rows(ns.size());
  check(bcoc_table2(period, ns.data(), ns.size(), rows.data()));
  constexpr double MiB = 1024.0 * 1024.0;
  constexpr double GiB = 1024.0 * MiB;
  Output out(outPath);
  auto& s = out.stream();
  s << "n,content_bytes,content_MiB,content_GiB,header_bytes,total_bytes,total_MiB,total_GiB,"
       "overhead_pct\n";
  for (const auto& r : rows) {
    const auto content = static_cast<double>(r.content_bytes);
    s << r.n << ',' << r.content_bytes << ',' << fixed(content / MiB, 2) << ','
      << fixed(content / GiB, 3) << ',' << fixed(r.header_bytes, 0) << ','
      << fixed(r.total_bytes, 0) << ',' << fixed(r.total_bytes / MiB, 2) << ','
      << fixed(r.total_bytes / GiB, 3) << ',' << fixed(r.overhead_pct, 2) << '\n';
  }
  return kExitOk;
}

int analyzeFig3(std::uint64_t headerSize, const std::string& outPath) {
  const std::vector<double> minutes = {1, 2, 5, 10, 15, 30, 60};
  std::vector<double> bytes(minutes.size());
  check(bcoc_fig3(minutes.data(), minutes.size(), headerSize, bytes.data()));
  Output out(outPath);
  auto& s = out.stream();
  s << "period_min,period_s,annual_header_bytes,annual_header_MiB\n";
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    s << fixed(minutes[i], 0) << ',' << fixed(minutes[i] * 60, 0) << ',' << fixed(bytes[i], 0)
      << ',' << fixed(bytes[i] / (1024.0 * 1024.0), 2) << '\n';
  }
  return kExitOk;
}

struct PlanOptions {
  std::optional<std::uint64_t> maxRate;
  std::optional<std::uint64_t> avgRate;
  std::optional<std::uint64_t> upper;
  std::optional<double> maxLatency;
  double bandwidth = 1e6;
  SimOptions sim;
};

int analyzePlan(PlanOptions o) {
  if ((!o.maxRate || !o.avgRate) && !o.sim.config.empty()) {
    ConfigPtr cfg = buildConfig(o.sim);
    bcoc_experiment* raw = nullptr;
    check(bcoc_run(cfg.get(), &raw));
    ExperimentPtr exp(raw);
    std::uint64_t mx = 0;
    double sum = 0;
    const size_t n = bcoc_experiment_row_count(exp.get());
    for (size_t i = 0; i < n; ++i) {
      bcoc_metrics_row r;
      check(bcoc_experiment_row(exp.get(), i, &r));
      mx = std::max(mx, r.gas_rate);
      sum += static_cast<double>(r.gas_rate);
    }
    if (!o.maxRate) o.maxRate = mx;
    if (!o.avgRate) o.avgRate = n ? static_cast<std::uint64_t>(std::ceil(sum / n)) : 0;
  }
  if (!o.maxRate || !o.avgRate) {
    throw CliFailure{kExitConfig, "need --max-rate and --avg-rate, or --config to measure them"};
  }
  if (!o.upper) {
    if (!o.maxLatency) throw CliFailure{kExitConfig, "need --upper or --max-latency"};
    bcoc_chain_params p;
    bcoc_chain_params_default(&p);
    p.bandwidth = o.bandwidth;
    std::uint64_t g = 0;
    check(bcoc_upper_gas_limit(*o.maxLatency, &p, &g));
    o.upper = g;
  }
  bcoc_gas_plan plan;
  const bcoc_status s = bcoc_plan_gas_limit(*o.maxRate, *o.avgRate, *o.upper, &plan);
  if (s == BCOC_ERR_INVALID_BOUNDS) {
    throw CliFailure{kExitConfig, std::string("InvalidBounds: ") + bcoc_last_error()};
  }
  check(s);
  Output out(o.sim.out);
  out.stream() << "max_gas_rate,avg_gas_rate,upper_bound,recommended,range_low,range_high,tag\n"
               << plan.lower << ',' << plan.lower_average << ',' << plan.upper << ','
               << plan.recommended << ',' << plan.range_low << ',' << plan.range_high << ','
               << plan.tag << '\n';
  return kExitOk;
}

int analyzeUkp(std::size_t samples, std::uint64_t maxGas, std::uint64_t seed,
               const std::string& outPath) {
  std::vector<std::uint64_t> gs;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) gs.push_back(rng() % (maxGas + 1));
  std::uint64_t gT = 0;
  check(bcoc_tx_cost(BCOC_TX_TRANSFER, 0, nullptr, &gT));
  for (std::uint64_t k = 0; k <= 10; ++k) {
    gs.push_back(k * gT);
    gs.push_back(k * gT + gT - 1);
  }
  std::uint64_t cap = 0;
  for (auto g : gs) cap = std::max(cap, g);
  bcoc_ukp_solver* solver = nullptr;
  check(bcoc_ukp_solver_new(cap, 0, &solver));
  std::unique_ptr<bcoc_ukp_solver, void (*)(bcoc_ukp_solver*)> guard(solver, bcoc_ukp_solver_free);
  Output out(outPath);
  auto& s = out.stream();
  s << "gas_limit,closed_form_bytes,ukp_bytes,match\n";
  std::size_t mismatches = 0;
  for (auto g : gs) {
    std::uint64_t closed = 0;
    std::uint64_t content = 0;
    check(bcoc_max_block_size_closed_form(g, 1909, &closed));
    check(bcoc_ukp_solver_optimum(solver, g, &content));
    const std::uint64_t ukp = 1909 + content;
    mismatches += closed != ukp;
    s << g << ',' << closed << ',' << ukp << ',' << (closed == ukp ? 1 : 0) << '\n';
  }
  std::cerr << gs.size() << " capacities checked, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitOperation;
}

// ---------------------------------------------------------------------------
// ledger

struct LedgerOptions {
  std::string dir = "bcoc-ledger";
  std::string actor;
  std::optional<std::uint64_t> at;
  std::string id;
  std::string file;
  std::string desc;
  std::string to;
  std::string out;
};

CustodyPtr openCustody(const LedgerOptions& o) {
  bcoc_custody* raw = nullptr;
  check(bcoc_custody_open(o.dir.c_str(), &raw));
  CustodyPtr c(raw);
  const auto now = o.at ? *o.at
                        : static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                                         std::chrono::system_clock::now()
                                                             .time_since_epoch())
                                                         .count());
  bcoc_custody_set_time(c.get(), now);
  return c;
}

void requireActor(const LedgerOptions& o) {
  if (o.actor.empty()) throw CliFailure{kExitConfig, "--as ACTOR is required"};
}

int ledgerCreate(const LedgerOptions& o) {
  requireActor(o);
  std::ifstream in(o.file, std::ios::binary);
  if (!in) throw CliFailure{kExitOperation, "cannot read " + o.file};
  const std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  CustodyPtr c = openCustody(o);
  char id[65] = {};
  check(bcoc_custody_create(c.get(), o.actor.c_str(), blob.data(), blob.size(), o.desc.c_str(), id));
  std::cout << id << '\n';
  return kExitOk;
}

int ledgerTransfer(const LedgerOptions& o) {
  requireActor(o);
  if (o.to.empty()) throw CliFailure{kExitConfig, "--to NEW_OWNER is required"};
  CustodyPtr c = openCustody(o);
  check(bcoc_custody_transfer(c.get(), o.actor.c_str(), o.id.c_str(), o.to.c_str()));
  return kExitOk;
}

int ledgerRemove(const LedgerOptions& o, bool discard) {
  requireActor(o);
  CustodyPtr c = openCustody(o);
  check(discard ? bcoc_custody_discard(c.get(), o.actor.c_str(), o.id.c_str())
                : bcoc_custody_remove(c.get(), o.actor.c_str(), o.id.c_str()));
  return kExitOk;
}

int ledgerShow(const LedgerOptions& o) {
  CustodyPtr c = openCustody(o);
  char* raw = nullptr;
  check(bcoc_custody_show(c.get(), o.id.c_str(), &raw));
  CString json(raw);
  std::cout << json.get() << '\n';
  return kExitOk;
}

int ledgerAcquire(const LedgerOptions& o) {
  requireActor(o);
  CustodyPtr c = openCustody(o);
  std::uint8_t* data = nullptr;
  size_t size = 0;
  check(bcoc_custody_acquire(c.get(), o.actor.c_str(), o.id.c_str(), &data, &size));
  std::unique_ptr<std::uint8_t, CStringDeleter> guard(data);
  Output out(o.out);
  out.stream().write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permissioned chain-of-custody ledger: simulation, analytics and custody tools"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 operation error, 2 configuration or usage error.\n"
      "Configuration files hold one 'key = value' per line; flags override file values.");

  std::function<int()> action;

  // sim
  auto* sim = app.add_subcommand("sim", "Run IBFT network simulations");
  sim->require_subcommand(1);
  SimOptions runOpts;
  auto* run = sim->add_subcommand("run", "One simulation; per-period metrics as CSV");
  addSimFlags(run, runOpts);
  run->add_option("--summary", runOpts.summary,
                  "per-validator summary CSV path (default <out>.summary.csv, or stderr "
                  "when writing to stdout)");
  std::string configHelp = "Configuration keys:\n";
  for (size_t i = 0; i < bcoc_config_key_count(); ++i) {
    const char* name = nullptr;
    const char* desc = nullptr;
    bcoc_config_key(i, &name, &desc);
    configHelp += "  " + std::string(name) + "  " + desc + "\n";
  }
  const std::string metricsHelp =
      columnHelp("Metrics CSV columns", bcoc_metrics_column_count, bcoc_metrics_column);
  const std::string summaryHelp =
      columnHelp("Summary CSV columns", bcoc_summary_column_count, bcoc_summary_column);
  run->footer(metricsHelp + summaryHelp + configHelp);
  run->callback([&] { action = [&] { return simRun(runOpts); }; });

  SimOptions sweepOpts;
  auto* sweep = sim->add_subcommand("sweep", "Several simulations over gas limits and seeds");
  addSimFlags(sweep, sweepOpts);
  sweep->add_option("--gas-limits", sweepOpts.gasLimits, "gas limits to sweep")->delimiter(',');
  sweep->add_option("--seeds", sweepOpts.seeds, "seeds to sweep")->delimiter(',');
  sweep->add_option("--parallel-sweep", sweepOpts.threads,
                    "number of simulations run concurrently (default 1)");
  sweep->footer("Output columns: gasLimit, seed (the run's values, or 'default'), then\n" +
                metricsHelp + configHelp);
  sweep->callback([&] { action = [&] { return simSweep(sweepOpts); }; });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Closed-form performance models");
  analyze->require_subcommand(1);

  double t2Period = 300;
  std::string t2Out;
  auto* table2 = analyze->add_subcommand("table2", "Annual growth rate per workload class");
  table2->add_option("--period", t2Period, "block period in seconds (default 300)");
  table2->add_option("--out", t2Out, "CSV path (default stdout)");
  table2->footer(
      "Workload per year: n CreateEvidence(1024), n RemoveEvidence, 10n Transfer,\n"
      "for n = 10^4, 10^5, 10^6. MiB = 2^20 bytes, GiB = 2^30 bytes.\n"
      "CSV columns:\n"
      "  n              workload size\n"
      "  content_bytes  transaction bytes per year\n"
      "  content_MiB    the same in MiB\n"
      "  content_GiB    the same in GiB\n"
      "  header_bytes   block header bytes per year\n"
      "  total_bytes    header plus transaction bytes per year\n"
      "  total_MiB      the same in MiB\n"
      "  total_GiB      the same in GiB\n"
      "  overhead_pct   header share of the total, percent\n");
  table2->callback([&] { action = [&] { return analyzeTable2(t2Period, t2Out); }; });

  std::uint64_t f3Header = 1909;
  std::string f3Out;
  auto* fig3 = analyze->add_subcommand("fig3", "Annual header bytes per block period");
  fig3->add_option("--header-size", f3Header, "header bytes (default 1909)");
  fig3->add_option("--out", f3Out, "CSV path (default stdout)");
  fig3->footer(
      "CSV columns:\n"
      "  period_min          block period, minutes (1, 2, 5, 10, 15, 30, 60)\n"
      "  period_s            block period, seconds\n"
      "  annual_header_bytes header bytes over 365 days\n"
      "  annual_header_MiB   the same in MiB (2^20 bytes)\n");
  fig3->callback([&] { action = [&] { return analyzeFig3(f3Header, f3Out); }; });

  PlanOptions planOpts;
  auto* plan = analyze->add_subcommand("plan-gas-limit", "Choose a block gas limit");
  plan->add_option("--max-rate", planOpts.maxRate, "maximum gas rate per period (lower bound)");
  plan->add_option("--avg-rate", planOpts.avgRate, "average gas rate per period");
  plan->add_option("--upper", planOpts.upper, "latency-derived upper bound on the gas limit");
  plan->add_option("--max-latency", planOpts.maxLatency,
                   "consensus latency bound in seconds, used to derive --upper");
  plan->add_option("--bandwidth", planOpts.bandwidth,
                   "bytes per second for --max-latency (default 1e6)");
  addSimFlags(plan, planOpts.sim);
  plan->footer(
      "Without --max-rate/--avg-rate, --config runs the configured simulation and\n"
      "uses its maximum and mean per-period gas rate.\n"
      "CSV columns:\n"
      "  max_gas_rate  lower bound from the maximum gas rate\n"
      "  avg_gas_rate  lower bound from the average gas rate\n"
      "  upper_bound   upper bound from consensus latency\n"
      "  recommended   suggested gas limit\n"
      "  range_low     lowest safe gas limit\n"
      "  range_high    highest safe gas limit\n"
      "  tag           ideal | average-bounded | latency-tradeoff\n");
  plan->callback([&] { action = [&] { return analyzePlan(planOpts); }; });

  std::size_t ukpSamples = 1000;
  std::uint64_t ukpMax = 10'000'000;
  std::uint64_t ukpSeed = 1;
  std::string ukpOut;
  auto* ukp = analyze->add_subcommand(
      "ukp-check", "Compare the closed-form maximum block size with the exact knapsack optimum");
  ukp->add_option("--samples", ukpSamples, "random gas limits (default 1000)");
  ukp->add_option("--max-gas", ukpMax, "largest sampled gas limit (default 10^7)");
  ukp->add_option("--seed", ukpSeed, "sampling seed (default 1)");
  ukp->add_option("--out", ukpOut, "CSV path (default stdout)");
  ukp->footer(
      "Also checks k*g and k*g + g - 1 for k = 0..10, g the Transfer gas.\n"
      "CSV columns:\n"
      "  gas_limit          block gas limit\n"
      "  closed_form_bytes  header plus Transfer-only fill\n"
      "  ukp_bytes          header plus exact knapsack optimum\n"
      "  match              1 when both agree\n"
      "A summary line goes to stderr; exit code 1 on any mismatch.\n");
  ukp->callback([&] { action = [&] { return analyzeUkp(ukpSamples, ukpMax, ukpSeed, ukpOut); }; });

  // ledger
  LedgerOptions lo;
  auto* ledger = app.add_subcommand("ledger", "Custody operations on a local persisted ledger");
  ledger->require_subcommand(1);
  ledger->add_option("--dir", lo.dir, "ledger directory (default ./bcoc-ledger)");
  ledger->add_option("--as", lo.actor, "acting identity: a name or a 40-digit hex address");
  ledger->add_option("--at", lo.at, "ledger time in unix seconds (default now)");
  ledger->footer(
      "Every operation commits immediately. Ledger state is kept in <dir>/ledger.json,\n"
      "evidence blobs in <dir>/store.");

  auto* create = ledger->add_subcommand("create", "Store evidence and record it; prints the id");
  create->add_option("--file", lo.file, "evidence file")->required();
  create->add_option("--desc", lo.desc, "description, up to 1024 characters");
  create->callback([&] { action = [&] { return ledgerCreate(lo); }; });

  auto* transfer = ledger->add_subcommand("transfer", "Hand evidence over to a new owner");
  transfer->add_option("id", lo.id, "evidence id")->required();
  transfer->add_option("--to", lo.to, "new owner: a name or a hex address")->required();
  transfer->callback([&] { action = [&] { return ledgerTransfer(lo); }; });

  auto* remove = ledger->add_subcommand("remove", "Remove the ledger entry (creator only)");
  remove->add_option("id", lo.id, "evidence id")->required();
  remove->callback([&] { action = [&] { return ledgerRemove(lo, false); }; });

  auto* discard =
      ledger->add_subcommand("discard", "Remove the entry and delete the stored blob (creator only)");
  discard->add_option("id", lo.id, "evidence id")->required();
  discard->callback([&] { action = [&] { return ledgerRemove(lo, true); }; });

  auto* show = ledger->add_subcommand("show", "Print the custody record as JSON");
  show->add_option("id", lo.id, "evidence id")->required();
  show->footer(
      "JSON fields: id, creator, owner, description, history (address and time of\n"
      "each custodian, creator first), stored (blob present).");
  show->callback([&] { action = [&] { return ledgerShow(lo); }; });

  auto* acquire = ledger->add_subcommand("acquire", "Retrieve verified evidence (owner only)");
  acquire->add_option("id", lo.id, "evidence id")->required();
  acquire->add_option("--out", lo.out, "output file (default stdout)");
  acquire->callback([&] { action = [&] { return ledgerAcquire(lo); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return action ? action() : kExitConfig;
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exitCode;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOperation;
  }
}
