// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "d2dcache/d2dcache.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitBudgetExceeded = 3;
constexpr int kExitCappedSample = 4;
constexpr int kExitIoError = 5;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "configuration file with key = value lines")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", opts.overrides,
                  "override a config key, e.g. --set n_users=10")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", opts.seed, "master seed (overrides master_seed)");
  cmd->add_option("--out", opts.out_path,
                  "write the primary output to this file instead of stdout");
}

d2d::ExperimentSpec load_spec(const CommonOpts& opts, const CLI::App* cmd) {
  d2d::ExperimentSpec spec;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      throw std::ios_base::failure("cannot open config file: " +
                                   opts.config_path);
    }
    spec = d2d::load_experiment_spec(in);
  }
  for (const std::string& item : opts.overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects KEY=VALUE, got '" + item +
                                  "'");
    }
    d2d::apply_entry(spec, d2d::detail::trim(item.substr(0, eq)),
                     d2d::detail::trim(item.substr(eq + 1)));
  }
  if (cmd->count("--seed") > 0) spec.master_seed = opts.seed;
  return spec;
}

// Primary output goes to --out when given, stdout otherwise; the summary is
// printed only when stdout is free of the primary output.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path.empty()) {
      os_ = &std::cout;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw std::ios_base::failure("cannot open output file: " + path);
      }
      os_ = &file_;
    }
  }

  std::ostream& stream() { return *os_; }
  bool to_file() const { return os_ != &std::cout; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open output file: " + path);
  }
  return out;
}

void save_placement(std::ostream& out, const d2d::CachingState& phi) {
  out << "# d2d placement v1\n";
  out << "# n=" << phi.n_users() << " m=" << phi.n_files() << "\n";
  for (int i = 0; i < phi.n_users(); ++i) {
    for (int j = 0; j < phi.n_files(); ++j) {
      if (j > 0) out << ',';
      out << static_cast<int>(phi.phi(static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(j)));
    }
    out << '\n';
  }
}

d2d::CachingState load_placement(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# d2d placement", 0) != 0) {
    throw std::invalid_argument("not a placement file");
  }
  int n = 0;
  int m = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# n=%d m=%d", &n, &m) != 2 || n < 1 ||
      m < 1) {
    throw std::invalid_argument("placement header missing dimensions");
  }
  d2d::CachingState phi(n, m);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("placement file truncated");
    }
    const std::vector<std::string> cells = d2d::detail::split_list(line);
    if (static_cast<int>(cells.size()) != m) {
      throw std::invalid_argument("placement row has wrong width");
    }
    for (int j = 0; j < m; ++j) {
      if (cells[static_cast<std::size_t>(j)] == "1") {
        phi.phi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1;
      } else if (cells[static_cast<std::size_t>(j)] != "0") {
        throw std::invalid_argument("placement entries must be 0 or 1");
      }
    }
  }
  return phi;
}

d2d::Matrix<double> make_delay_table(const d2d::SystemConfig& cfg,
                                     const d2d::ExperimentSpec& spec,
                                     const std::string& delays_path) {
  if (!delays_path.empty()) {
    std::ifstream in(delays_path);
    if (!in) {
      throw std::ios_base::failure("cannot open delay table: " + delays_path);
    }
    d2d::DelayTableFile file = d2d::load_delay_table(in);
    if (static_cast<int>(file.t_avg.rows()) != cfg.n_users) {
      throw std::invalid_argument("delay table size does not match n_users");
    }
    return file.t_avg;
  }
  const d2d::Topology topo = d2d::gen_topology(
      cfg, d2d::mix_seed(spec.master_seed, d2d::seed_tag::kTopology));
  return d2d::build_delay_table(
      topo, cfg, spec.n_delay_samples,
      d2d::mix_seed(spec.master_seed, d2d::seed_tag::kDelays));
}

// Cycle 0 shares the stream of the single-shot planning commands, so a
// `plan` and a `cycle` run on the same seed start from the same instance.
d2d::PopularityMatrix make_popularity(const d2d::SystemConfig& cfg,
                                      d2d::PopularityMode mode,
                                      std::uint64_t master_seed,
                                      std::uint64_t cycle = 0) {
  const std::uint64_t base =
      d2d::mix_seed(master_seed, d2d::seed_tag::kPopularity,
                    static_cast<std::uint64_t>(mode));
  return d2d::gen_popularity(mode, cfg.zipf_beta, cfg.n_users, cfg.n_files,
                             cycle == 0 ? base : d2d::mix_seed(base, cycle));
}

std::string throughput_text(double eta, const d2d::SystemConfig& cfg) {
  if (!(eta > 0.0)) return "inf";
  return d2d::format_double(d2d::throughput(eta, cfg));
}

void print_plan_summary(const d2d::SystemConfig& cfg,
                        const std::string& algorithm, const std::string& mode,
                        double eta_initial, double eta,
                        std::int64_t evaluations) {
  std::cout << "algorithm=" << algorithm << " mode=" << mode
            << " n_users=" << cfg.n_users << " n_files=" << cfg.n_files
            << " cache_size=" << cfg.cache_size << "\n";
  std::cout << "eta_initial=" << d2d::format_double(eta_initial) << "\n";
  std::cout << "eta=" << d2d::format_double(eta) << "\n";
  std::cout << "throughput=" << throughput_text(eta, cfg) << "\n";
  if (evaluations >= 0) {
    std::cout << "candidate_evaluations=" << evaluations << "\n";
  }
}

void write_plan_trace_jsonl(std::ostream& out, const d2d::PlanTrace& trace) {
  for (const d2d::PlanStep& step : trace.steps) {
    out << "{\"iteration\":" << step.iteration << ",\"user\":" << step.user + 1
        << ",\"file\":" << step.file + 1
        << ",\"gain\":" << d2d::format_double(step.gain)
        << ",\"eta\":" << d2d::format_double(step.eta_after) << "}\n";
  }
}

std::vector<int> parse_budget_list(const std::string& text, int n_users) {
  std::vector<int> xi;
  for (const std::string& item : d2d::detail::split_list(text)) {
    xi.push_back(static_cast<int>(d2d::detail::parse_int("xi", item)));
  }
  if (xi.size() == 1) {
    xi.assign(static_cast<std::size_t>(n_users), xi.front());
  }
  if (xi.size() != static_cast<std::size_t>(n_users)) {
    throw std::invalid_argument("xi needs one value or one value per user");
  }
  return xi;
}

double initial_eta(const d2d::WeightVector& omega,
                   const d2d::PopularityMatrix& pop,
                   const d2d::Matrix<double>& t_avg) {
  return d2d::weighted_delay(
      omega, pop, d2d::initial_tables(t_avg, pop.n_files()).d);
}

int run_topology(const CommonOpts& common, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  const d2d::Topology topo = d2d::gen_topology(
      cfg, d2d::mix_seed(spec.master_seed, d2d::seed_tag::kTopology));
  OutputTarget out(common.out_path);
  out.stream() << "node,x,y\n0,0,0\n";
  for (int i = 0; i < topo.n_users(); ++i) {
    const d2d::Point2& pos = topo.user_positions[static_cast<std::size_t>(i)];
    out.stream() << d2d::node_of_user(i) << ','
                 << d2d::format_double(pos.x) << ','
                 << d2d::format_double(pos.y) << '\n';
  }
  if (out.to_file()) {
    std::cout << "wrote " << topo.n_users() << " user positions to "
              << common.out_path << "\n";
  }
  return 0;
}

int run_delays(const CommonOpts& common, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  const d2d::Topology topo = d2d::gen_topology(
      cfg, d2d::mix_seed(spec.master_seed, d2d::seed_tag::kTopology));
  const d2d::Matrix<double> t_avg = d2d::build_delay_table(
      topo, cfg, spec.n_delay_samples,
      d2d::mix_seed(spec.master_seed, d2d::seed_tag::kDelays));
  OutputTarget out(common.out_path);
  d2d::save_delay_table(out.stream(), t_avg, spec.master_seed,
                        spec.n_delay_samples);
  if (out.to_file()) {
    std::cout << "wrote " << cfg.n_users << "x" << cfg.n_users
              << " delay table to " << common.out_path << "\n";
  }
  return 0;
}

struct PlanOpts {
  CommonOpts common;
  std::string mode = "independent";
  std::string delays_path;
  std::string trace_path;
  std::string trace_jsonl_path;
};

int run_plan(const PlanOpts& opts, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(opts.common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  const d2d::PopularityMode mode = d2d::popularity_mode_from_string(opts.mode);
  const d2d::Matrix<double> t_avg =
      make_delay_table(cfg, spec, opts.delays_path);
  const d2d::PopularityMatrix pop =
      make_popularity(cfg, mode, spec.master_seed);
  const d2d::WeightVector omega{cfg.alloc_probs_or_uniform()};
  const d2d::PlanResult result =
      d2d::plan_cache(omega, pop, t_avg, cfg.cache_size);
  if (!opts.trace_path.empty()) {
    std::ofstream trace = open_file(opts.trace_path);
    d2d::write_plan_trace(trace, result.trace);
  }
  if (!opts.trace_jsonl_path.empty()) {
    std::ofstream trace = open_file(opts.trace_jsonl_path);
    write_plan_trace_jsonl(trace, result.trace);
  }
  if (!opts.common.out_path.empty()) {
    std::ofstream out = open_file(opts.common.out_path);
    save_placement(out, result.phi);
  }
  print_plan_summary(cfg, "greedy", opts.mode, result.eta_initial,
                     result.eta_final, result.trace.candidate_evaluations);
  return 0;
}

struct NaiveOpts {
  CommonOpts common;
  std::string mode = "independent";
  std::string delays_path;
};

int run_naive(const NaiveOpts& opts, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(opts.common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  const d2d::PopularityMode mode = d2d::popularity_mode_from_string(opts.mode);
  const d2d::Matrix<double> t_avg =
      make_delay_table(cfg, spec, opts.delays_path);
  const d2d::PopularityMatrix pop =
      make_popularity(cfg, mode, spec.master_seed);
  const d2d::WeightVector omega{cfg.alloc_probs_or_uniform()};
  const d2d::CachingState phi = d2d::naive_plan(pop, cfg.cache_size);
  const d2d::DelayTables tables = d2d::build_source_tables(t_avg, phi);
  const double eta = d2d::weighted_delay(omega, pop, tables.d);
  if (!opts.common.out_path.empty()) {
    std::ofstream out = open_file(opts.common.out_path);
    save_placement(out, phi);
  }
  print_plan_summary(cfg, "naive", opts.mode, initial_eta(omega, pop, t_avg),
                     eta, -1);
  return 0;
}

struct OracleOpts {
  CommonOpts common;
  std::string mode = "independent";
  std::string delays_path;
  std::uint64_t budget = 0;
  std::string scan_path;
};

int run_oracle(const OracleOpts& opts, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(opts.common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  const d2d::PopularityMode mode = d2d::popularity_mode_from_string(opts.mode);
  const d2d::Matrix<double> t_avg =
      make_delay_table(cfg, spec, opts.delays_path);
  const d2d::PopularityMatrix pop =
      make_popularity(cfg, mode, spec.master_seed);
  const d2d::WeightVector omega{cfg.alloc_probs_or_uniform()};
  const std::uint64_t budget =
      cmd->count("--budget") > 0 ? opts.budget : spec.oracle_budget;
  std::ofstream scan;
  std::function<void(std::uint64_t, double)> observer;
  if (!opts.scan_path.empty()) {
    scan = open_file(opts.scan_path);
    scan << "combination,eta\n";
    observer = [&scan](std::uint64_t index, double eta) {
      scan << index << ',' << d2d::format_double(eta) << '\n';
    };
  }
  const d2d::ExhaustiveResult result =
      d2d::exhaustive_plan(omega, pop, t_avg, cfg.cache_size, budget, observer);
  if (!opts.common.out_path.empty()) {
    std::ofstream out = open_file(opts.common.out_path);
    save_placement(out, result.phi);
  }
  print_plan_summary(cfg, "oracle", opts.mode, initial_eta(omega, pop, t_avg),
                     result.eta, -1);
  std::cout << "combinations=" << result.combinations << "\n";
  return 0;
}

struct CycleOpts {
  CommonOpts common;
  std::string mode = "independent";
  std::string delays_path;
  std::string prev_path;
  int cycles = 3;
  std::string xi = "1";
};

int run_cycle(const CycleOpts& opts, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(opts.common, cmd);
  const d2d::SystemConfig& cfg = spec.base;
  cfg.validate();
  if (opts.cycles < 1) {
    throw std::invalid_argument("cycles must be positive");
  }
  const d2d::PopularityMode mode = d2d::popularity_mode_from_string(opts.mode);
  const d2d::Matrix<double> t_avg =
      make_delay_table(cfg, spec, opts.delays_path);
  const d2d::WeightVector omega{cfg.alloc_probs_or_uniform()};
  const std::vector<int> xi = parse_budget_list(opts.xi, cfg.n_users);

  d2d::CachingState phi0;
  if (!opts.prev_path.empty()) {
    std::ifstream in(opts.prev_path);
    if (!in) {
      throw std::ios_base::failure("cannot open placement: " + opts.prev_path);
    }
    phi0 = load_placement(in);
    if (phi0.n_users() != cfg.n_users || phi0.n_files() != cfg.n_files) {
      throw std::invalid_argument("placement size does not match config");
    }
  } else {
    phi0 = d2d::plan_cache(omega, make_popularity(cfg, mode, spec.master_seed),
                           t_avg, cfg.cache_size)
               .phi;
  }

  std::vector<d2d::CycleInputs> sequence(
      static_cast<std::size_t>(opts.cycles) + 1);
  for (int kappa = 1; kappa <= opts.cycles; ++kappa) {
    d2d::CycleInputs& inputs = sequence[static_cast<std::size_t>(kappa)];
    inputs.omega = omega;
    inputs.p = make_popularity(cfg, mode, spec.master_seed,
                               static_cast<std::uint64_t>(kappa));
    inputs.t_avg = t_avg;
    inputs.xi = xi;
    inputs.tau = 1.0;
  }
  d2d::ReplayCycleProvider provider(std::move(sequence));
  const std::vector<d2d::CycleResult> results =
      d2d::run_cycles(provider, 1, opts.cycles, cfg.cache_size, phi0);

  OutputTarget out(opts.common.out_path);
  d2d::write_cycle_trace(out.stream(), results);
  if (out.to_file()) {
    for (const d2d::CycleResult& cycle : results) {
      int total = 0;
      for (int r : cycle.replacements) total += r;
      std::cout << "kappa=" << cycle.kappa
                << " eta=" << d2d::format_double(cycle.eta_final)
                << " replacements=" << total << "\n";
    }
  }
  return 0;
}

int run_sweep_cmd(const CommonOpts& common, const CLI::App* cmd) {
  const d2d::ExperimentSpec spec = load_spec(common, cmd);
  spec.validate();
  OutputTarget out(common.out_path);
  const d2d::SweepResult result = d2d::run_sweep(spec, &out.stream());
  for (const std::string& warning : result.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (out.to_file()) {
    for (const d2d::SweepRow& row : result.rows) {
      std::cout << d2d::to_string(spec.sweep_axis) << "="
                << d2d::format_double(row.axis_value)
                << " algorithm=" << d2d::to_string(row.algorithm)
                << " mode=" << d2d::to_string(row.mode)
                << " mean_eta=" << d2d::format_double(row.mean_eta)
                << " std_err=" << d2d::format_double(row.std_err_eta) << "\n";
    }
    std::cout << "wrote " << result.rows.size() << " rows to "
              << common.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator and cache planner for delay-aware device-to-device "
      "content delivery"};
  app.require_subcommand(1);

  CommonOpts topology_opts;
  CLI::App* topology_cmd = app.add_subcommand(
      "topology", "generate user positions in the cell (CSV: node,x,y)");
  add_common(topology_cmd, topology_opts);

  CommonOpts delays_opts;
  CLI::App* delays_cmd = app.add_subcommand(
      "delays", "estimate the per-link expected-delay table (CSV)");
  add_common(delays_cmd, delays_opts);

  PlanOpts plan_opts;
  CLI::App* plan_cmd = app.add_subcommand(
      "plan", "greedy cache placement; --out writes the placement matrix");
  add_common(plan_cmd, plan_opts.common);
  plan_cmd->add_option("--mode", plan_opts.mode,
                       "popularity mode: identical or independent");
  plan_cmd->add_option("--delays", plan_opts.delays_path,
                       "load the delay table from a file instead of estimating")
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--trace", plan_opts.trace_path,
                       "write the per-iteration trace CSV to this file");
  plan_cmd->add_option("--trace-jsonl", plan_opts.trace_jsonl_path,
                       "write the per-iteration trace as JSON lines");

  NaiveOpts naive_opts;
  CLI::App* naive_cmd = app.add_subcommand(
      "naive", "popularity-only placement baseline");
  add_common(naive_cmd, naive_opts.common);
  naive_cmd->add_option("--mode", naive_opts.mode,
                        "popularity mode: identical or independent");
  naive_cmd->add_option("--delays", naive_opts.delays_path,
                        "load the delay table from a file")
      ->check(CLI::ExistingFile);

  OracleOpts oracle_opts;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "exhaustive optimal placement (small systems only)");
  add_common(oracle_cmd, oracle_opts.common);
  oracle_cmd->add_option("--mode", oracle_opts.mode,
                         "popularity mode: identical or independent");
  oracle_cmd->add_option("--delays", oracle_opts.delays_path,
                         "load the delay table from a file")
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("--budget", oracle_opts.budget,
                         "max combinations to enumerate");
  oracle_cmd->add_option("--scan", oracle_opts.scan_path,
                         "write every (combination,eta) pair to this CSV");

  CycleOpts cycle_opts;
  CLI::App* cycle_cmd = app.add_subcommand(
      "cycle", "re-plan over update cycles under a replacement budget");
  add_common(cycle_cmd, cycle_opts.common);
  cycle_cmd->add_option("--mode", cycle_opts.mode,
                        "popularity mode: identical or independent");
  cycle_cmd->add_option("--delays", cycle_opts.delays_path,
                        "load the delay table from a file")
      ->check(CLI::ExistingFile);
  cycle_cmd->add_option("--prev", cycle_opts.prev_path,
                        "starting placement file (default: greedy plan)")
      ->check(CLI::ExistingFile);
  cycle_cmd->add_option("--cycles", cycle_opts.cycles,
                        "number of update cycles to run");
  cycle_cmd->add_option("--xi", cycle_opts.xi,
                        "replacement budget: one value or per-user list");

  CommonOpts sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "averaged sweep over beta, mu, or n_users (CSV)");
  add_common(sweep_cmd, sweep_opts);

  try {
    app.parse(argc, argv);
    if (topology_cmd->parsed()) return run_topology(topology_opts, topology_cmd);
    if (delays_cmd->parsed()) return run_delays(delays_opts, delays_cmd);
    if (plan_cmd->parsed()) return run_plan(plan_opts, plan_cmd);
    if (naive_cmd->parsed()) return run_naive(naive_opts, naive_cmd);
    if (oracle_cmd->parsed()) return run_oracle(oracle_opts, oracle_cmd);
    if (cycle_cmd->parsed()) return run_cycle(cycle_opts, cycle_cmd);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_opts, sweep_cmd);
    return kExitInternal;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << "error: invalid-input: bad command line\n";
    return kExitInvalidInput;
  } catch (const d2d::BudgetExceededError& e) {
    std::cerr << "error: budget-exceeded: " << e.what() << "\n";
    return kExitBudgetExceeded;
  } catch (const d2d::CappedSampleError& e) {
    std::cerr << "error: capped-sample: " << e.what() << "\n";
    return kExitCappedSample;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: io-error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const d2d::PlanningCompleteError& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::logic_error& e) {
    std::cerr << "error: invalid-input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
}
