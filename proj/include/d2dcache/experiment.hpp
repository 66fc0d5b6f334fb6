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

#ifndef D2DCACHE_EXPERIMENT_HPP
#define D2DCACHE_EXPERIMENT_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/baselines.hpp"
#include "d2dcache/channel.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/greedy.hpp"
#include "d2dcache/metrics.hpp"
#include "d2dcache/popularity.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/source_selection.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

enum class SweepAxis { kBeta, kMu, kNUsers };

inline std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBeta:
      return "beta";
    case SweepAxis::kMu:
      return "mu";
    case SweepAxis::kNUsers:
      return "n_users";
  }
  throw std::logic_error("unknown sweep axis");
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "beta") return SweepAxis::kBeta;
  if (s == "mu") return SweepAxis::kMu;
  if (s == "n_users") return SweepAxis::kNUsers;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

enum class Algorithm { kGreedy, kNaive, kOracle };

inline std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGreedy:
      return "greedy";
    case Algorithm::kNaive:
      return "naive";
    case Algorithm::kOracle:
      return "oracle";
  }
  throw std::logic_error("unknown algorithm");
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "greedy") return Algorithm::kGreedy;
  if (s == "naive") return Algorithm::kNaive;
  if (s == "oracle") return Algorithm::kOracle;
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct ExperimentSpec {
  SweepAxis sweep_axis = SweepAxis::kBeta;
  std::vector<double> axis_values;
  int n_instances = 50;
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy, Algorithm::kNaive};
  std::vector<PopularityMode> popularity_modes = {PopularityMode::kIdentical,
                                                  PopularityMode::kIndependent};
  SystemConfig base;
  std::uint64_t master_seed = 1;
  std::int64_t n_delay_samples = 2000;
  std::uint64_t oracle_budget = kDefaultExhaustiveBudget;

  void validate() const {
    if (axis_values.empty()) {
      throw std::invalid_argument("axis_values must be non-empty");
    }
    for (std::size_t k = 1; k < axis_values.size(); ++k) {
      if (axis_values[k] < axis_values[k - 1]) {
        throw std::invalid_argument("axis_values must be sorted ascending");
      }
    }
    if (n_instances < 1) {
      throw std::invalid_argument("n_instances must be positive");
    }
    if (algorithms.empty()) {
      throw std::invalid_argument("algorithms must be non-empty");
    }
    if (popularity_modes.empty()) {
      throw std::invalid_argument("popularity_modes must be non-empty");
    }
    if (n_delay_samples < 1) {
      throw std::invalid_argument("n_delay_samples must be positive");
    }
    base.validate();
  }
};

namespace seed_tag {
inline constexpr std::uint64_t kTopology = 1;
inline constexpr std::uint64_t kDelays = 2;
inline constexpr std::uint64_t kPopularity = 3;
}  // namespace seed_tag

// Users uniform over the disk of cell_radius_m around the base station at
// the origin. Per user the radius draw comes before the angle draw.
inline Topology gen_topology(const SystemConfig& cfg, std::uint64_t seed) {
  if (cfg.n_users < 1) throw std::invalid_argument("n_users must be positive");
  if (!(cfg.cell_radius_m > 0)) {
    throw std::invalid_argument("cell_radius_m must be positive");
  }
  SplitMix64 rng(seed);
  std::vector<Point2> users(static_cast<std::size_t>(cfg.n_users));
  for (Point2& pos : users) {
    const double r = cfg.cell_radius_m * std::sqrt(rng.next_double());
    const double theta = 2.0 * std::numbers::pi * rng.next_double();
    pos = Point2{r * std::cos(theta), r * std::sin(theta)};
  }
  return Topology(std::move(users), Point2{0.0, 0.0});
}

// Applies one sweep-axis value to the base configuration.
inline SystemConfig config_at(const ExperimentSpec& spec, double value) {
  SystemConfig cfg = spec.base;
  switch (spec.sweep_axis) {
    case SweepAxis::kBeta:
      cfg.zipf_beta = value;
      break;
    case SweepAxis::kMu:
    case SweepAxis::kNUsers: {
      const double r = std::round(value);
      if (std::abs(value - r) > 1e-9) {
        throw std::invalid_argument(
            "axis values for this sweep must be integers");
      }
      if (spec.sweep_axis == SweepAxis::kMu) {
        cfg.cache_size = static_cast<int>(r);
      } else {
        cfg.n_users = static_cast<int>(r);
      }
      break;
    }
  }
  cfg.validate();
  return cfg;
}

// One (algorithm, popularity mode) slot of a sweep point, holding the
// per-instance objective values in instance order.
struct PointCell {
  Algorithm algorithm = Algorithm::kGreedy;
  PopularityMode mode = PopularityMode::kIdentical;
  bool skipped = false;
  std::string warning;
  std::vector<double> etas;

  double mean_eta() const {
    double sum = 0.0;
    for (double e : etas) sum += e;
    return etas.empty() ? 0.0 : sum / static_cast<double>(etas.size());
  }

  double std_err_eta() const {
    const std::size_t n = etas.size();
    if (n < 2) return 0.0;
    const double mean = mean_eta();
    double ss = 0.0;
    for (double e : etas) ss += (e - mean) * (e - mean);
    double var = ss / static_cast<double>(n - 1);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(n));
  }
};

struct PointResult {
  std::vector<PointCell> cells;

  const PointCell* find(Algorithm algorithm, PopularityMode mode) const {
    for (const PointCell& cell : cells) {
      if (cell.algorithm == algorithm && cell.mode == mode) return &cell;
    }
    return nullptr;
  }
};

namespace detail {

inline double run_instance_algorithm(Algorithm algorithm,
                                     const WeightVector& omega,
                                     const PopularityMatrix& pop,
                                     const Matrix<double>& t_avg, int mu,
                                     std::uint64_t oracle_budget) {
  switch (algorithm) {
    case Algorithm::kGreedy:
      return plan_cache(omega, pop, t_avg, mu).eta_final;
    case Algorithm::kNaive: {
      const CachingState phi = naive_plan(pop, mu);
      const DelayTables tables = build_source_tables(t_avg, phi);
      return weighted_delay(omega, pop, tables.d);
    }
    case Algorithm::kOracle:
      return exhaustive_plan(omega, pop, t_avg, mu, oracle_budget).eta;
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace detail

// Runs every requested (algorithm, mode) pair over n_instances seeded
// systems. Topology and the delay table are drawn once per instance and
// shared by all pairs; the popularity matrix is shared across algorithms
// within a mode. An oracle cell whose search space exceeds the budget is
// skipped whole, carrying a warning instead of values.
inline PointResult run_point(const SystemConfig& cfg,
                             const std::vector<PopularityMode>& modes,
                             const std::vector<Algorithm>& algorithms,
                             int n_instances, std::uint64_t master_seed,
                             std::uint64_t axis_index = 0,
                             std::int64_t n_delay_samples = 2000,
                             std::uint64_t oracle_budget =
                                 kDefaultExhaustiveBudget) {
  cfg.validate();
  if (n_instances < 1) {
    throw std::invalid_argument("n_instances must be positive");
  }
  PointResult result;
  for (PopularityMode mode : modes) {
    for (Algorithm algorithm : algorithms) {
      PointCell cell;
      cell.algorithm = algorithm;
      cell.mode = mode;
      cell.etas.reserve(static_cast<std::size_t>(n_instances));
      result.cells.push_back(std::move(cell));
    }
  }
  const WeightVector omega{cfg.alloc_probs_or_uniform()};
  for (int instance = 0; instance < n_instances; ++instance) {
    const std::uint64_t instance_seed =
        mix_seed(master_seed, axis_index, static_cast<std::uint64_t>(instance));
    const Topology topo =
        gen_topology(cfg, mix_seed(instance_seed, seed_tag::kTopology));
    const Matrix<double> t_avg = build_delay_table(
        topo, cfg, n_delay_samples, mix_seed(instance_seed, seed_tag::kDelays));
    std::size_t slot = 0;
    for (PopularityMode mode : modes) {
      const PopularityMatrix pop = gen_popularity(
          mode, cfg.zipf_beta, cfg.n_users, cfg.n_files,
          mix_seed(instance_seed, seed_tag::kPopularity,
                   static_cast<std::uint64_t>(mode)));
      for (Algorithm algorithm : algorithms) {
        PointCell& cell = result.cells[slot++];
        if (cell.skipped) continue;
        try {
          cell.etas.push_back(detail::run_instance_algorithm(
              algorithm, omega, pop, t_avg, cfg.cache_size, oracle_budget));
        } catch (const BudgetExceededError& e) {
          cell.skipped = true;
          cell.warning = e.what();
          cell.etas.clear();
        }
      }
    }
  }
  return result;
}

struct SweepRow {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::kGreedy;
  PopularityMode mode = PopularityMode::kIdentical;
  double mean_eta = 0.0;
  double std_err_eta = 0.0;
  double mean_throughput = 0.0;
  int n_instances = 0;
  std::uint64_t seed = 0;
};

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_sweep_header(std::ostream& out) {
  out << "axis,algorithm,mode,mean_eta,std_err_eta,mean_throughput,"
         "n_instances,seed\n";
}

inline void write_sweep_row(std::ostream& out, const SweepRow& row) {
  out << format_double(row.axis_value) << ','
      << to_string(row.algorithm) << ',' << to_string(row.mode) << ','
      << format_double(row.mean_eta) << ','
      << format_double(row.std_err_eta) << ','
      << format_double(row.mean_throughput) << ',' << row.n_instances
      << ',' << row.seed << '\n';
}

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

// Full sweep over spec.axis_values. When `csv` is given, the header and each
// completed row are written and flushed immediately, so whatever finished
// before an error survives on disk.
inline SweepResult run_sweep(const ExperimentSpec& spec,
                             std::ostream* csv = nullptr) {
  spec.validate();
  SweepResult result;
  if (csv) {
    write_sweep_header(*csv);
    csv->flush();
  }
  for (std::size_t axis_index = 0; axis_index < spec.axis_values.size();
       ++axis_index) {
    const double value = spec.axis_values[axis_index];
    const SystemConfig cfg = config_at(spec, value);
    const PointResult point = run_point(
        cfg, spec.popularity_modes, spec.algorithms, spec.n_instances,
        spec.master_seed, static_cast<std::uint64_t>(axis_index),
        spec.n_delay_samples, spec.oracle_budget);
    for (const PointCell& cell : point.cells) {
      if (cell.skipped) {
        std::ostringstream warn;
        warn << "skipped " << to_string(cell.algorithm) << "/"
             << to_string(cell.mode) << " at "
             << to_string(spec.sweep_axis) << "="
             << format_double(value) << ": " << cell.warning;
        result.warnings.push_back(warn.str());
        continue;
      }
      SweepRow row;
      row.axis_value = value;
      row.algorithm = cell.algorithm;
      row.mode = cell.mode;
      row.mean_eta = cell.mean_eta();
      row.std_err_eta = cell.std_err_eta();
      row.mean_throughput =
          row.mean_eta > 0.0
              ? cfg.n_channels * cfg.file_size_bits / row.mean_eta
              : std::numeric_limits<double>::infinity();
      row.n_instances = static_cast<int>(cell.etas.size());
      row.seed = spec.master_seed;
      if (csv) {
        write_sweep_row(*csv, row);
        csv->flush();
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace d2d

#endif  // D2DCACHE_EXPERIMENT_HPP
