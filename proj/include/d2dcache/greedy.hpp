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

#ifndef D2DCACHE_GREEDY_HPP
#define D2DCACHE_GREEDY_HPP

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "d2dcache/errors.hpp"
#include "d2dcache/matrix.hpp"
#include "d2dcache/metrics.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// One rewired entry of column `file` in the source/delay tables.
struct SourceUpdate {
  int user;
  NodeId source;
  double delay;
};

// Outcome of evaluating one <file,user> placement. The updated source and
// delay tables differ from the inputs only in the listed rows of the file's
// column, so they are carried as a delta; apply() materializes them.
struct ImprovementResult {
  double gain = 0.0;
  int file = -1;
  std::vector<SourceUpdate> updates;

  void apply(Matrix<NodeId>& s, Matrix<double>& d) const {
    for (const SourceUpdate& u : updates) {
      s(static_cast<std::size_t>(u.user), static_cast<std::size_t>(file)) =
          u.source;
      d(static_cast<std::size_t>(u.user), static_cast<std::size_t>(file)) =
          u.delay;
    }
  }
};

namespace detail {

inline void check_plan_inputs(const WeightVector& omega,
                              const PopularityMatrix& pop,
                              const Matrix<double>& t_avg) {
  const std::size_t n = t_avg.rows();
  if (t_avg.cols() != n || pop.p.rows() != n || omega.omega.size() != n) {
    throw std::invalid_argument("plan input dimensions disagree");
  }
}

}  // namespace detail

// Reduction in eta from caching `file` at `user`, given the current best
// delays: the user's own requests drop to zero delay, and every user whose
// current best delay exceeds its link to the new holder is rerouted.
inline double improvement_gain(int user, int file, const CachingState& phi,
                               const WeightVector& omega,
                               const PopularityMatrix& pop,
                               const Matrix<double>& t_avg,
                               const Matrix<double>& d) {
  const std::size_t i = static_cast<std::size_t>(user);
  const std::size_t j = static_cast<std::size_t>(file);
  if (phi.phi(i, j) != 0) return 0.0;
  double gain = omega.omega[i] * pop.p(i, j) * d(i, j);
  for (std::size_t k = 0; k < d.rows(); ++k) {
    if (k == i) continue;
    const double link = t_avg(k, i);
    if (d(k, j) > link) {
      gain += omega.omega[k] * pop.p(k, j) * (d(k, j) - link);
    }
  }
  return gain;
}

// Gain plus the table rewiring for caching `file` at `user`. Inputs are not
// touched; a pair that is already cached yields gain 0 and no updates.
inline ImprovementResult delay_improvement(int user, int file,
                                           const CachingState& phi,
                                           const WeightVector& omega,
                                           const PopularityMatrix& pop,
                                           const Matrix<double>& t_avg,
                                           const Matrix<double>& d) {
  detail::check_plan_inputs(omega, pop, t_avg);
  const std::size_t i = static_cast<std::size_t>(user);
  const std::size_t j = static_cast<std::size_t>(file);
  if (i >= d.rows() || j >= d.cols()) {
    throw std::out_of_range("delay_improvement index out of range");
  }
  ImprovementResult result;
  result.file = file;
  if (phi.phi(i, j) != 0) return result;
  result.gain = omega.omega[i] * pop.p(i, j) * d(i, j);
  result.updates.push_back(SourceUpdate{user, node_of_user(user), 0.0});
  for (std::size_t k = 0; k < d.rows(); ++k) {
    if (k == i) continue;
    const double link = t_avg(k, i);
    if (d(k, j) > link) {
      result.gain += omega.omega[k] * pop.p(k, j) * (d(k, j) - link);
      result.updates.push_back(
          SourceUpdate{static_cast<int>(k), node_of_user(user), link});
    }
  }
  return result;
}

struct StepChoice {
  int user = -1;
  int file = -1;
  double gain = 0.0;
  std::int64_t evaluations = 0;
};

// One round of the placement loop: scans every <file,user> candidate in a
// row with spare capacity, commits the best one into phi and the tables, and
// reports how many candidates were evaluated. The comparison is strict, so
// the first maximizer in row-major order wins ties; when every remaining
// gain is zero the first feasible pair is placed, because a finished plan
// must fill all cache rows. `allowed`, when given, masks the candidate set
// per user (used by the budgeted re-planning).
inline StepChoice best_pair(CachingState& phi, DelayTables& tables,
                            const WeightVector& omega,
                            const PopularityMatrix& pop, int mu,
                            const Matrix<std::uint8_t>* allowed = nullptr) {
  const int n = static_cast<int>(tables.t_avg.rows());
  const int m = static_cast<int>(pop.p.cols());
  StepChoice choice;
  bool have = false;
  for (int i = 0; i < n; ++i) {
    if (phi.row_sum(i) >= mu) continue;
    for (int j = 0; j < m; ++j) {
      const std::size_t si = static_cast<std::size_t>(i);
      const std::size_t sj = static_cast<std::size_t>(j);
      if (phi.phi(si, sj) != 0) continue;
      if (allowed != nullptr && (*allowed)(si, sj) == 0) continue;
      ++choice.evaluations;
      const double g =
          improvement_gain(i, j, phi, omega, pop, tables.t_avg, tables.d);
      if (!have || g > choice.gain) {
        have = true;
        choice.user = i;
        choice.file = j;
        choice.gain = g;
      }
    }
  }
  if (!have) {
    throw PlanningCompleteError(
        "no placeable <file,user> pair: all cache rows are full or masked");
  }
  const ImprovementResult winner = delay_improvement(
      choice.user, choice.file, phi, omega, pop, tables.t_avg, tables.d);
  winner.apply(tables.s, tables.d);
  phi.phi(static_cast<std::size_t>(choice.user),
          static_cast<std::size_t>(choice.file)) = 1;
  return choice;
}

struct PlanStep {
  int iteration;  // 1-based
  int user;       // 0-based user index
  int file;       // 0-based file index
  double gain;
  double eta_after;
};

struct PlanTrace {
  std::vector<PlanStep> steps;
  std::int64_t candidate_evaluations = 0;
};

struct PlanResult {
  CachingState phi;
  DelayTables tables;
  PlanTrace trace;
  double eta_initial = 0.0;
  double eta_final = 0.0;
};

// Empty-cache starting point: every request is served by the base station.
inline DelayTables initial_tables(const Matrix<double>& t_avg, int n_files) {
  DelayTables tables;
  tables.t_avg = t_avg;
  tables.s = Matrix<NodeId>(t_avg.rows(), static_cast<std::size_t>(n_files),
                            kBaseStation);
  tables.d = Matrix<double>(t_avg.rows(), static_cast<std::size_t>(n_files));
  for (std::size_t i = 0; i < t_avg.rows(); ++i) {
    for (std::size_t j = 0; j < tables.d.cols(); ++j) {
      tables.d(i, j) = t_avg(i, i);
    }
  }
  return tables;
}

// The full placement loop: from empty caches, runs the best-pair step
// N*mu times, maintaining the source and delay tables incrementally and
// tracking eta by subtracting each committed gain.
inline PlanResult plan_cache(const WeightVector& omega,
                             const PopularityMatrix& pop,
                             const Matrix<double>& t_avg, int mu) {
  detail::check_plan_inputs(omega, pop, t_avg);
  const int n = static_cast<int>(t_avg.rows());
  const int m = pop.n_files();
  if (mu < 0 || mu > m) {
    throw std::invalid_argument("cache size must be in [0, n_files]");
  }
  PlanResult result;
  result.phi = CachingState(n, m);
  result.tables = initial_tables(t_avg, m);
  result.eta_initial = weighted_delay(omega, pop, result.tables.d);
  double eta = result.eta_initial;
  const int iterations = n * mu;
  result.trace.steps.reserve(static_cast<std::size_t>(iterations));
  for (int l = 1; l <= iterations; ++l) {
    const StepChoice choice = best_pair(result.phi, result.tables, omega, pop, mu);
    result.trace.candidate_evaluations += choice.evaluations;
    eta -= choice.gain;
    result.trace.steps.push_back(
        PlanStep{l, choice.user, choice.file, choice.gain, eta});
  }
  result.eta_final = eta;
  return result;
}

// Size of the search space claimed for the N*mu-step loop,
// N^2*M*mu - N^2*mu^2/2 + N*mu/2. The runtime counter can fall below this
// whenever a row fills before the loop's last pass over it, because a full
// row's unselected files stop being visited.
inline std::int64_t candidate_count(int n, int m, int mu) {
  if (mu > m) throw std::invalid_argument("cache size must not exceed n_files");
  const std::int64_t steps = static_cast<std::int64_t>(n) * mu;
  return static_cast<std::int64_t>(n) * n * m * mu - steps * (steps - 1) / 2;
}

// iteration,user,file,gain,eta rows with 1-based user and file ids.
inline void write_plan_trace(std::ostream& out, const PlanTrace& trace) {
  out << "iteration,user,file,gain,eta\n";
  char buf[80];
  for (const PlanStep& step : trace.steps) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g", step.iteration,
                  step.user + 1, step.file + 1, step.gain, step.eta_after);
    out << buf << "\n";
  }
}

}  // namespace d2d

#endif  // D2DCACHE_GREEDY_HPP
