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

#ifndef D2DCACHE_DYNAMIC_HPP
#define D2DCACHE_DYNAMIC_HPP

#include <cstdint>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "d2dcache/greedy.hpp"
#include "d2dcache/matrix.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// One update cycle's inputs. All of them are taken as given: whatever
// estimates or predicts them sits outside this module and hands the
// matrices over (CycleProvider below).
struct CycleParams {
  int kappa = 0;
  WeightVector omega;
  PopularityMatrix p;
  Matrix<double> t_avg;
  std::vector<int> xi;    // per-user replacement budget
  CachingState prev_phi;  // placement at the end of cycle kappa-1
  double tau = 0.0;       // cycle duration, reporting only

  void validate(int mu) const {
    const std::size_t n = t_avg.rows();
    if (xi.size() != n || prev_phi.phi.rows() != n) {
      throw std::invalid_argument("cycle parameter dimensions disagree");
    }
    for (int x : xi) {
      if (x < 0) throw std::invalid_argument("replacement budget negative");
      if (x > mu) {
        throw std::invalid_argument("replacement budget exceeds cache size");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (prev_phi.row_sum(static_cast<int>(i)) != mu) {
        throw std::invalid_argument(
            "previous placement must fill every cache row");
      }
    }
  }
};

struct CycleResult {
  int kappa = 0;
  CachingState phi;
  DelayTables tables;
  PlanTrace trace;
  double eta_initial = 0.0;
  double eta_final = 0.0;
  std::vector<int> replacements;  // files per user not kept from prev cache
};

// Re-plans one cycle under the replacement budget. The greedy loop runs from
// empty caches; each time a user commits a file outside its previous cache
// that uses one unit of its budget, and a user whose budget is spent may
// only pick from its previous cache for the rest of the loop. The final
// placement therefore differs from the previous one by at most 2*xi_i
// entries per user row.
inline CycleResult plan_cycle(const CycleParams& params, int mu) {
  detail::check_plan_inputs(params.omega, params.p, params.t_avg);
  params.validate(mu);
  const int n = static_cast<int>(params.t_avg.rows());
  const int m = params.p.n_files();

  CycleResult result;
  result.kappa = params.kappa;
  result.phi = CachingState(n, m);
  result.tables = initial_tables(params.t_avg, m);
  result.eta_initial = weighted_delay(params.omega, params.p, result.tables.d);
  result.replacements.assign(static_cast<std::size_t>(n), 0);

  Matrix<std::uint8_t> allowed(static_cast<std::size_t>(n),
                               static_cast<std::size_t>(m), 1);
  auto restrict_user = [&](int i) {
    for (int j = 0; j < m; ++j) {
      allowed(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          params.prev_phi.phi(static_cast<std::size_t>(i),
                              static_cast<std::size_t>(j));
    }
  };
  for (int i = 0; i < n; ++i) {
    if (result.replacements[static_cast<std::size_t>(i)] >=
        params.xi[static_cast<std::size_t>(i)]) {
      restrict_user(i);
    }
  }

  double eta = result.eta_initial;
  const int iterations = n * mu;
  for (int l = 1; l <= iterations; ++l) {
    const StepChoice choice = best_pair(result.phi, result.tables, params.omega,
                                        params.p, mu, &allowed);
    result.trace.candidate_evaluations += choice.evaluations;
    eta -= choice.gain;
    result.trace.steps.push_back(
        PlanStep{l, choice.user, choice.file, choice.gain, eta});
    const std::size_t ci = static_cast<std::size_t>(choice.user);
    const std::size_t cj = static_cast<std::size_t>(choice.file);
    if (params.prev_phi.phi(ci, cj) == 0) {
      if (++result.replacements[ci] >= params.xi[ci]) {
        restrict_user(choice.user);
      }
    }
  }
  result.eta_final = eta;
  return result;
}

// Supplies per-cycle parameters. The default pipeline replays ground-truth
// matrices; anything smarter (estimation, prediction) plugs in behind the
// same interface.
struct CycleInputs {
  WeightVector omega;
  PopularityMatrix p;
  Matrix<double> t_avg;
  std::vector<int> xi;
  double tau = 0.0;
};

class CycleProvider {
 public:
  virtual ~CycleProvider() = default;
  virtual CycleInputs inputs_for(int kappa) = 0;
};

class ReplayCycleProvider : public CycleProvider {
 public:
  explicit ReplayCycleProvider(std::vector<CycleInputs> sequence)
      : sequence_(std::move(sequence)) {}

  CycleInputs inputs_for(int kappa) override {
    if (kappa < 0 || static_cast<std::size_t>(kappa) >= sequence_.size()) {
      throw std::out_of_range("no inputs recorded for this cycle");
    }
    return sequence_[static_cast<std::size_t>(kappa)];
  }

 private:
  std::vector<CycleInputs> sequence_;
};

// Chains plan_cycle over consecutive cycles, feeding each result's placement
// into the next cycle's constraint.
inline std::vector<CycleResult> run_cycles(CycleProvider& provider,
                                           int first_kappa, int n_cycles,
                                           int mu,
                                           const CachingState& initial_phi) {
  std::vector<CycleResult> results;
  results.reserve(static_cast<std::size_t>(n_cycles));
  CachingState prev = initial_phi;
  for (int c = 0; c < n_cycles; ++c) {
    const int kappa = first_kappa + c;
    const CycleInputs inputs = provider.inputs_for(kappa);
    CycleParams params;
    params.kappa = kappa;
    params.omega = inputs.omega;
    params.p = inputs.p;
    params.t_avg = inputs.t_avg;
    params.xi = inputs.xi;
    params.prev_phi = prev;
    params.tau = inputs.tau;
    results.push_back(plan_cycle(params, mu));
    prev = results.back().phi;
  }
  return results;
}

// kappa,user,replacements,eta rows with 1-based user ids.
inline void write_cycle_trace(std::ostream& out,
                              const std::vector<CycleResult>& cycles) {
  out << "kappa,user,replacements,eta\n";
  char buf[80];
  for (const CycleResult& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.replacements.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g", cycle.kappa,
                    static_cast<int>(i) + 1, cycle.replacements[i],
                    cycle.eta_final);
      out << buf << "\n";
    }
  }
}

}  // namespace d2d

#endif  // D2DCACHE_DYNAMIC_HPP
