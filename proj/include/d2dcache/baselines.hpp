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

#ifndef D2DCACHE_BASELINES_HPP
#define D2DCACHE_BASELINES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "d2dcache/errors.hpp"
#include "d2dcache/matrix.hpp"
#include "d2dcache/metrics.hpp"
#include "d2dcache/source_selection.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// Channel-blind baseline: every user caches its mu most popular files, ties
// broken toward the lower file index.
inline CachingState naive_plan(const PopularityMatrix& pop, int mu) {
  const int n = pop.n_users();
  const int m = pop.n_files();
  if (mu < 0 || mu > m) {
    throw std::invalid_argument("cache size must be in [0, n_files]");
  }
  CachingState phi(n, m);
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pop.p(static_cast<std::size_t>(i), static_cast<std::size_t>(a)) >
             pop.p(static_cast<std::size_t>(i), static_cast<std::size_t>(b));
    });
    for (int r = 0; r < mu; ++r) {
      phi.phi(static_cast<std::size_t>(i),
              static_cast<std::size_t>(order[static_cast<std::size_t>(r)])) = 1;
    }
  }
  return phi;
}

struct ExhaustiveResult {
  CachingState phi;
  double eta = 0.0;
  std::uint64_t combinations = 0;
};

namespace detail {

inline std::uint64_t binomial_saturating(int m, int mu, std::uint64_t limit) {
  // C(m, mu) with early saturation at `limit`.
  if (mu < 0 || mu > m) return 0;
  mu = std::min(mu, m - mu);
  std::uint64_t result = 1;
  for (int k = 1; k <= mu; ++k) {
    const double next = static_cast<double>(result) *
                        (static_cast<double>(m - mu + k) / k);
    if (next > static_cast<double>(limit) * 2.0) return limit + 1;
    result = result * static_cast<std::uint64_t>(m - mu + k) /
             static_cast<std::uint64_t>(k);
    if (result > limit) return limit + 1;
  }
  return result;
}

inline std::uint64_t pow_saturating(std::uint64_t base, int exp,
                                    std::uint64_t limit) {
  std::uint64_t result = 1;
  for (int k = 0; k < exp; ++k) {
    if (base != 0 && result > limit / base) return limit + 1;
    result *= base;
    if (result > limit) return limit + 1;
  }
  return result;
}

// Subsets of {0..m-1} of size mu, ordered so their indicator vectors come
// out in lexicographic order.
inline std::vector<std::vector<int>> subsets_in_indicator_order(int m, int mu) {
  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (remaining == 0) {
      subsets.push_back(current);
      return;
    }
    if (m - pos < remaining) return;
    // indicator 0 before indicator 1 at every position
    rec(pos + 1, remaining);
    current.push_back(pos);
    rec(pos + 1, remaining - 1);
    current.pop_back();
  };
  rec(0, mu);
  return subsets;
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 10'000'000;

// Brute-force optimum: enumerates every per-user mu-subset assignment,
// scores each placement from scratch, and keeps the minimizer. Assignments
// are visited in lexicographic order of the flattened placement matrix and
// the comparison is strict, so ties resolve to the lexicographically
// smallest placement. Refuses to start when C(M,mu)^N exceeds the budget.
// `observer`, when set, sees every (combination index, eta) pair.
inline ExhaustiveResult exhaustive_plan(
    const WeightVector& omega, const PopularityMatrix& pop,
    const Matrix<double>& t_avg, int mu,
    std::uint64_t budget = kDefaultExhaustiveBudget,
    const std::function<void(std::uint64_t, double)>& observer = nullptr) {
  const int n = pop.n_users();
  const int m = pop.n_files();
  if (mu < 0 || mu > m) {
    throw std::invalid_argument("cache size must be in [0, n_files]");
  }
  if (omega.omega.size() != static_cast<std::size_t>(n) ||
      t_avg.rows() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("exhaustive_plan dimensions disagree");
  }
  const std::uint64_t per_user = detail::binomial_saturating(m, mu, budget);
  const std::uint64_t total = detail::pow_saturating(per_user, n, budget);
  if (total > budget) {
    throw BudgetExceededError(
        "exhaustive search would evaluate more combinations than the budget "
        "allows",
        total, budget);
  }

  const std::vector<std::vector<int>> subsets =
      detail::subsets_in_indicator_order(m, mu);
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  ExhaustiveResult best;
  bool have = false;
  std::uint64_t index = 0;
  CachingState phi(n, m);
  while (true) {
    // materialize the placement for the current odometer state
    phi.phi.fill(0);
    for (int i = 0; i < n; ++i) {
      for (int j : subsets[pick[static_cast<std::size_t>(i)]]) {
        phi.phi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1;
      }
    }
    const DelayTables tables = build_source_tables(t_avg, phi);
    const double eta = weighted_delay(omega, pop, tables.d);
    if (observer) observer(index, eta);
    if (!have || eta < best.eta) {
      have = true;
      best.phi = phi;
      best.eta = eta;
    }
    ++index;
    // advance the odometer, user N-1 fastest so user 0 is most significant
    int level = n - 1;
    while (level >= 0) {
      if (++pick[static_cast<std::size_t>(level)] < subsets.size()) break;
      pick[static_cast<std::size_t>(level)] = 0;
      --level;
    }
    if (level < 0) break;
  }
  best.combinations = index;
  return best;
}

}  // namespace d2d

#endif  // D2DCACHE_BASELINES_HPP
