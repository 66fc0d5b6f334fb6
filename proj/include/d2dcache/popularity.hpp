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

#ifndef D2DCACHE_POPULARITY_HPP
#define D2DCACHE_POPULARITY_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/matrix.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// Identical: every user ranks the files the same way. Independent: every row
// is its own uniform random permutation.
enum class PopularityMode { kIdentical, kIndependent };

inline std::string to_string(PopularityMode mode) {
  return mode == PopularityMode::kIdentical ? "identical" : "independent";
}

inline PopularityMode popularity_mode_from_string(const std::string& s) {
  if (s == "identical") return PopularityMode::kIdentical;
  if (s == "independent") return PopularityMode::kIndependent;
  throw std::invalid_argument("unknown popularity mode: " + s);
}

// Per-user popularity ranks; every row is a permutation of 1..M where the
// most popular file holds rank 1.
struct RankMatrix {
  Matrix<int> f;

  void validate() const {
    const int m = static_cast<int>(f.cols());
    std::vector<bool> seen(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < f.rows(); ++i) {
      std::fill(seen.begin(), seen.end(), false);
      for (std::size_t j = 0; j < f.cols(); ++j) {
        const int r = f(i, j);
        if (r < 1 || r > m || seen[static_cast<std::size_t>(r - 1)]) {
          throw std::invalid_argument("rank row is not a permutation of 1..M");
        }
        seen[static_cast<std::size_t>(r - 1)] = true;
      }
    }
  }
};

// Zipf pmf over a rank permutation: entry j is ranks[j]^-beta normalized by
// sum_{k=1..M} k^-beta.
inline std::vector<double> zipf_pmf(const std::vector<int>& ranks,
                                    double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  const int m = static_cast<int>(ranks.size());
  if (m == 0) throw std::invalid_argument("ranks must be non-empty");
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int r : ranks) {
    if (r < 1 || r > m || seen[static_cast<std::size_t>(r - 1)]) {
      throw std::invalid_argument("ranks must be a permutation of 1..M");
    }
    seen[static_cast<std::size_t>(r - 1)] = true;
  }
  double denom = 0.0;
  for (int k = 1; k <= m; ++k) {
    denom += std::pow(static_cast<double>(k), -beta);
  }
  std::vector<double> pmf(ranks.size());
  for (std::size_t j = 0; j < ranks.size(); ++j) {
    pmf[j] = std::pow(static_cast<double>(ranks[j]), -beta) / denom;
  }
  return pmf;
}

namespace detail {

// Fisher-Yates over values 1..m.
inline std::vector<int> random_permutation(int m, SplitMix64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = m - 1; i > 0; --i) {
    const auto k = rng.next_below(static_cast<std::uint64_t>(i) + 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[k]);
  }
  return perm;
}

}  // namespace detail

// Seeded rank generation. Identical mode draws one permutation and copies it
// to every row; independent mode draws one per row.
inline RankMatrix gen_ranks(PopularityMode mode, int n, int m,
                            std::uint64_t seed) {
  if (n < 1 || m < 1) {
    throw std::invalid_argument("gen_ranks requires n, m >= 1");
  }
  SplitMix64 rng(seed);
  RankMatrix ranks;
  ranks.f = Matrix<int>(static_cast<std::size_t>(n),
                        static_cast<std::size_t>(m));
  if (mode == PopularityMode::kIdentical) {
    const std::vector<int> perm = detail::random_permutation(m, rng);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        ranks.f(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            perm[static_cast<std::size_t>(j)];
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const std::vector<int> perm = detail::random_permutation(m, rng);
      for (int j = 0; j < m; ++j) {
        ranks.f(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            perm[static_cast<std::size_t>(j)];
      }
    }
  }
  return ranks;
}

inline PopularityMatrix popularity_from_ranks(const RankMatrix& ranks,
                                              double beta) {
  PopularityMatrix pop;
  pop.p = Matrix<double>(ranks.f.rows(), ranks.f.cols());
  std::vector<int> row(ranks.f.cols());
  for (std::size_t i = 0; i < ranks.f.rows(); ++i) {
    for (std::size_t j = 0; j < ranks.f.cols(); ++j) row[j] = ranks.f(i, j);
    const std::vector<double> pmf = zipf_pmf(row, beta);
    for (std::size_t j = 0; j < ranks.f.cols(); ++j) pop.p(i, j) = pmf[j];
  }
  return pop;
}

inline PopularityMatrix gen_popularity(PopularityMode mode, double beta, int n,
                                       int m, std::uint64_t seed) {
  return popularity_from_ranks(gen_ranks(mode, n, m, seed), beta);
}

}  // namespace d2d

#endif  // D2DCACHE_POPULARITY_HPP
