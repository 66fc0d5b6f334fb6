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

#ifndef D2DCACHE_SOURCE_SELECTION_HPP
#define D2DCACHE_SOURCE_SELECTION_HPP

#include <stdexcept>
#include <utility>

#include "d2dcache/matrix.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

struct SourceChoice {
  NodeId source = kBaseStation;
  double delay = 0.0;
};

// Best holder of file j for user i: the node (base station or a caching
// user) with the lowest expected link delay. Ties go to the base station,
// then to the lowest user index. A user that caches the file serves itself
// at zero delay.
inline SourceChoice best_source(int user, int file, const Matrix<double>& t_avg,
                                const CachingState& phi) {
  const std::size_t i = static_cast<std::size_t>(user);
  const std::size_t j = static_cast<std::size_t>(file);
  if (i >= phi.phi.rows() || j >= phi.phi.cols() || t_avg.rows() != phi.phi.rows()) {
    throw std::out_of_range("best_source index out of range");
  }
  if (phi.phi(i, j) != 0) {
    return SourceChoice{node_of_user(user), 0.0};
  }
  SourceChoice best{kBaseStation, t_avg(i, i)};
  for (std::size_t k = 0; k < phi.phi.rows(); ++k) {
    if (k == i || phi.phi(k, j) == 0) continue;
    const double delay = t_avg(i, k);
    if (delay < best.delay) {
      best = SourceChoice{node_of_user(static_cast<int>(k)), delay};
    }
  }
  return best;
}

// Entrywise best_source over all (user, file) pairs. Returns the full table
// set with t_avg copied in.
inline DelayTables build_source_tables(const Matrix<double>& t_avg,
                                       const CachingState& phi) {
  if (t_avg.rows() != t_avg.cols() || t_avg.rows() != phi.phi.rows()) {
    throw std::invalid_argument("t_avg and phi dimensions disagree");
  }
  DelayTables tables;
  tables.t_avg = t_avg;
  tables.d = Matrix<double>(phi.phi.rows(), phi.phi.cols());
  tables.s = Matrix<NodeId>(phi.phi.rows(), phi.phi.cols());
  for (std::size_t i = 0; i < phi.phi.rows(); ++i) {
    for (std::size_t j = 0; j < phi.phi.cols(); ++j) {
      const SourceChoice choice =
          best_source(static_cast<int>(i), static_cast<int>(j), t_avg, phi);
      tables.s(i, j) = choice.source;
      tables.d(i, j) = choice.delay;
    }
  }
  return tables;
}

}  // namespace d2d

#endif  // D2DCACHE_SOURCE_SELECTION_HPP
