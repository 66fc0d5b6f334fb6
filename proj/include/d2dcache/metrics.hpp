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

#ifndef D2DCACHE_METRICS_HPP
#define D2DCACHE_METRICS_HPP

#include <stdexcept>

#include "d2dcache/matrix.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// Expected delay, in blocks, of the requests generated by one user:
// sum_j P(i,j) * D(i,j).
inline double user_avg_delay(int user, const PopularityMatrix& pop,
                             const Matrix<double>& best_delay) {
  if (user < 0 || user >= pop.n_users()) {
    throw std::out_of_range("user index out of range");
  }
  if (pop.p.rows() != best_delay.rows() || pop.p.cols() != best_delay.cols()) {
    throw std::invalid_argument("popularity and delay dimensions disagree");
  }
  const std::size_t i = static_cast<std::size_t>(user);
  double sum = 0.0;
  for (std::size_t j = 0; j < best_delay.cols(); ++j) {
    sum += pop.p(i, j) * best_delay(i, j);
  }
  return sum;
}

// Weighted average delay eta = sum_i omega_i sum_j P(i,j) D(i,j).
inline double weighted_delay(const WeightVector& omega,
                             const PopularityMatrix& pop,
                             const Matrix<double>& best_delay) {
  if (omega.omega.size() != best_delay.rows() ||
      pop.p.rows() != best_delay.rows() ||
      pop.p.cols() != best_delay.cols()) {
    throw std::invalid_argument("weighted_delay dimension mismatch");
  }
  double eta = 0.0;
  for (std::size_t i = 0; i < best_delay.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < best_delay.cols(); ++j) {
      row += pop.p(i, j) * best_delay(i, j);
    }
    eta += omega.omega[i] * row;
  }
  return eta;
}

// System throughput in bits per block, N_c * F / eta.
inline double throughput(double eta, const SystemConfig& cfg) {
  if (!(eta > 0.0)) {
    throw std::domain_error("throughput requires eta > 0");
  }
  return cfg.n_channels * cfg.file_size_bits / eta;
}

}  // namespace d2d

#endif  // D2DCACHE_METRICS_HPP
