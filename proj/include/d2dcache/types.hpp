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

#ifndef D2DCACHE_TYPES_HPP
#define D2DCACHE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/matrix.hpp"

namespace d2d {

// Node identifiers: 0 is the base station, 1..N are the users. Source tables
// use this encoding everywhere; user-indexed matrices stay 0-based.
using NodeId = int;
inline constexpr NodeId kBaseStation = 0;

inline NodeId node_of_user(int user) { return user + 1; }
inline int user_of_node(NodeId node) { return node - 1; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// All scalar parameters of the system model. Defaults reproduce the
// reference cell: a 100-file library, 11.3-bit files, 23 dB base station and
// 20 dB users over unit-radius d^-4 path loss, with bandwidth, noise and
// block duration normalized to 1 so powers in dB act directly as SNR.
struct SystemConfig {
  int n_users = 25;
  int n_files = 100;
  int cache_size = 30;
  double bandwidth_hz = 1.0;
  double noise_power = 1.0;
  double block_duration_s = 1.0;
  double file_size_bits = 11.3;
  int n_channels = 1;
  double bs_power_db = 23.0;
  double user_power_db = 20.0;
  // When non-empty, per-user transmit powers; overrides user_power_db and
  // makes the delay table direction dependent.
  std::vector<double> user_powers_db;
  double cell_radius_m = 1.0;
  double pathloss_exponent = 4.0;
  double zipf_beta = 0.1;
  // Channel allocation probabilities p-hat; empty means uniform 1/N.
  std::vector<double> channel_alloc_probs;
  std::int64_t max_blocks_cap = 1'000'000;

  std::vector<double> alloc_probs_or_uniform() const {
    if (!channel_alloc_probs.empty()) return channel_alloc_probs;
    return std::vector<double>(static_cast<std::size_t>(n_users),
                               1.0 / n_users);
  }

  double user_power_db_of(int user) const {
    if (!user_powers_db.empty()) {
      return user_powers_db[static_cast<std::size_t>(user)];
    }
    return user_power_db;
  }

  bool uniform_user_power() const {
    if (user_powers_db.empty()) return true;
    for (double p : user_powers_db) {
      if (p != user_powers_db.front()) return false;
    }
    return true;
  }

  void validate() const {
    if (n_users < 1) throw std::invalid_argument("n_users must be positive");
    if (n_files < 1) throw std::invalid_argument("n_files must be positive");
    if (cache_size < 0) {
      throw std::invalid_argument("cache_size must be non-negative");
    }
    if (cache_size > n_files) {
      throw std::invalid_argument("cache_size must not exceed n_files");
    }
    if (!(bandwidth_hz > 0)) {
      throw std::invalid_argument("bandwidth_hz must be positive");
    }
    if (!(noise_power > 0)) {
      throw std::invalid_argument("noise_power must be positive");
    }
    if (!(block_duration_s > 0)) {
      throw std::invalid_argument("block_duration_s must be positive");
    }
    if (!(file_size_bits > 0)) {
      throw std::invalid_argument("file_size_bits must be positive");
    }
    if (n_channels < 1) {
      throw std::invalid_argument("n_channels must be positive");
    }
    if (!(cell_radius_m > 0)) {
      throw std::invalid_argument("cell_radius_m must be positive");
    }
    if (!(pathloss_exponent > 0)) {
      throw std::invalid_argument("pathloss_exponent must be positive");
    }
    if (zipf_beta < 0) {
      throw std::invalid_argument("zipf_beta must be non-negative");
    }
    if (max_blocks_cap < 1) {
      throw std::invalid_argument("max_blocks_cap must be positive");
    }
    if (!user_powers_db.empty() &&
        user_powers_db.size() != static_cast<std::size_t>(n_users)) {
      throw std::invalid_argument("user_powers_db must have one entry per user");
    }
    if (!channel_alloc_probs.empty()) {
      if (channel_alloc_probs.size() != static_cast<std::size_t>(n_users)) {
        throw std::invalid_argument(
            "channel_alloc_probs must have one entry per user");
      }
      double sum = 0.0;
      for (double p : channel_alloc_probs) {
        if (p < 0.0 || p > 1.0) {
          throw std::invalid_argument(
              "channel_alloc_probs entries must be in [0,1]");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("channel_alloc_probs must sum to 1");
      }
    }
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double euclidean(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// User and base-station positions with the derived distance tables.
struct Topology {
  std::vector<Point2> user_positions;
  Point2 bs_position;
  Matrix<double> dist_user_user;  // N x N, zero diagonal
  std::vector<double> dist_user_bs;

  Topology() = default;

  Topology(std::vector<Point2> users, Point2 bs)
      : user_positions(std::move(users)), bs_position(bs) {
    const std::size_t n = user_positions.size();
    dist_user_user = Matrix<double>(n, n, 0.0);
    dist_user_bs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      dist_user_bs[i] = euclidean(user_positions[i], bs_position);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = euclidean(user_positions[i], user_positions[j]);
        dist_user_user(i, j) = d;
        dist_user_user(j, i) = d;
      }
    }
  }

  int n_users() const { return static_cast<int>(user_positions.size()); }

  // Checks distance consistency against positions and the cell radius.
  void validate(double cell_radius_m) const {
    const std::size_t n = user_positions.size();
    if (dist_user_user.rows() != n || dist_user_user.cols() != n ||
        dist_user_bs.size() != n) {
      throw std::invalid_argument("topology tables do not match positions");
    }
    auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (dist_user_user(i, i) != 0.0) {
        throw std::invalid_argument("distance diagonal must be zero");
      }
      if (!close(dist_user_bs[i], euclidean(user_positions[i], bs_position))) {
        throw std::invalid_argument("user-BS distance inconsistent");
      }
      if (dist_user_bs[i] > cell_radius_m * (1.0 + 1e-9)) {
        throw std::invalid_argument("user outside the cell radius");
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = euclidean(user_positions[i], user_positions[j]);
        if (!close(dist_user_user(i, j), d) ||
            dist_user_user(i, j) != dist_user_user(j, i)) {
          throw std::invalid_argument("user-user distance inconsistent");
        }
      }
    }
  }
};

// N x M request probabilities, one row per user.
struct PopularityMatrix {
  Matrix<double> p;

  int n_users() const { return static_cast<int>(p.rows()); }
  int n_files() const { return static_cast<int>(p.cols()); }

  void validate() const {
    for (std::size_t i = 0; i < p.rows(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j) {
        const double v = p(i, j);
        if (v < 0.0 || v > 1.0) {
          throw std::invalid_argument("popularity entries must be in [0,1]");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("popularity rows must sum to 1");
      }
    }
  }
};

// Binary placement matrix, at most mu files per user row.
struct CachingState {
  Matrix<std::uint8_t> phi;

  CachingState() = default;
  CachingState(int n_users, int n_files)
      : phi(static_cast<std::size_t>(n_users), static_cast<std::size_t>(n_files),
            0) {}

  int n_users() const { return static_cast<int>(phi.rows()); }
  int n_files() const { return static_cast<int>(phi.cols()); }

  int row_sum(int user) const {
    int s = 0;
    for (std::size_t j = 0; j < phi.cols(); ++j) {
      s += phi(static_cast<std::size_t>(user), j);
    }
    return s;
  }

  void validate(int mu, bool require_full = false) const {
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      int s = 0;
      for (std::size_t j = 0; j < phi.cols(); ++j) {
        if (phi(i, j) > 1) {
          throw std::invalid_argument("placement entries must be 0 or 1");
        }
        s += phi(i, j);
      }
      if (s > mu) throw std::invalid_argument("cache row exceeds capacity");
      if (require_full && s != mu) {
        throw std::invalid_argument("completed plan must fill every cache row");
      }
    }
  }

  friend bool operator==(const CachingState& a, const CachingState& b) {
    return a.phi == b.phi;
  }
  friend bool operator!=(const CachingState& a, const CachingState& b) {
    return !(a == b);
  }
};

struct WeightVector {
  std::vector<double> omega;

  static WeightVector uniform(int n_users) {
    return WeightVector{std::vector<double>(
        static_cast<std::size_t>(n_users), 1.0 / n_users)};
  }

  void validate() const {
    for (double w : omega) {
      if (w < 0.0 || w > 1.0) {
        throw std::invalid_argument("weights must be in [0,1]");
      }
    }
  }
};

// Expected-delay tables. t_avg(i, j) is the expected block count for user i
// receiving from user j; the diagonal t_avg(i, i) is the base-station link of
// user i. d and s hold the per-(user, file) best delay and best source node.
struct DelayTables {
  Matrix<double> t_avg;  // N x N
  Matrix<double> d;      // N x M
  Matrix<NodeId> s;      // N x M, node ids

  // Consistency of (s, d) with (t_avg, phi); used by tests and debug paths.
  void validate(const CachingState& phi) const {
    const std::size_t n = t_avg.rows();
    const std::size_t m = d.cols();
    if (t_avg.cols() != n || d.rows() != n || s.rows() != n || s.cols() != m) {
      throw std::invalid_argument("delay table dimensions disagree");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double dij = d(i, j);
        if (dij < 0.0 || dij > t_avg(i, i)) {
          throw std::invalid_argument("best delay outside [0, bs delay]");
        }
        const bool cached = phi.phi(i, j) != 0;
        if ((dij == 0.0) != cached) {
          throw std::invalid_argument("zero delay must match self-caching");
        }
        const NodeId src = s(i, j);
        if (src == kBaseStation) {
          if (dij != t_avg(i, i)) {
            throw std::invalid_argument("BS-sourced delay must equal BS link");
          }
        } else {
          const std::size_t k = static_cast<std::size_t>(user_of_node(src));
          if (k != i) {
            if (d(i, j) != t_avg(i, k) || phi.phi(k, j) == 0) {
              throw std::invalid_argument("user source must cache the file");
            }
          }
        }
      }
    }
  }
};

}  // namespace d2d

#endif  // D2DCACHE_TYPES_HPP
