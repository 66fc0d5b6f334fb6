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

#ifndef D2DCACHE_CHANNEL_HPP
#define D2DCACHE_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "d2dcache/errors.hpp"
#include "d2dcache/matrix.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// Everything a single transmitter-receiver link needs for a delay estimate.
struct LinkParams {
  double tx_power_linear;  // 10^(dB/10)
  double distance_m;
  double bandwidth_hz;
  double noise_power;
  double block_duration_s;
  double file_size_bits;

  void validate() const {
    if (!(tx_power_linear > 0) || !(distance_m > 0) || !(bandwidth_hz > 0) ||
        !(noise_power > 0) || !(block_duration_s > 0) ||
        !(file_size_bits > 0)) {
      throw std::invalid_argument("link parameters must be strictly positive");
    }
  }
};

inline LinkParams bs_link(const SystemConfig& cfg, const Topology& topo,
                          int user) {
  return LinkParams{db_to_linear(cfg.bs_power_db),
                    topo.dist_user_bs[static_cast<std::size_t>(user)],
                    cfg.bandwidth_hz,
                    cfg.noise_power,
                    cfg.block_duration_s,
                    cfg.file_size_bits};
}

// Link for `receiver` listening to `transmitter`; the transmitter's power
// applies.
inline LinkParams d2d_link(const SystemConfig& cfg, const Topology& topo,
                           int receiver, int transmitter) {
  return LinkParams{db_to_linear(cfg.user_power_db_of(transmitter)),
                    topo.dist_user_user(static_cast<std::size_t>(receiver),
                                        static_cast<std::size_t>(transmitter)),
                    cfg.bandwidth_hz,
                    cfg.noise_power,
                    cfg.block_duration_s,
                    cfg.file_size_bits};
}

struct DelayEstimate {
  double mean_blocks = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

// Rayleigh fading with distance path loss: the channel gain magnitude-square
// is exponential with mean d^-alpha, i.i.d. across blocks.
struct RayleighFading {
  double mean_gain;

  RayleighFading(double distance_m, double pathloss_exponent)
      : mean_gain(std::pow(distance_m, -pathloss_exponent)) {
    if (!(distance_m > 0)) {
      throw std::invalid_argument("distance must be positive");
    }
  }

  double operator()(SplitMix64& rng) const {
    return exponential_from_uniform(mean_gain, rng.next_double());
  }
};

inline double sample_fading(double distance_m, double pathloss_exponent,
                            SplitMix64& rng) {
  return RayleighFading(distance_m, pathloss_exponent)(rng);
}

// Instantaneous capacity of one block, B log2(1 + P z / (B sigma^2)).
inline double block_capacity(const LinkParams& link, double z) {
  if (z < 0) throw std::invalid_argument("channel gain must be non-negative");
  return link.bandwidth_hz *
         std::log2(1.0 + link.tx_power_linear * z /
                             (link.bandwidth_hz * link.noise_power));
}

inline constexpr std::int64_t kDefaultBlockCap = 1'000'000;

// A fading model is anything callable as double(SplitMix64&): it draws one
// power gain per block.
template <typename Fading>
concept FadingModel = std::is_invocable_r_v<double, Fading&, SplitMix64&>;

// Number of blocks until the accumulated per-block payload reaches the file
// size, fading redrawn independently each block. Throws CappedSampleError
// when a sample would exceed `cap` blocks.
template <FadingModel Fading>
std::int64_t sample_transmission_blocks(const LinkParams& link,
                                        SplitMix64& rng, Fading&& fading,
                                        std::int64_t cap = kDefaultBlockCap) {
  double delivered = 0.0;
  std::int64_t blocks = 0;
  while (delivered < link.file_size_bits) {
    if (blocks >= cap) {
      std::ostringstream msg;
      msg << "transmission sample exceeded the block cap (" << cap
          << " blocks) at distance " << link.distance_m << " with power "
          << link.tx_power_linear;
      throw CappedSampleError(msg.str(), cap, 1, blocks);
    }
    const double z = fading(rng);
    delivered += link.block_duration_s * block_capacity(link, z);
    ++blocks;
  }
  return blocks;
}

inline std::int64_t sample_transmission_blocks(
    const LinkParams& link, double pathloss_exponent, SplitMix64& rng,
    std::int64_t cap = kDefaultBlockCap) {
  return sample_transmission_blocks(
      link, rng, RayleighFading(link.distance_m, pathloss_exponent), cap);
}

// Monte Carlo estimate of the expected per-file delay on a link. All
// n_samples draws are attempted; if any hits the cap the estimate is
// abandoned and the error reports how many draws capped.
template <FadingModel Fading>
DelayEstimate estimate_avg_delay(const LinkParams& link, std::int64_t n_samples,
                                 std::uint64_t seed, Fading&& fading,
                                 std::int64_t cap = kDefaultBlockCap) {
  link.validate();
  if (n_samples < 1) {
    throw std::invalid_argument("n_samples must be positive");
  }
  SplitMix64 rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t capped = 0;
  for (std::int64_t k = 0; k < n_samples; ++k) {
    try {
      const double t = static_cast<double>(
          sample_transmission_blocks(link, rng, fading, cap));
      sum += t;
      sum_sq += t * t;
    } catch (const CappedSampleError&) {
      ++capped;
    }
  }
  if (capped > 0) {
    std::ostringstream msg;
    msg << capped << " of " << n_samples
        << " delay samples exceeded the block cap (" << cap
        << " blocks) at distance " << link.distance_m;
    throw CappedSampleError(msg.str(), cap, capped, n_samples);
  }
  DelayEstimate est;
  est.n_samples = n_samples;
  est.mean_blocks = sum / static_cast<double>(n_samples);
  if (n_samples > 1) {
    const double n = static_cast<double>(n_samples);
    double var = (sum_sq - sum * sum / n) / (n - 1.0);
    if (var < 0.0) var = 0.0;  // rounding when all samples coincide
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

inline DelayEstimate estimate_avg_delay(const LinkParams& link,
                                        double pathloss_exponent,
                                        std::int64_t n_samples,
                                        std::uint64_t seed,
                                        std::int64_t cap = kDefaultBlockCap) {
  return estimate_avg_delay(link, n_samples, seed,
                            RayleighFading(link.distance_m, pathloss_exponent),
                            cap);
}

// Builds the N x N expected-delay table. Entry (i, j) is the link where user
// i receives from user j; the diagonal is each user's base-station link.
// Every entry draws from its own substream, mix(seed, i, j) with i <= j under
// uniform user power, so the table is independent of evaluation order. With
// per-user powers each ordered pair gets its own stream and the table is
// direction dependent.
inline Matrix<double> build_delay_table(const Topology& topo,
                                        const SystemConfig& cfg,
                                        std::int64_t n_samples,
                                        std::uint64_t seed) {
  cfg.validate();
  topo.validate(cfg.cell_radius_m);
  const int n = topo.n_users();
  if (n != cfg.n_users) {
    throw std::invalid_argument("topology size does not match config");
  }
  Matrix<double> t_avg(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const LinkParams link = bs_link(cfg, topo, i);
    const auto sub = mix_seed(seed, static_cast<std::uint64_t>(i),
                              static_cast<std::uint64_t>(i));
    t_avg(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) =
        estimate_avg_delay(link, cfg.pathloss_exponent, n_samples, sub,
                           cfg.max_blocks_cap)
            .mean_blocks;
  }
  if (cfg.uniform_user_power()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const LinkParams link = d2d_link(cfg, topo, i, j);
        const auto sub = mix_seed(seed, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j));
        const double mean =
            estimate_avg_delay(link, cfg.pathloss_exponent, n_samples, sub,
                               cfg.max_blocks_cap)
                .mean_blocks;
        t_avg(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = mean;
        t_avg(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = mean;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const LinkParams link = d2d_link(cfg, topo, i, j);
        const auto sub = mix_seed(seed, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j));
        t_avg(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            estimate_avg_delay(link, cfg.pathloss_exponent, n_samples, sub,
                               cfg.max_blocks_cap)
                .mean_blocks;
      }
    }
  }
  return t_avg;
}

// On-disk cache of a delay table: two comment header lines carrying the
// shape and provenance, then N row-major CSV rows at full precision.
inline void save_delay_table(std::ostream& out, const Matrix<double>& t_avg,
                             std::uint64_t seed, std::int64_t n_samples) {
  out << "# d2d delay table v1\n";
  out << "# n=" << t_avg.rows() << " seed=" << seed
      << " n_samples=" << n_samples << "\n";
  char buf[64];
  for (std::size_t i = 0; i < t_avg.rows(); ++i) {
    for (std::size_t j = 0; j < t_avg.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", t_avg(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

struct DelayTableFile {
  Matrix<double> t_avg;
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;
};

inline DelayTableFile load_delay_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# d2d delay table", 0) != 0) {
    throw std::invalid_argument("not a delay table file");
  }
  if (!std::getline(in, line)) {
    throw std::invalid_argument("missing delay table header");
  }
  DelayTableFile file;
  std::size_t n = 0;
  {
    std::istringstream hdr(line);
    std::string tok;
    hdr >> tok;  // '#'
    while (hdr >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "n") n = std::stoul(val);
      if (key == "seed") file.seed = std::stoull(val);
      if (key == "n_samples") file.n_samples = std::stoll(val);
    }
  }
  if (n == 0) throw std::invalid_argument("delay table header missing n");
  file.t_avg = Matrix<double>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("delay table truncated");
    }
    std::istringstream row(line);
    std::string cell;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::invalid_argument("delay table row too short");
      }
      file.t_avg(i, j) = std::stod(cell);
    }
  }
  return file;
}

}  // namespace d2d

#endif  // D2DCACHE_CHANNEL_HPP
