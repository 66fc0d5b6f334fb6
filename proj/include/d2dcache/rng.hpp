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

#ifndef D2DCACHE_RNG_HPP
#define D2DCACHE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace d2d {

// SplitMix64. One 64-bit word of state, fixed update and output mix, so
// every stream is reproducible from its seed on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Modulo bias is below 2^-50 for the ranges
  // used here (n fits in 32 bits).
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Derives an independent substream seed from a base seed and a stream tag.
// The avalanche stage is the SplitMix64 output mix, so substreams of nearby
// tags do not correlate.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

// Inverse-CDF exponential draw with the given mean; u in [0, 1) maps to
// [0, inf), u = 0 maps to exactly 0.
inline double exponential_from_uniform(double mean, double u) {
  return -mean * std::log1p(-u);
}

}  // namespace d2d

#endif  // D2DCACHE_RNG_HPP
