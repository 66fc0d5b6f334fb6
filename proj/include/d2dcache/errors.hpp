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

#ifndef D2DCACHE_ERRORS_HPP
#define D2DCACHE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace d2d {

// A Monte Carlo draw exceeded the per-sample block cap. The configuration is
// almost certainly pathological (near-zero SNR); the error keeps the link
// parameters visible instead of silently truncating the sample.
class CappedSampleError : public std::runtime_error {
 public:
  CappedSampleError(std::string message, std::int64_t cap,
                    std::int64_t capped_draws, std::int64_t draws_attempted)
      : std::runtime_error(std::move(message)),
        cap_(cap),
        capped_draws_(capped_draws),
        draws_attempted_(draws_attempted) {}

  std::int64_t cap() const { return cap_; }
  std::int64_t capped_draws() const { return capped_draws_; }
  std::int64_t draws_attempted() const { return draws_attempted_; }

 private:
  std::int64_t cap_;
  std::int64_t capped_draws_;
  std::int64_t draws_attempted_;
};

// Exhaustive search refused to start because the combination space exceeds
// the configured budget.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(std::string message, std::uint64_t combinations,
                      std::uint64_t budget)
      : std::runtime_error(std::move(message)),
        combinations_(combinations),
        budget_(budget) {}

  std::uint64_t combinations() const { return combinations_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t combinations_;
  std::uint64_t budget_;
};

// The greedy step was asked to place a file when every cache row is full.
class PlanningCompleteError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace d2d

#endif  // D2DCACHE_ERRORS_HPP
