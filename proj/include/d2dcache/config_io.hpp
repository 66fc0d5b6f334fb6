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

#ifndef D2DCACHE_CONFIG_IO_HPP
#define D2DCACHE_CONFIG_IO_HPP

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/experiment.hpp"
#include "d2dcache/popularity.hpp"
#include "d2dcache/types.hpp"

namespace d2d {

// Flat `key = value` configuration text. `#` starts a comment anywhere on a
// line; blank lines are skipped. List values are comma separated.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const std::string ws = " \t\r";
  const std::size_t begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + " expects a number, got '" + value + "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument(key + " expects a number, got '" + value + "'");
  }
  return v;
}

inline long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + " expects an integer, got '" + value +
                                "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument(key + " expects an integer, got '" + value +
                                "'");
  }
  return v;
}

inline std::uint64_t parse_u64(const std::string& key,
                               const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + " expects an unsigned integer, got '" +
                                value + "'");
  }
  if (used != value.size() || (!value.empty() && value[0] == '-')) {
    throw std::invalid_argument(key + " expects an unsigned integer, got '" +
                                value + "'");
  }
  return v;
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  if (trim(value).empty()) return items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    const std::string item = trim(value.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) {
      throw std::invalid_argument("empty element in list value '" + value +
                                  "'");
    }
    items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

inline std::vector<double> parse_double_list(const std::string& key,
                                             const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) {
    out.push_back(parse_double(key, item));
  }
  return out;
}

}  // namespace detail

inline std::vector<ConfigEntry> parse_config(std::istream& in) {
  std::vector<ConfigEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not 'key = value': " + stripped);
    }
    ConfigEntry entry;
    entry.key = detail::trim(stripped.substr(0, eq));
    entry.value = detail::trim(stripped.substr(eq + 1));
    entry.line = line_no;
    if (entry.key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " has an empty key");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

// The built-in parameter profile. SystemConfig's defaults already hold it;
// naming it lets a config file reset to it explicitly.
inline SystemConfig reference_profile() { return SystemConfig{}; }

inline void apply_profile(SystemConfig& cfg, const std::string& name) {
  if (name == "reference") {
    cfg = reference_profile();
    return;
  }
  throw std::invalid_argument("unknown profile: " + name);
}

// Returns false when the key is not a system-model key.
inline bool apply_system_key(SystemConfig& cfg, const std::string& key,
                             const std::string& value) {
  if (key == "profile") {
    apply_profile(cfg, value);
  } else if (key == "n_users") {
    cfg.n_users = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "n_files") {
    cfg.n_files = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "cache_size") {
    cfg.cache_size = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "bandwidth_hz") {
    cfg.bandwidth_hz = detail::parse_double(key, value);
  } else if (key == "noise_power") {
    cfg.noise_power = detail::parse_double(key, value);
  } else if (key == "block_duration_s") {
    cfg.block_duration_s = detail::parse_double(key, value);
  } else if (key == "file_size_bits") {
    cfg.file_size_bits = detail::parse_double(key, value);
  } else if (key == "n_channels") {
    cfg.n_channels = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "bs_power_db") {
    cfg.bs_power_db = detail::parse_double(key, value);
  } else if (key == "user_power_db") {
    cfg.user_power_db = detail::parse_double(key, value);
  } else if (key == "user_powers_db") {
    cfg.user_powers_db = detail::parse_double_list(key, value);
  } else if (key == "cell_radius_m") {
    cfg.cell_radius_m = detail::parse_double(key, value);
  } else if (key == "pathloss_exponent") {
    cfg.pathloss_exponent = detail::parse_double(key, value);
  } else if (key == "zipf_beta") {
    cfg.zipf_beta = detail::parse_double(key, value);
  } else if (key == "channel_alloc_probs") {
    cfg.channel_alloc_probs = detail::parse_double_list(key, value);
  } else if (key == "max_blocks_cap") {
    cfg.max_blocks_cap = detail::parse_int(key, value);
  } else {
    return false;
  }
  return true;
}

// Returns false when the key is neither an experiment key nor a system-model
// key of the embedded base config.
inline bool apply_experiment_key(ExperimentSpec& spec, const std::string& key,
                                 const std::string& value) {
  if (key == "sweep_axis") {
    spec.sweep_axis = sweep_axis_from_string(value);
  } else if (key == "axis_values") {
    spec.axis_values = detail::parse_double_list(key, value);
  } else if (key == "n_instances") {
    spec.n_instances = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "algorithms") {
    spec.algorithms.clear();
    for (const std::string& item : detail::split_list(value)) {
      spec.algorithms.push_back(algorithm_from_string(item));
    }
  } else if (key == "popularity_modes") {
    spec.popularity_modes.clear();
    for (const std::string& item : detail::split_list(value)) {
      spec.popularity_modes.push_back(popularity_mode_from_string(item));
    }
  } else if (key == "master_seed") {
    spec.master_seed = detail::parse_u64(key, value);
  } else if (key == "n_delay_samples") {
    spec.n_delay_samples = detail::parse_int(key, value);
  } else if (key == "oracle_budget") {
    spec.oracle_budget = detail::parse_u64(key, value);
  } else {
    return apply_system_key(spec.base, key, value);
  }
  return true;
}

inline void apply_entry(ExperimentSpec& spec, const std::string& key,
                        const std::string& value) {
  if (!apply_experiment_key(spec, key, value)) {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

inline ExperimentSpec load_experiment_spec(std::istream& in,
                                           ExperimentSpec defaults = {}) {
  for (const ConfigEntry& entry : parse_config(in)) {
    try {
      apply_entry(defaults, entry.key, entry.value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(entry.line) +
                                  ": " + e.what());
    }
  }
  return defaults;
}

}  // namespace d2d

#endif  // D2DCACHE_CONFIG_IO_HPP
