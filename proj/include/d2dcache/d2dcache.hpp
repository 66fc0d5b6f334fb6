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

#ifndef D2DCACHE_D2DCACHE_HPP
#define D2DCACHE_D2DCACHE_HPP

#include "d2dcache/baselines.hpp"
#include "d2dcache/channel.hpp"
#include "d2dcache/config_io.hpp"
#include "d2dcache/dynamic.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/experiment.hpp"
#include "d2dcache/greedy.hpp"
#include "d2dcache/matrix.hpp"
#include "d2dcache/metrics.hpp"
#include "d2dcache/popularity.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/source_selection.hpp"
#include "d2dcache/types.hpp"

#endif  // D2DCACHE_D2DCACHE_HPP
