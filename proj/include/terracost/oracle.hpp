// Copyright 2026 The Terracost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exhaustive reference solver for small grids. Every grid path is priced
// with path_cost, so the delivery integral always sees the path's own prefix.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "terracost/cost.hpp"
#include "terracost/dp.hpp"
#include "terracost/error.hpp"

namespace terracost {

struct EnumerationResult {
  std::vector<std::size_t> best_path;  ///< ordinate index per stage
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t paths_evaluated = 0;
};

struct EnumerationOptions {
  double cap = 1e6;
  /// Visit paths in a seeded random order instead of lexicographically.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Number of distinct grid paths: the product of all stage sizes.
inline double path_count(const StageGrid& grid) {
  double count = 1.0;
  for (const auto& s : grid.stages) count *= static_cast<double>(s.size());
  return count;
}

inline EnumerationResult enumerate_paths(const StageGrid& grid, const ProblemSpec& spec,
                                         const EnumerationOptions& opts = {}) {
  const double count = path_count(grid);
  if (count > opts.cap) throw CapExceeded(count, opts.cap);
  const auto total = static_cast<std::uint64_t>(count);

  std::vector<std::uint64_t> order;
  if (opts.shuffle_seed) {
    order.resize(total);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    std::mt19937_64 rng(*opts.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  EnumerationResult out;
  Polyline path{grid.x, std::vector<double>(grid.n + 1)};
  std::vector<std::size_t> idx(grid.n + 1);
  for (std::uint64_t visit = 0; visit < total; ++visit) {
    // Decode the lexicographic rank; the last stage varies fastest.
    std::uint64_t rank = opts.shuffle_seed ? order[visit] : visit;
    for (std::size_t i = grid.n + 1; i-- > 0;) {
      const auto size = grid.stages[i].size();
      idx[i] = static_cast<std::size_t>(rank % size);
      rank /= size;
      path.y[i] = grid.stages[i][idx[i]];
    }
    const double cost = path_cost(spec.model, path);
    ++out.paths_evaluated;
    if (cost < out.best_cost || (cost == out.best_cost && idx < out.best_path)) {
      out.best_cost = cost;
      out.best_path = idx;
    }
  }
  return out;
}

struct GapReport {
  double dp_cost = 0.0;
  double oracle_cost = 0.0;
  double gap = 0.0;  ///< dp_cost - oracle_cost, never negative
  std::uint64_t paths_evaluated = 0;
  std::vector<std::size_t> dp_path;
  std::vector<std::size_t> oracle_path;
};

/// How far the label-based sweep lands above the true grid minimum.
inline GapReport dp_gap(const StageGrid& grid, const ProblemSpec& spec,
                        const EnumerationOptions& opts = {}) {
  const EnumerationResult truth = enumerate_paths(grid, spec, opts);
  const Trajectory dp = solve(grid, spec);
  const double diff = dp.cost - truth.best_cost;
  if (diff < -1e-12) {
    throw std::logic_error("dynamic programming beat exhaustive enumeration");
  }
  return {dp.cost, truth.best_cost, std::max(0.0, diff), truth.paths_evaluated, dp.indices,
          truth.best_path};
}

}  // namespace terracost
