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

// Iterated windowed DP. Each iteration keeps, per interior stage, only the
// ordinates within m lattice steps of the incumbent polyline, re-solves on
// that truncated grid and adopts the result, until the polyline stops moving.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "terracost/cost.hpp"
#include "terracost/dp.hpp"
#include "terracost/error.hpp"

namespace terracost {

struct Incumbent {
  std::vector<std::size_t> indices;  ///< ordinate index per stage of the full grid
  double cost = 0.0;
  int k = 0;
};

/// Trajectory through the given stage indices, priced with path_cost.
inline Trajectory trajectory_from_indices(const StageGrid& grid, const ProblemSpec& spec,
                                          const std::vector<std::size_t>& indices) {
  Trajectory t;
  t.indices = indices;
  t.knots.x = grid.x;
  t.knots.y.resize(grid.n + 1);
  t.z.resize(grid.n + 1);
  for (std::size_t i = 0; i <= grid.n; ++i) {
    t.knots.y[i] = grid.stages[i].at(indices[i]);
    t.z[i] = spec.model.phi().value(t.knots.x[i], t.knots.y[i]);
  }
  t.cost = path_cost(spec.model, t.knots);
  return t;
}

/// Straight chord from (0, 0) to (l, y_l), each interior knot snapped to the
/// nearest ordinate of its stage (ties go to the lower one).
inline Incumbent initial_incumbent(const StageGrid& grid, const ProblemSpec& spec) {
  Incumbent inc;
  inc.indices.assign(grid.n + 1, 0);
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double target = spec.y_l * grid.x[i] / spec.l;
    const auto& stage = grid.stages[i];
    if (stage.empty()) throw InfeasibleError("empty stage " + std::to_string(i));
    std::size_t best = 0;
    double best_dist = std::abs(stage[0] - target);
    for (std::size_t j = 1; j < stage.size(); ++j) {
      const double dist = std::abs(stage[j] - target);
      if (dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    inc.indices[i] = best;
  }
  inc.cost = trajectory_from_indices(grid, spec, inc.indices).cost;
  return inc;
}

struct StepResult {
  Incumbent next;
  Trajectory trajectory;
  /// True when the windowed sweep returned a costlier polyline than the
  /// incumbent and the incumbent was kept instead.
  bool kept_incumbent = false;
};

/// One windowed re-solve around `inc`. The window of stage i holds the
/// ordinates within m lattice steps of the incumbent's ordinate.
inline StepResult step(const Incumbent& inc, int m, const StageGrid& grid,
                       const ProblemSpec& spec, const SolveOptions& opts = {}) {
  if (m < 1) throw InvalidArgument("window half-width m must be >= 1");
  if (inc.indices.size() != grid.n + 1) throw InvalidArgument("incumbent does not match grid");

  StageGrid window = grid;
  std::vector<std::vector<std::size_t>> origin(grid.n + 1);
  const double reach = m * grid.delta * (1.0 + 1e-9);
  for (std::size_t i = 0; i <= grid.n; ++i) {
    const auto& stage = grid.stages[i];
    const double centre = stage.at(inc.indices[i]);
    auto& kept = window.stages[i];
    kept.clear();
    for (std::size_t j = 0; j < stage.size(); ++j) {
      if (std::abs(stage[j] - centre) <= reach) {
        kept.push_back(stage[j]);
        origin[i].push_back(j);
      }
    }
  }

  Trajectory t = solve(window, spec, opts);
  for (std::size_t i = 0; i <= grid.n; ++i) t.indices[i] = origin[i][t.indices[i]];

  StepResult out;
  if (t.cost > inc.cost) {
    const auto diag = t.diagnostics;
    out.trajectory = trajectory_from_indices(grid, spec, inc.indices);
    out.trajectory.diagnostics = diag;
    out.next = {inc.indices, out.trajectory.cost, inc.k + 1};
    out.kept_incumbent = true;
  } else {
    out.next = {t.indices, t.cost, inc.k + 1};
    out.trajectory = std::move(t);
  }
  return out;
}

struct LocalSearchResult {
  Trajectory trajectory;
  int iterations = 0;
  bool hit_max_iter = false;
  std::vector<double> cost_history;  ///< J_0 (initial chord) then J after each iteration
  std::vector<std::uint64_t> evaluations_per_iteration;
};

/// Default iteration cap 4N/m, N the largest stage size.
inline int default_max_iter(const StageGrid& grid, int m) {
  const auto n = static_cast<int>(grid.max_stage_size());
  return std::max(1, 4 * n / std::max(1, m));
}

inline LocalSearchResult run_local_search(const ProblemSpec& spec, const StageGrid& grid, int m,
                                          int max_iter, const SolveOptions& opts = {}) {
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  LocalSearchResult out;
  Incumbent inc = initial_incumbent(grid, spec);
  out.cost_history.push_back(inc.cost);
  std::uint64_t evals = 0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    StepResult r = step(inc, m, grid, spec, opts);
    ++out.iterations;
    out.cost_history.push_back(r.next.cost);
    out.evaluations_per_iteration.push_back(r.trajectory.diagnostics.segment_cost_evaluations);
    evals += r.trajectory.diagnostics.segment_cost_evaluations;
    out.trajectory = std::move(r.trajectory);
    converged = r.next.indices == inc.indices;
    inc = std::move(r.next);
    if (converged) break;
  }
  out.hit_max_iter = !converged;
  out.trajectory.diagnostics.segment_cost_evaluations = evals;
  out.trajectory.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace terracost
