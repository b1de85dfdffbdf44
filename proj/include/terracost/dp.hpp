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

// Stage-wise dynamic programming over a discretized corridor.
//
// The span [0, l] is cut into n equal steps; each interior abscissa x_i
// carries the feasible ordinates of the lattice y_lo + k*delta. The forward
// sweep keeps, for every node, the cheapest cost-to-come d together with the
// arc length of the prefix that realizes it, and prices each candidate edge
// with that stored length as the start of the delivery integral:
//
//   d(s, i+1) = min_k [ d(k, i) + J_i(y_k -> y_s | len(k, i)) ]
//
// Ties go to the smallest predecessor index, so results do not depend on how
// the per-node minimizations are scheduled across threads.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "terracost/cost.hpp"
#include "terracost/error.hpp"
#include "terracost/terrain.hpp"

namespace terracost {

struct Corridor {
  double y_lo = 0.0;
  double y_hi = 0.0;

  double height() const { return y_hi - y_lo; }
};

/// Bounding interval of {0, y_l} widened by half its width on each side. A
/// zero-width interval (y_l = 0) is widened by half the span instead.
inline Corridor default_corridor(double l, double y_l) {
  const double lo = std::min(0.0, y_l);
  const double hi = std::max(0.0, y_l);
  const double width = hi > lo ? hi - lo : l;
  return {lo - 0.5 * width, hi + 0.5 * width};
}

struct ProblemSpec {
  double l = 1.0;
  double y_l = 0.0;
  Corridor corridor;
  CostModel model;
  std::optional<ScalarField2D> mask;

  void validate() const {
    if (!(l > 0.0)) throw InvalidArgument("span l must be positive");
    if (!(corridor.y_lo <= 0.0 && 0.0 <= corridor.y_hi)) {
      throw InvalidArgument("corridor must contain the start ordinate 0");
    }
    if (!(corridor.y_lo <= y_l && y_l <= corridor.y_hi)) {
      throw InvalidArgument("corridor must contain the terminal ordinate y_l");
    }
    if (!feasible(mask, 0.0, 0.0)) throw InfeasibleError("start point is forbidden by the mask");
    if (!feasible(mask, l, y_l)) throw InfeasibleError("end point is forbidden by the mask");
  }
};

/// Discretized corridor. stages[0] = {0} and stages[n] = {y_l}.
struct StageGrid {
  double tau = 0.0;
  double delta = 0.0;
  std::size_t n = 0;
  std::vector<double> x;                    ///< n + 1 abscissae, x[i] = i*l/n
  std::vector<std::vector<double>> stages;  ///< sorted feasible ordinates per stage

  /// Number of edges the full sweep prices: sum of |stage i| * |stage i+1|.
  std::uint64_t edge_count() const {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      total += static_cast<std::uint64_t>(stages[i].size()) * stages[i + 1].size();
    }
    return total;
  }

  std::size_t max_stage_size() const {
    std::size_t m = 0;
    for (const auto& s : stages) m = std::max(m, s.size());
    return m;
  }
};

/// Ordinate step tied to the abscissa step: delta = gamma * tau^(1 + epsilon).
inline double coupled_delta(double tau, double gamma, double epsilon) {
  return gamma * std::pow(tau, 1.0 + epsilon);
}

/// Lattice points y_lo + k*delta inside the corridor.
inline std::size_t lattice_size(const Corridor& c, double delta) {
  return static_cast<std::size_t>(std::floor(c.height() / delta * (1.0 + 1e-12) + 1e-9)) + 1;
}

inline StageGrid build_grid(const ProblemSpec& spec, double tau, double delta) {
  spec.validate();
  if (!(tau > 0.0 && tau <= spec.l * (1.0 + 1e-12))) {
    throw InvalidArgument("tau must lie in (0, l]");
  }
  const double height = spec.corridor.height();
  if (!(delta > 0.0) || (height > 0.0 && delta > height * (1.0 + 1e-12))) {
    throw InvalidArgument("delta must lie in (0, corridor height]");
  }

  StageGrid g;
  g.delta = delta;
  g.n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.l / tau)));
  g.tau = spec.l / static_cast<double>(g.n);
  g.x.resize(g.n + 1);
  for (std::size_t i = 0; i <= g.n; ++i) {
    g.x[i] = i == g.n ? spec.l : spec.l * static_cast<double>(i) / static_cast<double>(g.n);
  }

  const std::size_t lattice = lattice_size(spec.corridor, delta);
  g.stages.resize(g.n + 1);
  g.stages.front() = {0.0};
  g.stages.back() = {spec.y_l};
  for (std::size_t i = 1; i < g.n; ++i) {
    auto& stage = g.stages[i];
    stage.reserve(lattice);
    for (std::size_t k = 0; k < lattice; ++k) {
      const double y = std::min(spec.corridor.y_lo + static_cast<double>(k) * delta,
                                spec.corridor.y_hi);
      if (feasible(spec.mask, g.x[i], y)) stage.push_back(y);
    }
    if (stage.empty()) {
      throw InfeasibleError("stage " + std::to_string(i) + " at x = " + std::to_string(g.x[i]) +
                            " has no feasible ordinate");
    }
  }
  return g;
}

struct NodeLabel {
  double d = 0.0;    ///< cost-to-come
  double len = 0.0;  ///< arc length of the labeled prefix
  int pred = -1;     ///< predecessor index in the previous stage
};

struct SolveDiagnostics {
  std::uint64_t segment_cost_evaluations = 0;
  double wall_time_seconds = 0.0;
};

struct Trajectory {
  Polyline knots;
  std::vector<double> z;             ///< terrain height phi(x_i, y_i)
  std::vector<std::size_t> indices;  ///< ordinate index per stage of the solved grid
  double cost = 0.0;
  SolveDiagnostics diagnostics;
};

struct SolveOptions {
  unsigned threads = 0;  ///< 0 selects the hardware concurrency
  /// Stage transitions with fewer edges than this run on the calling thread.
  std::uint64_t parallel_threshold = 4096;
};

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Minimizes over predecessors for targets [begin, end) of stage i+1.
inline std::uint64_t relax_range(const ProblemSpec& spec, const StageGrid& g, std::size_t i,
                                 const std::vector<NodeLabel>& prev, std::vector<NodeLabel>& next,
                                 std::size_t begin, std::size_t end) {
  const auto& from = g.stages[i];
  const auto& to = g.stages[i + 1];
  const double x_i = g.x[i];
  const double width = g.x[i + 1] - g.x[i];
  std::uint64_t evals = 0;
  for (std::size_t s = begin; s < end; ++s) {
    NodeLabel best{std::numeric_limits<double>::infinity(), 0.0, -1};
    for (std::size_t k = 0; k < from.size(); ++k) {
      const auto seg = segment_cost(spec.model, x_i, from[k], to[s], width, prev[k].len);
      ++evals;
      const double cand = prev[k].d + seg.delta_j;
      if (cand < best.d) best = {cand, prev[k].len + seg.delta_len, static_cast<int>(k)};
    }
    next[s] = best;
  }
  return evals;
}

}  // namespace detail

/// Forward sweep and backtrack over `grid`.
inline Trajectory solve(const StageGrid& grid, const ProblemSpec& spec,
                        const SolveOptions& opts = {}) {
  const auto started = std::chrono::steady_clock::now();
  if (grid.stages.size() != grid.n + 1 || grid.x.size() != grid.n + 1 || grid.n == 0) {
    throw InvalidArgument("malformed stage grid");
  }
  const unsigned threads = detail::resolve_threads(opts.threads);

  std::vector<std::vector<int>> preds(grid.n + 1);
  std::vector<NodeLabel> labels(grid.stages[0].size());
  preds[0].assign(labels.size(), -1);
  std::uint64_t evals = 0;

  for (std::size_t i = 0; i < grid.n; ++i) {
    const std::size_t targets = grid.stages[i + 1].size();
    std::vector<NodeLabel> next(targets);
    const std::uint64_t edges = static_cast<std::uint64_t>(labels.size()) * targets;
    const unsigned workers =
        edges < opts.parallel_threshold ? 1u : std::min<unsigned>(threads, targets);

    if (workers <= 1) {
      evals += detail::relax_range(spec, grid, i, labels, next, 0, targets);
    } else {
      std::vector<std::uint64_t> counts(workers, 0);
      std::vector<std::exception_ptr> errors(workers);
      {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
          const std::size_t begin = targets * w / workers;
          const std::size_t end = targets * (w + 1) / workers;
          pool.emplace_back([&, w, begin, end] {
            try {
              counts[w] = detail::relax_range(spec, grid, i, labels, next, begin, end);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      for (auto c : counts) evals += c;
    }

    preds[i + 1].resize(targets);
    for (std::size_t s = 0; s < targets; ++s) preds[i + 1][s] = next[s].pred;
    labels = std::move(next);
  }

  // Terminal stage: pick the cheapest node (a singleton for fixed ends).
  std::size_t end = 0;
  for (std::size_t s = 1; s < labels.size(); ++s) {
    if (labels[s].d < labels[end].d) end = s;
  }

  Trajectory t;
  t.cost = labels[end].d;
  t.indices.assign(grid.n + 1, 0);
  t.indices[grid.n] = end;
  for (std::size_t i = grid.n; i > 0; --i) {
    t.indices[i - 1] = static_cast<std::size_t>(preds[i][t.indices[i]]);
  }
  t.knots.x = grid.x;
  t.knots.y.resize(grid.n + 1);
  t.z.resize(grid.n + 1);
  for (std::size_t i = 0; i <= grid.n; ++i) {
    t.knots.y[i] = grid.stages[i][t.indices[i]];
    t.z[i] = spec.model.phi().value(t.knots.x[i], t.knots.y[i]);
  }
  t.diagnostics.segment_cost_evaluations = evals;
  t.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return t;
}

struct GridLevel {
  double tau = 0.0;
  double delta = 0.0;
};

struct Schedule {
  std::vector<GridLevel> levels;
  std::optional<std::string> warning;
};

/// Halving schedule tau_k = tau_0 / 2^k with delta_k = gamma * tau_k^(1+epsilon).
inline Schedule refinement_schedule(double tau0, double gamma, double epsilon, int k_max) {
  if (!(tau0 > 0.0)) throw InvalidArgument("tau0 must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  if (k_max < 0) throw InvalidArgument("level count must be non-negative");
  Schedule s;
  if (epsilon == 0.0) {
    s.warning = "epsilon = 0: refined solutions are not guaranteed to converge";
  }
  double tau = tau0;
  for (int k = 0; k <= k_max; ++k) {
    s.levels.push_back({tau, coupled_delta(tau, gamma, epsilon)});
    tau *= 0.5;
  }
  return s;
}

/// One solve per schedule level. Each level's evaluation count is checked
/// against the bound N^2 * n, N being the lattice size of that level.
inline std::vector<Trajectory> solve_refined(const ProblemSpec& spec, const Schedule& schedule,
                                             const SolveOptions& opts = {}) {
  std::vector<Trajectory> out;
  out.reserve(schedule.levels.size());
  for (const auto& level : schedule.levels) {
    const StageGrid grid = build_grid(spec, level.tau, level.delta);
    Trajectory t = solve(grid, spec, opts);
    const double big_n = static_cast<double>(lattice_size(spec.corridor, level.delta));
    const double bound = big_n * big_n * static_cast<double>(grid.n);
    if (static_cast<double>(t.diagnostics.segment_cost_evaluations) > bound) {
      throw std::logic_error("segment cost evaluations exceed N^2 n");
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace terracost
