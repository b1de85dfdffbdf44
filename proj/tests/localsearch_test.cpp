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

#include "terracost/localsearch.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace terracost {
namespace {

using testing::flat_model;
using testing::planar_model;
using testing::relief_model;
using testing::unit_problem;

StageGrid coupled_grid(const ProblemSpec& spec, double tau, double epsilon) {
  return build_grid(spec, tau, coupled_delta(tau, 1.0, epsilon));
}

TEST(InitialIncumbent, SnapsChordToNearestOrdinate) {
  ProblemSpec spec{1.0, 0.6, {0.0, 1.0}, flat_model("0", "1"), std::nullopt};
  const StageGrid g = build_grid(spec, 0.5, 0.25);
  const Incumbent inc = initial_incumbent(g, spec);
  EXPECT_EQ(inc.indices, (std::vector<std::size_t>{0, 1, 0}));  // 0.3 -> 0.25
  EXPECT_EQ(inc.k, 0);
  EXPECT_NEAR(inc.cost, path_cost(spec.model, {{0, 0.5, 1}, {0, 0.25, 0.6}}), 1e-15);

  spec.y_l = 0.75;  // 0.375 sits halfway between 0.25 and 0.5
  EXPECT_EQ(initial_incumbent(build_grid(spec, 0.5, 0.25), spec).indices[1], 1u);
}

TEST(InitialIncumbent, SnapsAmongFeasibleOrdinates) {
  ProblemSpec spec{1.0, 0.6, {0.0, 1.0}, flat_model("0", "1"), std::nullopt};
  spec.mask = field_from_expression("0.01-abs(y-0.25)");
  const StageGrid g = build_grid(spec, 0.5, 0.25);
  ASSERT_EQ(g.stages[1], (std::vector<double>{0, 0.5, 0.75, 1}));
  const Incumbent inc = initial_incumbent(g, spec);
  EXPECT_EQ(g.stages[1][inc.indices[1]], 0.5);
}

TEST(Step, FullWindowEqualsGlobalSolve) {
  const ProblemSpec spec = unit_problem(planar_model());
  const StageGrid g = coupled_grid(spec, 0.125, 0.5);
  const Trajectory global = solve(g, spec);
  const int m = static_cast<int>(g.max_stage_size());
  const StepResult r = step(initial_incumbent(g, spec), m, g, spec);
  EXPECT_FALSE(r.kept_incumbent);
  EXPECT_EQ(r.next.indices, global.indices);
  EXPECT_EQ(r.next.cost, global.cost);
  EXPECT_EQ(r.trajectory.knots.y, global.knots.y);
  EXPECT_EQ(r.next.k, 1);
}

TEST(Step, RejectsBadInput) {
  const ProblemSpec spec = unit_problem(planar_model());
  const StageGrid g = coupled_grid(spec, 0.25, 0.5);
  const Incumbent inc = initial_incumbent(g, spec);
  EXPECT_THROW(step(inc, 0, g, spec), InvalidArgument);
  Incumbent shorter = inc;
  shorter.indices.pop_back();
  EXPECT_THROW(step(shorter, 1, g, spec), InvalidArgument);
}

TEST(LocalSearch, ConvergedIncumbentIsFixedPoint) {
  const ProblemSpec spec = unit_problem(relief_model());
  const StageGrid g = coupled_grid(spec, 0.125, 0.5);
  const LocalSearchResult res = run_local_search(spec, g, 1, default_max_iter(g, 1));
  ASSERT_FALSE(res.hit_max_iter);
  const Incumbent fixed{res.trajectory.indices, res.trajectory.cost, res.iterations};
  const StepResult again = step(fixed, 1, g, spec);
  EXPECT_EQ(again.next.indices, fixed.indices);
  EXPECT_NEAR(again.next.cost, fixed.cost, 1e-12);
}

TEST(LocalSearch, PlanarBenchmark) {
  const ProblemSpec spec = unit_problem(planar_model());
  const StageGrid g = coupled_grid(spec, 1.0 / 16, 0.5);
  const LocalSearchResult res = run_local_search(spec, g, 1, default_max_iter(g, 1));
  EXPECT_FALSE(res.hit_max_iter);
  EXPECT_LE(res.iterations, 90);
  EXPECT_NEAR(res.trajectory.cost, 1.44010, 1e-3);
}

TEST(LocalSearch, ReliefBenchmark) {
  const ProblemSpec spec = unit_problem(relief_model());
  const StageGrid g = coupled_grid(spec, 1.0 / 16, 0.5);
  const LocalSearchResult res = run_local_search(spec, g, 1, default_max_iter(g, 1));
  EXPECT_FALSE(res.hit_max_iter);
  EXPECT_NEAR(res.trajectory.cost, 1.13964, 1e-3);
}

TEST(LocalSearch, DescentAndWindowCost) {
  for (const auto& model : {planar_model(), relief_model()}) {
    const ProblemSpec spec = unit_problem(model);
    const StageGrid g = coupled_grid(spec, 0.125, 0.75);
    for (int m : {1, 2, 3}) {
      const LocalSearchResult res = run_local_search(spec, g, m, default_max_iter(g, m));
      ASSERT_EQ(res.cost_history.size(), static_cast<std::size_t>(res.iterations) + 1);
      for (std::size_t k = 1; k < res.cost_history.size(); ++k) {
        EXPECT_LE(res.cost_history[k], res.cost_history[k - 1]);
      }
      const double bound = (2.0 * m + 1) * (2.0 * m + 1) * static_cast<double>(g.n);
      for (auto evals : res.evaluations_per_iteration) {
        EXPECT_LE(static_cast<double>(evals), bound);
      }
      EXPECT_NEAR(res.trajectory.cost, path_cost(spec.model, res.trajectory.knots), 1e-12);
    }
  }
}

TEST(LocalSearch, FlatUniformCostStaysOnChord) {
  const ProblemSpec spec = unit_problem(flat_model("0", "1"));
  const StageGrid g = build_grid(spec, 0.125, 0.125);
  const LocalSearchResult res = run_local_search(spec, g, 1, 10);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_NEAR(res.trajectory.cost, std::numbers::sqrt2, 1e-12);
}

TEST(LocalSearch, IterationCap) {
  const ProblemSpec spec = unit_problem(planar_model());
  const StageGrid g = coupled_grid(spec, 1.0 / 16, 0.5);
  const LocalSearchResult res = run_local_search(spec, g, 1, 2);
  EXPECT_TRUE(res.hit_max_iter);
  EXPECT_EQ(res.iterations, 2);
  EXPECT_THROW(run_local_search(spec, g, 1, 0), InvalidArgument);
  EXPECT_EQ(default_max_iter(g, 1), 4 * 65);
  EXPECT_EQ(default_max_iter(g, 4), 65);
}

}  // namespace
}  // namespace terracost
