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

#include "terracost/ritz.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace terracost {
namespace {

using testing::flat_model;
using testing::planar_model;
using testing::relief_model;

TEST(Candidate, Evaluation) {
  const RitzCandidate chord{2.0, 1.0, {}, 512};
  EXPECT_EQ(candidate_eval(chord, 1.0), (std::pair{0.5, 0.5}));
  const RitzCandidate bump{1.0, 0.0, {1.0}, 512};
  const auto [y, yp] = candidate_eval(bump, 0.5);
  EXPECT_NEAR(y, 1.0, 1e-15);
  EXPECT_NEAR(yp, 0.0, 1e-15);
  EXPECT_NEAR(candidate_eval(bump, 0.0).second, std::numbers::pi, 1e-15);
}

TEST(Candidate, EndpointsAreExact) {
  const RitzCandidate c{1.0, 0.7, {0.3, -0.2, 0.11, 0.05}, 512};
  EXPECT_EQ(candidate_eval(c, 0.0).first, 0.0);
  EXPECT_EQ(candidate_eval(c, 1.0).first, 0.7);
  const Polyline p = candidate_polyline(c);
  ASSERT_EQ(p.size(), 513u);
  EXPECT_EQ(p.x.back(), 1.0);
  EXPECT_EQ(p.y.front(), 0.0);
  EXPECT_EQ(p.y.back(), 0.7);
}

TEST(NelderMead, MinimizesQuadratic) {
  const auto f = [](const std::vector<double>& v) {
    return (v[0] - 1) * (v[0] - 1) + 10 * (v[1] + 2) * (v[1] + 2) + 3;
  };
  const auto r = nelder_mead(f, {0.0, 0.0}, {});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], -2.0, 1e-6);
  EXPECT_NEAR(r.f, 3.0, 1e-12);
}

TEST(NelderMead, HonoursBudget) {
  const auto f = [](const std::vector<double>& v) {
    return 100 * std::pow(v[1] - v[0] * v[0], 2) + std::pow(1 - v[0], 2);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0}, {.initial_step = 0.1, .tolerance = 1e-8, .budget = 40});
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 40u);
}

TEST(Ritz, FlatProblemRecoversChord) {
  const auto r = minimize_ritz(flat_model("0", "1"), 1.0, 1.0, 3, 128, 20000);
  EXPECT_NEAR(r.cost, std::numbers::sqrt2, 1e-4);
  for (double a : r.candidate.a) EXPECT_NEAR(a, 0.0, 1e-3);
}

TEST(Ritz, NeverWorseThanChord) {
  const auto model = relief_model();
  const RitzCandidate chord{1.0, 1.0, std::vector<double>(4, 0.0), 128};
  const auto r = minimize_ritz(model, 1.0, 1.0, 4, 128, 2000);
  EXPECT_LE(r.cost, objective(chord, model));
  EXPECT_NEAR(r.cost, objective(r.candidate, model), 0.0);
}

TEST(Ritz, PlanarBenchmark) {
  const auto r = minimize_ritz(planar_model(), 1.0, 1.0, 10, 512, 50000);
  EXPECT_LE(r.cost, 1.4380);
  EXPECT_FALSE(r.budget_exhausted);
}

TEST(Ritz, ReliefBenchmark) {
  const auto r = minimize_ritz(relief_model(), 1.0, 1.0, 10, 512, 50000);
  EXPECT_LE(r.cost, 1.1382);
}

TEST(Ritz, RicherBasisDoesNotHurt) {
  const auto model = planar_model();
  const auto k3 = minimize_ritz(model, 1.0, 1.0, 3, 256, 50000);
  const auto k10 = minimize_ritz(model, 1.0, 1.0, 10, 256, 50000);
  EXPECT_LE(k10.cost, k3.cost + 1e-6);
}

TEST(Ritz, RejectsBadArguments) {
  EXPECT_THROW(minimize_ritz(planar_model(), 1.0, 1.0, 0, 512, 100), InvalidArgument);
  EXPECT_THROW(minimize_ritz(planar_model(), 1.0, 1.0, 3, 512, 0), InvalidArgument);
  EXPECT_THROW(minimize_ritz(planar_model(), 1.0, 1.0, 3, 32, 100), InvalidArgument);
}

}  // namespace
}  // namespace terracost
