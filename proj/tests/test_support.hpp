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

// Shared fixtures: the two benchmark problems and small helpers.

#pragma once

#include <cmath>
#include <vector>

#include "terracost/cost.hpp"
#include "terracost/dp.hpp"
#include "terracost/terrain.hpp"

namespace terracost::testing {

// Planar problem: alpha = cos^2(5x) cos^2(y), beta = 1 + sin(5x) sin(y).
inline constexpr const char* kPlanarAlpha = "cos(5*x)^2*cos(y)^2";
inline constexpr const char* kPlanarBeta = "1+sin(5*x)*sin(y)";
// Relief problem: phi = sin(5x) sin(y), alpha = 0.1, beta = 0.5.
inline constexpr const char* kReliefPhi = "sin(5*x)*sin(y)";
inline constexpr const char* kReliefAlpha = "0.1";
inline constexpr const char* kReliefBeta = "0.5";

// Reference Ritz coefficients of both benchmark problems.
inline const std::vector<double> kPlanarRitz = {-0.342929, 0.132031,  -0.083452, 0.046821,
                                                -0.027623, 0.017216,  -0.009948, 0.005366,
                                                -0.002641, 0.001030};
inline const std::vector<double> kReliefRitz = {-0.370262, 0.055788,  0.010580,  -0.008663,
                                                0.002984,  0.002658,  -0.004272, 0.004357,
                                                -0.002889, 0.001418};

inline CostModel planar_model(int q = CostModel::kDefaultSubdivisions) {
  return CostModel::planar(field_from_expression(kPlanarAlpha), field_from_expression(kPlanarBeta),
                           q);
}

inline CostModel relief_model(int q = CostModel::kDefaultSubdivisions) {
  return CostModel(field_from_expression(kReliefPhi), field_from_expression(kReliefAlpha),
                   field_from_expression(kReliefBeta), Mode::Full3D, q);
}

inline CostModel flat_model(const char* alpha, const char* beta) {
  return CostModel(field_from_expression("0"), field_from_expression(alpha),
                   field_from_expression(beta), Mode::Full3D);
}

inline ProblemSpec unit_problem(CostModel model, Corridor corridor = {0.0, 1.0}) {
  return ProblemSpec{1.0, 1.0, corridor, std::move(model), std::nullopt};
}

}  // namespace terracost::testing
