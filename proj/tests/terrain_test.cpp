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

#include "terracost/terrain.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace terracost {
namespace {

Heightmap sampled(std::size_t rows, std::size_t cols, double hx, double hy,
                  double (*f)(double, double)) {
  Heightmap h{rows, cols, 0.0, 0.0, hx, hy, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) h.z.push_back(f(c * hx, r * hy));
  }
  return h;
}

double relief(double x, double y) { return std::sin(5 * x) * std::sin(y); }

TEST(ExpressionField, FlatTerrain) {
  const auto f = field_from_expression("0");
  EXPECT_EQ(f.sample(0.3, 0.9), (DualValue{0, 0, 0}));
  EXPECT_TRUE(f.identically_zero());
}

TEST(ExpressionField, DelegatesToDualEvaluation) {
  EXPECT_EQ(field_from_expression("sin(5*x)*sin(y)").sample(0, 0), (DualValue{0, 0, 0}));
  EXPECT_EQ(field_from_expression("x").sample(0.7, 0.2), (DualValue{0.7, 1, 0}));
  EXPECT_FALSE(field_from_expression("x").identically_zero());
  EXPECT_FALSE(field_from_expression("0.1").identically_zero());
}

TEST(ExpressionField, DomainErrorsSurface) {
  const auto f = field_from_expression("log(y)");
  EXPECT_THROW(f.value(0.5, -1.0), DomainError);
}

TEST(HeightmapField, ReproducesSamplesAtNodes) {
  const Heightmap h = sampled(6, 7, 0.2, 0.3, relief);
  const auto f = field_from_heightmap(h);
  for (std::size_t r = 0; r < h.rows; ++r) {
    for (std::size_t c = 0; c < h.cols; ++c) {
      EXPECT_NEAR(f.value(c * h.hx, r * h.hy), h.at(r, c), 1e-14) << r << ',' << c;
    }
  }
}

TEST(HeightmapField, ConstantMapIsFlat) {
  const Heightmap h = sampled(5, 5, 0.25, 0.25, [](double, double) { return 5.0; });
  const auto f = field_from_heightmap(h);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const DualValue d = f.sample(u(rng), u(rng));
    EXPECT_NEAR(d.v, 5.0, 1e-13);
    EXPECT_NEAR(d.dx, 0.0, 1e-12);
    EXPECT_NEAR(d.dy, 0.0, 1e-12);
  }
}

TEST(HeightmapField, ApproximatesAnalyticRelief) {
  const double h = 1.0 / 63.0;
  const auto f = field_from_heightmap(sampled(64, 64, h, h, relief));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(h, 1.0 - h);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    worst = std::max(worst, std::abs(f.value(x, y) - relief(x, y)));
  }
  EXPECT_LE(worst, 1e-3);
}

TEST(HeightmapField, InterpolantIsC1AcrossCellBoundaries) {
  const Heightmap h = sampled(9, 11, 0.1, 0.125, relief);
  const HeightmapField field(h);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> col(1, h.cols - 2), row(1, h.rows - 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t c = col(rng), r = row(rng);
    // Vertical edge x = c*hx shared by cells c-1 and c.
    const double x = c * h.hx;
    const double y = (r + u(rng)) * h.hy;
    const DualValue left = field.evaluate_in_cell(c - 1, r, x, y);
    const DualValue right = field.evaluate_in_cell(c, r, x, y);
    worst = std::max({worst, std::abs(left.v - right.v), std::abs(left.dx - right.dx),
                      std::abs(left.dy - right.dy)});
    // Horizontal edge y = r*hy shared by cells r-1 and r.
    const double x2 = (c + u(rng)) * h.hx;
    const double y2 = r * h.hy;
    const std::size_t cc = std::min(c, h.cols - 2);
    const DualValue below = field.evaluate_in_cell(cc, r - 1, x2, y2);
    const DualValue above = field.evaluate_in_cell(cc, r, x2, y2);
    worst = std::max({worst, std::abs(below.v - above.v), std::abs(below.dx - above.dx),
                      std::abs(below.dy - above.dy)});
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(HeightmapField, GradientMatchesFiniteDifferences) {
  const auto f = field_from_heightmap(sampled(12, 12, 0.1, 0.1, relief));
  const double eps = 1e-6;
  for (double x : {0.23, 0.51, 0.87}) {
    for (double y : {0.17, 0.66}) {
      const DualValue d = f.sample(x, y);
      EXPECT_NEAR(d.dx, (f.value(x + eps, y) - f.value(x - eps, y)) / (2 * eps), 1e-6);
      EXPECT_NEAR(d.dy, (f.value(x, y + eps) - f.value(x, y - eps)) / (2 * eps), 1e-6);
    }
  }
}

TEST(HeightmapField, QueriesOutsideFootprintFail) {
  const auto f = field_from_heightmap(sampled(4, 4, 1.0, 1.0, relief));
  EXPECT_NO_THROW(f.value(3.0, 3.0));
  EXPECT_THROW(f.value(3.1, 1.0), OutOfDomain);
  EXPECT_THROW(f.value(1.0, -0.1), OutOfDomain);
}

TEST(Heightmap, ValidatesShape) {
  EXPECT_THROW(HeightmapField(sampled(3, 8, 1, 1, relief)), InvalidArgument);
  Heightmap bad = sampled(4, 4, 1, 1, relief);
  bad.hx = 0.0;
  EXPECT_THROW(HeightmapField{bad}, InvalidArgument);
}

TEST(Heightmap, ParsesTextFormat) {
  std::istringstream in(
      "4 5 1.0 2.0 0.5 0.25\n"
      "0 1 2 3 4\n"
      "1 2 3 4 5\n"
      "2 3 4 5 6\n"
      "3 4 5 6 7\n");
  const Heightmap h = read_heightmap(in);
  EXPECT_EQ(h.rows, 4u);
  EXPECT_EQ(h.cols, 5u);
  EXPECT_EQ(h.at(2, 3), 5.0);
  const auto f = field_from_heightmap(h);
  // Row r sits at y0 + r*hy; column c at x0 + c*hx.
  EXPECT_NEAR(f.value(1.0 + 3 * 0.5, 2.0 + 2 * 0.25), 5.0, 1e-14);

  std::istringstream truncated("4 4 0 0 1 1\n1 2 3\n");
  EXPECT_THROW(read_heightmap(truncated), InvalidArgument);
  EXPECT_THROW(load_heightmap("/nonexistent/terrain.txt"), InvalidArgument);
}

TEST(Feasibility, MaskConvention) {
  EXPECT_TRUE(feasible(std::nullopt, 0.4, 123.0));
  const std::optional<ScalarField2D> mask = field_from_expression("y-0.5");
  EXPECT_FALSE(feasible(mask, 0.1, 0.7));
  EXPECT_TRUE(feasible(mask, 0.1, 0.5));
  EXPECT_TRUE(feasible(mask, 0.1, 0.2));
}

}  // namespace
}  // namespace terracost
