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

// Construction-cost functional of a road trajectory y(x) over [0, l]:
//
//   J(y) = int_0^l alpha(x, y) Phi(x) L(x) dx + int_0^l beta(x, y) Phi(x) dx,
//   Phi  = sqrt(1 + y'^2 + z'^2),   z' = phi_x + phi_y y',   L(x) = int_0^x Phi.
//
// Every integral is a composite trapezoid with q subintervals per segment;
// the inner arc length L is the running prefix sum over the same samples, so
// inner and outer quadratures stay aligned.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "terracost/error.hpp"
#include "terracost/terrain.hpp"

namespace terracost {

enum class Mode {
  Full3D,  ///< terrain slope enters the arc element
  Flat2D,  ///< z' treated as zero; phi is ignored
};

inline const char* to_string(Mode m) { return m == Mode::Full3D ? "3d" : "2d"; }

class CostModel {
 public:
  static constexpr int kDefaultSubdivisions = 16;

  CostModel(ScalarField2D phi, ScalarField2D alpha, ScalarField2D beta, Mode mode,
            int subdivisions = kDefaultSubdivisions)
      : phi_(std::move(phi)),
        alpha_(std::move(alpha)),
        beta_(std::move(beta)),
        mode_(mode),
        q_(subdivisions) {
    if (q_ < 2 || q_ % 2 != 0) {
      throw InvalidArgument("quadrature subdivisions must be even and >= 2, got " +
                            std::to_string(q_));
    }
  }

  /// Flat2D model; phi is the zero field.
  static CostModel planar(ScalarField2D alpha, ScalarField2D beta,
                          int subdivisions = kDefaultSubdivisions) {
    return CostModel(field_from_expression("0"), std::move(alpha), std::move(beta), Mode::Flat2D,
                     subdivisions);
  }

  const ScalarField2D& phi() const noexcept { return phi_; }
  const ScalarField2D& alpha() const noexcept { return alpha_; }
  const ScalarField2D& beta() const noexcept { return beta_; }
  Mode mode() const noexcept { return mode_; }
  int subdivisions() const noexcept { return q_; }

  CostModel with_mode(Mode m) const { return CostModel(phi_, alpha_, beta_, m, q_); }
  CostModel with_subdivisions(int q) const { return CostModel(phi_, alpha_, beta_, mode_, q); }

 private:
  ScalarField2D phi_;
  ScalarField2D alpha_;
  ScalarField2D beta_;
  Mode mode_;
  int q_;
};

struct SegmentCostResult {
  double delta_j = 0.0;    ///< cost added by the segment
  double delta_len = 0.0;  ///< arc length added by the segment
};

/// Derivative of the terrain height along the trajectory.
inline double z_prime(const CostModel& model, double x, double y, double yp) {
  if (model.mode() == Mode::Flat2D) return 0.0;
  const DualValue g = model.phi().sample(x, y);
  return g.dx + g.dy * yp;
}

/// Arc element Phi = sqrt(1 + y'^2 + z'^2).
inline double arc_element(const CostModel& model, double x, double y, double yp) {
  const double zp = z_prime(model, x, y, yp);
  return std::sqrt(1.0 + yp * yp + zp * zp);
}

namespace detail {

// Integrates one mesh interval [x0, x0 + h*q] given a sampler returning (y, y')
// at sample j. `len` carries the prefix arc length in and out.
template <class Sampler>
double integrate_interval(const CostModel& model, double x0, double width, double& len,
                          Sampler&& at) {
  const int q = model.subdivisions();
  const double h = width / q;
  double cost = 0.0;
  double prev_f = 0.0;
  double prev_phi = 0.0;
  for (int j = 0; j <= q; ++j) {
    const double x = j == q ? x0 + width : x0 + h * j;
    const auto [y, yp] = at(j, x);
    const double phi = arc_element(model, x, y, yp);
    if (j > 0) len += 0.5 * h * (prev_phi + phi);
    const double f = phi * (model.alpha().value(x, y) * len + model.beta().value(x, y));
    if (j > 0) cost += 0.5 * h * (prev_f + f);
    prev_phi = phi;
    prev_f = f;
  }
  return cost;
}

}  // namespace detail

/// Cost J_i of the straight segment (x_i, y_i) -> (x_i + tau, y_ip1), with the
/// delivery term measured from the path start: `len_start` is the arc length
/// of the prefix that reaches (x_i, y_i).
inline SegmentCostResult segment_cost(const CostModel& model, double x_i, double y_i,
                                      double y_ip1, double tau, double len_start) {
  if (!(tau > 0.0)) throw InvalidArgument("segment width must be positive");
  if (!(len_start >= 0.0)) throw InvalidArgument("prefix length must be non-negative");
  const int q = model.subdivisions();
  const double rise = y_ip1 - y_i;
  const double slope = rise / tau;
  double len = len_start;
  const double cost = detail::integrate_interval(model, x_i, tau, len, [&](int j, double) {
    const double y = j == q ? y_ip1 : y_i + rise * (static_cast<double>(j) / q);
    return std::pair{y, slope};
  });
  const SegmentCostResult r{cost, len - len_start};
  if (!std::isfinite(r.delta_j) || !std::isfinite(r.delta_len)) {
    throw Error("segment cost is not finite; check the cost fields");
  }
  return r;
}

/// Piecewise-linear trajectory through knots (x[i], y[i]).
struct Polyline {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
};

/// Running totals at each knot of a polyline.
struct PathProfile {
  std::vector<double> cumulative_length;
  std::vector<double> cumulative_cost;

  double total_cost() const { return cumulative_cost.back(); }
};

inline PathProfile path_profile(const CostModel& model, const Polyline& path) {
  if (path.x.size() != path.y.size() || path.x.size() < 2) {
    throw InvalidArgument("polyline needs at least two knots with matching x and y");
  }
  PathProfile out;
  out.cumulative_length.reserve(path.size());
  out.cumulative_cost.reserve(path.size());
  out.cumulative_length.push_back(0.0);
  out.cumulative_cost.push_back(0.0);
  double len = 0.0;
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double tau = path.x[i + 1] - path.x[i];
    if (!(tau > 0.0)) throw InvalidArgument("polyline x-knots must be strictly increasing");
    const auto seg = segment_cost(model, path.x[i], path.y[i], path.y[i + 1], tau, len);
    cost += seg.delta_j;
    len += seg.delta_len;
    out.cumulative_length.push_back(len);
    out.cumulative_cost.push_back(cost);
  }
  return out;
}

/// Functional value of a polyline, prefix length threaded from 0.
inline double path_cost(const CostModel& model, const Polyline& path) {
  return path_profile(model, path).total_cost();
}

/// Functional value of a smooth trajectory on a uniform mesh of M intervals,
/// each integrated with the model's q subdivisions.
template <class Fn, class Deriv>
double smooth_path_cost(const CostModel& model, Fn&& y, Deriv&& yp, double l, double y_l,
                        int mesh_points) {
  if (mesh_points < 64) throw InvalidArgument("smooth_path_cost needs at least 64 mesh points");
  if (!(l > 0.0)) throw InvalidArgument("span must be positive");
  if (std::abs(y(0.0)) > 1e-12 || std::abs(y(l) - y_l) > 1e-12) {
    throw InvalidArgument("trajectory violates the boundary conditions");
  }
  double len = 0.0;
  double cost = 0.0;
  const double width = l / mesh_points;
  for (int k = 0; k < mesh_points; ++k) {
    const double x0 = l * k / mesh_points;
    const double w = (k + 1 == mesh_points) ? l - x0 : width;
    cost += detail::integrate_interval(model, x0, w, len,
                                       [&](int, double x) { return std::pair{y(x), yp(x)}; });
  }
  if (!std::isfinite(cost)) throw Error("trajectory cost is not finite; check the cost fields");
  return cost;
}

}  // namespace terracost
