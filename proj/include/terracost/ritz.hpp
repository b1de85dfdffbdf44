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

// Ritz benchmark: minimizes the functional over
//
//   y(x) = (y_l / l) x + sum_{k=1..K} a_k sin(pi k x / l)
//
// with a derivative-free Nelder-Mead simplex. Every candidate meets the
// boundary conditions by construction.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "terracost/cost.hpp"
#include "terracost/error.hpp"

namespace terracost {

struct RitzCandidate {
  double l = 1.0;
  double y_l = 0.0;
  std::vector<double> a;  ///< sine coefficients a_1..a_K
  int mesh = 512;         ///< quadrature mesh intervals

  std::size_t terms() const noexcept { return a.size(); }
};

/// (y, y') of the candidate at x.
inline std::pair<double, double> candidate_eval(const RitzCandidate& c, double x) {
  const double w = std::numbers::pi / c.l;
  double y = c.y_l / c.l * x;
  double yp = c.y_l / c.l;
  for (std::size_t k = 0; k < c.a.size(); ++k) {
    const double freq = w * static_cast<double>(k + 1);
    y += c.a[k] * std::sin(freq * x);
    yp += c.a[k] * freq * std::cos(freq * x);
  }
  // The sine terms vanish only up to rounding at x = l.
  if (x == 0.0) y = 0.0;
  if (x == c.l) y = c.y_l;
  return {y, yp};
}

inline double objective(const RitzCandidate& c, const CostModel& model) {
  return smooth_path_cost(
      model, [&](double x) { return candidate_eval(c, x).first; },
      [&](double x) { return candidate_eval(c, x).second; }, c.l, c.y_l, c.mesh);
}

/// Samples the candidate at mesh + 1 equidistant knots.
inline Polyline candidate_polyline(const RitzCandidate& c) {
  Polyline p;
  p.x.resize(static_cast<std::size_t>(c.mesh) + 1);
  p.y.resize(p.x.size());
  for (int k = 0; k <= c.mesh; ++k) {
    const double x = k == c.mesh ? c.l : c.l * k / c.mesh;
    p.x[static_cast<std::size_t>(k)] = x;
    p.y[static_cast<std::size_t>(k)] = candidate_eval(c, x).first;
  }
  return p;
}

struct NelderMeadOptions {
  double initial_step = 0.1;
  double tolerance = 1e-8;  ///< max coordinate distance of any vertex from the best
  std::uint64_t budget = 50000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2) from an axis-aligned initial simplex.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  NelderMeadResult out;
  if (dim == 0 || opts.budget == 0) {
    out.f = f(start);
    out.evaluations = 1;
    out.x = std::move(start);
    out.converged = dim == 0;
    return out;
  }

  std::uint64_t evals = 0;
  const auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return f(p);
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  values[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < dim && evals < opts.budget; ++i) {
    simplex[i + 1][i] += opts.initial_step;
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  const auto blend = [&](std::vector<double>& dst, double t, const std::vector<double>& toward) {
    // dst = centroid + t * (toward - centroid)
    for (std::size_t j = 0; j < dim; ++j) dst[j] = centroid[j] + t * (toward[j] - centroid[j]);
  };

  bool converged = false;
  while (evals < opts.budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
      }
    }
    if (spread <= opts.tolerance) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    blend(trial, -1.0, simplex[worst]);
    const double fr = eval(trial);
    if (fr < values[best]) {
      blend(trial2, -2.0, simplex[worst]);
      const double fe = evals < opts.budget ? eval(trial2) : fr + 1.0;
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    if (evals >= opts.budget) break;
    // Outside contraction when the reflection beat the worst vertex.
    const bool outside = fr < values[worst];
    blend(trial2, outside ? -0.5 : 0.5, simplex[worst]);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim && evals < opts.budget; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.x = simplex[best];
  out.f = values[best];
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

struct RitzResult {
  RitzCandidate candidate;
  double cost = 0.0;
  std::uint64_t evaluations = 0;
  bool budget_exhausted = false;
};

/// Simplex descent over K sine coefficients starting from the chord.
inline RitzResult minimize_ritz(const CostModel& model, double l, double y_l, int terms, int mesh,
                                std::uint64_t budget) {
  if (terms < 1) throw InvalidArgument("Ritz basis needs at least one term");
  if (budget < 1) throw InvalidArgument("Ritz budget must be >= 1");
  RitzCandidate c{l, y_l, std::vector<double>(static_cast<std::size_t>(terms), 0.0), mesh};
  const auto f = [&](const std::vector<double>& a) {
    RitzCandidate trial = c;
    trial.a = a;
    return objective(trial, model);
  };
  const auto nm = nelder_mead(f, c.a, {.budget = budget});
  RitzResult out;
  c.a = nm.x;
  out.candidate = std::move(c);
  out.cost = nm.f;
  out.evaluations = nm.evaluations;
  out.budget_exhausted = !nm.converged;
  return out;
}

}  // namespace terracost
