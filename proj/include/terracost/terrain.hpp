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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "terracost/error.hpp"
#include "terracost/expr.hpp"

namespace terracost {

struct Rectangle {
  double x_lo = -std::numeric_limits<double>::infinity();
  double x_hi = std::numeric_limits<double>::infinity();
  double y_lo = -std::numeric_limits<double>::infinity();
  double y_hi = std::numeric_limits<double>::infinity();

  bool contains(double x, double y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
};

/// A real function of (x, y) with value and first partials. Cheap to copy;
/// the underlying evaluator is shared and immutable.
class ScalarField2D {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double value(double x, double y) const = 0;
    virtual DualValue sample(double x, double y) const = 0;
    virtual bool identically_zero() const { return false; }
    virtual std::string describe() const = 0;
  };

  explicit ScalarField2D(std::shared_ptr<const Impl> impl, Rectangle domain = {})
      : impl_(std::move(impl)), domain_(domain) {}

  double value(double x, double y) const { return impl_->value(x, y); }
  DualValue sample(double x, double y) const { return impl_->sample(x, y); }

  bool identically_zero() const { return impl_->identically_zero(); }
  std::string describe() const { return impl_->describe(); }
  const Rectangle& domain() const noexcept { return domain_; }

 private:
  std::shared_ptr<const Impl> impl_;
  Rectangle domain_;
};

namespace detail {

class ExpressionField final : public ScalarField2D::Impl {
 public:
  explicit ExpressionField(Expression e) : expr_(std::move(e)) {}

  double value(double x, double y) const override { return expr_.eval(x, y); }
  DualValue sample(double x, double y) const override { return expr_.eval_dual(x, y); }
  bool identically_zero() const override {
    return expr_.is_constant() && expr_.eval(0.0, 0.0) == 0.0;
  }
  std::string describe() const override { return expr_.render(); }

 private:
  Expression expr_;
};

}  // namespace detail

/// Analytic field. The domain is recorded for reference; expressions are
/// defined wherever their operations are, so queries are not clipped to it.
inline ScalarField2D field_from_expression(Expression e, Rectangle domain = {}) {
  return ScalarField2D(std::make_shared<detail::ExpressionField>(std::move(e)), domain);
}

inline ScalarField2D field_from_expression(std::string_view text, Rectangle domain = {}) {
  return field_from_expression(Expression::parse(text), domain);
}

/// Regular grid of elevation samples. Row r lies at y0 + r*hy, column c at
/// x0 + c*hx; `z` is row-major.
struct Heightmap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 1.0;
  double hy = 1.0;
  std::vector<double> z;

  double at(std::size_t r, std::size_t c) const { return z[r * cols + c]; }

  void validate() const {
    if (rows < 4 || cols < 4) {
      throw InvalidArgument("heightmap needs at least 4x4 samples, got " + std::to_string(rows) +
                            "x" + std::to_string(cols));
    }
    if (!(hx > 0.0) || !(hy > 0.0)) throw InvalidArgument("heightmap cell sizes must be positive");
    if (z.size() != rows * cols) {
      throw InvalidArgument("heightmap has " + std::to_string(z.size()) + " samples, expected " +
                            std::to_string(rows * cols));
    }
    for (double v : z) {
      if (!std::isfinite(v)) throw InvalidArgument("heightmap contains a non-finite sample");
    }
  }

  Rectangle footprint() const {
    return {x0, x0 + hx * static_cast<double>(cols - 1), y0,
            y0 + hy * static_cast<double>(rows - 1)};
  }
};

/// Reads the plain-text heightmap format: a header line
/// `nrows ncols x0 y0 hx hy` followed by nrows lines of ncols samples.
inline Heightmap read_heightmap(std::istream& in) {
  Heightmap h;
  if (!(in >> h.rows >> h.cols >> h.x0 >> h.y0 >> h.hx >> h.hy)) {
    throw InvalidArgument("malformed heightmap header");
  }
  h.z.reserve(h.rows * h.cols);
  for (std::size_t i = 0; i < h.rows * h.cols; ++i) {
    double v;
    if (!(in >> v)) {
      throw InvalidArgument("heightmap truncated after " + std::to_string(i) + " samples");
    }
    h.z.push_back(v);
  }
  h.validate();
  return h;
}

inline Heightmap load_heightmap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open heightmap '" + path + "'");
  try {
    return read_heightmap(in);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("heightmap '" + path + "': " + e.what());
  }
}

namespace detail {

struct CubicWeights {
  std::array<double, 4> w;
  std::array<double, 4> dw;
};

// Catmull-Rom kernel on [0, 1] for samples at offsets -1, 0, 1, 2.
inline CubicWeights catmull_rom(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {{0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
           0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)},
          {0.5 * (-3.0 * t2 + 4.0 * t - 1.0), 0.5 * (9.0 * t2 - 10.0 * t),
           0.5 * (-9.0 * t2 + 8.0 * t + 1.0), 0.5 * (3.0 * t2 - 2.0 * t)}};
}

}  // namespace detail

/// Bicubic Catmull-Rom interpolant of a heightmap. Edge rows and columns are
/// clamped, so the surface is C1 everywhere inside the footprint.
class HeightmapField final : public ScalarField2D::Impl {
 public:
  explicit HeightmapField(Heightmap h) : map_(std::move(h)) { map_.validate(); }

  double value(double x, double y) const override { return sample(x, y).v; }

  DualValue sample(double x, double y) const override {
    const auto [c, r] = locate(x, y);
    return evaluate_in_cell(c, r, x, y);
  }

  bool identically_zero() const override {
    return std::all_of(map_.z.begin(), map_.z.end(), [](double v) { return v == 0.0; });
  }

  std::string describe() const override {
    return "heightmap " + std::to_string(map_.rows) + "x" + std::to_string(map_.cols);
  }

  /// Evaluates the patch of cell (c, r) at (x, y); the point need not lie in
  /// that cell, which lets callers compare neighbouring patches on a shared edge.
  DualValue evaluate_in_cell(std::size_t c, std::size_t r, double x, double y) const {
    const double t = (x - map_.x0) / map_.hx - static_cast<double>(c);
    const double s = (y - map_.y0) / map_.hy - static_cast<double>(r);
    const auto wx = detail::catmull_rom(t);
    const auto wy = detail::catmull_rom(s);

    DualValue out;
    for (int j = 0; j < 4; ++j) {
      const std::size_t rr = clamp_index(static_cast<long>(r) - 1 + j, map_.rows);
      double row_v = 0.0;
      double row_dx = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double zv = map_.at(rr, clamp_index(static_cast<long>(c) - 1 + i, map_.cols));
        row_v += wx.w[i] * zv;
        row_dx += wx.dw[i] * zv;
      }
      out.v += wy.w[j] * row_v;
      out.dx += wy.w[j] * row_dx;
      out.dy += wy.dw[j] * row_v;
    }
    out.dx /= map_.hx;
    out.dy /= map_.hy;
    return out;
  }

  const Heightmap& heightmap() const noexcept { return map_; }

 private:
  static std::size_t clamp_index(long i, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(n) - 1));
  }

  std::pair<std::size_t, std::size_t> locate(double x, double y) const {
    const double u = (x - map_.x0) / map_.hx;
    const double v = (y - map_.y0) / map_.hy;
    constexpr double kSlack = 1e-9;
    const double umax = static_cast<double>(map_.cols - 1);
    const double vmax = static_cast<double>(map_.rows - 1);
    if (!(u >= -kSlack && u <= umax + kSlack && v >= -kSlack && v <= vmax + kSlack)) {
      std::ostringstream msg;
      msg << "query (" << x << ", " << y << ") outside heightmap footprint";
      throw OutOfDomain(msg.str());
    }
    const auto cell = [](double w, std::size_t n) {
      return static_cast<std::size_t>(std::clamp(std::floor(w), 0.0, static_cast<double>(n - 2)));
    };
    return {cell(u, map_.cols), cell(v, map_.rows)};
  }

  Heightmap map_;
};

inline ScalarField2D field_from_heightmap(Heightmap h) {
  auto impl = std::make_shared<const HeightmapField>(std::move(h));
  const Rectangle fp = impl->heightmap().footprint();
  return ScalarField2D(std::move(impl), fp);
}

/// Feasibility under an optional mask: a point is forbidden iff mask > 0.
inline bool feasible(const std::optional<ScalarField2D>& mask, double x, double y) {
  return !mask || mask->value(x, y) <= 0.0;
}

}  // namespace terracost
