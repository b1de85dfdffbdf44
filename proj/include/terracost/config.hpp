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

// JSON run configuration.
//
//   {
//     "problem": {"l": 1, "y_l": 1, "corridor": [0, 1], "mode": "3d"},
//     "fields":  {"phi": "sin(5*x)*sin(y)",
//                 "alpha": {"expression": "0.1"},
//                 "beta": {"heightmap": "beta.txt"},
//                 "mask": "y - 0.9"},
//     "solver":  {"method": "dp", "tau": 0.0625, "gamma": 1, "epsilon": 0.5, ...},
//     "output":  {"trajectory_csv": "...", "report_json": "...", "plot_data": "..."},
//     "verify":  {"gap_threshold": 1e-9, "cap": 1e6}
//   }
//
// A field given as a bare string is an expression. Heightmap paths are
// resolved against the directory of the configuration file.

#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "terracost/cost.hpp"
#include "terracost/dp.hpp"
#include "terracost/error.hpp"
#include "terracost/terrain.hpp"

namespace terracost {

struct FieldSource {
  std::optional<std::string> expression;
  std::optional<std::string> heightmap;  ///< resolved path
};

enum class Method { Dp, Local, Ritz };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Dp: return "dp";
    case Method::Local: return "local";
    case Method::Ritz: return "ritz";
  }
  return "?";
}

struct SolverSettings {
  Method method = Method::Dp;
  double tau = 0.125;
  double gamma = 1.0;
  double epsilon = 0.5;
  int m = 1;
  int terms = 10;  ///< Ritz basis size K
  int q = CostModel::kDefaultSubdivisions;
  int mesh = 512;  ///< Ritz quadrature mesh M
  std::optional<int> max_iter;
  int refine_levels = 0;
  std::uint64_t budget = 50000;
};

struct OutputSettings {
  std::string trajectory_csv = "trajectory.csv";
  std::string report_json = "report.json";
  std::string plot_data = "trajectory.dat";
};

struct VerifySettings {
  std::optional<double> gap_threshold;
  double cap = 1e6;
};

struct RunConfig {
  double l = 1.0;
  double y_l = 0.0;
  Corridor corridor;
  Mode mode = Mode::Full3D;
  FieldSource phi{std::string("0"), std::nullopt};
  FieldSource alpha;
  FieldSource beta;
  std::optional<FieldSource> mask;
  SolverSettings solver;
  OutputSettings output;
  VerifySettings verify;
  std::vector<std::string> warnings;

  double delta() const { return coupled_delta(solver.tau, solver.gamma, solver.epsilon); }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError("unknown key '" + where + item.key() + "'");
    }
  }
}

inline const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double read_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("'" + name + "' must be a number");
  return v.get<double>();
}

inline int read_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("'" + name + "' must be an integer");
  return v.get<int>();
}

inline FieldSource read_field(const json& v, const std::string& name,
                              const std::filesystem::path& base) {
  FieldSource f;
  if (v.is_string()) {
    f.expression = v.get<std::string>();
  } else if (v.is_object()) {
    reject_unknown(v, name + ".", {"expression", "heightmap"});
    const json* e = member(v, "expression");
    const json* h = member(v, "heightmap");
    if (e && h) {
      throw ConfigError("'" + name + "' must give exactly one of expression or heightmap, not both");
    }
    if (!e && !h) throw ConfigError("'" + name + "' must give an expression or a heightmap");
    if (e) {
      if (!e->is_string()) throw ConfigError("'" + name + ".expression' must be a string");
      f.expression = e->get<std::string>();
    } else {
      if (!h->is_string()) throw ConfigError("'" + name + ".heightmap' must be a string");
      std::filesystem::path p = h->get<std::string>();
      if (p.is_relative()) p = base / p;
      if (!std::filesystem::exists(p)) {
        throw ConfigError("'" + name + "' heightmap file not found: " + p.string());
      }
      f.heightmap = p.string();
    }
  } else {
    throw ConfigError("'" + name + "' must be an expression string or an object");
  }
  if (f.expression) {
    try {
      Expression::parse(*f.expression);
    } catch (const ParseError& err) {
      throw ConfigError("'" + name + "': " + err.what());
    }
  }
  return f;
}

}  // namespace detail

/// Validates a parsed JSON document and fills defaults.
inline RunConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = ".") {
  using detail::member;
  using detail::read_int;
  using detail::read_number;
  using nlohmann::json;

  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  detail::reject_unknown(doc, "", {"problem", "fields", "solver", "output", "verify"});

  RunConfig cfg;
  const json* problem = member(doc, "problem");
  if (!problem || !problem->is_object()) throw ConfigError("missing 'problem' object");
  detail::reject_unknown(*problem, "problem.", {"l", "y_l", "corridor", "mode"});
  if (const json* v = member(*problem, "l")) cfg.l = read_number(*v, "problem.l");
  if (!(cfg.l > 0.0)) throw ConfigError("'problem.l' must be positive");
  const json* yl = member(*problem, "y_l");
  if (!yl) throw ConfigError("missing 'problem.y_l'");
  cfg.y_l = read_number(*yl, "problem.y_l");

  cfg.corridor = default_corridor(cfg.l, cfg.y_l);
  if (const json* c = member(*problem, "corridor")) {
    if (!c->is_array() || c->size() != 2) {
      throw ConfigError("'problem.corridor' must be [y_lo, y_hi]");
    }
    cfg.corridor = {read_number((*c)[0], "problem.corridor[0]"),
                    read_number((*c)[1], "problem.corridor[1]")};
    if (!(cfg.corridor.y_lo <= std::min(0.0, cfg.y_l) &&
          std::max(0.0, cfg.y_l) <= cfg.corridor.y_hi)) {
      throw ConfigError("'problem.corridor' must contain both endpoint ordinates 0 and y_l");
    }
  }
  if (const json* m = member(*problem, "mode")) {
    const auto s = m->is_string() ? m->get<std::string>() : std::string();
    if (s == "3d") cfg.mode = Mode::Full3D;
    else if (s == "2d") cfg.mode = Mode::Flat2D;
    else throw ConfigError("'problem.mode' must be \"2d\" or \"3d\"");
  }

  const json* fields = member(doc, "fields");
  if (!fields || !fields->is_object()) throw ConfigError("missing 'fields' object");
  detail::reject_unknown(*fields, "fields.", {"phi", "alpha", "beta", "mask"});
  if (const json* v = member(*fields, "phi")) cfg.phi = detail::read_field(*v, "fields.phi", base_dir);
  const json* alpha = member(*fields, "alpha");
  const json* beta = member(*fields, "beta");
  if (!alpha) throw ConfigError("missing 'fields.alpha'");
  if (!beta) throw ConfigError("missing 'fields.beta'");
  cfg.alpha = detail::read_field(*alpha, "fields.alpha", base_dir);
  cfg.beta = detail::read_field(*beta, "fields.beta", base_dir);
  if (const json* v = member(*fields, "mask")) cfg.mask = detail::read_field(*v, "fields.mask", base_dir);

  auto& s = cfg.solver;
  s.tau = cfg.l / 8.0;
  if (const json* solver = member(doc, "solver")) {
    if (!solver->is_object()) throw ConfigError("'solver' must be an object");
    detail::reject_unknown(*solver, "solver.",
                           {"method", "tau", "gamma", "epsilon", "m", "K", "q", "M", "max_iter",
                            "refine_levels", "budget"});
    if (const json* v = member(*solver, "method")) {
      const auto name = v->is_string() ? v->get<std::string>() : std::string();
      if (name == "dp") s.method = Method::Dp;
      else if (name == "local") s.method = Method::Local;
      else if (name == "ritz") s.method = Method::Ritz;
      else throw ConfigError("'solver.method' must be one of dp, local, ritz");
    }
    if (const json* v = member(*solver, "tau")) s.tau = read_number(*v, "solver.tau");
    if (const json* v = member(*solver, "gamma")) s.gamma = read_number(*v, "solver.gamma");
    if (const json* v = member(*solver, "epsilon")) s.epsilon = read_number(*v, "solver.epsilon");
    if (const json* v = member(*solver, "m")) s.m = read_int(*v, "solver.m");
    if (const json* v = member(*solver, "K")) s.terms = read_int(*v, "solver.K");
    if (const json* v = member(*solver, "q")) s.q = read_int(*v, "solver.q");
    if (const json* v = member(*solver, "M")) s.mesh = read_int(*v, "solver.M");
    if (const json* v = member(*solver, "max_iter")) s.max_iter = read_int(*v, "solver.max_iter");
    if (const json* v = member(*solver, "refine_levels")) {
      s.refine_levels = read_int(*v, "solver.refine_levels");
    }
    if (const json* v = member(*solver, "budget")) {
      const int b = read_int(*v, "solver.budget");
      if (b < 1) throw ConfigError("'solver.budget' must be >= 1");
      s.budget = static_cast<std::uint64_t>(b);
    }
  }
  if (!(s.tau > 0.0 && s.tau <= cfg.l)) throw ConfigError("'solver.tau' must lie in (0, l]");
  if (!(s.gamma > 0.0)) throw ConfigError("'solver.gamma' must be positive");
  if (!(s.epsilon >= 0.0)) throw ConfigError("'solver.epsilon' must be non-negative");
  if (s.epsilon == 0.0) {
    cfg.warnings.push_back("epsilon = 0: refined solutions are not guaranteed to converge");
  }
  if (s.m < 1) throw ConfigError("'solver.m' must be >= 1");
  if (s.terms < 1) throw ConfigError("'solver.K' must be >= 1");
  if (s.q < 2 || s.q % 2 != 0) throw ConfigError("'solver.q' must be even and >= 2");
  if (s.mesh < 64) throw ConfigError("'solver.M' must be >= 64");
  if (s.max_iter && *s.max_iter < 1) throw ConfigError("'solver.max_iter' must be >= 1");
  if (s.refine_levels < 0) throw ConfigError("'solver.refine_levels' must be >= 0");
  if (s.method != Method::Ritz && cfg.corridor.height() > 0.0 &&
      cfg.delta() > cfg.corridor.height()) {
    throw ConfigError("'solver' grid step gamma*tau^(1+epsilon) exceeds the corridor height");
  }

  if (const json* out = member(doc, "output")) {
    if (!out->is_object()) throw ConfigError("'output' must be an object");
    detail::reject_unknown(*out, "output.", {"trajectory_csv", "report_json", "plot_data"});
    const auto str = [&](const char* key, std::string& dst) {
      if (const json* v = member(*out, key)) {
        if (!v->is_string()) throw ConfigError(std::string("'output.") + key + "' must be a string");
        dst = v->get<std::string>();
      }
    };
    str("trajectory_csv", cfg.output.trajectory_csv);
    str("report_json", cfg.output.report_json);
    str("plot_data", cfg.output.plot_data);
  }

  if (const json* ver = member(doc, "verify")) {
    if (!ver->is_object()) throw ConfigError("'verify' must be an object");
    detail::reject_unknown(*ver, "verify.", {"gap_threshold", "cap"});
    if (const json* v = member(*ver, "gap_threshold")) {
      cfg.verify.gap_threshold = read_number(*v, "verify.gap_threshold");
    }
    if (const json* v = member(*ver, "cap")) cfg.verify.cap = read_number(*v, "verify.cap");
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": JSON parse error at byte " + std::to_string(e.byte) +
                      ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

inline ScalarField2D make_field(const FieldSource& src, const Rectangle& domain) {
  if (src.expression) return field_from_expression(*src.expression, domain);
  try {
    return field_from_heightmap(load_heightmap(*src.heightmap));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

inline ProblemSpec make_problem(const RunConfig& cfg) {
  const Rectangle domain{0.0, cfg.l, cfg.corridor.y_lo, cfg.corridor.y_hi};
  CostModel model(make_field(cfg.phi, domain), make_field(cfg.alpha, domain),
                  make_field(cfg.beta, domain), cfg.mode, cfg.solver.q);
  std::optional<ScalarField2D> mask;
  if (cfg.mask) mask = make_field(*cfg.mask, domain);
  return ProblemSpec{cfg.l, cfg.y_l, cfg.corridor, std::move(model), std::move(mask)};
}

}  // namespace terracost
