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

// Orchestration behind the `terracost` command line: runs the configured
// solver and writes the trajectory CSV, the plot data and the JSON report.

#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "terracost/config.hpp"
#include "terracost/cost.hpp"
#include "terracost/dp.hpp"
#include "terracost/localsearch.hpp"
#include "terracost/oracle.hpp"
#include "terracost/ritz.hpp"

namespace terracost {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitIo = 3,
  kExitVerifyFailed = 4,
};

/// Decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SolveOutcome {
  Trajectory trajectory;
  PathProfile profile;
  nlohmann::json report;
};

namespace detail {

inline nlohmann::json grid_json(const StageGrid& g, const Corridor& c) {
  return {{"tau", g.tau},
          {"delta", g.delta},
          {"n", g.n},
          {"lattice_size", lattice_size(c, g.delta)},
          {"corridor", {c.y_lo, c.y_hi}}};
}

}  // namespace detail

inline SolveOutcome solve_config(const RunConfig& cfg, const SolveOptions& opts = {}) {
  using nlohmann::json;
  const auto started = std::chrono::steady_clock::now();
  const ProblemSpec problem = make_problem(cfg);
  const auto& s = cfg.solver;

  SolveOutcome out;
  json report;
  report["method"] = to_string(s.method);
  report["mode"] = to_string(cfg.mode);
  json warnings = json::array();
  for (const auto& w : cfg.warnings) warnings.push_back(w);

  if (s.method == Method::Ritz) {
    RitzResult r = minimize_ritz(problem.model, cfg.l, cfg.y_l, s.terms, s.mesh, s.budget);
    Trajectory t;
    t.knots = candidate_polyline(r.candidate);
    t.z.resize(t.knots.size());
    for (std::size_t i = 0; i < t.knots.size(); ++i) {
      t.z[i] = problem.model.phi().value(t.knots.x[i], t.knots.y[i]);
    }
    t.diagnostics.segment_cost_evaluations = 0;
    report["grid"] = nullptr;
    report["iterations"] = r.evaluations;
    report["ritz"] = {{"terms", s.terms},
                      {"mesh", s.mesh},
                      {"coefficients", r.candidate.a},
                      {"objective", r.cost},
                      {"objective_evaluations", r.evaluations},
                      {"budget_exhausted", r.budget_exhausted}};
    if (r.budget_exhausted) warnings.push_back("Ritz budget exhausted before convergence");
    out.trajectory = std::move(t);
  } else {
    const Schedule schedule = refinement_schedule(s.tau, s.gamma, s.epsilon, s.refine_levels);
    json levels = json::array();
    std::uint64_t total_evals = 0;
    int iterations = 0;
    bool hit_max_iter = false;
    StageGrid last_grid;
    for (const auto& level : schedule.levels) {
      const StageGrid grid = build_grid(problem, level.tau, level.delta);
      Trajectory t;
      int level_iters = 1;
      if (s.method == Method::Dp) {
        t = solve(grid, problem, opts);
      } else {
        const int max_iter = s.max_iter ? *s.max_iter : default_max_iter(grid, s.m);
        LocalSearchResult r = run_local_search(problem, grid, s.m, max_iter, opts);
        level_iters = r.iterations;
        hit_max_iter = hit_max_iter || r.hit_max_iter;
        t = std::move(r.trajectory);
      }
      total_evals += t.diagnostics.segment_cost_evaluations;
      iterations += level_iters;
      levels.push_back({{"tau", grid.tau},
                        {"delta", grid.delta},
                        {"J", t.cost},
                        {"iterations", level_iters},
                        {"segment_cost_evaluations", t.diagnostics.segment_cost_evaluations}});
      out.trajectory = std::move(t);
      last_grid = grid;
    }
    if (hit_max_iter) warnings.push_back("local search stopped at max_iter before a fixed point");
    report["grid"] = detail::grid_json(last_grid, cfg.corridor);
    report["iterations"] = iterations;
    report["levels"] = std::move(levels);
    report["hit_max_iter"] = hit_max_iter;
    out.trajectory.diagnostics.segment_cost_evaluations = total_evals;
  }

  out.trajectory.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.profile = path_profile(problem.model, out.trajectory.knots);
  out.trajectory.cost = out.profile.total_cost();
  report["J"] = out.trajectory.cost;
  report["segment_cost_evaluations"] = out.trajectory.diagnostics.segment_cost_evaluations;
  report["warnings"] = std::move(warnings);
  out.report = std::move(report);
  return out;
}

inline std::string trajectory_csv(const Trajectory& t, const PathProfile& p) {
  std::string s = "x,y,z,cumulative_length,cumulative_cost\n";
  for (std::size_t i = 0; i < t.knots.size(); ++i) {
    s += format_real(t.knots.x[i]) + ',' + format_real(t.knots.y[i]) + ',' + format_real(t.z[i]) +
         ',' + format_real(p.cumulative_length[i]) + ',' + format_real(p.cumulative_cost[i]) + '\n';
  }
  return s;
}

inline std::string plot_data(const Trajectory& t) {
  std::string s = "# x y z\n";
  for (std::size_t i = 0; i < t.knots.size(); ++i) {
    s += format_real(t.knots.x[i]) + ' ' + format_real(t.knots.y[i]) + ' ' + format_real(t.z[i]) +
         '\n';
  }
  return s;
}

/// Parses the x and y columns of a trajectory CSV back into a polyline.
inline Polyline read_trajectory_csv(std::istream& in) {
  Polyline p;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty trajectory CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string x, y;
    std::getline(row, x, ',');
    std::getline(row, y, ',');
    p.x.push_back(std::stod(x));
    p.y.push_back(std::stod(y));
  }
  return p;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::ios_base::failure("failed writing " + path.string());
}

inline std::filesystem::path place(const std::filesystem::path& out_dir, const std::string& name) {
  const std::filesystem::path p(name);
  return out_dir.empty() || p.is_absolute() ? p : out_dir / p;
}

}  // namespace detail

inline void write_outputs(const RunConfig& cfg, const SolveOutcome& r,
                          const std::filesystem::path& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  nlohmann::json report = r.report;
  report["wall_time_seconds"] = r.trajectory.diagnostics.wall_time_seconds;
  detail::write_text(detail::place(out_dir, cfg.output.trajectory_csv),
                     trajectory_csv(r.trajectory, r.profile));
  detail::write_text(detail::place(out_dir, cfg.output.plot_data), plot_data(r.trajectory));
  detail::write_text(detail::place(out_dir, cfg.output.report_json), report.dump(2) + "\n");
}

/// `terracost solve`.
inline int cmd_solve(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                     const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  SolveOutcome result;
  try {
    cfg = load_config(config_path);
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
    result = solve_config(cfg, opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  try {
    write_outputs(cfg, result, out_dir);
  } catch (const std::exception& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  out << "method " << to_string(cfg.solver.method) << "  J = " << format_real(result.trajectory.cost)
      << "  segment_cost_evaluations = " << result.trajectory.diagnostics.segment_cost_evaluations
      << '\n';
  return kExitOk;
}

/// `terracost verify`: oracle gap of the configured grid. Fails when the gap
/// exceeds the configured threshold, or by default when alpha is identically
/// zero (exact case) and the gap exceeds 1e-9.
inline int cmd_verify(const std::filesystem::path& config_path, std::ostream& out,
                      std::ostream& err) {
  RunConfig cfg;
  std::optional<ProblemSpec> problem;
  try {
    cfg = load_config(config_path);
    problem.emplace(make_problem(cfg));
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const StageGrid grid = build_grid(*problem, cfg.solver.tau, cfg.delta());
    const GapReport gap = dp_gap(grid, *problem, {.cap = cfg.verify.cap, .shuffle_seed = std::nullopt});
    const bool additive = problem->model.alpha().identically_zero();
    const double threshold = cfg.verify.gap_threshold
                                 ? *cfg.verify.gap_threshold
                                 : (additive ? 1e-9 : std::numeric_limits<double>::infinity());
    out << "stages            " << grid.n + 1 << '\n'
        << "paths_evaluated   " << gap.paths_evaluated << '\n'
        << "dp_cost           " << format_real(gap.dp_cost) << '\n'
        << "oracle_cost       " << format_real(gap.oracle_cost) << '\n'
        << "gap               " << format_real(gap.gap) << '\n'
        << "alpha_zero        " << (additive ? "yes" : "no") << '\n'
        << "threshold         " << format_real(threshold) << '\n';
    if (gap.gap > threshold) {
      out << "FAIL: gap exceeds threshold\n";
      return kExitVerifyFailed;
    }
    out << "OK\n";
    return kExitOk;
  } catch (const CapExceeded& e) {
    err << "verify refused: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

/// `terracost schedule`: the tau/delta refinement table.
inline int cmd_schedule(double tau0, double gamma, double epsilon, int levels, std::ostream& out,
                        std::ostream& err) {
  try {
    const Schedule s = refinement_schedule(tau0, gamma, epsilon, levels);
    if (s.warning) err << "warning: " << *s.warning << '\n';
    out << "level tau delta\n";
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      out << k << ' ' << format_real(s.levels[k].tau) << ' ' << format_real(s.levels[k].delta)
          << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

struct BenchRow {
  double tau = 0.0;
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t lattice = 0;
  std::uint64_t dp_evaluations = 0;
  std::uint64_t local_evaluations_first_iteration = 0;
};

/// Evaluation counts of one full sweep and of the first windowed iteration
/// on each level of the halving schedule.
inline std::vector<BenchRow> bench_levels(const ProblemSpec& problem, double tau0, double gamma,
                                          double epsilon, int m, int levels,
                                          const SolveOptions& opts = {}) {
  std::vector<BenchRow> rows;
  for (const auto& level : refinement_schedule(tau0, gamma, epsilon, levels).levels) {
    const StageGrid grid = build_grid(problem, level.tau, level.delta);
    BenchRow row{grid.tau, grid.delta, grid.n, lattice_size(problem.corridor, grid.delta)};
    row.dp_evaluations = solve(grid, problem, opts).diagnostics.segment_cost_evaluations;
    const StepResult first = step(initial_incumbent(grid, problem), m, grid, problem, opts);
    row.local_evaluations_first_iteration = first.trajectory.diagnostics.segment_cost_evaluations;
    rows.push_back(row);
  }
  return rows;
}

/// `terracost bench`.
inline int cmd_bench(const std::filesystem::path& config_path, int levels, const SolveOptions& opts,
                     std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::optional<ProblemSpec> problem;
  try {
    cfg = load_config(config_path);
    problem.emplace(make_problem(cfg));
    if (levels < 0) throw ConfigError("--levels must be >= 0");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const auto& s = cfg.solver;
    const auto rows = bench_levels(*problem, s.tau, s.gamma, s.epsilon, s.m, levels, opts);
    out << "tau delta n N dp_evals dp_growth local_evals_per_iter local_growth\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      out << format_real(r.tau) << ' ' << format_real(r.delta) << ' ' << r.n << ' ' << r.lattice
          << ' ' << r.dp_evaluations << ' ';
      if (k == 0) {
        out << "- " << r.local_evaluations_first_iteration << " -\n";
      } else {
        const auto& p = rows[k - 1];
        out << format_real(static_cast<double>(r.dp_evaluations) / p.dp_evaluations) << ' '
            << r.local_evaluations_first_iteration << ' '
            << format_real(static_cast<double>(r.local_evaluations_first_iteration) /
                           p.local_evaluations_first_iteration)
            << '\n';
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace terracost
