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

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "terracost/app.hpp"

namespace {

// --threads wins over TERRACOST_THREADS; 0 means machine parallelism.
unsigned thread_count(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("TERRACOST_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed TERRACOST_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum construction cost road trajectories over terrain"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  int threads = 0;
  int levels = 2;
  double tau0 = 0.25, gamma = 1.0, epsilon = 0.5;

  auto* solve = app.add_subcommand("solve", "Solve the configured problem and write outputs");
  solve->add_option("--config", config, "JSON configuration file")->required();
  solve->add_option("--threads", threads, "Worker threads (default: TERRACOST_THREADS or all cores)");
  solve->add_option("--out", out_dir, "Directory for relative output paths");

  auto* verify = app.add_subcommand("verify", "Compare the DP result with exhaustive enumeration");
  verify->add_option("--config", config, "JSON configuration file")->required();

  auto* schedule = app.add_subcommand("schedule", "Print the tau/delta refinement table");
  schedule->add_option("--tau0", tau0, "Initial x-step")->required();
  schedule->add_option("--gamma", gamma, "Coupling factor")->required();
  schedule->add_option("--epsilon", epsilon, "Coupling exponent offset")->required();
  schedule->add_option("--levels", levels, "Number of halvings")->required();

  auto* bench = app.add_subcommand("bench", "Segment-cost evaluation counts across refinement levels");
  bench->add_option("--config", config, "JSON configuration file")->required();
  bench->add_option("--levels", levels, "Number of halvings")->required();
  bench->add_option("--threads", threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  terracost::SolveOptions opts;
  opts.threads = thread_count(threads);
  if (*solve) return terracost::cmd_solve(config, out_dir, opts, std::cout, std::cerr);
  if (*verify) return terracost::cmd_verify(config, std::cout, std::cerr);
  if (*schedule) {
    return terracost::cmd_schedule(tau0, gamma, epsilon, levels, std::cout, std::cerr);
  }
  if (*bench) return terracost::cmd_bench(config, levels, opts, std::cout, std::cerr);
  return 1;
}
