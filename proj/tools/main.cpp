// Copyright 2026 The nmqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nmqaoa/error.hpp"
#include "nmqaoa/experiment.hpp"
#include "nmqaoa/parallel.hpp"

namespace {

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << out << "'\n";
    return 2;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA Max-Cut on non-Markovian open quantum systems"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int workers = 0;

  const char* names[] = {"solve", "sweep", "explore", "benchmark", "multinode"};
  const char* help[] = {"optimize a schedule and report the final state as JSON",
                        "sweep one mode parameter and report BLP measures as CSV",
                        "sample random depth-2 schedules and report exploration rates as CSV",
                        "compare master and trajectory backends as CSV",
                        "optimize the induced Table graphs over a node range as CSV"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON config file (may name a \"preset\")")->required();
    sub->add_option("--out", out_path, "output path (stdout when omitted)");
    sub->add_option("--seed", seed, "overrides solver.seed and explore.seed");
    sub->add_option("--workers", workers, "worker threads (default NMQAOA_WORKERS, then all cores)")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    nmqaoa::ExperimentConfig cfg = nmqaoa::load_config(config_path);
    if (seed) {
      cfg.solver.seed = *seed;
      cfg.explore.seed = *seed;
    }
    if (workers > 0) cfg.workers = workers;
    const int w = nmqaoa::resolve_workers(cfg.workers);

    std::string text;
    if (command == "solve") {
      text = nmqaoa::cmd_solve(cfg, w).dump(2) + "\n";
    } else if (command == "sweep") {
      text = nmqaoa::cmd_sweep(cfg, w);
    } else if (command == "explore") {
      text = nmqaoa::cmd_explore(cfg, w);
    } else if (command == "benchmark") {
      text = nmqaoa::cmd_benchmark(cfg, w);
    } else {
      text = nmqaoa::cmd_multinode(cfg, w);
    }
    return emit(text, out_path);
  } catch (const nmqaoa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nmqaoa::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nmqaoa::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
