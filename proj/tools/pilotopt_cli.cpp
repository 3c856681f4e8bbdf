// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 pilotopt contributors
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

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pilotopt/pilotopt.hpp"

namespace {

// Command-line flags override the spec file; the PILOTOPT_OUT environment
// variable overrides both when set.
void apply_overrides(pilotopt::experiment_spec &spec, bool seed_set, std::uint64_t seed,
                     bool threads_set, unsigned threads, const std::string &out) {
  if (seed_set) spec.seed = seed;
  if (threads_set) spec.threads = threads;
  if (!out.empty()) spec.output_dir = out;
  if (const char *env = std::getenv("PILOTOPT_OUT"); env && *env) spec.output_dir = env;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Joint pilot design and uplink power allocation experiments"};
  app.require_subcommand(1);

  std::string spec_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir;
  bool seed_set = false, threads_set = false;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("spec", spec_path, "experiment spec (.ini or .json)")->required();
    cmd->add_option("--seed", seed, "override the spec seed")
        ->each([&](const std::string &) { seed_set = true; });
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->each([&](const std::string &) { threads_set = true; });
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App *run = app.add_subcommand("run", "run the experiment in a spec file");
  add_common(run);
  CLI::App *validate =
      app.add_subcommand("validate", "audit closed forms against simulation");
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  pilotopt::experiment_spec spec;
  try {
    spec = pilotopt::load_spec(spec_path);
    apply_overrides(spec, seed_set, seed, threads_set, threads, out_dir);
    spec.validate();
  } catch (const std::exception &e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return pilotopt::exit_spec_error;
  }

  try {
    int rc = run->parsed() ? pilotopt::run_experiment(spec) : pilotopt::run_validation(spec);
    if (rc == pilotopt::exit_ok)
      std::cout << "done: outputs in " << spec.output_dir << "\n";
    else if (rc == pilotopt::exit_solver_error)
      std::cerr << "completed with solver failures: see " << spec.output_dir
                << "/samples.csv\n";
    else
      std::cerr << "validation failed: see " << spec.output_dir << "/validation.csv\n";
    return rc;
  } catch (const pilotopt::solver_error &e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return pilotopt::exit_solver_error;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return pilotopt::exit_spec_error;
  }
}
