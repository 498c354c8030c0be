/*
 * Copyright 2026 The fvn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include "fvn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fvn: compile, reduce and aggregate finite-valued networks"};
  app.require_subcommand(1);

  fvn::RunConfig cfg;
  std::size_t size_cap = 0;
  std::string mode = "boolean";

  auto common = [&](CLI::App* sub, const char* what) {
    sub->add_option("file", cfg.input, what)->required();
    sub->add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_option("--size-cap", size_cap, "maximum number of ASSR columns (overrides FVN_SIZE_CAP)")
        ->check(CLI::PositiveNumber);
  };

  common(app.add_subcommand("compile", "compile a network or transition system to ASSR JSON"), "DSL file");
  common(app.add_subcommand("quotient", "compute the output-equivalence quotient"), "DSL file");
  auto* check = app.add_subcommand("check", "bisimulation and output-language report");
  common(check, "DSL file");
  check->add_option("--horizon", cfg.horizon, "language horizon")->capture_default_str();
  common(app.add_subcommand("aggregate", "compile every declared block and assemble the aggregated network"),
         "network DSL file");
  auto* sim = app.add_subcommand("simulate", "simulate an aggregated network");
  common(sim, "aggregated network JSON");
  sim->add_option("--inputs", cfg.inputs, "control values per step, e.g. \"1,2,1;2,2,1\" (1-based)");
  sim->add_option("--initial", cfg.initial, "initial value per aggregated state variable (1-based)");
  sim->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  auto* horizon = sim->add_option("--horizon", cfg.horizon, "number of steps (default: length of --inputs)");
  sim->add_option("--mode", mode, "boolean | probabilistic")
      ->check(CLI::IsMember({"boolean", "probabilistic"}))
      ->capture_default_str();
  common(app.add_subcommand("export-dot", "write the network graph as DOT"), "DSL file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (size_cap > 0) cfg.size_cap = size_cap;
  cfg.mode = mode == "probabilistic" ? fvn::SimulationMode::Probabilistic : fvn::SimulationMode::BooleanNondet;
  cfg.horizon_given = cfg.command == "check" || horizon->count() > 0;
  return fvn::run(cfg);
}
