// Copyright 2026 The qmarkov Authors
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

// qmarkov: scenario-driven front end.
//
//   qmarkov <generator|floquet|evolve|sweep|qec|validity> --scenario FILE [--out DIR]
//           [--jobs N] [--seed K] [--tol-override KEY=VAL ...]
//   qmarkov report SUMMARY.json [SUMMARY.json ...]

#include <CLI11.hpp>

#include <iostream>

#include "qmarkov/scenario.hpp"

int main(int argc, char** argv) {
  using namespace qmarkov;
  CLI::App app{"Markovian open-system workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string scenario_path, out_dir = ".";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::vector<std::string> summaries;

  std::vector<std::pair<std::string, CLI::App*>> runners;
  for (const char* kind : {"generator", "floquet", "evolve", "sweep", "qec", "validity"}) {
    CLI::App* sub = app.add_subcommand(kind, std::string("run a ") + kind + " scenario");
    sub->add_option("--scenario", scenario_path, "scenario YAML file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::Range(1, 256));
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->add_option("--tol-override", overrides, "tolerance override KEY=VAL (repeatable)");
    runners.emplace_back(kind, sub);
  }
  CLI::App* report = app.add_subcommand("report", "digest JSON summaries");
  report->add_option("summaries", summaries, "summary files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      bool ok = false;
      std::cout << report_digest(summaries, &ok);
      return ok ? 0 : 1;
    }
    for (const auto& o : overrides) apply_tolerance_override(o);
    for (const auto& [kind, sub] : runners) {
      if (!sub->parsed()) continue;
      const Scenario s = parse_scenario(scenario_path);
      if (kind != to_string(s.kind)) {
        std::cerr << "error: scenario kind is '" << to_string(s.kind) << "' but the command is '" << kind << "'\n";
        return 2;
      }
      RunOptions opts;
      opts.out_dir = out_dir;
      opts.jobs = jobs;
      opts.seed = seed;
      const RunOutcome r = run_scenario(s, opts);
      std::cout << r.summary_path << "\n";
      for (const auto& p : r.csv_paths) std::cout << p << "\n";
      return r.exit_code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
