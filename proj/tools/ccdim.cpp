// Copyright 2026 The Authors.
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

// Command-line harness for community-aware diversified influence
// maximization experiments.
//
//   ccdim run            sweep algorithms over a graph, write CSV + JSON
//   ccdim oracle-check   cross-validate the pipeline on a tiny instance
//   ccdim gen-communities  emit a synthetic community file
//   ccdim wc-assign      fill in weighted-cascade edge probabilities

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccdim/experiment.hpp"

namespace {

void add_graph_flags(CLI::App& app, ccdim::ExperimentSpec& spec,
                     bool required = true) {
  app.add_option("--graph", spec.graph_path, "edge list file (u v [p] lines)")
      ->required(required);
  app.add_flag("--undirected", spec.undirected,
               "treat each input line as two directed edges");
}

void add_config_flags(CLI::App& app, ccdim::ExperimentSpec& spec) {
  app.add_option("--communities", spec.communities_path,
                 "community configuration file");
  app.add_option("--synthetic", spec.synthetic_r,
                 "community counts per metric, e.g. 3,4,5")
      ->delimiter(',');
  app.add_option("--setting", spec.setting,
                 "weight/coefficient preset: 0 uniform, 1 or 2 benchmark")
      ->check(CLI::Range(0, 2));
  app.add_option("--lambda", spec.lambda,
                 "diversity blend weight in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ccdim::InputError("cannot write output file: " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community-aware diversified influence maximization"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "declarative experiment file with a [run] section; "
                 "command-line flags override it");

  ccdim::ExperimentSpec spec;
  std::string out_path;

  CLI::App* run = app.add_subcommand(
      "run", "run an experiment sweep and write results.csv + report.json");
  run->fallthrough();
  add_graph_flags(*run, spec);
  add_config_flags(*run, spec);
  run->add_option("--k", spec.k_values, "seed budgets, e.g. 10,20,30")
      ->delimiter(',');
  run->add_option("--eps", spec.eps, "accuracy parameter in (0, 1 - 1/e)");
  run->add_option("--delta", spec.delta, "failure probability in (0, 1)");
  run->add_option("--algo", spec.algorithms,
                  "algorithms: ghist, ghist-no-sentinel, im-only, random, "
                  "max-degree, greedy, greedy-im")
      ->delimiter(',');
  run->add_option("--reps", spec.reps, "repetitions per (algorithm, k)");
  run->add_option("--sims", spec.sims,
                  "cascade simulations per objective evaluation");
  run->add_option("--seed", spec.seed, "master random seed");
  run->add_option("--out", spec.out_dir, "output directory");

  CLI::App* oracle = app.add_subcommand(
      "oracle-check",
      "compare sampling results against exhaustive enumeration (tiny graphs)");
  oracle->fallthrough();
  add_graph_flags(*oracle, spec);
  add_config_flags(*oracle, spec);
  oracle->add_option("--k", spec.k_values, "seed budget")->delimiter(',');
  oracle->add_option("--eps", spec.eps, "accuracy parameter");
  oracle->add_option("--delta", spec.delta, "failure probability");
  oracle->add_option("--sims", spec.sims, "simulations for the estimate");
  oracle->add_option("--seed", spec.seed, "master random seed");

  CLI::App* gen = app.add_subcommand(
      "gen-communities", "emit a synthetic community configuration file");
  gen->fallthrough();
  add_graph_flags(*gen, spec);
  gen->add_option("--synthetic", spec.synthetic_r,
                  "community counts per metric, e.g. 3,4,5")
      ->delimiter(',')
      ->required();
  gen->add_option("--setting", spec.setting,
                  "weight/coefficient preset: 0 uniform, 1 or 2 benchmark")
      ->check(CLI::Range(0, 2));
  gen->add_option("--lambda", spec.lambda, "diversity blend weight");
  gen->add_option("--seed", spec.seed, "partition seed");
  gen->add_option("--out", out_path, "output file (default: stdout)");

  CLI::App* wc = app.add_subcommand(
      "wc-assign", "fill weighted-cascade probabilities into an edge list");
  wc->fallthrough();
  add_graph_flags(*wc, spec);
  wc->add_option("--out", out_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ccdim::cmd_run(spec);
    } else if (oracle->parsed()) {
      ccdim::cmd_oracle_check(spec, std::cout);
    } else if (gen->parsed()) {
      if (out_path.empty()) {
        ccdim::cmd_gen(spec, std::cout);
      } else {
        auto out = open_out(out_path);
        ccdim::cmd_gen(spec, out);
      }
    } else if (wc->parsed()) {
      if (out_path.empty()) {
        ccdim::cmd_wc_assign(spec, std::cout);
      } else {
        auto out = open_out(out_path);
        ccdim::cmd_wc_assign(spec, out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
