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

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccdim/community.hpp"
#include "ccdim/ghist.hpp"
#include "ccdim/graph.hpp"
#include "ccdim/grr.hpp"
#include "ccdim/oracle.hpp"
#include "ccdim/rng.hpp"

namespace ccdim {

/// Declarative description of one experiment sweep.
struct ExperimentSpec {
  std::string graph_path;
  bool undirected = false;
  std::string communities_path;            // exclusive with synthetic_r
  std::vector<std::uint32_t> synthetic_r;  // community counts per metric
  int setting = 0;  // weight/coefficient preset; 0 = uniform
  double lambda = 0.7;
  std::vector<std::uint32_t> k_values = {10};
  double eps = 0.1;
  double delta = 0.1;
  std::vector<std::string> algorithms = {"ghist"};
  std::uint32_t reps = 3;
  std::uint64_t sims = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {
      "ghist",  "ghist-no-sentinel", "im-only",
      "random", "max-degree",        "greedy",
      "greedy-im"};
  return names;
}

/// Metric weights of the benchmark presets, by metric count (1 to 3).
inline std::vector<double> preset_weights(int setting,
                                          std::uint32_t metric_count) {
  if (metric_count < 1 || metric_count > 3)
    throw InputError("presets define 1 to 3 metrics");
  if (setting == 1) {
    if (metric_count == 1) return {1.0};
    if (metric_count == 2) return {0.4, 0.6};
    return {0.3, 0.3, 0.4};
  }
  if (setting == 2) {
    if (metric_count == 1) return {1.0};
    if (metric_count == 2) return {0.1, 0.9};
    return {0.1, 0.1, 0.8};
  }
  throw InputError("unknown setting label (expected 1 or 2)");
}

/// Per-community utility coefficients of the benchmark presets. Metric q
/// (0-based) has 3 + q communities.
inline std::vector<double> preset_coefficients(int setting,
                                               std::uint32_t metric_index) {
  if (metric_index > 2) throw InputError("presets define 1 to 3 metrics");
  if (setting == 1) {
    if (metric_index == 0) return {0.4, 1.0, 1.6};
    if (metric_index == 1) return {0.4, 0.8, 1.2, 1.6};
    return {0.2, 0.6, 1.0, 1.4, 1.8};
  }
  if (setting == 2) {
    if (metric_index == 0) return {0.1, 0.1, 2.8};
    if (metric_index == 1) return {0.1, 0.1, 0.8, 3.0};
    return {0.1, 0.1, 0.1, 1.7, 3.0};
  }
  throw InputError("unknown setting label (expected 1 or 2)");
}

/// Builds a synthetic configuration: hash partitions with the requested
/// community counts, weighted either by a benchmark preset (setting 1 or 2,
/// which pins the community counts to 3/4/5) or uniformly with unit
/// coefficients (setting 0).
inline CommunityConfig make_synthetic_config(
    const DirectedGraph& graph, const std::vector<std::uint32_t>& r_list,
    int setting, double lambda, std::uint64_t seed) {
  if (r_list.empty()) throw InputError("at least one community count needed");
  std::vector<double> weights;
  if (setting != 0) {
    weights = preset_weights(setting, static_cast<std::uint32_t>(r_list.size()));
    for (std::uint32_t q = 0; q < r_list.size(); ++q)
      if (r_list[q] != preset_coefficients(setting, q).size())
        throw InputError(
            "setting presets expect community counts 3,4,5; use setting 0 "
            "for other counts");
  } else {
    weights.assign(r_list.size(), 1.0 / static_cast<double>(r_list.size()));
  }
  std::vector<MetricPartition> partitions;
  for (std::uint32_t q = 0; q < r_list.size(); ++q) {
    MetricPartition part =
        hash_partition(graph, r_list[q], derive_seed(seed, "partition", q));
    part.metric_id = "q" + std::to_string(q + 1);
    part.weight = weights[q];
    if (setting != 0) part.coefficients = preset_coefficients(setting, q);
    partitions.push_back(std::move(part));
  }
  return CommunityConfig::build(lambda, std::move(partitions),
                                graph.node_count());
}

/// Result of one (algorithm, k, repetition) cell.
struct CellResult {
  std::string algorithm;
  std::uint32_t k = 0;
  std::uint32_t rep = 0;
  std::vector<std::int64_t> seeds;  // original ids, ascending
  ObjectiveValue value;
  double f_std_error = 0.0;
  double runtime_ms = 0.0;
  bool has_run = false;  // true for the sampling algorithms
  RunResult run;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<CellResult> cells;
};

namespace detail {

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

inline std::vector<std::int64_t> to_original_ids(
    const DirectedGraph& graph, const std::vector<NodeId>& seeds) {
  std::vector<std::int64_t> out;
  out.reserve(seeds.size());
  for (NodeId v : seeds) out.push_back(graph.original_id(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Runs one algorithm cell. The per-cell seed stream depends only on
/// (master seed, algorithm, k, rep), so cells are independent of sweep order.
inline CellResult run_cell(const DirectedGraph& graph,
                           const CommunityConfig& config,
                           const ExperimentSpec& spec,
                           const std::string& algorithm, std::uint32_t k,
                           std::uint32_t rep) {
  CellResult cell;
  cell.algorithm = algorithm;
  cell.k = k;
  cell.rep = rep;
  const std::uint64_t cell_seed = derive_seed(
      spec.seed, algorithm, (static_cast<std::uint64_t>(k) << 32) | rep);

  detail::StageTimer timer;
  std::vector<NodeId> seeds;
  if (algorithm == "ghist") {
    cell.run = g_hist(graph, config, k, spec.eps, spec.delta, cell_seed);
    cell.has_run = true;
    seeds = cell.run.seeds;
  } else if (algorithm == "ghist-no-sentinel") {
    cell.run =
        g_hist_no_sentinel(graph, config, k, spec.eps, spec.delta, cell_seed);
    cell.has_run = true;
    seeds = cell.run.seeds;
  } else if (algorithm == "im-only") {
    cell.run = im_only(graph, k, spec.eps, spec.delta, cell_seed);
    cell.has_run = true;
    seeds = cell.run.seeds;
  } else if (algorithm == "max-degree") {
    seeds = max_degree(graph, k);
  } else if (algorithm == "random") {
    Rng rng(cell_seed);
    seeds = random_seeds(graph, k, rng);
  } else if (algorithm == "greedy") {
    seeds = greedy_sim(graph, config, k, spec.sims, cell_seed);
  } else if (algorithm == "greedy-im") {
    MetricPartition part;
    part.metric_id = "all";
    part.weight = 1.0;
    part.assignment.assign(graph.node_count(), 0);
    part.coefficients.assign(1, 1.0);
    CommunityConfig im_config =
        CommunityConfig::build(0.0, {std::move(part)}, graph.node_count());
    seeds = greedy_sim(graph, im_config, k, spec.sims, cell_seed);
  } else {
    throw InputError("unknown algorithm: " + algorithm);
  }
  cell.runtime_ms = timer.elapsed_ms();

  Rng eval_rng = make_rng(spec.seed, "evaluate/" + algorithm,
                          (static_cast<std::uint64_t>(k) << 32) | rep);
  cell.value = monte_carlo_f(graph, config, seeds, spec.sims, eval_rng,
                             &cell.f_std_error);
  cell.seeds = detail::to_original_ids(graph, seeds);
  return cell;
}

/// Runs the full sweep: every algorithm at every k for `reps` repetitions.
inline ExperimentResult run_experiment(const DirectedGraph& graph,
                                       const CommunityConfig& config,
                                       ExperimentSpec spec) {
  if (spec.algorithms.empty()) throw InputError("no algorithms selected");
  if (spec.k_values.empty()) throw InputError("no k values selected");
  if (spec.reps == 0) throw InputError("at least one repetition required");
  for (const std::string& algorithm : spec.algorithms) {
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), algorithm) == known.end())
      throw InputError("unknown algorithm: " + algorithm);
  }
  std::sort(spec.k_values.begin(), spec.k_values.end());
  spec.k_values.erase(
      std::unique(spec.k_values.begin(), spec.k_values.end()),
      spec.k_values.end());

  ExperimentResult result;
  result.spec = spec;
  for (const std::string& algorithm : spec.algorithms)
    for (std::uint32_t k : spec.k_values)
      for (std::uint32_t rep = 0; rep < spec.reps; ++rep)
        result.cells.push_back(
            run_cell(graph, config, spec, algorithm, k, rep));
  return result;
}

/// Aggregated CSV: one row per (algorithm, k), averaged over repetitions.
/// Deliberately timing-free so that equal-seed runs are byte-identical.
inline void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "algorithm,k,reps,f_estimate,sigma,phi,theta_stage1,theta_stage2,b,"
         "avg_entry_nodes\n";
  for (const std::string& algorithm : result.spec.algorithms) {
    for (std::uint32_t k : result.spec.k_values) {
      double f = 0, sigma = 0, phi = 0, theta1 = 0, theta2 = 0, b = 0,
             avg_nodes = 0;
      std::uint32_t count = 0;
      for (const CellResult& cell : result.cells) {
        if (cell.algorithm != algorithm || cell.k != k) continue;
        ++count;
        f += cell.value.f;
        sigma += cell.value.sigma;
        phi += cell.value.phi;
        theta1 += static_cast<double>(cell.run.stage1.final_theta_r1);
        theta2 += static_cast<double>(cell.run.stage2.final_theta_r1);
        b += cell.run.stage1.chosen_b;
        avg_nodes += cell.run.stage2.avg_entry_nodes_r1;
      }
      if (count == 0) continue;
      const double c = count;
      out << algorithm << ',' << k << ',' << count << ','
          << detail::format_number(f / c) << ','
          << detail::format_number(sigma / c) << ','
          << detail::format_number(phi / c) << ','
          << detail::format_number(theta1 / c) << ','
          << detail::format_number(theta2 / c) << ','
          << detail::format_number(b / c) << ','
          << detail::format_number(avg_nodes / c) << '\n';
    }
  }
}

/// Full JSON report: parameters, per-repetition detail including seed sets,
/// bound traces and wall-clock times.
inline nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  const ExperimentSpec& spec = result.spec;
  j["parameters"] = {
      {"graph", spec.graph_path},     {"undirected", spec.undirected},
      {"communities", spec.communities_path},
      {"synthetic_r", spec.synthetic_r},
      {"setting", spec.setting},      {"lambda", spec.lambda},
      {"k", spec.k_values},           {"eps", spec.eps},
      {"delta", spec.delta},          {"algorithms", spec.algorithms},
      {"reps", spec.reps},            {"sims", spec.sims},
      {"seed", spec.seed}};
  auto stage_json = [](const StageReport& stage) {
    nlohmann::json s;
    s["certified"] = stage.certified;
    s["b"] = stage.chosen_b;
    s["final_lower"] = stage.final_lower;
    s["final_upper"] = stage.final_upper;
    s["final_ratio"] = stage.final_ratio;
    s["theta_selection"] = stage.final_theta_r1;
    s["theta_validation"] = stage.final_theta_r2;
    s["theta_max"] = stage.theta_max;
    s["i_max"] = stage.i_max;
    s["avg_entry_nodes_selection"] = stage.avg_entry_nodes_r1;
    s["avg_entry_nodes_validation"] = stage.avg_entry_nodes_r2;
    s["wall_ms"] = stage.wall_ms;
    s["iterations"] = nlohmann::json::array();
    for (const IterationRecord& rec : stage.iterations)
      s["iterations"].push_back({{"theta_r1", rec.theta_r1},
                                 {"theta_r2", rec.theta_r2},
                                 {"b", rec.b},
                                 {"lower", rec.lower},
                                 {"upper", rec.upper},
                                 {"ratio", rec.ratio},
                                 {"certified", rec.certified}});
    return s;
  };
  j["runs"] = nlohmann::json::array();
  for (const CellResult& cell : result.cells) {
    nlohmann::json r = {{"algorithm", cell.algorithm},
                        {"k", cell.k},
                        {"rep", cell.rep},
                        {"seeds", cell.seeds},
                        {"f_estimate", cell.value.f},
                        {"f_std_error", cell.f_std_error},
                        {"sigma", cell.value.sigma},
                        {"phi", cell.value.phi},
                        {"runtime_ms", cell.runtime_ms}};
    if (cell.has_run) {
      r["certified"] = cell.run.certified;
      r["certified_ratio"] = cell.run.certified_ratio;
      r["stage1"] = stage_json(cell.run.stage1);
      r["stage2"] = stage_json(cell.run.stage2);
    }
    j["runs"].push_back(std::move(r));
  }
  return j;
}

/// Loads the graph for a spec, filling in weighted-cascade probabilities
/// when the file does not provide them.
inline DirectedGraph load_experiment_graph(const ExperimentSpec& spec) {
  DirectedGraph graph =
      load_edge_list_file(spec.graph_path, !spec.undirected);
  bool unset = false;
  for (const Edge& e : graph.edges())
    if (!e.has_probability()) unset = true;
  if (unset) graph = assign_wc(graph);
  return graph;
}

/// Loads or synthesizes the community configuration for a spec.
inline CommunityConfig load_experiment_config(const ExperimentSpec& spec,
                                              const DirectedGraph& graph) {
  if (!spec.communities_path.empty() && !spec.synthetic_r.empty())
    throw InputError("--communities and --synthetic are exclusive");
  if (!spec.communities_path.empty())
    return load_communities_file(spec.communities_path, graph);
  if (!spec.synthetic_r.empty())
    return make_synthetic_config(graph, spec.synthetic_r, spec.setting,
                                 spec.lambda, spec.seed);
  throw InputError("either --communities or --synthetic is required");
}

/// The `run` subcommand: sweep, then write results.csv and report.json.
inline ExperimentResult cmd_run(const ExperimentSpec& spec) {
  DirectedGraph graph = load_experiment_graph(spec);
  CommunityConfig config = load_experiment_config(spec, graph);
  ExperimentResult result = run_experiment(graph, config, spec);
  std::filesystem::create_directories(spec.out_dir);
  {
    std::ofstream csv(std::filesystem::path(spec.out_dir) / "results.csv",
                      std::ios::binary);
    if (!csv) throw InputError("cannot write results.csv");
    write_csv(result, csv);
  }
  {
    std::ofstream json_out(std::filesystem::path(spec.out_dir) /
                           "report.json");
    if (!json_out) throw InputError("cannot write report.json");
    json_out << to_json(result).dump(2) << '\n';
  }
  return result;
}

/// The `oracle-check` subcommand: cross-validates the sampling pipeline
/// against exhaustive enumeration on a tiny instance.
inline void cmd_oracle_check(const ExperimentSpec& spec, std::ostream& out) {
  DirectedGraph graph = load_experiment_graph(spec);
  CommunityConfig config = load_experiment_config(spec, graph);
  const std::uint32_t k = spec.k_values.front();

  RunResult run = g_hist(graph, config, k, spec.eps, spec.delta,
                         derive_seed(spec.seed, "oracle-check"));
  ObjectiveValue exact = exact_f(graph, config, run.seeds);
  Rng eval_rng = make_rng(spec.seed, "oracle-check-eval");
  double se = 0.0;
  ObjectiveValue estimated =
      monte_carlo_f(graph, config, run.seeds, spec.sims, eval_rng, &se);
  auto [best, best_value] = brute_force_opt(graph, config, k);

  auto ids = detail::to_original_ids(graph, run.seeds);
  out << "seeds:";
  for (std::int64_t v : ids) out << ' ' << v;
  out << "\nexact_f(seeds) = " << detail::format_number(exact.f)
      << "\nmonte_carlo_f(seeds) = " << detail::format_number(estimated.f)
      << " (std_error " << detail::format_number(se) << ")";
  auto best_ids = detail::to_original_ids(graph, best);
  out << "\noptimum_seeds:";
  for (std::int64_t v : best_ids) out << ' ' << v;
  out << "\nexact_f(optimum) = " << detail::format_number(best_value.f)
      << "\napproximation_ratio = "
      << detail::format_number(exact.f / best_value.f) << "\ncertified = "
      << (run.certified ? "yes" : "no") << " (ratio "
      << detail::format_number(run.certified_ratio) << ")\n";
}

/// The `gen-communities` subcommand: writes a synthetic community file with
/// benchmark preset weights and coefficients.
inline void cmd_gen(const ExperimentSpec& spec, std::ostream& out) {
  DirectedGraph graph = load_edge_list_file(spec.graph_path, !spec.undirected);
  if (spec.synthetic_r.empty())
    throw InputError("--synthetic r1,r2,... is required");
  CommunityConfig config = make_synthetic_config(
      graph, spec.synthetic_r, spec.setting, spec.lambda, spec.seed);
  save_communities(config, graph, out);
}

/// The `wc-assign` subcommand: writes the graph back with weighted-cascade
/// probabilities filled in.
inline void cmd_wc_assign(const ExperimentSpec& spec, std::ostream& out) {
  DirectedGraph graph = load_edge_list_file(spec.graph_path, !spec.undirected);
  save_edge_list(assign_wc(graph), out);
}

}  // namespace ccdim
