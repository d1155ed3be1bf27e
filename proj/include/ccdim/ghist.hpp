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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ccdim/bounds.hpp"
#include "ccdim/community.hpp"
#include "ccdim/coverage.hpp"
#include "ccdim/graph.hpp"
#include "ccdim/grr.hpp"
#include "ccdim/oracle.hpp"
#include "ccdim/rng.hpp"

namespace ccdim {

/// Bound evaluations of one doubling iteration.
struct IterationRecord {
  std::uint64_t theta_r1 = 0;  // selection collection size
  std::uint64_t theta_r2 = 0;  // validation collection size (0 if unused)
  std::uint32_t b = 0;         // prefix passing the rough test (stage one)
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 0.0;
  bool certified = false;
};

/// Progress report of one doubling stage.
struct StageReport {
  std::vector<IterationRecord> iterations;
  bool certified = false;
  std::uint32_t chosen_b = 0;  // certified/last sentinel prefix (stage one)
  double final_lower = 0.0;
  double final_upper = 0.0;
  double final_ratio = 0.0;
  std::uint64_t final_theta_r1 = 0;
  std::uint64_t final_theta_r2 = 0;
  double avg_entry_nodes_r1 = 0.0;
  double avg_entry_nodes_r2 = 0.0;
  std::int64_t theta_max = 0;
  std::int32_t i_max = 0;
  double wall_ms = 0.0;
};

/// Outcome of a full two-stage run (or of a baseline, with empty reports).
struct RunResult {
  std::vector<NodeId> seeds;  // ascending ids
  std::uint32_t k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  bool certified = false;
  double certified_ratio = 0.0;  // last lower/upper ratio of the final stage
  StageReport stage1;
  StageReport stage2;
};

namespace detail {

/// Certification target for a sentinel prefix of size a out of k: the share
/// of the optimum the first a greedy picks are guaranteed to retain.
inline double sentinel_threshold(std::uint32_t k, std::uint32_t a,
                                 double eps1) {
  return 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(k),
                        static_cast<double>(a)) -
         eps1;
}

inline std::int32_t doubling_iterations(std::int64_t theta_max,
                                        std::int64_t theta0) {
  const double ratio =
      static_cast<double>(theta_max) / static_cast<double>(theta0);
  if (ratio <= 1.0) return 1;
  // One extra step so the final doubling reaches (or passes) theta_max; the
  // stopping rule is only guaranteed to fire once that size is available.
  return static_cast<std::int32_t>(
      std::max<std::int64_t>(1, guarded_ceil(std::log2(ratio)) + 1));
}

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Stage one: finds a sentinel prefix of the greedy solution whose quality is
/// certified on an independent validation collection. Per doubling iteration:
/// greedy on the selection collection, rough lower bounds pick the longest
/// prefix that may pass, and a fresh validation collection (sampled with that
/// prefix as sentinel, so its coverage is just the pre-covered weight)
/// confirms or rejects it, once at the current size and once enlarged to 4x.
/// Exhausting the schedule returns the last (uncertified, possibly empty)
/// candidate.
inline std::pair<std::vector<NodeId>, StageReport> sentinel_set(
    const DirectedGraph& graph, const CommunityConfig& config, std::uint32_t k,
    double eps1, double delta1, std::uint64_t seed) {
  detail::StageTimer timer;
  StageReport report;
  const double fmin = f_min(config, graph, k);
  const std::int64_t theta0 = theta_initial(delta1);
  report.theta_max =
      theta_max_stage1(graph.node_count(), k, eps1, delta1, fmin);
  report.i_max = detail::doubling_iterations(report.theta_max, theta0);
  const double delta_u = delta1 / (3.0 * report.i_max);
  const double delta_l = delta1 / (6.0 * report.i_max);

  GrrCollection selection(graph, config, {},
                          derive_seed(seed, "stage1.selection"));
  selection.extend(static_cast<std::uint64_t>(theta0));

  std::vector<NodeId> sentinel;
  for (std::int32_t i = 1; i <= report.i_max; ++i) {
    IterationRecord rec;
    rec.theta_r1 = selection.theta();
    GreedyTrace trace = max_coverage_greedy(selection, k, {}, k);
    const double theta = static_cast<double>(selection.theta());
    const double f_upper =
        upper_bound_f(trace.upper_bound_coverage, theta, delta_u);
    rec.upper = f_upper;

    // Longest prefix whose rough lower bound clears its target.
    std::uint32_t b = 0;
    for (std::uint32_t a = k; a >= 1; --a) {
      const double rough =
          lower_bound_f(trace.prefix_coverage[a], theta, delta_l);
      if (rough / f_upper >= detail::sentinel_threshold(k, a, eps1)) {
        b = a;
        break;
      }
    }
    rec.b = b;

    if (b >= 1) {
      sentinel.assign(trace.selected.begin(), trace.selected.begin() + b);
      report.chosen_b = b;
      GrrCollection validation(
          graph, config, sentinel,
          derive_seed(seed, "stage1.validation",
                      static_cast<std::uint64_t>(i)));
      const double target = detail::sentinel_threshold(k, b, eps1);
      // Confirm at the current size, then once more enlarged to 4x.
      validation.extend(selection.theta());
      for (int attempt = 0; attempt < 2; ++attempt) {
        const double f_low =
            lower_bound_f(validation.base_covered_weight(),
                          static_cast<double>(validation.theta()), delta_l);
        rec.theta_r2 = validation.theta();
        rec.lower = f_low;
        rec.ratio = f_low / f_upper;
        rec.certified = rec.ratio >= target;
        if (rec.certified || attempt == 1) break;
        validation.extend(3 * selection.theta());
      }
      report.avg_entry_nodes_r2 = avg_entry_nodes(validation);
      report.final_theta_r2 = validation.theta();
    } else {
      sentinel.clear();
      report.chosen_b = 0;
    }

    report.iterations.push_back(rec);
    report.certified = rec.certified;
    report.final_lower = rec.lower;
    report.final_upper = rec.upper;
    report.final_ratio = rec.ratio;
    if (report.certified) break;
    if (i < report.i_max) selection.extend(selection.theta());
  }
  report.final_theta_r1 = selection.theta();
  report.avg_entry_nodes_r1 = avg_entry_nodes(selection);
  report.wall_ms = timer.elapsed_ms();
  return {std::move(sentinel), std::move(report)};
}

/// Stage two: greedily completes the sentinel to k seeds. Both collections
/// are sampled with the sentinel (entries it covers carry no node lists), the
/// greedy runs on one, the lower bound is validated on the other, and both
/// double until lower/upper reaches 1 - 1/e - eps or the schedule runs out.
inline std::pair<std::vector<NodeId>, StageReport> remaining_set(
    const DirectedGraph& graph, const CommunityConfig& config, std::uint32_t k,
    std::vector<NodeId> sentinel, double eps, double eps2, double delta2,
    std::uint64_t seed) {
  detail::StageTimer timer;
  StageReport report;
  const std::uint32_t b = static_cast<std::uint32_t>(sentinel.size());
  if (b > k) throw InputError("sentinel size exceeds k");
  const double fmin = f_min(config, graph, k);
  const std::int64_t theta0 = theta_initial(delta2);
  report.theta_max =
      theta_max_stage2(graph.node_count(), k, b, eps2, delta2, fmin);
  report.i_max = detail::doubling_iterations(report.theta_max, theta0);
  const double delta_u = delta2 / (3.0 * report.i_max);
  const double delta_l = delta2 / (3.0 * report.i_max);
  const double target = 1.0 - 1.0 / std::exp(1.0) - eps;

  GrrCollection selection(graph, config, sentinel,
                          derive_seed(seed, "stage2.selection"));
  GrrCollection validation(graph, config, sentinel,
                           derive_seed(seed, "stage2.validation"));
  selection.extend(static_cast<std::uint64_t>(theta0));
  validation.extend(static_cast<std::uint64_t>(theta0));

  std::vector<NodeId> extra;
  for (std::int32_t i = 1; i <= report.i_max; ++i) {
    IterationRecord rec;
    rec.theta_r1 = selection.theta();
    rec.theta_r2 = validation.theta();
    rec.b = b;
    GreedyTrace trace = max_coverage_greedy(selection, k - b, sentinel, k);
    extra = trace.selected;
    rec.upper = upper_bound_f(trace.upper_bound_coverage,
                              static_cast<double>(selection.theta()), delta_u);
    rec.lower = lower_bound_f(omega(extra, validation),
                              static_cast<double>(validation.theta()), delta_l);
    rec.ratio = rec.lower / rec.upper;
    rec.certified = rec.ratio >= target;

    report.iterations.push_back(rec);
    report.certified = rec.certified;
    report.final_lower = rec.lower;
    report.final_upper = rec.upper;
    report.final_ratio = rec.ratio;
    if (report.certified) break;
    if (i < report.i_max) {
      selection.extend(selection.theta());
      validation.extend(validation.theta());
    }
  }
  report.chosen_b = b;
  report.final_theta_r1 = selection.theta();
  report.final_theta_r2 = validation.theta();
  report.avg_entry_nodes_r1 = avg_entry_nodes(selection);
  report.avg_entry_nodes_r2 = avg_entry_nodes(validation);
  report.wall_ms = timer.elapsed_ms();
  return {std::move(extra), std::move(report)};
}

/// Full two-stage run: certify a sentinel prefix with half the error budget,
/// complete it with the other half. The returned seed set carries a
/// (1 - 1/e - eps)-of-optimum guarantee with probability 1 - delta whenever
/// `certified` is set (the stopping rule fired before the schedule ran out).
inline RunResult g_hist(const DirectedGraph& graph,
                        const CommunityConfig& config, std::uint32_t k,
                        double eps, double delta, std::uint64_t seed) {
  if (k < 1 || k > graph.node_count())
    throw InputError("k must lie in [1, n]");
  if (!(eps > 0.0 && eps < 1.0 - 1.0 / std::exp(1.0)))
    throw InputError("epsilon must lie in (0, 1 - 1/e)");
  if (!(delta > 0.0 && delta < 1.0))
    throw InputError("delta must lie in (0, 1)");

  const double eps1 = eps / 2.0, eps2 = eps / 2.0;
  const double delta1 = delta / 2.0, delta2 = delta / 2.0;

  RunResult result;
  result.k = k;
  result.epsilon = eps;
  result.delta = delta;

  auto [sentinel, stage1] = sentinel_set(graph, config, k, eps1, delta1,
                                         derive_seed(seed, "stage1"));
  auto [extra, stage2] =
      remaining_set(graph, config, k, sentinel, eps, eps2, delta2,
                    derive_seed(seed, "stage2"));

  result.seeds = std::move(sentinel);
  result.seeds.insert(result.seeds.end(), extra.begin(), extra.end());
  std::sort(result.seeds.begin(), result.seeds.end());
  result.certified = stage2.certified;
  result.certified_ratio = stage2.final_ratio;
  result.stage1 = std::move(stage1);
  result.stage2 = std::move(stage2);
  return result;
}

/// Ablation: one-stage run without a sentinel, with the full error budget.
inline RunResult g_hist_no_sentinel(const DirectedGraph& graph,
                                    const CommunityConfig& config,
                                    std::uint32_t k, double eps, double delta,
                                    std::uint64_t seed) {
  if (k < 1 || k > graph.node_count())
    throw InputError("k must lie in [1, n]");
  if (!(eps > 0.0 && eps < 1.0 - 1.0 / std::exp(1.0)))
    throw InputError("epsilon must lie in (0, 1 - 1/e)");
  if (!(delta > 0.0 && delta < 1.0))
    throw InputError("delta must lie in (0, 1)");
  RunResult result;
  result.k = k;
  result.epsilon = eps;
  result.delta = delta;
  auto [seeds, stage2] =
      remaining_set(graph, config, k, {}, eps, eps, delta, seed);
  std::sort(seeds.begin(), seeds.end());
  result.seeds = std::move(seeds);
  result.certified = stage2.certified;
  result.certified_ratio = stage2.final_ratio;
  result.stage2 = std::move(stage2);
  return result;
}

/// Influence-only run: same machinery with the diversity term switched off
/// and a single all-nodes community, i.e. classic reverse-sampling influence
/// maximization.
inline RunResult im_only(const DirectedGraph& graph, std::uint32_t k,
                         double eps, double delta, std::uint64_t seed) {
  MetricPartition part;
  part.metric_id = "all";
  part.weight = 1.0;
  part.assignment.assign(graph.node_count(), 0);
  part.coefficients.assign(1, 1.0);
  CommunityConfig config =
      CommunityConfig::build(0.0, {std::move(part)}, graph.node_count());
  return g_hist_no_sentinel(graph, config, k, eps, delta, seed);
}

/// Baseline: the k nodes of largest out-degree, ties toward smaller ids.
inline std::vector<NodeId> max_degree(const DirectedGraph& graph,
                                      std::uint32_t k) {
  if (k > graph.node_count()) throw InputError("k exceeds node count");
  std::vector<NodeId> order(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (graph.out_degree(a) != graph.out_degree(b))
      return graph.out_degree(a) > graph.out_degree(b);
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

/// Baseline: k distinct nodes drawn uniformly.
inline std::vector<NodeId> random_seeds(const DirectedGraph& graph,
                                        std::uint32_t k, Rng& rng) {
  if (k > graph.node_count()) throw InputError("k exceeds node count");
  std::vector<NodeId> pool(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) pool[v] = v;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint64_t j = i + rng() % (pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// Baseline: simulation-based hill climbing, `sims` cascades per candidate
/// evaluation. Exact-ish but quadratic; refuses instances beyond a budget.
inline std::vector<NodeId> greedy_sim(const DirectedGraph& graph,
                                      const CommunityConfig& config,
                                      std::uint32_t k, std::uint64_t sims,
                                      std::uint64_t seed) {
  const std::uint32_t n = graph.node_count();
  if (k > n) throw InputError("k exceeds node count");
  if (static_cast<double>(n) * k * static_cast<double>(sims) > 5e7)
    throw InputError("simulation greedy budget exceeded; use the sampling "
                     "algorithms for instances of this size");
  std::vector<NodeId> seeds;
  std::vector<char> chosen(n, 0);
  std::vector<NodeId> candidate;
  for (std::uint32_t round = 0; round < k; ++round) {
    NodeId best_node = n;
    double best_value = -1.0;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v]) continue;
      candidate = seeds;
      candidate.push_back(v);
      Rng rng = make_rng(seed, "greedy-sim",
                         static_cast<std::uint64_t>(round) * n + v);
      double value = monte_carlo_f(graph, config, candidate, sims, rng).f;
      if (value > best_value) {
        best_value = value;
        best_node = v;
      }
    }
    chosen[best_node] = 1;
    seeds.push_back(best_node);
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

}  // namespace ccdim
