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
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ccdim/community.hpp"
#include "ccdim/graph.hpp"
#include "ccdim/rng.hpp"

namespace ccdim {

/// One deterministic world: a live/blocked state for every edge.
struct Realization {
  std::vector<char> live;  // indexed by edge id
};

/// Probability of drawing `realization` under independent edge activation.
/// Requires every edge probability to be set.
inline double realization_probability(const DirectedGraph& graph,
                                      const Realization& realization) {
  double p = 1.0;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edge(e);
    if (!edge.has_probability())
      throw InputError("edge probability unset; run weighted-cascade "
                       "assignment or provide probabilities");
    p *= realization.live[e] ? edge.probability : 1.0 - edge.probability;
  }
  return p;
}

/// Nodes reachable from `seeds` over live edges, ascending ids.
inline std::vector<NodeId> reachable_from(const DirectedGraph& graph,
                                          const Realization& realization,
                                          std::span<const NodeId> seeds) {
  std::vector<char> active(graph.node_count(), 0);
  std::vector<NodeId> queue;
  for (NodeId s : seeds) {
    if (!active[s]) {
      active[s] = 1;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (EdgeId e : graph.out_edge_ids(u)) {
      NodeId v = graph.edge(e).target;
      if (realization.live[e] && !active[v]) {
        active[v] = 1;
        queue.push_back(v);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

/// One forward independent-cascade simulation; returns the activated set in
/// ascending order. Edges are flipped lazily, only when their source fires.
inline std::vector<NodeId> simulate_ic(const DirectedGraph& graph,
                                       std::span<const NodeId> seeds,
                                       Rng& rng) {
  std::vector<char> active(graph.node_count(), 0);
  std::vector<NodeId> queue;
  for (NodeId s : seeds) {
    if (!active[s]) {
      active[s] = 1;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (EdgeId e : graph.out_edge_ids(u)) {
      const Edge& edge = graph.edge(e);
      NodeId v = edge.target;
      if (active[v]) continue;
      if (!edge.has_probability())
        throw InputError("edge probability unset; run weighted-cascade "
                         "assignment or provide probabilities");
      if (uniform01(rng) < edge.probability) {
        active[v] = 1;
        queue.push_back(v);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

/// Expected influence, diversity and blended objective of a seed set.
/// Maintains f == (1-lambda) * sigma / n + lambda * phi / phi(V).
struct ObjectiveValue {
  double f = 0.0;      // blended objective in [0, 1]
  double sigma = 0.0;  // expected number of activated nodes
  double phi = 0.0;    // expected diversity utility (unnormalized)
};

namespace detail {

/// Diversity utility of one activated set (ascending ids not required).
inline double diversity_of(const CommunityConfig& config,
                           std::span<const NodeId> activated) {
  double total = 0.0;
  for (const MetricPartition& part : config.partitions) {
    double metric_total = 0.0;
    for (NodeId v : activated)
      metric_total += part.coefficients[part.assignment[v]];
    total += part.weight * metric_total;
  }
  return total;
}

inline ObjectiveValue blend(const CommunityConfig& config, double n,
                            double sigma, double phi) {
  ObjectiveValue value;
  value.sigma = sigma;
  value.phi = phi;
  value.f = (1.0 - config.lambda) * sigma / n +
            config.lambda * phi / phi_v(config);
  return value;
}

}  // namespace detail

/// Monte Carlo estimate of the objective from independent cascade
/// simulations. When `f_std_error` is non-null it receives the standard
/// error of the f estimate.
inline ObjectiveValue monte_carlo_f(const DirectedGraph& graph,
                                    const CommunityConfig& config,
                                    std::span<const NodeId> seeds,
                                    std::uint64_t num_simulations, Rng& rng,
                                    double* f_std_error = nullptr) {
  if (num_simulations == 0)
    throw InputError("at least one simulation required");
  const double n = static_cast<double>(graph.node_count());
  const double normalizer = phi_v(config);
  double sigma_sum = 0.0, phi_sum = 0.0, f_sum = 0.0, f_sq_sum = 0.0;
  for (std::uint64_t i = 0; i < num_simulations; ++i) {
    std::vector<NodeId> activated = simulate_ic(graph, seeds, rng);
    double sigma = static_cast<double>(activated.size());
    double phi = detail::diversity_of(config, activated);
    double f = (1.0 - config.lambda) * sigma / n +
               config.lambda * phi / normalizer;
    sigma_sum += sigma;
    phi_sum += phi;
    f_sum += f;
    f_sq_sum += f * f;
  }
  const double count = static_cast<double>(num_simulations);
  if (f_std_error) {
    double mean = f_sum / count;
    double variance =
        std::max(0.0, f_sq_sum / count - mean * mean) /
        std::max(1.0, count - 1.0);
    *f_std_error = std::sqrt(variance);
  }
  return detail::blend(config, n, sigma_sum / count, phi_sum / count);
}

/// Exact objective by enumerating all 2^m edge realizations. Only intended
/// for tiny graphs; refuses anything past `max_edges`.
inline ObjectiveValue exact_f(const DirectedGraph& graph,
                              const CommunityConfig& config,
                              std::span<const NodeId> seeds,
                              std::uint32_t max_edges = 20) {
  const std::uint32_t m = graph.edge_count();
  if (m > max_edges)
    throw InputError("graph too large for exact enumeration");
  const double n = static_cast<double>(graph.node_count());
  Realization realization;
  realization.live.assign(m, 0);
  double sigma = 0.0, phi = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    for (std::uint32_t e = 0; e < m; ++e)
      realization.live[e] = static_cast<char>((mask >> e) & 1ULL);
    double p = realization_probability(graph, realization);
    if (p == 0.0) continue;
    std::vector<NodeId> activated = reachable_from(graph, realization, seeds);
    sigma += p * static_cast<double>(activated.size());
    phi += p * detail::diversity_of(config, activated);
  }
  return detail::blend(config, n, sigma, phi);
}

/// Exhaustive optimum over all size-k seed sets under the exact objective.
/// Ties break toward the lexicographically smallest id vector. The work is
/// C(n, k) * 2^m closure computations; `max_evaluations` guards runaway use.
inline std::pair<std::vector<NodeId>, ObjectiveValue> brute_force_opt(
    const DirectedGraph& graph, const CommunityConfig& config, std::uint32_t k,
    std::uint32_t max_edges = 20, std::uint64_t max_evaluations = (1ULL << 26)) {
  const std::uint32_t n = graph.node_count();
  if (k > n) throw InputError("seed budget exceeds node count");
  const std::uint32_t m = graph.edge_count();
  if (m > max_edges)
    throw InputError("graph too large for exact enumeration");
  double subsets = 1.0;
  for (std::uint32_t i = 0; i < k; ++i)
    subsets = subsets * static_cast<double>(n - i) /
              static_cast<double>(i + 1);
  if (subsets * std::pow(2.0, static_cast<double>(m)) >
      static_cast<double>(max_evaluations))
    throw InputError("exhaustive search budget exceeded");

  std::vector<NodeId> current(k), best;
  ObjectiveValue best_value;
  bool have_best = false;
  // Enumerate k-combinations in lexicographic order; strict improvement
  // keeps the first (smallest) maximizer.
  for (std::uint32_t i = 0; i < k; ++i) current[i] = i;
  while (true) {
    ObjectiveValue value = exact_f(graph, config, current, max_edges);
    if (!have_best || value.f > best_value.f + 1e-15) {
      best = current;
      best_value = value;
      have_best = true;
    }
    if (k == 0) break;
    std::uint32_t i = k;
    while (i > 0 && current[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::uint32_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return {std::move(best), best_value};
}

}  // namespace ccdim
