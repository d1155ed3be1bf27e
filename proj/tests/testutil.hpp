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

// Shared fixtures: tiny hand-built instances and random instance generators
// used across the test suite.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ccdim/community.hpp"
#include "ccdim/graph.hpp"
#include "ccdim/grr.hpp"
#include "ccdim/rng.hpp"

namespace ccdim::testutil {

inline DirectedGraph make_graph(
    std::uint32_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v, p] : edges) list.push_back(Edge{u, v, p});
  return DirectedGraph::from_edges(n, std::move(list));
}

/// Single-metric configuration from an explicit assignment.
inline CommunityConfig make_config(double lambda, std::uint32_t n,
                                   std::vector<std::uint32_t> assignment,
                                   std::vector<double> coefficients) {
  MetricPartition part;
  part.metric_id = "m0";
  part.weight = 1.0;
  part.assignment = std::move(assignment);
  part.coefficients = std::move(coefficients);
  return CommunityConfig::build(lambda, {std::move(part)}, n);
}

/// Multi-metric configuration; weights are normalized uniform.
inline CommunityConfig make_multi_config(
    double lambda, std::uint32_t n,
    std::vector<std::pair<std::vector<std::uint32_t>, std::vector<double>>>
        metrics) {
  std::vector<MetricPartition> partitions;
  std::uint32_t q = 0;
  for (auto& [assignment, coefficients] : metrics) {
    MetricPartition part;
    part.metric_id = "m" + std::to_string(q++);
    part.weight = 1.0 / static_cast<double>(metrics.size());
    part.assignment = std::move(assignment);
    part.coefficients = std::move(coefficients);
    partitions.push_back(std::move(part));
  }
  return CommunityConfig::build(lambda, std::move(partitions), n);
}

/// Two-node path u -> v.
inline DirectedGraph path2(double p = 0.5) {
  return make_graph(2, {{0, 1, p}});
}

/// Star: center 0 with spokes 1..n-1, all probability p.
inline DirectedGraph star(std::uint32_t n, double p) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v, p);
  return make_graph(n, edges);
}

/// Random simple directed graph with m edges and probabilities in
/// [p_low, p_high].
inline DirectedGraph random_graph(std::uint32_t n, std::uint32_t m,
                                  double p_low, double p_high, Rng& rng) {
  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  while (edges.size() < m) {
    NodeId u = static_cast<NodeId>(rng() % n);
    NodeId v = static_cast<NodeId>(rng() % n);
    if (u == v || !used.insert({u, v}).second) continue;
    double p = p_low + (p_high - p_low) * uniform01(rng);
    edges.emplace_back(u, v, p);
  }
  return make_graph(n, edges);
}

/// Random configuration: 1-3 metrics, non-empty communities, positive
/// weights normalized to one, coefficients in (0, 3].
inline CommunityConfig random_config(const DirectedGraph& graph, Rng& rng,
                                     double lambda = -1.0) {
  const std::uint32_t n = graph.node_count();
  if (lambda < 0.0) lambda = uniform01(rng);
  const std::uint32_t metric_count = 1 + static_cast<std::uint32_t>(rng() % 3);
  std::vector<MetricPartition> partitions;
  std::vector<double> raw_weights;
  double weight_sum = 0.0;
  for (std::uint32_t q = 0; q < metric_count; ++q) {
    double w = 0.1 + uniform01(rng);
    raw_weights.push_back(w);
    weight_sum += w;
  }
  for (std::uint32_t q = 0; q < metric_count; ++q) {
    const std::uint32_t r =
        1 + static_cast<std::uint32_t>(rng() % std::min<std::uint32_t>(4, n));
    MetricPartition part;
    part.metric_id = "m" + std::to_string(q);
    part.weight = raw_weights[q] / weight_sum;
    part.coefficients.resize(r);
    for (double& a : part.coefficients) a = 0.05 + 2.95 * uniform01(rng);
    part.assignment.resize(n);
    // Nodes 0..r-1 pin one member per community; the rest are random.
    for (NodeId v = 0; v < n; ++v)
      part.assignment[v] =
          v < r ? v : static_cast<std::uint32_t>(rng() % r);
    partitions.push_back(std::move(part));
  }
  return CommunityConfig::build(lambda, std::move(partitions), n);
}

/// All subsets of {0..n-1} as node vectors (ascending ids), by popcount mask.
inline std::vector<std::vector<NodeId>> all_subsets(std::uint32_t n) {
  std::vector<std::vector<NodeId>> subsets;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<NodeId> s;
    for (std::uint32_t v = 0; v < n; ++v)
      if (mask & (1u << v)) s.push_back(v);
    subsets.push_back(std::move(s));
  }
  return subsets;
}

/// Random synthetic collection entries for coverage tests: each sample gets
/// `slots` entries; entries are covered with probability p_covered, else hold
/// a random non-empty node subset.
inline GrrCollection random_collection(std::uint32_t n, std::uint32_t slots,
                                       std::uint64_t theta, double p_covered,
                                       Rng& rng) {
  std::vector<double> weights(slots);
  double sum = 0.0;
  for (double& w : weights) {
    w = 0.05 + uniform01(rng);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  std::vector<GrrSet> sets(theta);
  for (GrrSet& set : sets) {
    set.entries.resize(slots);
    for (RrEntry& entry : set.entries) {
      if (uniform01(rng) < p_covered) {
        entry.covered = true;
        continue;
      }
      for (NodeId v = 0; v < n; ++v)
        if (uniform01(rng) < 0.4) entry.nodes.push_back(v);
      if (entry.nodes.empty())
        entry.nodes.push_back(static_cast<NodeId>(rng() % n));
    }
  }
  return GrrCollection::from_entries(n, std::move(weights), std::move(sets));
}

}  // namespace ccdim::testutil
