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
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ccdim/graph.hpp"
#include "ccdim/rng.hpp"

namespace ccdim {

/// One attribute metric: a partition of all nodes into communities, a metric
/// weight, and one utility coefficient per community. Communities are indexed
/// 0..r-1 and must all be non-empty.
struct MetricPartition {
  std::string metric_id;
  double weight = 1.0;                       // renormalized across metrics
  std::vector<std::uint32_t> assignment;     // dense node id -> community
  std::vector<double> coefficients;          // per-community utility slope
  std::vector<std::vector<NodeId>> members;  // per community, ascending ids

  std::uint32_t community_count() const {
    return static_cast<std::uint32_t>(coefficients.size());
  }
  std::uint32_t community_size(std::uint32_t j) const {
    return static_cast<std::uint32_t>(members[j].size());
  }
};

/// Full diversity configuration: blend weight lambda plus one or more metric
/// partitions. The flattened (metric, community) pairs are addressed as
/// consecutive "slots", the unit of sampling and coverage bookkeeping.
struct CommunityConfig {
  double lambda = 0.0;
  std::vector<MetricPartition> partitions;
  std::vector<std::uint32_t> slot_offsets;  // size metric_count() + 1

  std::uint32_t metric_count() const {
    return static_cast<std::uint32_t>(partitions.size());
  }
  std::uint32_t slot_count() const { return slot_offsets.back(); }
  std::uint32_t slot_of(std::uint32_t metric, std::uint32_t community) const {
    return slot_offsets[metric] + community;
  }
  std::pair<std::uint32_t, std::uint32_t> metric_community_of(
      std::uint32_t slot) const {
    std::uint32_t q = 0;
    while (slot_offsets[q + 1] <= slot) ++q;
    return {q, slot - slot_offsets[q]};
  }

  /// Validates a raw configuration, fills the derived member lists and slot
  /// offsets, and renormalizes metric weights to sum exactly to one.
  static CommunityConfig build(double lambda,
                               std::vector<MetricPartition> partitions,
                               std::uint32_t node_count) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw InputError("lambda must lie in [0, 1]");
    if (partitions.empty()) throw InputError("at least one metric required");

    CommunityConfig config;
    config.lambda = lambda;
    config.partitions = std::move(partitions);

    std::unordered_set<std::string> ids;
    double weight_sum = 0.0;
    for (MetricPartition& part : config.partitions) {
      if (!ids.insert(part.metric_id).second)
        throw InputError("duplicate metric id: " + part.metric_id);
      if (!(part.weight > 0.0 && part.weight <= 1.0))
        throw InputError("metric weight must lie in (0, 1]: " + part.metric_id);
      if (part.coefficients.empty())
        throw InputError("metric has no communities: " + part.metric_id);
      for (double a : part.coefficients)
        if (!(a > 0.0))
          throw InputError("utility coefficients must be positive: " +
                           part.metric_id);
      if (part.assignment.size() != node_count)
        throw InputError("metric " + part.metric_id +
                         ": every node needs a community assignment");
      part.members.assign(part.community_count(), {});
      for (NodeId v = 0; v < node_count; ++v) {
        std::uint32_t j = part.assignment[v];
        if (j >= part.community_count())
          throw InputError("metric " + part.metric_id +
                           ": community index out of range");
        part.members[j].push_back(v);
      }
      for (std::uint32_t j = 0; j < part.community_count(); ++j)
        if (part.members[j].empty())
          throw InputError("metric " + part.metric_id + ": community " +
                           std::to_string(j) + " is empty");
      weight_sum += part.weight;
    }
    if (std::fabs(weight_sum - 1.0) > 1e-9)
      throw InputError("metric weights must sum to 1");
    for (MetricPartition& part : config.partitions) part.weight /= weight_sum;

    config.slot_offsets.assign(1, 0);
    for (const MetricPartition& part : config.partitions)
      config.slot_offsets.push_back(config.slot_offsets.back() +
                                    part.community_count());
    return config;
  }
};

/// Maximum attainable diversity score: the utility of activating every node,
/// used to normalize the diversity term of the objective.
inline double phi_v(const CommunityConfig& config) {
  double total = 0.0;
  for (const MetricPartition& part : config.partitions) {
    double metric_total = 0.0;
    for (std::uint32_t j = 0; j < part.community_count(); ++j)
      metric_total += part.coefficients[j] *
                      static_cast<double>(part.members[j].size());
    total += part.weight * metric_total;
  }
  return total;
}

/// Sampling weight of one (metric, community) slot. A root drawn from this
/// community contributes this weight to coverage; the weights of all slots
/// sum to one, which makes the per-sample coverage an unbiased estimate of
/// the blended objective.
inline double entry_weight(const CommunityConfig& config,
                           const DirectedGraph& graph, std::uint32_t metric,
                           std::uint32_t community) {
  const MetricPartition& part = config.partitions[metric];
  const double n = static_cast<double>(graph.node_count());
  const double size = static_cast<double>(part.members[community].size());
  const double influence_share =
      (1.0 - config.lambda) / (n * static_cast<double>(config.metric_count()));
  const double diversity_share =
      config.lambda * part.weight * part.coefficients[community] /
      phi_v(config);
  return (influence_share + diversity_share) * size;
}

/// Entry weights for all slots in slot order.
inline std::vector<double> slot_weights(const CommunityConfig& config,
                                        const DirectedGraph& graph) {
  const double n = static_cast<double>(graph.node_count());
  const double normalizer = phi_v(config);
  std::vector<double> weights;
  weights.reserve(config.slot_count());
  for (const MetricPartition& part : config.partitions) {
    for (std::uint32_t j = 0; j < part.community_count(); ++j) {
      double share =
          (1.0 - config.lambda) /
              (n * static_cast<double>(config.metric_count())) +
          config.lambda * part.weight * part.coefficients[j] / normalizer;
      weights.push_back(share * static_cast<double>(part.members[j].size()));
    }
  }
  return weights;
}

/// Lower bound on the objective of any k-seed set: the k seeds alone are
/// always active, so both the influence and diversity terms are bounded away
/// from zero. Feeds the sample-size ceilings.
inline double f_min(const CommunityConfig& config, const DirectedGraph& graph,
                    std::uint32_t k) {
  const double n = static_cast<double>(graph.node_count());
  double min_coefficient = std::numeric_limits<double>::infinity();
  for (const MetricPartition& part : config.partitions)
    for (double a : part.coefficients)
      min_coefficient = std::min(min_coefficient, a);
  return (1.0 - config.lambda) * k / n +
         config.lambda * min_coefficient * k / phi_v(config);
}

/// Deterministic pseudo-random partition of the graph's nodes into `r`
/// communities. A repair pass re-seats nodes round-robin so that no community
/// ends up empty. Same (graph, r, salt) always yields the same partition.
inline MetricPartition hash_partition(const DirectedGraph& graph,
                                      std::uint32_t r, std::uint64_t salt) {
  const std::uint32_t n = graph.node_count();
  if (r == 0) throw InputError("community count must be positive");
  if (r > n)
    throw InputError("community count exceeds node count");
  MetricPartition part;
  part.metric_id = "hash-" + std::to_string(salt);
  part.weight = 1.0;
  part.coefficients.assign(r, 1.0);
  part.assignment.resize(n);
  std::vector<std::uint32_t> sizes(r, 0);
  for (NodeId v = 0; v < n; ++v) {
    std::uint32_t j =
        static_cast<std::uint32_t>(splitmix64(salt ^ splitmix64(v)) % r);
    part.assignment[v] = j;
    ++sizes[j];
  }
  // Repair pass: move nodes from crowded communities into empty ones.
  NodeId donor = 0;
  for (std::uint32_t j = 0; j < r; ++j) {
    while (sizes[j] == 0) {
      while (sizes[part.assignment[donor]] < 2) ++donor;
      ++sizes[j];
      --sizes[part.assignment[donor]];
      part.assignment[donor] = j;
    }
  }
  return part;
}

/// Community file format, line oriented with `#` comments:
///
///   lambda 0.7
///   metric gender weight 0.4 coeffs 0.4 1 1.6
///   node 17 0
///   node 42 2
///   ...
///
/// Each `metric` line opens a block; following `node <original-id> <j>` lines
/// assign nodes to that metric's communities. Every node of the graph must be
/// assigned exactly once per metric.
inline CommunityConfig load_communities(std::istream& in,
                                        const DirectedGraph& graph) {
  double lambda = -1.0;
  std::vector<MetricPartition> partitions;
  std::vector<std::vector<char>> assigned;  // per metric, per node
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    auto fail = [&](const std::string& what) -> InputError {
      return InputError("line " + std::to_string(line_no) + ": " + what);
    };
    if (keyword == "lambda") {
      if (!(ls >> lambda)) throw fail("expected a lambda value");
    } else if (keyword == "metric") {
      MetricPartition part;
      std::string key;
      if (!(ls >> part.metric_id >> key) || key != "weight")
        throw fail("expected: metric <id> weight <w> coeffs <a...>");
      if (!(ls >> part.weight)) throw fail("expected a metric weight");
      if (!(ls >> key) || key != "coeffs")
        throw fail("expected: metric <id> weight <w> coeffs <a...>");
      double a = 0.0;
      while (ls >> a) part.coefficients.push_back(a);
      if (part.coefficients.empty()) throw fail("expected coefficients");
      part.assignment.assign(graph.node_count(), 0);
      partitions.push_back(std::move(part));
      assigned.emplace_back(graph.node_count(), 0);
    } else if (keyword == "node") {
      if (partitions.empty()) throw fail("node line before any metric line");
      std::int64_t original = 0;
      std::uint32_t community = 0;
      if (!(ls >> original >> community))
        throw fail("expected: node <id> <community>");
      if (!graph.has_original_id(original))
        throw fail("unknown node id " + std::to_string(original));
      NodeId v = graph.dense_id(original);
      if (assigned.back()[v])
        throw fail("node " + std::to_string(original) + " assigned twice");
      assigned.back()[v] = 1;
      partitions.back().assignment[v] = community;
    } else {
      throw fail("unknown keyword: " + keyword);
    }
  }
  if (lambda < 0.0) throw InputError("missing lambda line");
  for (std::size_t q = 0; q < partitions.size(); ++q)
    for (NodeId v = 0; v < graph.node_count(); ++v)
      if (!assigned[q][v])
        throw InputError("metric " + partitions[q].metric_id + ": node " +
                         std::to_string(graph.original_id(v)) +
                         " has no community assignment");
  return CommunityConfig::build(lambda, std::move(partitions),
                                graph.node_count());
}

inline CommunityConfig load_communities_file(const std::string& path,
                                             const DirectedGraph& graph) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open community file: " + path);
  return load_communities(in, graph);
}

/// Writes a configuration in the format accepted by load_communities.
inline void save_communities(const CommunityConfig& config,
                             const DirectedGraph& graph, std::ostream& out) {
  char buf[64];
  auto fmt = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  out << "lambda " << fmt(config.lambda) << '\n';
  for (const MetricPartition& part : config.partitions) {
    out << "metric " << part.metric_id << " weight " << fmt(part.weight)
        << " coeffs";
    for (double a : part.coefficients) out << ' ' << fmt(a);
    out << '\n';
    for (NodeId v = 0; v < graph.node_count(); ++v)
      out << "node " << graph.original_id(v) << ' ' << part.assignment[v]
          << '\n';
  }
}

}  // namespace ccdim
