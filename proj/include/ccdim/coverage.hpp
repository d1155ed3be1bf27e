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
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ccdim/grr.hpp"

namespace ccdim {

/// Weighted coverage of `seeds` over a collection: the summed weight of
/// entries that either contain a seed or were pre-covered by the sentinel.
/// Coverage divided by theta estimates the blended objective of
/// sentinel ∪ seeds.
inline double omega(std::span<const NodeId> seeds,
                    const GrrCollection& collection) {
  std::vector<char> covered(collection.theta() * collection.slot_count(), 0);
  double total = collection.base_covered_weight();
  for (NodeId v : seeds) {
    for (std::uint64_t key : collection.memberships(v)) {
      if (!covered[key]) {
        covered[key] = 1;
        total += collection.weights()[collection.slot_of_key(key)];
      }
    }
  }
  return total;
}

/// Coverage gained by adding `node` on top of `seeds`.
inline double marginal_gain(NodeId node, std::span<const NodeId> seeds,
                            const GrrCollection& collection) {
  std::vector<char> covered(collection.theta() * collection.slot_count(), 0);
  for (NodeId v : seeds)
    for (std::uint64_t key : collection.memberships(v)) covered[key] = 1;
  double gain = 0.0;
  for (std::uint64_t key : collection.memberships(node))
    if (!covered[key]) {
      covered[key] = 1;
      gain += collection.weights()[collection.slot_of_key(key)];
    }
  return gain;
}

/// Outcome of a greedy max-coverage run.
struct GreedyTrace {
  /// Picked nodes in pick order (excludes the initial seeds).
  std::vector<NodeId> selected;
  /// prefix_coverage[a] = coverage of initial ∪ first a picks; a = 0..k.
  std::vector<double> prefix_coverage;
  /// Upper bound on the coverage of ANY seed set of size k (on top of the
  /// initial seeds' implicit coverage): the minimum over all greedy prefixes
  /// of prefix coverage plus the top residual marginals. Always at least
  /// prefix_coverage.back().
  double upper_bound_coverage = 0.0;
};

/// Greedy weighted max-coverage over a collection. Picks `k` nodes on top of
/// `initial_seeds` (which are ineligible but contribute their coverage).
/// Residual scores are maintained by decrement under an inverted index and
/// rebuilt from scratch every 2^20 decrements to cap floating-point drift.
/// Ties break toward the smallest node id. `max_mc_count` is the number of
/// top residual scores summed into the per-prefix upper bound; use the total
/// budget of the target optimum (k plus any sentinel prefix it may replace).
inline GreedyTrace max_coverage_greedy(const GrrCollection& collection,
                                       std::uint32_t k,
                                       std::span<const NodeId> initial_seeds,
                                       std::uint32_t max_mc_count) {
  const std::uint32_t n = collection.node_count();
  if (k > n) throw InputError("selection budget exceeds node count");
  std::vector<char> covered(collection.theta() * collection.slot_count(), 0);
  std::vector<char> ineligible(n, 0);
  std::vector<double> score(n, 0.0);

  double cumulative = collection.base_covered_weight();
  for (NodeId v : initial_seeds) {
    ineligible[v] = 1;
    for (std::uint64_t key : collection.memberships(v)) {
      if (!covered[key]) {
        covered[key] = 1;
        cumulative += collection.weights()[collection.slot_of_key(key)];
      }
    }
  }

  auto rebuild_scores = [&] {
    for (NodeId v = 0; v < n; ++v) {
      double s = 0.0;
      for (std::uint64_t key : collection.memberships(v))
        if (!covered[key])
          s += collection.weights()[collection.slot_of_key(key)];
      score[v] = s;
    }
  };
  rebuild_scores();

  GreedyTrace trace;
  trace.selected.reserve(k);
  trace.prefix_coverage.reserve(k + 1);
  trace.prefix_coverage.push_back(cumulative);
  trace.upper_bound_coverage = std::numeric_limits<double>::infinity();

  std::vector<double> top_buffer;
  auto residual_top_sum = [&] {
    top_buffer.clear();
    for (NodeId v = 0; v < n; ++v)
      if (!ineligible[v]) top_buffer.push_back(score[v]);
    const std::size_t take =
        std::min<std::size_t>(max_mc_count, top_buffer.size());
    std::partial_sort(top_buffer.begin(), top_buffer.begin() + take,
                      top_buffer.end(), std::greater<double>());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += top_buffer[i];
    return sum;
  };

  std::uint64_t decrements = 0;
  constexpr std::uint64_t kRebuildPeriod = 1ULL << 20;
  for (std::uint32_t a = 0;; ++a) {
    trace.upper_bound_coverage =
        std::min(trace.upper_bound_coverage, cumulative + residual_top_sum());
    if (a == k) break;

    NodeId pick = n;
    double best = -std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < n; ++v) {
      if (!ineligible[v] && score[v] > best) {
        best = score[v];
        pick = v;
      }
    }
    if (pick == n) throw InputError("selection budget exceeds node count");

    ineligible[pick] = 1;
    trace.selected.push_back(pick);
    cumulative += score[pick];
    trace.prefix_coverage.push_back(cumulative);
    for (std::uint64_t key : collection.memberships(pick)) {
      if (covered[key]) continue;
      covered[key] = 1;
      const double w = collection.weights()[collection.slot_of_key(key)];
      const GrrSet& set = collection.set(key / collection.slot_count());
      for (NodeId u : set.entries[collection.slot_of_key(key)].nodes) {
        score[u] -= w;
        ++decrements;
      }
    }
    if (decrements >= kRebuildPeriod) {
      decrements = 0;
      rebuild_scores();
    }
  }
  return trace;
}

}  // namespace ccdim
