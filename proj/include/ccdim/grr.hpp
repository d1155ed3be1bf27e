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
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccdim/community.hpp"
#include "ccdim/graph.hpp"
#include "ccdim/rng.hpp"

namespace ccdim {

/// One reverse-reachability entry. Either the stored node set (which always
/// contains the entry's root), or a "covered" placeholder recorded when the
/// reverse traversal ran into the sentinel set: the full node set is then
/// irrelevant, because every seed set containing the sentinel covers the
/// entry, and not storing it is what makes sentinels cheap.
struct RrEntry {
  bool covered = false;
  std::vector<NodeId> nodes;
};

/// One group sample: a single shared edge realization, materialized as one
/// reverse-reachability entry per (metric, community) slot, each rooted at a
/// uniformly drawn member of that community.
struct GrrSet {
  std::vector<RrEntry> entries;  // one per slot
};

/// Coin flips drawn during one group sample, for replay in tests.
using CoinTrace = std::unordered_map<EdgeId, bool>;

/// Samples group reverse-reachability sets. One instance owns the scratch
/// buffers (epoch-stamped marks, memoized coin flips), so repeated sampling
/// does not allocate. Not safe for concurrent use; create one per thread.
class GrrSampler {
 public:
  GrrSampler(const DirectedGraph& graph, const CommunityConfig& config,
             std::vector<NodeId> sentinel)
      : graph_(&graph),
        config_(&config),
        sentinel_(std::move(sentinel)),
        in_sentinel_(graph.node_count(), 0),
        edge_epoch_(graph.edge_count(), 0),
        edge_live_(graph.edge_count(), 0),
        node_epoch_(graph.node_count(), 0) {
    std::sort(sentinel_.begin(), sentinel_.end());
    sentinel_.erase(std::unique(sentinel_.begin(), sentinel_.end()),
                    sentinel_.end());
    for (NodeId v : sentinel_) in_sentinel_[v] = 1;
  }

  const std::vector<NodeId>& sentinel() const { return sentinel_; }

  /// Draws one group sample. All slots of the sample share one lazily
  /// materialized realization: each edge is flipped at most once per call
  /// and the result is reused by every traversal of the same call. `trace`
  /// and `roots` are test hooks recording the coin flips and the per-slot
  /// roots (roots of covered entries are otherwise discarded).
  GrrSet sample(Rng& rng, CoinTrace* trace = nullptr,
                std::vector<NodeId>* roots = nullptr) {
    ++call_epoch_;
    GrrSet out;
    out.entries.resize(config_->slot_count());
    for (std::uint32_t q = 0; q < config_->metric_count(); ++q) {
      const MetricPartition& part = config_->partitions[q];
      for (std::uint32_t j = 0; j < part.community_count(); ++j) {
        const std::vector<NodeId>& members = part.members[j];
        NodeId root = members[rng() % members.size()];
        if (roots) roots->push_back(root);
        traverse(root, rng, out.entries[config_->slot_of(q, j)], trace);
      }
    }
    return out;
  }

 private:
  bool edge_live(EdgeId e, Rng& rng, CoinTrace* trace) {
    if (edge_epoch_[e] != call_epoch_) {
      edge_epoch_[e] = call_epoch_;
      const double p = graph_->edge(e).probability;
      edge_live_[e] = static_cast<char>(uniform01(rng) < p);
      if (trace) trace->emplace(e, edge_live_[e] != 0);
    }
    return edge_live_[e] != 0;
  }

  /// Reverse BFS from `root` over the shared realization. Aborts as soon as
  /// a sentinel node joins the entry and records the covered placeholder
  /// instead of the (discarded) partial node set.
  void traverse(NodeId root, Rng& rng, RrEntry& entry, CoinTrace* trace) {
    if (in_sentinel_[root]) {
      entry.covered = true;
      return;
    }
    ++traversal_epoch_;
    node_epoch_[root] = traversal_epoch_;
    queue_.clear();
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      NodeId u = queue_[head];
      for (EdgeId e : graph_->in_edge_ids(u)) {
        NodeId w = graph_->edge(e).source;
        if (node_epoch_[w] == traversal_epoch_) continue;
        if (!edge_live(e, rng, trace)) continue;
        if (in_sentinel_[w]) {
          entry.covered = true;
          return;
        }
        node_epoch_[w] = traversal_epoch_;
        queue_.push_back(w);
      }
    }
    entry.nodes.assign(queue_.begin(), queue_.end());
  }

  const DirectedGraph* graph_;
  const CommunityConfig* config_;
  std::vector<NodeId> sentinel_;
  std::vector<char> in_sentinel_;
  std::vector<std::uint32_t> edge_epoch_;
  std::vector<char> edge_live_;
  std::vector<std::uint32_t> node_epoch_;
  std::uint32_t call_epoch_ = 0;
  std::uint32_t traversal_epoch_ = 0;
  std::vector<NodeId> queue_;
};

/// Convenience wrapper drawing a single group sample.
inline GrrSet sample_grr(const DirectedGraph& graph,
                         const CommunityConfig& config,
                         std::vector<NodeId> sentinel, Rng& rng) {
  GrrSampler sampler(graph, config, std::move(sentinel));
  return sampler.sample(rng);
}

/// A growable collection of group samples with the inverted index and
/// bookkeeping needed for coverage queries and greedy selection:
///  - per-node membership lists of entry keys (key = set * slot_count + slot),
///  - per-slot coverage weights,
///  - the total weight of entries pre-covered by the sentinel,
///  - the total stored node count (the sentinel-pruning cost metric).
///
/// Samples are seeded individually from (stream_seed, sample index), so
/// extending the collection is deterministic and independent of batching.
class GrrCollection {
 public:
  GrrCollection(const DirectedGraph& graph, const CommunityConfig& config,
                std::vector<NodeId> sentinel, std::uint64_t stream_seed)
      : node_count_(graph.node_count()),
        slot_count_(config.slot_count()),
        weights_(slot_weights(config, graph)),
        index_(graph.node_count()),
        stream_seed_(stream_seed),
        sampler_(GrrSampler(graph, config, std::move(sentinel))) {}

  /// Builds a collection from explicit entries; used by tests and the binary
  /// loader. Such a collection cannot be extended.
  static GrrCollection from_entries(std::uint32_t node_count,
                                    std::vector<double> weights,
                                    std::vector<GrrSet> sets,
                                    std::vector<NodeId> sentinel = {}) {
    GrrCollection col;
    col.node_count_ = node_count;
    col.slot_count_ = static_cast<std::uint32_t>(weights.size());
    col.weights_ = std::move(weights);
    col.index_.resize(node_count);
    col.sentinel_override_ = std::move(sentinel);
    std::sort(col.sentinel_override_.begin(), col.sentinel_override_.end());
    for (GrrSet& set : sets) {
      if (set.entries.size() != col.slot_count_)
        throw InputError("group sample has wrong slot count");
      for (const RrEntry& entry : set.entries)
        for (NodeId v : entry.nodes)
          if (v >= node_count) throw InputError("entry node out of range");
      col.absorb(std::move(set));
    }
    return col;
  }

  std::uint64_t theta() const { return sets_.size(); }
  std::uint32_t slot_count() const { return slot_count_; }
  std::uint32_t node_count() const { return node_count_; }
  const GrrSet& set(std::uint64_t i) const { return sets_[i]; }
  std::span<const double> weights() const { return weights_; }

  const std::vector<NodeId>& sentinel() const {
    return sampler_ ? sampler_->sentinel() : sentinel_override_;
  }

  /// Entry keys (set * slot_count + slot) of all entries storing `v`.
  std::span<const std::uint64_t> memberships(NodeId v) const {
    return index_[v];
  }

  std::uint32_t slot_of_key(std::uint64_t key) const {
    return static_cast<std::uint32_t>(key % slot_count_);
  }

  /// Total weight of entries whose traversal hit the sentinel; every seed
  /// set containing the sentinel covers these entries implicitly.
  double base_covered_weight() const { return base_covered_weight_; }
  std::uint64_t covered_entry_count() const { return covered_entry_count_; }

  std::uint64_t total_stored_nodes() const { return total_stored_nodes_; }

  /// Draws `count` additional group samples.
  void extend(std::uint64_t count) {
    if (!sampler_)
      throw InputError("collection was not built with a sampler");
    for (std::uint64_t i = 0; i < count; ++i) {
      Rng rng(splitmix64(stream_seed_ + next_sample_ + 1));
      ++next_sample_;
      absorb(sampler_->sample(rng));
    }
  }

  void dump(std::ostream& out) const;
  static GrrCollection load(std::istream& in);

 private:
  GrrCollection() = default;

  void absorb(GrrSet set) {
    const std::uint64_t set_index = sets_.size();
    for (std::uint32_t slot = 0; slot < slot_count_; ++slot) {
      const RrEntry& entry = set.entries[slot];
      if (entry.covered) {
        base_covered_weight_ += weights_[slot];
        ++covered_entry_count_;
        continue;
      }
      const std::uint64_t key = set_index * slot_count_ + slot;
      for (NodeId v : entry.nodes) index_[v].push_back(key);
      total_stored_nodes_ += entry.nodes.size();
    }
    sets_.push_back(std::move(set));
  }

  std::uint32_t node_count_ = 0;
  std::uint32_t slot_count_ = 0;
  std::vector<double> weights_;
  std::vector<GrrSet> sets_;
  std::vector<std::vector<std::uint64_t>> index_;
  double base_covered_weight_ = 0.0;
  std::uint64_t covered_entry_count_ = 0;
  std::uint64_t total_stored_nodes_ = 0;
  std::uint64_t stream_seed_ = 0;
  std::uint64_t next_sample_ = 0;
  std::optional<GrrSampler> sampler_;
  std::vector<NodeId> sentinel_override_;
};

/// Extends a copy of `collection` by `count` samples and returns it.
inline GrrCollection extend_collection(GrrCollection collection,
                                       std::uint64_t count) {
  collection.extend(count);
  return collection;
}

/// Mean stored-node count per group sample. Dropping node sets of covered
/// entries is the sentinel speedup, so this is the metric benchmarks watch.
inline double avg_entry_nodes(const GrrCollection& collection) {
  if (collection.theta() == 0) return 0.0;
  return static_cast<double>(collection.total_stored_nodes()) /
         static_cast<double>(collection.theta());
}

// Binary dump format (little-endian): magic "GRRC", version, node and slot
// counts, sample count, sentinel, per-slot weights, then per sample per slot
// either 0xFFFFFFFF (covered) or the node count followed by the node ids.
inline void GrrCollection::dump(std::ostream& out) const {
  auto put32 = [&](std::uint32_t x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(x));
  };
  auto put64 = [&](std::uint64_t x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(x));
  };
  out.write("GRRC", 4);
  put32(1);  // version
  put32(node_count_);
  put32(slot_count_);
  put64(sets_.size());
  const std::vector<NodeId>& sent = sentinel();
  put32(static_cast<std::uint32_t>(sent.size()));
  for (NodeId v : sent) put32(v);
  for (double w : weights_)
    out.write(reinterpret_cast<const char*>(&w), sizeof(w));
  for (const GrrSet& set : sets_) {
    for (const RrEntry& entry : set.entries) {
      if (entry.covered) {
        put32(0xFFFFFFFFu);
        continue;
      }
      put32(static_cast<std::uint32_t>(entry.nodes.size()));
      for (NodeId v : entry.nodes) put32(v);
    }
  }
}

inline GrrCollection GrrCollection::load(std::istream& in) {
  auto get32 = [&]() {
    std::uint32_t x = 0;
    in.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
  };
  auto get64 = [&]() {
    std::uint64_t x = 0;
    in.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
  };
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "GRRC")
    throw InputError("not a group sample dump");
  if (get32() != 1) throw InputError("unsupported dump version");
  const std::uint32_t node_count = get32();
  const std::uint32_t slot_count = get32();
  const std::uint64_t num_sets = get64();
  std::vector<NodeId> sentinel(get32());
  for (NodeId& v : sentinel) v = get32();
  std::vector<double> weights(slot_count);
  for (double& w : weights)
    in.read(reinterpret_cast<char*>(&w), sizeof(w));
  std::vector<GrrSet> sets(num_sets);
  for (GrrSet& set : sets) {
    set.entries.resize(slot_count);
    for (RrEntry& entry : set.entries) {
      std::uint32_t count = get32();
      if (count == 0xFFFFFFFFu) {
        entry.covered = true;
        continue;
      }
      entry.nodes.resize(count);
      for (NodeId& v : entry.nodes) v = get32();
    }
  }
  if (!in) throw InputError("truncated group sample dump");
  return from_entries(node_count, std::move(weights), std::move(sets),
                      std::move(sentinel));
}

}  // namespace ccdim
