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

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ccdim {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Thrown for malformed input files and invalid arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Marker for an edge whose activation probability has not been set yet.
inline constexpr double kUnsetProbability = -1.0;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  double probability = kUnsetProbability;

  bool has_probability() const { return probability >= 0.0; }
};

/// Immutable directed graph over dense node ids 0..n-1 with per-edge
/// activation probabilities. Both adjacency directions are kept as CSR-style
/// arrays of edge ids, so an edge id addresses the same Edge record from
/// either view. The original (file) node ids are retained for output.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds a graph from an explicit edge list over dense ids. Rejects
  /// self-loops, duplicate (source, target) pairs, out-of-range endpoints and
  /// probabilities outside [0, 1]. `original_ids` defaults to the identity.
  static DirectedGraph from_edges(std::uint32_t node_count,
                                  std::vector<Edge> edges,
                                  std::vector<std::int64_t> original_ids = {}) {
    DirectedGraph g;
    g.node_count_ = node_count;
    g.edges_ = std::move(edges);
    if (original_ids.empty()) {
      g.original_ids_.resize(node_count);
      for (std::uint32_t v = 0; v < node_count; ++v) g.original_ids_[v] = v;
    } else {
      if (original_ids.size() != node_count)
        throw InputError("original id table size does not match node count");
      g.original_ids_ = std::move(original_ids);
    }
    for (std::uint32_t v = 0; v < node_count; ++v)
      g.id_map_.emplace(g.original_ids_[v], v);
    if (g.id_map_.size() != node_count)
      throw InputError("original node ids are not distinct");

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(g.edges_.size() * 2);
    for (const Edge& e : g.edges_) {
      if (e.source >= node_count || e.target >= node_count)
        throw InputError("edge endpoint out of range");
      if (e.source == e.target) throw InputError("self-loop edge");
      if (e.has_probability() && e.probability > 1.0)
        throw InputError("edge probability out of range");
      if (e.probability < 0.0 && e.probability != kUnsetProbability)
        throw InputError("edge probability out of range");
      std::uint64_t key =
          (static_cast<std::uint64_t>(e.source) << 32) | e.target;
      if (!seen.insert(key).second) throw InputError("duplicate edge");
    }
    g.build_adjacency();
    return g;
  }

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t edge_count() const {
    return static_cast<std::uint32_t>(edges_.size());
  }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Edge ids leaving `v` (as source). Stable order: file order within node.
  std::span<const EdgeId> out_edge_ids(NodeId v) const {
    return {out_edges_.data() + out_offsets_[v],
            out_offsets_[v + 1] - out_offsets_[v]};
  }

  /// Edge ids entering `v` (as target).
  std::span<const EdgeId> in_edge_ids(NodeId v) const {
    return {in_edges_.data() + in_offsets_[v],
            in_offsets_[v + 1] - in_offsets_[v]};
  }

  std::uint32_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }
  std::uint32_t in_degree(NodeId v) const {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
  const std::vector<std::int64_t>& original_ids() const {
    return original_ids_;
  }

  /// Dense id of an original id; throws InputError when unknown.
  NodeId dense_id(std::int64_t original) const {
    auto it = id_map_.find(original);
    if (it == id_map_.end())
      throw InputError("unknown node id " + std::to_string(original));
    return it->second;
  }

  bool has_original_id(std::int64_t original) const {
    return id_map_.count(original) > 0;
  }

 private:
  void build_adjacency() {
    out_offsets_.assign(node_count_ + 1, 0);
    in_offsets_.assign(node_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++out_offsets_[e.source + 1];
      ++in_offsets_[e.target + 1];
    }
    for (std::uint32_t v = 0; v < node_count_; ++v) {
      out_offsets_[v + 1] += out_offsets_[v];
      in_offsets_[v + 1] += in_offsets_[v];
    }
    out_edges_.resize(edges_.size());
    in_edges_.resize(edges_.size());
    std::vector<EdgeId> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<EdgeId> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      out_edges_[out_pos[edges_[e].source]++] = e;
      in_edges_[in_pos[edges_[e].target]++] = e;
    }
  }

  std::uint32_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<EdgeId> out_offsets_, out_edges_;
  std::vector<EdgeId> in_offsets_, in_edges_;
  std::vector<std::int64_t> original_ids_;
  std::unordered_map<std::int64_t, NodeId> id_map_;
};

/// Parses a whitespace-separated edge list: one `u v [p]` triple per line,
/// `#` starts a comment, blank lines are skipped. Node ids may be arbitrary
/// integers; they are densely re-mapped in order of first appearance. With
/// `directed == false` every line adds both directions with the same
/// probability. Lines without `p` leave the probability unset.
inline DirectedGraph load_edge_list(std::istream& in, bool directed = true) {
  std::unordered_map<std::int64_t, NodeId> ids;
  std::vector<std::int64_t> originals;
  auto intern = [&](std::int64_t original) -> NodeId {
    auto [it, inserted] =
        ids.emplace(original, static_cast<NodeId>(originals.size()));
    if (inserted) originals.push_back(original);
    return it->second;
  };

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::int64_t a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank or comment-only line
    auto fail = [&](const std::string& what) -> InputError {
      return InputError("line " + std::to_string(line_no) + ": " + what);
    };
    if (!(ls >> b)) throw fail("expected two node ids");
    double p = kUnsetProbability;
    if (!(ls >> p)) {
      if (!ls.eof()) throw fail("malformed probability");
    } else if (p < 0.0 || p > 1.0) {
      throw fail("probability out of range [0, 1]");
    }
    std::string extra;
    if (ls >> extra) throw fail("unexpected trailing token");
    if (a == b) throw fail("self-loop");

    NodeId u = intern(a), v = intern(b);
    auto add = [&](NodeId s, NodeId t) {
      std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | t;
      if (!seen.insert(key).second) throw fail("duplicate edge");
      edges.push_back(Edge{s, t, p});
    };
    add(u, v);
    if (!directed) add(v, u);
  }
  const std::uint32_t n = static_cast<std::uint32_t>(originals.size());
  return DirectedGraph::from_edges(n, std::move(edges), std::move(originals));
}

inline DirectedGraph load_edge_list_file(const std::string& path,
                                         bool directed = true) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  return load_edge_list(in, directed);
}

/// Writes `original_u original_v [p]` lines in edge-id order. Probabilities
/// are printed with round-trip precision; unset probabilities are omitted.
inline void save_edge_list(const DirectedGraph& graph, std::ostream& out) {
  char buf[64];
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edge(e);
    out << graph.original_id(edge.source) << ' '
        << graph.original_id(edge.target);
    if (edge.has_probability()) {
      std::snprintf(buf, sizeof(buf), "%.17g", edge.probability);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

/// Weighted-cascade probabilities: every edge (u, v) gets 1 / indegree(v).
inline DirectedGraph assign_wc(const DirectedGraph& graph) {
  std::vector<Edge> edges = graph.edges();
  for (Edge& e : edges)
    e.probability = 1.0 / static_cast<double>(graph.in_degree(e.target));
  return DirectedGraph::from_edges(graph.node_count(), std::move(edges),
                                   graph.original_ids());
}

}  // namespace ccdim
