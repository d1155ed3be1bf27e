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

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "ccdim/graph.hpp"
#include "testutil.hpp"

using namespace ccdim;

TEST_CASE("edge list parsing handles directed input", "[graph]") {
  std::istringstream in("0 1\n1 0\n");
  DirectedGraph g = load_edge_list(in, /*directed=*/true);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.out_degree(0) == 1);
  CHECK(g.in_degree(0) == 1);
  CHECK_FALSE(g.edge(0).has_probability());
}

TEST_CASE("edge list parsing doubles undirected input", "[graph]") {
  std::istringstream in("# comment line\n5 9 0.25\n");
  DirectedGraph g = load_edge_list(in, /*directed=*/false);
  REQUIRE(g.node_count() == 2);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edge(0).probability == 0.25);
  CHECK(g.edge(1).probability == 0.25);
  CHECK(g.edge(0).source == g.edge(1).target);
  CHECK(g.original_id(0) == 5);
  CHECK(g.original_id(1) == 9);
  CHECK(g.dense_id(9) == 1);
}

TEST_CASE("edge list parsing keeps first-appearance id order", "[graph]") {
  std::istringstream in("100 7\n7 42 0.5\n");
  DirectedGraph g = load_edge_list(in);
  CHECK(g.original_id(0) == 100);
  CHECK(g.original_id(1) == 7);
  CHECK(g.original_id(2) == 42);
  CHECK_THROWS_AS(g.dense_id(3), InputError);
}

TEST_CASE("edge list parsing reports malformed lines", "[graph]") {
  auto expect_error = [](const std::string& text, const std::string& what) {
    std::istringstream in(text);
    CHECK_THROWS_WITH(load_edge_list(in), Catch::Matchers::ContainsSubstring(what));
  };
  expect_error("0\n", "line 1");
  expect_error("0 0\n", "self-loop");
  expect_error("0 1 1.5\n", "probability out of range");
  expect_error("0 1 -0.25\n", "probability out of range");
  expect_error("0 1 x\n", "malformed probability");
  expect_error("0 1 0.5 9\n", "unexpected trailing token");
  expect_error("0 1\n\n0 1 0.5\n", "line 3: duplicate edge");
  // Undirected expansion also collides with an explicit reverse line.
  std::istringstream in("0 1\n1 0\n");
  CHECK_THROWS_WITH(load_edge_list(in, /*directed=*/false),
                    Catch::Matchers::ContainsSubstring("duplicate edge"));
}

TEST_CASE("adjacency views agree on the edge set", "[graph]") {
  Rng rng(7);
  DirectedGraph g = testutil::random_graph(30, 120, 0.0, 1.0, rng);
  std::set<std::pair<NodeId, NodeId>> via_out, via_in;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (EdgeId e : g.out_edge_ids(v)) {
      CHECK(g.edge(e).source == v);
      via_out.insert({g.edge(e).source, g.edge(e).target});
    }
    for (EdgeId e : g.in_edge_ids(v)) {
      CHECK(g.edge(e).target == v);
      via_in.insert({g.edge(e).source, g.edge(e).target});
    }
  }
  CHECK(via_out == via_in);
  CHECK(via_out.size() == g.edge_count());
}

TEST_CASE("weighted cascade sets reciprocal indegree probabilities",
          "[graph]") {
  DirectedGraph g =
      testutil::make_graph(3, {{0, 2, -1.0}, {1, 2, -1.0}, {2, 0, -1.0}});
  DirectedGraph wc = assign_wc(g);
  for (EdgeId e : wc.in_edge_ids(2)) CHECK(wc.edge(e).probability == 0.5);
  for (EdgeId e : wc.in_edge_ids(0)) CHECK(wc.edge(e).probability == 1.0);
}

TEST_CASE("weighted cascade incoming probabilities sum to one", "[graph]") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = testutil::random_graph(20, 60, 0.0, 1.0, rng);
    DirectedGraph wc = assign_wc(g);
    for (NodeId v = 0; v < wc.node_count(); ++v) {
      if (wc.in_degree(v) == 0) continue;
      double sum = 0.0;
      for (EdgeId e : wc.in_edge_ids(v)) sum += wc.edge(e).probability;
      CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("edge lists round-trip through save and load", "[graph]") {
  Rng rng(13);
  DirectedGraph g = testutil::random_graph(15, 40, 0.0, 1.0, rng);
  std::ostringstream out;
  save_edge_list(g, out);
  std::istringstream in(out.str());
  DirectedGraph back = load_edge_list(in);
  REQUIRE(back.node_count() == g.node_count());
  REQUIRE(back.edge_count() == g.edge_count());
  std::ostringstream out2;
  save_edge_list(back, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("loading identical bytes yields identical graphs", "[graph]") {
  const std::string text = "3 1 0.5\n1 2\n2 3 0.125\n4 1 1\n";
  std::istringstream in1(text), in2(text);
  DirectedGraph a = load_edge_list(in1), b = load_edge_list(in2);
  REQUIRE(a.edge_count() == b.edge_count());
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    CHECK(a.edge(e).source == b.edge(e).source);
    CHECK(a.edge(e).target == b.edge(e).target);
    CHECK(a.edge(e).probability == b.edge(e).probability);
  }
  CHECK(a.original_ids() == b.original_ids());
}

TEST_CASE("from_edges rejects invalid inputs", "[graph]") {
  CHECK_THROWS_AS(testutil::make_graph(2, {{0, 0, 0.5}}), InputError);
  CHECK_THROWS_AS(testutil::make_graph(2, {{0, 1, 0.5}, {0, 1, 0.5}}),
                  InputError);
  CHECK_THROWS_AS(testutil::make_graph(2, {{0, 3, 0.5}}), InputError);
  CHECK_THROWS_AS(testutil::make_graph(2, {{0, 1, 1.5}}), InputError);
}
