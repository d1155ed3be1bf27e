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

#include <cmath>

#include "ccdim/oracle.hpp"
#include "testutil.hpp"

using namespace ccdim;

TEST_CASE("realization probabilities sum to one", "[oracle]") {
  Rng rng(41);
  DirectedGraph g = testutil::random_graph(5, 8, 0.05, 0.95, rng);
  Realization r;
  r.live.assign(g.edge_count(), 0);
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << g.edge_count()); ++mask) {
    for (std::uint32_t e = 0; e < g.edge_count(); ++e)
      r.live[e] = static_cast<char>((mask >> e) & 1u);
    total += realization_probability(g, r);
  }
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("reachable_from follows only live edges", "[oracle]") {
  // 0 -> 1 -> 2, plus 0 -> 2 shortcut.
  DirectedGraph g =
      testutil::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}, {0, 2, 0.5}});
  Realization r;
  r.live = {1, 0, 0};
  CHECK(reachable_from(g, r, std::vector<NodeId>{0}) ==
        std::vector<NodeId>{0, 1});
  r.live = {1, 1, 0};
  CHECK(reachable_from(g, r, std::vector<NodeId>{0}) ==
        std::vector<NodeId>{0, 1, 2});
  r.live = {0, 0, 1};
  CHECK(reachable_from(g, r, std::vector<NodeId>{0}) ==
        std::vector<NodeId>{0, 2});
  CHECK(reachable_from(g, r, std::vector<NodeId>{}).empty());
}

TEST_CASE("simulate_ic respects deterministic edges", "[oracle]") {
  DirectedGraph g = testutil::make_graph(3, {{0, 1, 1.0}, {1, 2, 0.0}});
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    CHECK(simulate_ic(g, std::vector<NodeId>{0}, rng) ==
          std::vector<NodeId>{0, 1});
  }
  // Duplicate seeds are counted once.
  CHECK(simulate_ic(g, std::vector<NodeId>{2, 2}, rng) ==
        std::vector<NodeId>{2});
}

TEST_CASE("exact objective on the two-node path", "[oracle]") {
  DirectedGraph g = testutil::path2(0.5);
  // Influence only: E[activated] = 1.5 of 2 nodes.
  CommunityConfig influence = testutil::make_config(0.0, 2, {0, 0}, {1.0});
  ObjectiveValue v = exact_f(g, influence, std::vector<NodeId>{0});
  CHECK_THAT(v.f, Catch::Matchers::WithinAbs(0.75, 1e-12));
  CHECK_THAT(v.sigma, Catch::Matchers::WithinAbs(1.5, 1e-12));
  // Diversity only, communities {0} and {1} with slopes 1 and 2:
  // phi(S) = 1 + 2 * 0.5 = 2, phi(V) = 3.
  CommunityConfig diversity = testutil::make_config(1.0, 2, {0, 1}, {1.0, 2.0});
  ObjectiveValue d = exact_f(g, diversity, std::vector<NodeId>{0});
  CHECK_THAT(d.f, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(d.phi, Catch::Matchers::WithinAbs(2.0, 1e-12));
  // The blend identity f = (1-lambda) sigma/n + lambda phi/phi(V).
  CommunityConfig blend = testutil::make_config(0.3, 2, {0, 1}, {1.0, 2.0});
  ObjectiveValue b = exact_f(g, blend, std::vector<NodeId>{0});
  CHECK_THAT(b.f, Catch::Matchers::WithinAbs(
                      0.7 * b.sigma / 2.0 + 0.3 * b.phi / 3.0, 1e-15));
}

TEST_CASE("exact objective boundary cases", "[oracle]") {
  DirectedGraph g = testutil::star(4, 0.5);
  CommunityConfig config = testutil::make_config(0.5, 4, {0, 0, 1, 1}, {1.0, 1.0});
  CHECK(exact_f(g, config, std::vector<NodeId>{}).f == 0.0);
  ObjectiveValue all = exact_f(g, config, std::vector<NodeId>{0, 1, 2, 3});
  CHECK_THAT(all.f, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(all.sigma, Catch::Matchers::WithinAbs(4.0, 1e-12));
}

TEST_CASE("exact objective refuses large graphs", "[oracle]") {
  Rng rng(47);
  DirectedGraph g = testutil::random_graph(10, 25, 0.1, 0.9, rng);
  CommunityConfig config = testutil::random_config(g, rng);
  CHECK_THROWS_AS(exact_f(g, config, std::vector<NodeId>{0}), InputError);
}

TEST_CASE("monte carlo estimates converge to the exact objective",
          "[oracle]") {
  Rng instance_rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    DirectedGraph g = testutil::random_graph(6, 10, 0.1, 0.9, instance_rng);
    CommunityConfig config = testutil::random_config(g, instance_rng);
    std::vector<NodeId> seeds = {0, 3};
    ObjectiveValue exact = exact_f(g, config, seeds);
    Rng rng(1000 + trial);
    double se = 0.0;
    ObjectiveValue mc = monte_carlo_f(g, config, seeds, 20000, rng, &se);
    CHECK(std::fabs(mc.f - exact.f) <= 4.0 * se + 1e-9);
    CHECK(se < 0.01);
  }
}

TEST_CASE("exact objective is monotone", "[oracle]") {
  Rng rng(59);
  for (int trial = 0; trial < 3; ++trial) {
    DirectedGraph g = testutil::random_graph(5, 8, 0.1, 0.9, rng);
    CommunityConfig config = testutil::random_config(g, rng);
    auto subsets = testutil::all_subsets(5);
    std::vector<double> value(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i)
      value[i] = exact_f(g, config, subsets[i]).f;
    for (std::uint32_t s = 0; s < subsets.size(); ++s)
      for (std::uint32_t v = 0; v < 5; ++v) {
        if (s & (1u << v)) continue;
        CHECK(value[s] <= value[s | (1u << v)] + 1e-12);
      }
  }
}

TEST_CASE("exact objective is submodular", "[oracle]") {
  Rng rng(61);
  DirectedGraph g = testutil::random_graph(5, 8, 0.1, 0.9, rng);
  CommunityConfig config = testutil::random_config(g, rng);
  auto subsets = testutil::all_subsets(5);
  std::vector<double> value(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i)
    value[i] = exact_f(g, config, subsets[i]).f;
  // For all S subset of T and v outside T:
  // f(S + v) - f(S) >= f(T + v) - f(T).
  for (std::uint32_t t = 0; t < subsets.size(); ++t) {
    for (std::uint32_t s = t;; s = (s - 1) & t) {  // all subsets s of t
      for (std::uint32_t v = 0; v < 5; ++v) {
        if (t & (1u << v)) continue;
        double gain_small = value[s | (1u << v)] - value[s];
        double gain_large = value[t | (1u << v)] - value[t];
        CHECK(gain_small >= gain_large - 1e-12);
      }
      if (s == 0) break;
    }
  }
}

TEST_CASE("brute force optimum on hand-checkable instances", "[oracle]") {
  // Star with deterministic spokes: center dominates.
  DirectedGraph g = testutil::star(5, 1.0);
  CommunityConfig config = testutil::make_config(
      0.5, 5, {0, 1, 1, 1, 1}, {1.0, 1.0});
  auto [best, value] = brute_force_opt(g, config, 1);
  CHECK(best == std::vector<NodeId>{0});
  CHECK_THAT(value.f, Catch::Matchers::WithinAbs(1.0, 1e-12));

  // k = n returns all nodes, f = 1; k = 0 returns the empty set.
  auto [all, all_value] = brute_force_opt(g, config, 5);
  CHECK(all == std::vector<NodeId>{0, 1, 2, 3, 4});
  CHECK_THAT(all_value.f, Catch::Matchers::WithinAbs(1.0, 1e-12));
  auto [none, none_value] = brute_force_opt(g, config, 0);
  CHECK(none.empty());
  CHECK(none_value.f == 0.0);
}

TEST_CASE("brute force ties break to the smallest id vector", "[oracle]") {
  // Two isolated-ish symmetric nodes: 0 and 1 are interchangeable.
  DirectedGraph g =
      testutil::make_graph(4, {{0, 2, 0.5}, {1, 3, 0.5}});
  CommunityConfig config = testutil::make_config(
      0.0, 4, {0, 0, 1, 1}, {1.0, 1.0});
  auto [best, value] = brute_force_opt(g, config, 1);
  CHECK(best == std::vector<NodeId>{0});
}

TEST_CASE("brute force refuses oversized instances", "[oracle]") {
  Rng rng(67);
  DirectedGraph g = testutil::random_graph(12, 22, 0.1, 0.9, rng);
  CommunityConfig config = testutil::random_config(g, rng);
  CHECK_THROWS_AS(brute_force_opt(g, config, 3), InputError);
}
