// Copyright 2026 The Halo Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "halo/graph.hpp"
#include "halo/matching.hpp"
#include "halo/state.hpp"
#include "testing.hpp"

namespace halo {
namespace {

using testing::ghz43_graph;
using testing::ghz44_attempt;

Ket K(const std::string& s) {
  Ket k;
  for (char c : s) k.push_back(c - '0');
  return k;
}

TEST(Matching, CompleteUncoloredDoubleFactorial) {
  const std::size_t expected[] = {1, 3, 15, 105};
  for (int n = 1; n <= 4; ++n) {
    Graph g = complete_graph(2 * n, std::vector<int>(static_cast<std::size_t>(2 * n), 1));
    EXPECT_EQ(count_perfect_matchings(g), expected[n - 1]) << "n=" << n;
  }
}

TEST(Matching, ColoredK4) {
  Graph g = complete_graph(4, {2, 2, 2, 2});
  EXPECT_EQ(count_perfect_matchings(g), 48u);
  EXPECT_EQ(count_perfect_matchings(ghz43_graph()), 3u);
}

TEST(Matching, EveryMatchingCoversEachVertexOnce) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Graph g = testing::random_graph(rng, 8, 16);
    for (const auto& pm : enumerate_perfect_matchings(g)) {
      std::vector<int> hits(static_cast<std::size_t>(g.vertex_count()), 0);
      for (auto idx : pm.edges) {
        ++hits[static_cast<std::size_t>(g.edges()[idx].u)];
        ++hits[static_cast<std::size_t>(g.edges()[idx].v)];
      }
      for (int h : hits) ASSERT_EQ(h, 1);
    }
  }
}

TEST(Matching, OddVertexCountHasNone) {
  Graph g(3, {1, 1, 1}, {{0, 1, 0, 0, 1.0}, {1, 2, 0, 0, 1.0}});
  EXPECT_EQ(count_perfect_matchings(g), 0u);
  EXPECT_TRUE(state_from_graph(g).empty());
}

TEST(State, SingleEdge) {
  Graph g(2, {1, 1}, {{0, 1, 0, 0, 0.5}});
  auto s = state_from_graph(g);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.amplitude(K("00")).real(), 0.5);
}

TEST(State, Ghz43Graph) {
  auto s = state_from_graph(ghz43_graph());
  ASSERT_EQ(s.size(), 3u);
  for (auto k : {"0000", "1111", "2222"}) EXPECT_DOUBLE_EQ(s.amplitude(K(k)).real(), 1.0);
}

TEST(State, TwoExtraEdgesGiveCrossTerms) {
  Graph g = ghz44_attempt();
  // One matching per ket: four from the {01,23} pairing, one each from the others.
  EXPECT_EQ(count_perfect_matchings(g), 6u);
  EXPECT_EQ(testing::subset_oracle(g).size(), 6u);
  auto s = state_from_graph(g);
  ASSERT_EQ(s.size(), 6u);
  for (auto k : {"0000", "1111", "2222", "3333", "0033", "3300"}) EXPECT_DOUBLE_EQ(s.amplitude(K(k)).real(), 1.0);
}

TEST(State, Normalize) {
  StateVector a({{K("00"), 2.0}});
  EXPECT_DOUBLE_EQ(normalize(a).amplitude(K("00")).real(), 1.0);
  StateVector b({{K("00"), 1.0}, {K("11"), -1.0}});
  auto nb = normalize(b);
  EXPECT_NEAR(nb.amplitude(K("00")).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(nb.amplitude(K("11")).real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(nb.normalized());
  try {
    normalize(StateVector{});
    FAIL() << "expected ZeroState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_state);
  }
}

TEST(Graph, CompleteGraphEdgeCounts) {
  EXPECT_EQ(complete_graph(4, {1, 1, 1, 1}).edge_count(), 6u);
  EXPECT_EQ(complete_graph(4, {2, 2, 2, 2}).edge_count(), 24u);
  EXPECT_EQ(complete_graph(8, {4, 4, 4, 4, 1, 1, 1, 1}).edge_count(), 166u);
}

TEST(Graph, Validation) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_param;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code([] { Graph(2, {1}); }), ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { Graph(2, {1, 1}, {{0, 0, 0, 0, 1.0}}); }), ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { Graph(2, {1, 1}, {{0, 2, 0, 0, 1.0}}); }), ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { Graph(2, {1, 1}, {{0, 1, 1, 0, 1.0}}); }), ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { Graph(2, {1, 1}, {{0, 1, 0, 0, 1.0}, {1, 0, 0, 0, 2.0}}); }), ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { Graph(2, {1, 1}, {{0, 1, 0, 0, 1.0}}, {Role::input, Role::input}); }),
            ErrorCode::invalid_graph);
  EXPECT_EQ(code([] { complete_graph(3, {1, 1, 1}); }), ErrorCode::invalid_param);
}

TEST(Graph, EdgesAreCanonical) {
  Graph g(2, {2, 3}, {{1, 0, 2, 1, 0.25}});
  ASSERT_EQ(g.edge_count(), 1u);
  const Edge& e = g.edges()[0];
  EXPECT_EQ(e.u, 0);
  EXPECT_EQ(e.v, 1);
  EXPECT_EQ(e.mode_u, 1);
  EXPECT_EQ(e.mode_v, 2);
}

TEST(StateProperty, Multilinearity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testing::random_graph(rng, 6, 12);
    const std::size_t idx = rng() % g.edge_count();
    const double lambda = 2.5;
    auto w = g.weights();
    w[idx] *= lambda;
    const auto scaled = state_from_graph(g.with_weights(w));
    // Which kets does the chosen edge feed?
    std::map<Ket, double> with_edge, without_edge;
    for_each_perfect_matching(g, [&](const std::vector<std::size_t>& pm) {
      double a = 1;
      for (auto i : pm) a *= g.edges()[i].weight;
      const auto k = matching_modes(g, pm);
      (std::find(pm.begin(), pm.end(), idx) != pm.end() ? with_edge : without_edge)[k] += a;
    });
    std::set<Ket> kets;
    for (auto& [k, a] : with_edge) kets.insert(k);
    for (auto& [k, a] : without_edge) kets.insert(k);
    for (const auto& k : kets) {
      const double expect = lambda * with_edge[k] + without_edge[k];
      EXPECT_NEAR(scaled.amplitude(k).real(), std::abs(expect) < amplitude_epsilon ? 0.0 : expect, 1e-12);
    }
  }
}

TEST(StateProperty, GlobalScale) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testing::random_graph(rng, 6, 12);
    const double lambda = 1.7;
    const auto a = state_from_graph(g), b = state_from_graph(g.scaled(lambda));
    const double factor = std::pow(lambda, g.vertex_count() / 2);
    for (const auto& [k, amp] : a.terms()) EXPECT_NEAR(b.amplitude(k).real(), factor * amp.real(), 1e-12);
    EXPECT_EQ(a.size(), b.size());
  }
}

TEST(StateProperty, EdgeOrderIrrelevant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testing::random_graph(rng, 6, 12);
    auto edges = g.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    Graph h(g.vertex_count(), g.dimensions(), edges);
    EXPECT_EQ(state_from_graph(g), state_from_graph(h));
  }
}

TEST(StateProperty, AgreesWithSubsetOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = testing::random_graph(rng, 6, 12);
    EXPECT_LE(testing::distance(state_from_graph(g), testing::subset_oracle(g)), 1e-12) << "trial " << trial;
  }
}

TEST(State, InputsAreHiddenFromTheKet) {
  Graph g(2, {2, 2}, {{0, 1, 0, 0, 1.0}, {0, 1, 1, 1, 1.0}}, {Role::input, Role::detector});
  auto s = state_from_graph(g);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms().begin()->first.size(), 1u);
  EXPECT_EQ(full_state(g).terms().begin()->first.size(), 2u);
}

}  // namespace
}  // namespace halo
