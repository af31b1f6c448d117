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
#include <random>
#include <set>

#include "halo/io.hpp"
#include "halo/optimize.hpp"
#include "halo/verify.hpp"
#include "testing.hpp"

namespace halo {
namespace {

using testing::asset;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "nothing thrown";
  return ErrorCode::invalid_param;
}

Graph discovered_cnot() { return graph_from_json(read_json(asset("solutions/cnot22.graph.json"))); }

TEST(VerifyState, Ghz43Passes) {
  auto r = verify_state(testing::ghz43_graph(), ghz(4, 3), 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_NEAR(r.fidelity, 1.0, 1e-15);
  EXPECT_EQ(r.cross_term_mass, 0.0);
}

TEST(VerifyState, CrossTermsAreReported) {
  auto r = verify_state(testing::ghz44_attempt(), ghz(4, 4), 1e-2);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.fidelity, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.cross_term_mass, 1.0 / 3.0, 1e-12);
  std::set<Ket> seen;
  for (const auto& v : r.violations) seen.insert(v.observed);
  EXPECT_TRUE(seen.count({0, 0, 3, 3}));
  EXPECT_TRUE(seen.count({3, 3, 0, 0}));
}

TEST(VerifyState, EmptyGraphIsZeroState) {
  auto r = verify_state(Graph(4, {3, 3, 3, 3}), ghz(4, 3));
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.zero_state);
  EXPECT_FALSE(r.violations.empty());
}

TEST(VerifyState, ShapeMismatch) {
  EXPECT_EQ(code_of([] { verify_state(testing::ghz43_graph(), ghz(3, 3)); }), ErrorCode::shape_mismatch);
}

TEST(VerifyStateProperty, PassIffFidelityWithinTolerance) {
  std::mt19937_64 rng(8);
  const auto t = ghz(4, 3);
  for (int trial = 0; trial < 100; ++trial) {
    auto w = testing::ghz43_graph().weights();
    const double eps = trial % 2 ? 0.0 : std::pow(10.0, -1.0 - static_cast<double>(rng() % 8));
    for (auto& x : w) x *= 1 + eps * std::uniform_real_distribution<double>(-1, 1)(rng);
    const Graph g = testing::ghz43_graph().with_weights(w);
    for (double tol : {1e-9, 1e-6, 1e-3}) {
      auto r = verify_state(g, t, tol);
      EXPECT_NEAR(r.fidelity, fidelity(g, t), 1e-13);
      EXPECT_EQ(r.pass, 1 - r.fidelity <= tol);
      EXPECT_EQ(r.pass, r.violations.empty());
      // Away from round-off at the boundary both fidelity routes agree.
      if (std::abs(1 - fidelity(g, t) - tol) > 1e-12) EXPECT_EQ(r.pass, fidelity(g, t) >= 1 - tol);
    }
  }
}

TEST(ProjectInputs, FilterSemantics) {
  Graph g(2, {2, 2}, {{0, 1, 0, 0, 1.0}, {0, 1, 1, 1, 1.0}}, {Role::input, Role::detector});
  auto p = project_inputs(g, {{0, 0}});
  ASSERT_EQ(p.edge_count(), 1u);
  EXPECT_EQ(p.edges()[0].mode_u, 0);
  EXPECT_EQ(code_of([&] { project_inputs(g, {{0, 2}}); }), ErrorCode::unassigned_input);
  EXPECT_EQ(code_of([&] { project_inputs(g, {}); }), ErrorCode::unassigned_input);
  EXPECT_EQ(code_of([&] { project_inputs(g, {{0, 0}, {1, 0}}); }), ErrorCode::unassigned_input);
}

TEST(ProjectInputs, DetectorEdgesUntouched) {
  const Graph g = discovered_cnot();
  for (Mode m = 0; m < 2; ++m)
    for (Mode n = 0; n < 2; ++n) {
      auto p = project_inputs(g, {{0, m}, {1, n}});
      std::vector<Edge> before, after;
      for (const auto& e : g.edges())
        if (g.role(e.u) == Role::detector && g.role(e.v) == Role::detector) before.push_back(e);
      for (const auto& e : p.edges())
        if (p.role(e.u) == Role::detector && p.role(e.v) == Role::detector) after.push_back(e);
      EXPECT_EQ(before, after);
      for (const auto& e : p.edges()) {
        if (e.u == 0) EXPECT_EQ(e.mode_u, m);
        if (e.u == 1) EXPECT_EQ(e.mode_u, n);
      }
    }
}

TEST(ProjectInputs, DiscoveredCnotInputOneZero) {
  const Graph g = discovered_cnot();
  const Graph p = project_inputs(g, {{0, 1}, {1, 0}});
  const auto s = state_from_graph(p);
  // Largest heralded term reads |1,1> on the logical outputs.
  Ket best;
  double top = 0;
  for (const auto& [k, a] : s.terms())
    if (std::abs(a) > top) top = std::abs(a), best = k;
  ASSERT_GE(best.size(), 2u);
  EXPECT_EQ(best[0], 1);
  EXPECT_EQ(best[1], 1);
}

TEST(VerifyGate, DiscoveredCnot) {
  const Graph g = discovered_cnot();
  auto r = verify_gate(g, GateSpec::cnot(2, 2, 0, 1, 2, 3, {4, 5, 6, 7}), 1e-6);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.amplitudes.size(), 4u);
  const std::pair<Mode, Mode> expect[] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.amplitudes[i].expected[0], expect[i].first);
    EXPECT_EQ(r.amplitudes[i].expected[1], expect[i].second);
  }
  EXPECT_LE(r.uniformity, 1e-6);
}

TEST(VerifyGate, IdentityWiringFailsOnControlOne) {
  Graph g(4, {2, 2, 2, 2},
          {{0, 2, 0, 0, 1.0}, {0, 2, 1, 1, 1.0}, {1, 3, 0, 0, 1.0}, {1, 3, 1, 1, 1.0}},
          {Role::input, Role::input, Role::detector, Role::detector});
  auto r = verify_gate(g, GateSpec::cnot(2, 2, 0, 1, 2, 3, {}), 1e-9);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.violations.empty());
  for (const auto& v : r.violations) EXPECT_EQ(v.input[0], 1);
}

TEST(VerifyGate, BasisComplete) {
  Graph g(4, {2, 4, 2, 4}, {{0, 2, 0, 0, 1.0}}, {Role::input, Role::input, Role::detector, Role::detector});
  auto r = verify_gate(g, GateSpec::cnot(2, 4, 0, 1, 2, 3, {}), 1e-9);
  EXPECT_EQ(r.amplitudes.size(), 8u);
  EXPECT_FALSE(r.pass);
}

TEST(VerifyGate, ShapeErrors) {
  const Graph g = discovered_cnot();
  EXPECT_EQ(code_of([&] { verify_gate(g, GateSpec::cnot(2, 2, 0, 1, 2, 3, {4, 5}), 1e-6); }),
            ErrorCode::shape_mismatch);
  EXPECT_EQ(code_of([&] { verify_gate(g, GateSpec::cnot(2, 2, 2, 1, 0, 3, {4, 5, 6, 7}), 1e-6); }),
            ErrorCode::shape_mismatch);
  EXPECT_EQ(code_of([] { GateSpec::cnot(0, 2, 0, 1, 2, 3, {}); }), ErrorCode::invalid_param);
}

TEST(VerifyGate, CustomRule) {
  Graph g(4, {2, 2, 2, 2},
          {{0, 2, 0, 0, 1.0}, {0, 2, 1, 1, 1.0}, {1, 3, 0, 0, 1.0}, {1, 3, 1, 1, 1.0}},
          {Role::input, Role::input, Role::detector, Role::detector});
  auto spec = GateSpec::cnot(2, 2, 0, 1, 2, 3, {});
  spec.rule = [](Mode m, Mode n) { return std::make_pair(m, n); };
  auto r = verify_gate(g, spec, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.uniformity, 0.0);
}

}  // namespace
}  // namespace halo
