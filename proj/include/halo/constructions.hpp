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

/**
 * @file constructions.hpp
 * @brief Scalable families built by stacking copies of a HALO template.
 *
 * Each function takes a validated template and returns the hypergraph, its
 * expansion and the herald pattern of the added ancillas.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/halo.hpp"
#include "halo/state.hpp"
#include "halo/states.hpp"

namespace halo {

struct Construction {
  Hypergraph hypergraph;
  Graph graph;
  std::vector<Mode> heralds;
};

namespace detail {

inline const Graph& require_base(const HaloTemplate& t) {
  if (!t.base) throw Error(ErrorCode::invalid_param, "template carries no base graph");
  return *t.base;
}

inline std::vector<std::size_t> support_positions(const EmittedTerm& e) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < e.modes.size(); ++i)
    if (e.modes[i] != absent_mode) out.push_back(i);
  return out;
}

inline Amplitude heralded_amplitude(const StateVector& s, Mode mode, std::size_t main, const std::vector<Mode>& heralds) {
  Ket k(main, mode);
  k.insert(k.end(), heralds.begin(), heralds.end());
  return s.amplitude(k);
}

// Rescales the edges at vertex 0 per mode so that every |c...c>|herald> term
// of the full state has the amplitude of the mode-0 term.
inline Graph balance_ghz(const Graph& g, int main, int dim, const std::vector<Mode>& heralds) {
  const StateVector s = full_state(g);
  const Amplitude ref = heralded_amplitude(s, 0, static_cast<std::size_t>(main), heralds);
  if (std::abs(ref) < amplitude_epsilon) return g;
  std::vector<Edge> edges = g.edges();
  for (Mode c = 1; c < dim; ++c) {
    const Amplitude a = heralded_amplitude(s, c, static_cast<std::size_t>(main), heralds);
    if (std::abs(a) < amplitude_epsilon) continue;
    const double f = (ref / a).real();
    for (auto& e : edges)
      if (e.touches(0) && e.mode_at(0) == c) e.weight *= f;
  }
  return g.with_edges(std::move(edges));
}

inline Construction finish(Hypergraph h, const HaloTemplate& t) {
  Graph g = expand(h, t);
  auto heralds = expanded_heralds(h, t);
  return {std::move(h), std::move(g), std::move(heralds)};
}

}  // namespace detail

/// GHZ(4, d) from a four-vertex template emitting one GHZ term over a
/// GHZ(4, 3) base: d - 3 copies, one per extra mode. d = 3 is the base.
inline Construction construct_ghz(int d, const HaloTemplate& t) {
  if (d < 3) throw Error(ErrorCode::invalid_param, "GHZ construction needs d >= 3");
  const Graph& base = detail::require_base(t);
  if (t.main_count() != 4 || t.emitted.size() != 1 || base.vertex_count() != 4)
    throw Error(ErrorCode::invalid_param, "GHZ template must emit one term over four vertices");
  const StateVector s = full_state(base);
  const double a = s.amplitude(Ket(4, 0)).real();
  std::vector<Hyperedge> hs;
  for (Mode j = 3; j < d; ++j) hs.push_back({t.main, std::vector<Mode>(4, j), a / t.emitted.front().amplitude});
  std::vector<int> dims(4, d);
  Construction c = detail::finish(Hypergraph(Graph(4, dims, base.edges(), base.roles()), std::move(hs)), t);
  c.graph = detail::balance_ghz(c.graph, 4, d, c.heralds);
  return c;
}

/// GHZ(6 + 2n, 3) from a template with two disjoint two-vertex emissions
/// over a GHZ(6, 3) base. One edge of the mode absent from both emissions
/// is subdivided into a path through n new vertex pairs; n + 1 copies of the
/// template then emit, cyclically, the first emission on the pairs
/// (P1, pair 1, ..., pair n) and the second on (pair n, P2, pair 1, ...).
/// Every subdividable edge is tried in key order; the first that yields the
/// target after gauge balancing at vertex 0 is kept.
inline Construction construct_ghz_family_63(int n, const HaloTemplate& t) {
  if (n < 0) throw Error(ErrorCode::invalid_param, "n must be non-negative");
  const Graph& base = detail::require_base(t);
  if (base.vertex_count() != 6 || t.emitted.size() != 2)
    throw Error(ErrorCode::invalid_param, "template must emit two pairs over a six-vertex base");
  const auto s1 = detail::support_positions(t.emitted[0]);
  const auto s2 = detail::support_positions(t.emitted[1]);
  if (s1.size() != 2 || s2.size() != 2)
    throw Error(ErrorCode::invalid_param, "template emissions must cover two vertices each");
  const Mode c1 = t.emitted[0].modes[s1[0]], c2 = t.emitted[1].modes[s2[0]];
  if (t.emitted[0].modes[s1[1]] != c1 || t.emitted[1].modes[s2[1]] != c2 || c1 == c2 || c1 > 2 || c2 > 2)
    throw Error(ErrorCode::invalid_param, "template emissions must be single-mode pairs");
  const Mode c0 = 3 - c1 - c2;
  using Pair = std::pair<VertexId, VertexId>;
  const Pair p1{t.main[s1[0]], t.main[s1[1]]}, p2{t.main[s2[0]], t.main[s2[1]]};
  const int total = 6 + 2 * n;
  const auto heralds_for = [&] {
    std::vector<Mode> h;
    for (int j = 0; j <= n; ++j) h.insert(h.end(), t.herald_modes.begin(), t.herald_modes.end());
    return h;
  }();
  const TargetSpec target = ghz(total, 3).with_heralds(heralds_for);

  bool tried = false;
  for (std::size_t cut = 0; cut < base.edge_count(); ++cut) {
    const Edge& xy = base.edges()[cut];
    if (xy.mode_u != c0 || xy.mode_v != c0) continue;
    if (n == 0 && tried) break;
    tried = true;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < base.edge_count(); ++i)
      if (i != cut || n == 0) edges.push_back(base.edges()[i]);
    auto p = [](int k) { return 6 + 2 * (k - 1); };
    if (n > 0) {
      edges.push_back({xy.u, p(1), c0, c0, xy.weight});
      for (int k = 1; k < n; ++k) edges.push_back({p(k) + 1, p(k + 1), c0, c0, 1.0});
      edges.push_back({p(n) + 1, xy.v, c0, c0, 1.0});
    }
    auto pair = [&](int k, const Pair& zero) { return k == 0 ? zero : Pair{p(k), p(k) + 1}; };
    std::vector<Hyperedge> hs;
    for (int j = 0; j <= n; ++j) {
      const Pair a = pair(j, p1), b = pair((j + n) % (n + 1), p2);
      std::vector<VertexId> vs(4);
      vs[s1[0]] = a.first;
      vs[s1[1]] = a.second;
      vs[s2[0]] = b.first;
      vs[s2[1]] = b.second;
      hs.push_back({vs, t.main_modes, 1.0});
    }
    Construction c = detail::finish(
        Hypergraph(Graph(total, std::vector<int>(static_cast<std::size_t>(total), 3), edges), std::move(hs)), t);
    c.graph = detail::balance_ghz(c.graph, total, 3, c.heralds);
    const StateVector psi = full_state(c.graph);
    const double norm = psi.norm_squared();
    if (norm > 0 && std::norm(target.state().inner(psi)) / norm > 1.0 - 1e-9) return c;
  }
  throw Error(ErrorCode::no_solution, "no subdivision of the base gives GHZ(" + std::to_string(total) + ", 3)");
}

/// Maximally entangled pair of dimension 2k from k copies of a two-vertex
/// template emitting |00> + |11>; copy j emits modes 2j and 2j + 1.
inline Construction construct_swapping(int k, const HaloTemplate& t) {
  if (k < 1) throw Error(ErrorCode::invalid_param, "swapping construction needs k >= 1");
  if (t.main_count() != 2) throw Error(ErrorCode::invalid_param, "swapping template must have two main vertices");
  std::vector<Hyperedge> hs;
  for (Mode j = 0; j < k; ++j)
    hs.push_back({{0, 1}, {t.main_modes[0] + 2 * j, t.main_modes[1] + 2 * j}, 1.0});
  return detail::finish(Hypergraph(Graph(2, {2 * k, 2 * k}), std::move(hs)), t);
}

/// CNOT(2, 2k) on inputs 0, 1 and outputs 2, 3. The control-1 branch is a
/// fixed set of base edges (control passes through, target shifted by one);
/// the control-0 branch comes from k template copies, copy j carrying
/// target modes 2j and 2j + 1. The template's main order is
/// (control in, target in, control out, target out).
inline Construction construct_cnot(int k, const HaloTemplate& t) {
  if (k < 1) throw Error(ErrorCode::invalid_param, "CNOT construction needs k >= 1");
  if (t.main_count() != 4 || t.emitted.size() != 2)
    throw Error(ErrorCode::invalid_param, "CNOT template must emit two terms over four vertices");
  if (t.main_modes[0] != 0 || t.main_modes[2] != 0)
    throw Error(ErrorCode::invalid_param, "CNOT template must encode the control-0 branch");
  const double e = t.emitted.front().amplitude;
  if (std::abs(t.emitted[1].amplitude - e) > 1e-6 * std::abs(e))
    throw Error(ErrorCode::invalid_param, "CNOT template emissions must have equal amplitudes");
  const int d2 = 2 * k;
  std::vector<Edge> edges{{0, 2, 1, 1, 1.0}};
  for (Mode n = 0; n < d2; ++n) edges.push_back({1, 3, n, (n + 1) % d2, 1.0});
  Graph base(4, {2, d2, 2, d2}, std::move(edges), {Role::input, Role::input, Role::detector, Role::detector});
  std::vector<Hyperedge> hs;
  const Mode low = std::min(t.emitted[0].modes[1], t.emitted[1].modes[1]);
  for (Mode j = 0; j < k; ++j)
    hs.push_back({{0, 1, 2, 3},
                  {0, t.main_modes[1] - low + 2 * j, 0, t.main_modes[3] - low + 2 * j},
                  1.0 / e});
  return detail::finish(Hypergraph(std::move(base), std::move(hs)), t);
}

}  // namespace halo
