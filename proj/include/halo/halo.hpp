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
 * @file halo.hpp
 * @brief Heralded ancilla subgraphs that act as multi-photon emitters.
 *
 * Take a subgraph H whose ancilla vertices connect only inside H and whose
 * other endpoints ("main" vertices) also belong to the rest of an
 * experiment. Summing the matchings of H that cover every ancilla, while
 * leaving any subset S of main vertices uncovered, gives a partial state
 *
 *     sum_S  c_S |modes on S> |ancilla modes>.
 *
 * H is a HALO when, on the herald pattern, the only surviving terms are
 * S = {} (amplitude alpha, nothing emitted) and the declared emission
 * supports. Copies with disjoint ancillas then compose like sources: in the
 * full state each copy contributes either alpha or one of its emitted terms.
 * A HALO emitting on all of its k main vertices behaves as a k-photon
 * source and is drawn as a hyperedge.
 *
 * Templates are stored normalized (alpha = 1, first term of every emission
 * support = 1), so a hyperedge's weight is the amplitude it emits.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/matching.hpp"
#include "halo/optimize.hpp"
#include "halo/state.hpp"
#include "halo/states.hpp"

namespace halo {

struct Hyperedge {
  std::vector<VertexId> vertices;
  std::vector<Mode> modes;
  double weight = 1.0;

  bool operator==(const Hyperedge&) const = default;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(Graph base, std::vector<Hyperedge> hyperedges)
      : base_(std::move(base)), hyperedges_(std::move(hyperedges)) {
    for (const auto& h : hyperedges_) {
      if (h.vertices.size() < 2) throw Error(ErrorCode::invalid_graph, "hyperedge needs at least two vertices");
      if (h.modes.size() != h.vertices.size())
        throw Error(ErrorCode::invalid_graph, "hyperedge needs one mode per vertex");
      std::set<VertexId> seen;
      for (VertexId v : h.vertices) {
        if (v < 0 || v >= base_.vertex_count()) throw Error(ErrorCode::invalid_graph, "hyperedge vertex out of range");
        if (!seen.insert(v).second) throw Error(ErrorCode::invalid_graph, "hyperedge repeats a vertex");
      }
      for (Mode m : h.modes)
        if (m < 0) throw Error(ErrorCode::invalid_graph, "negative hyperedge mode");
    }
  }

  const Graph& base() const { return base_; }
  const std::vector<Hyperedge>& hyperedges() const { return hyperedges_; }

 private:
  Graph base_;
  std::vector<Hyperedge> hyperedges_;
};

/// One term a template emits: a mode per main vertex (absent_mode where the
/// vertex is not covered) and its amplitude relative to alpha.
struct EmittedTerm {
  std::vector<Mode> modes;
  double amplitude = 1.0;

  bool operator==(const EmittedTerm&) const = default;
};

struct HaloTemplate {
  /// Main vertex ids in the graph the template was extracted from.
  std::vector<VertexId> main;
  /// Reference mode of each main vertex; expansion shifts modes relative to it.
  std::vector<Mode> main_modes;
  int ancilla_count = 0;
  std::vector<Mode> herald_modes;
  /// Local ids: main vertices 0..m-1 (in `main` order), ancillas m..m+a-1.
  std::vector<Edge> subgraph;
  /// Number of main vertices a full emission covers.
  int amplitude_degree = 0;
  std::vector<EmittedTerm> emitted;
  /// Graph the template was extracted against, if recorded.
  std::optional<Graph> base;

  std::size_t main_count() const { return main_modes.size(); }
  int local_vertex_count() const { return static_cast<int>(main_count()) + ancilla_count; }

  /// Subgraph as a Graph over local ids; dimensions are the smallest that fit.
  Graph local_graph() const {
    std::vector<int> dims(static_cast<std::size_t>(local_vertex_count()), 1);
    for (std::size_t i = 0; i < main_modes.size(); ++i) dims[i] = std::max(dims[i], main_modes[i] + 1);
    for (std::size_t j = 0; j < herald_modes.size(); ++j)
      dims[main_count() + j] = std::max(dims[main_count() + j], herald_modes[j] + 1);
    for (const auto& e : subgraph) {
      if (e.u < 0 || e.v < 0 || e.u >= local_vertex_count() || e.v >= local_vertex_count())
        throw Error(ErrorCode::invalid_graph, "template edge endpoint out of range");
      dims[static_cast<std::size_t>(e.u)] = std::max(dims[static_cast<std::size_t>(e.u)], e.mode_u + 1);
      dims[static_cast<std::size_t>(e.v)] = std::max(dims[static_cast<std::size_t>(e.v)], e.mode_v + 1);
    }
    return Graph(local_vertex_count(), dims, subgraph);
  }

  bool operator==(const HaloTemplate&) const = default;
};

/// Partial-state amplitudes keyed by (main modes with absent_mode, ancilla modes).
using PartialState = std::map<Ket, double>;

/// Sum over the matchings of `local` that cover every vertex >= main_count.
/// Terms below amplitude_epsilon (relative to the largest) are dropped.
inline PartialState partial_state(const Graph& local, int main_count) {
  PartialState out;
  for_each_covering_matching(local, main_count, [&](const std::vector<std::size_t>& m) {
    Ket ket(static_cast<std::size_t>(local.vertex_count()), absent_mode);
    double amp = 1.0;
    for (std::size_t idx : m) {
      const Edge& e = local.edges()[idx];
      ket[static_cast<std::size_t>(e.u)] = e.mode_u;
      ket[static_cast<std::size_t>(e.v)] = e.mode_v;
      amp *= e.weight;
    }
    out[ket] += amp;
  });
  double scale = 0;
  for (const auto& [k, a] : out) scale = std::max(scale, std::abs(a));
  std::erase_if(out, [&](const auto& kv) { return std::abs(kv.second) <= amplitude_epsilon * scale; });
  return out;
}

inline PartialState partial_state(const HaloTemplate& t) {
  return partial_state(t.local_graph(), static_cast<int>(t.main_count()));
}

struct TemplateReport {
  bool pass = false;
  double alpha = 0;
  /// Probability mass of the partial state outside the allowed terms.
  double residual = 0;
  std::vector<std::pair<Ket, double>> cross_terms;
  std::vector<std::string> problems;
};

/// PASS iff, besides the empty term, only the declared emitted terms survive
/// (all on the herald pattern), each with its declared amplitude relative to
/// alpha, and the cross-term mass is at most `tol`.
inline TemplateReport validate_template(const HaloTemplate& t, double tol = 1e-9) {
  TemplateReport r;
  if (t.herald_modes.size() != static_cast<std::size_t>(t.ancilla_count))
    r.problems.push_back("herald pattern length does not match ancilla count");
  if (t.emitted.empty()) r.problems.push_back("template emits nothing");
  for (const auto& e : t.emitted)
    if (e.modes.size() != t.main_count()) r.problems.push_back("emitted term has wrong length");
  if (!r.problems.empty()) return r;

  const auto state = partial_state(t);
  auto with_herald = [&](std::vector<Mode> main) {
    main.insert(main.end(), t.herald_modes.begin(), t.herald_modes.end());
    return main;
  };
  const Ket empty = with_herald(std::vector<Mode>(t.main_count(), absent_mode));
  std::map<Ket, double> expected;
  for (const auto& e : t.emitted) expected.emplace(with_herald(e.modes), e.amplitude);

  double total = 0, cross = 0;
  for (const auto& [k, a] : state) {
    total += a * a;
    if (k == empty || expected.count(k)) continue;
    cross += a * a;
    r.cross_terms.emplace_back(k, a);
  }
  auto it = state.find(empty);
  r.alpha = it == state.end() ? 0.0 : it->second;
  if (r.alpha == 0.0) r.problems.push_back("no empty (herald-only) contribution");
  r.residual = total > 0 ? cross / total : 0.0;
  if (r.residual > tol) r.problems.push_back("cross terms survive");
  if (r.alpha != 0.0)
    for (const auto& [k, amp] : expected) {
      auto s = state.find(k);
      const double got = s == state.end() ? 0.0 : s->second / r.alpha;
      if (std::abs(got - amp) > tol * std::max(1.0, std::abs(amp)))
        r.problems.push_back("emitted term " + ket_string(k) + " has amplitude " + std::to_string(got) +
                             ", expected " + std::to_string(amp));
    }
  r.pass = r.problems.empty();
  return r;
}

namespace detail {

inline std::vector<Mode> support_of(const std::vector<Mode>& modes) {
  std::vector<Mode> s;
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i] != absent_mode) s.push_back(static_cast<Mode>(i));
  return s;
}

inline void scale_at(std::vector<Edge>& edges, VertexId v, double f) {
  for (auto& e : edges)
    if (e.touches(v)) e.weight *= f;
}

}  // namespace detail

/// Cuts the subgraph spanned by `ancillas` out of `g`. The new edges are the
/// edges of `g` whose key does not occur in `base`; every one of them must
/// touch an ancilla and stay within main and ancilla vertices, and no base
/// edge may touch an ancilla. Terms whose support is one of
/// `emission_supports` (main-vertex positions; default: all main vertices)
/// become the emitted terms, anything else nonzero is a cross term.
/// The herald pattern is the ancilla pattern of the largest empty term.
/// Throws NotAHalo if there are no new edges or the result fails
/// validate_template(tol).
inline HaloTemplate extract_halo(const Graph& g, const std::vector<VertexId>& main,
                                 const std::vector<VertexId>& ancillas, const Graph& base,
                                 std::vector<std::vector<int>> emission_supports = {}, double tol = 1e-9) {
  const int m = static_cast<int>(main.size());
  std::map<VertexId, VertexId> local;
  for (VertexId v : main) local.emplace(v, static_cast<VertexId>(local.size()));
  for (VertexId v : ancillas) local.emplace(v, static_cast<VertexId>(local.size()));
  if (local.size() != main.size() + ancillas.size())
    throw Error(ErrorCode::not_a_halo, "main and ancilla vertices overlap or repeat");
  for (const auto& [v, l] : local)
    if (v < 0 || v >= g.vertex_count()) throw Error(ErrorCode::not_a_halo, "vertex out of range");
  std::set<VertexId> anc(ancillas.begin(), ancillas.end());

  std::vector<Edge> sub;
  for (const auto& e : g.edges()) {
    const bool old = e.u < base.vertex_count() && e.v < base.vertex_count() && base.find(e.key()) != Graph::npos;
    const bool at_ancilla = anc.count(e.u) || anc.count(e.v);
    if (old) {
      if (at_ancilla) throw Error(ErrorCode::not_a_halo, "base edge touches an ancilla");
      continue;
    }
    if (!at_ancilla)
      throw Error(ErrorCode::not_a_halo, "new edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                             ") does not touch an ancilla");
    if (!local.count(e.u) || !local.count(e.v))
      throw Error(ErrorCode::not_a_halo, "new edge leaves the main and ancilla vertices");
    sub.push_back({local.at(e.u), local.at(e.v), e.mode_u, e.mode_v, e.weight});
  }
  if (sub.empty()) throw Error(ErrorCode::not_a_halo, "no new edges");

  if (emission_supports.empty()) {
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
    emission_supports.push_back(all);
  }
  for (auto& s : emission_supports) std::sort(s.begin(), s.end());

  HaloTemplate t;
  t.main = main;
  t.ancilla_count = static_cast<int>(ancillas.size());
  t.amplitude_degree = m;
  t.base = base;
  {
    // Herald pattern from the dominant empty term.
    HaloTemplate probe;
    probe.main_modes.assign(static_cast<std::size_t>(m), 0);
    probe.ancilla_count = t.ancilla_count;
    probe.subgraph = sub;
    const auto state = partial_state(probe);
    double best = 0;
    for (const auto& [k, a] : state) {
      if (!std::all_of(k.begin(), k.begin() + m, [](Mode x) { return x == absent_mode; })) continue;
      if (std::abs(a) > best) {
        best = std::abs(a);
        t.herald_modes.assign(k.begin() + m, k.end());
      }
    }
    if (best == 0) throw Error(ErrorCode::not_a_halo, "ancillas cannot be covered without emitting");
  }

  // Normalize: alpha = 1 by a uniform scale (the empty term is a matching of
  // the ancillas alone), its sign by flipping one ancilla.
  auto alpha_of = [&](const std::vector<Edge>& edges) {
    HaloTemplate probe;
    probe.main_modes.assign(static_cast<std::size_t>(m), 0);
    probe.ancilla_count = t.ancilla_count;
    probe.subgraph = edges;
    Ket empty(static_cast<std::size_t>(m), absent_mode);
    empty.insert(empty.end(), t.herald_modes.begin(), t.herald_modes.end());
    const auto state = partial_state(probe);
    auto it = state.find(empty);
    return std::make_pair(it == state.end() ? 0.0 : it->second, state);
  };
  auto [alpha, state0] = alpha_of(sub);
  const double lambda = std::pow(std::abs(alpha), -2.0 / t.ancilla_count);
  for (auto& e : sub) e.weight *= lambda;
  if (alpha < 0) detail::scale_at(sub, m, -1.0);

  // Dominant term of each emission support -> 1, by scaling the support's
  // first vertex.
  auto support_of = [&](const Ket& k) {
    std::vector<int> supp;
    for (int i = 0; i < m; ++i)
      if (k[static_cast<std::size_t>(i)] != absent_mode) supp.push_back(i);
    return supp;
  };
  auto on_herald = [&](const Ket& k) { return std::equal(k.begin() + m, k.end(), t.herald_modes.begin()); };
  auto dominant = [&](const PartialState& state, const std::vector<int>& supp) {
    std::optional<std::pair<Ket, double>> best;
    for (const auto& [k, a] : state)
      if (on_herald(k) && support_of(k) == supp && (!best || std::abs(a) > std::abs(best->second))) best = {k, a};
    return best;
  };
  {
    auto [alpha1, state1] = alpha_of(sub);
    std::set<int> used;
    for (const auto& supp : emission_supports) {
      if (supp.empty() || used.count(supp.front())) continue;
      if (auto d = dominant(state1, supp)) detail::scale_at(sub, supp.front(), 1.0 / d->second);
      used.insert(supp.begin(), supp.end());
    }
  }
  t.subgraph = sub;

  // Emitted terms grouped by support, dominant term first; terms that vanish
  // up to round-off are left out (validation counts them as cross terms).
  auto [alpha2, state2] = alpha_of(sub);
  t.main_modes.assign(static_cast<std::size_t>(m), 0);
  std::vector<char> have(static_cast<std::size_t>(m), 0);
  for (const auto& supp : emission_supports) {
    auto d = dominant(state2, supp);
    if (!d) continue;
    const double cutoff = std::sqrt(tol) * std::abs(d->second);
    t.emitted.push_back({std::vector<Mode>(d->first.begin(), d->first.begin() + m), d->second / alpha2});
    for (const auto& [k, a] : state2)
      if (k != d->first && on_herald(k) && support_of(k) == supp && std::abs(a) > cutoff)
        t.emitted.push_back({std::vector<Mode>(k.begin(), k.begin() + m), a / alpha2});
    for (int i : supp)
      if (!have[static_cast<std::size_t>(i)]) {
        have[static_cast<std::size_t>(i)] = 1;
        t.main_modes[static_cast<std::size_t>(i)] = d->first[static_cast<std::size_t>(i)];
      }
  }

  auto report = validate_template(t, tol);
  if (!report.pass) {
    std::string why;
    for (const auto& p : report.problems) why += (why.empty() ? "" : "; ") + p;
    for (const auto& [k, a] : report.cross_terms) why += "; cross term " + ket_string(k);
    throw Error(ErrorCode::not_a_halo, why);
  }
  return t;
}

/// Searches for a template directly: starts from every main-ancilla and
/// ancilla-ancilla edge (no main-main edges) and runs the discover() pruning
/// loop on the fidelity of the partial state against
///
///     |herald> + sum_t amplitude_t |modes_t>|herald>
///
/// with every ancilla heralded in mode 0. Main vertex i has dimension
/// main_dims[i]. The returned graph has the main vertices first, then the
/// ancillas; pm_count holds the number of contributing matchings.
inline DiscoveryResult discover_halo(const std::vector<int>& main_dims, int ancilla_count,
                                     const std::vector<EmittedTerm>& emitted, const OptimizerConfig& cfg) {
  cfg.validate();
  const int m = static_cast<int>(main_dims.size());
  if (ancilla_count < 2 || ancilla_count % 2 != 0)
    throw Error(ErrorCode::invalid_param, "ancilla count must be even and at least 2");
  if (emitted.empty()) throw Error(ErrorCode::invalid_param, "nothing to emit");
  const int n = m + ancilla_count;
  std::vector<int> dims = main_dims;
  dims.resize(static_cast<std::size_t>(n), 1);
  Graph g = complete_graph(n, dims, [&](VertexId u, VertexId v) { return u >= m || v >= m; });
  if (!cfg.forbidden_edges.empty() || !cfg.forbidden_pairs.empty()) {
    std::vector<Edge> kept;
    for (const auto& e : g.edges()) {
      bool banned = false;
      for (auto [a, b] : cfg.forbidden_pairs) banned |= (a == e.u && b == e.v) || (a == e.v && b == e.u);
      for (auto k : cfg.forbidden_edges) banned |= Edge{k.u, k.v, k.mode_u, k.mode_v}.canonical().key() == e.key();
      if (!banned) kept.push_back(e);
    }
    g = g.with_edges(std::move(kept));
  }

  std::map<Ket, Amplitude> target;
  Ket empty(static_cast<std::size_t>(n), 0);
  std::fill(empty.begin(), empty.begin() + m, absent_mode);
  target[empty] = 1.0;
  for (const auto& t : emitted) {
    if (t.modes.size() != static_cast<std::size_t>(m)) throw Error(ErrorCode::invalid_param, "emitted term length");
    Ket k = empty;
    for (int i = 0; i < m; ++i) {
      const Mode md = t.modes[static_cast<std::size_t>(i)];
      if (md != absent_mode && (md < 0 || md >= main_dims[static_cast<std::size_t>(i)]))
        throw Error(ErrorCode::invalid_param, "emitted mode exceeds main dimension");
      k[static_cast<std::size_t>(i)] = md;
    }
    target[k] = t.amplitude;
  }
  const std::size_t edge_count = g.edge_count();
  auto result = discover_from(g, FidelityObjective(MatchingTable::build(g, m), edge_count, target), cfg);
  result.pm_count = MatchingTable::build(result.graph, m).matching_count();
  return result;
}

/// Replaces every hyperedge by a copy of the template with fresh ancillas.
/// Main vertex i of the template maps to hyperedge vertex i, and its modes
/// are shifted by (hyperedge mode - reference mode). Edges at the first main
/// vertex are scaled by the hyperedge weight. Ancillas are appended after
/// the base vertices, copy by copy; vertex dimensions grow as needed.
/// Edges that land on an existing key are merged by adding weights.
inline Graph expand(const Hypergraph& h, const HaloTemplate& t) {
  if (h.hyperedges().empty()) return h.base();
  const auto m = t.main_count();
  const Graph& base = h.base();
  int n = base.vertex_count();
  std::vector<int> dims = base.dimensions();
  std::vector<Role> roles = base.roles();
  std::map<EdgeKey, double> edges;
  for (const auto& e : base.edges()) edges[e.key()] += e.weight;

  for (const auto& he : h.hyperedges()) {
    if (he.vertices.size() != m || he.modes.size() != m)
      throw Error(ErrorCode::arity_mismatch, "hyperedge has " + std::to_string(he.vertices.size()) +
                                                 " vertices, template expects " + std::to_string(m));
    std::vector<VertexId> map(static_cast<std::size_t>(t.local_vertex_count()));
    std::vector<Mode> shift(static_cast<std::size_t>(t.local_vertex_count()), 0);
    for (std::size_t i = 0; i < m; ++i) {
      map[i] = he.vertices[i];
      shift[i] = he.modes[i] - t.main_modes[i];
    }
    for (int j = 0; j < t.ancilla_count; ++j) {
      map[m + static_cast<std::size_t>(j)] = n++;
      dims.push_back(1);
      roles.push_back(Role::detector);
    }
    for (const auto& e : t.subgraph) {
      Edge out{map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)],
               e.mode_u + shift[static_cast<std::size_t>(e.u)], e.mode_v + shift[static_cast<std::size_t>(e.v)],
               e.weight};
      if (out.mode_u < 0 || out.mode_v < 0) throw Error(ErrorCode::invalid_param, "recoloring gives a negative mode");
      if (e.touches(0)) out.weight *= he.weight;
      out = out.canonical();
      dims[static_cast<std::size_t>(out.u)] = std::max(dims[static_cast<std::size_t>(out.u)], out.mode_u + 1);
      dims[static_cast<std::size_t>(out.v)] = std::max(dims[static_cast<std::size_t>(out.v)], out.mode_v + 1);
      edges[out.key()] += out.weight;
    }
  }
  std::vector<Edge> list;
  for (const auto& [k, w] : edges) list.push_back({k.u, k.v, k.mode_u, k.mode_v, w});
  return Graph(n, std::move(dims), std::move(list), std::move(roles));
}

/// Herald pattern of expand(h, t): the template's pattern once per hyperedge.
inline std::vector<Mode> expanded_heralds(const Hypergraph& h, const HaloTemplate& t) {
  std::vector<Mode> out;
  for (std::size_t i = 0; i < h.hyperedges().size(); ++i)
    out.insert(out.end(), t.herald_modes.begin(), t.herald_modes.end());
  return out;
}

}  // namespace halo
