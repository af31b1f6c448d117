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

#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "halo/graph.hpp"

namespace halo {

/// Indices into Graph::edges(), ascending (which is also ascending key order).
struct PerfectMatching {
  std::vector<std::size_t> edges;

  bool operator==(const PerfectMatching&) const = default;
};

namespace detail {

// Incidence lists holding, for each vertex x, the edges (x, v) with v > x in
// key order. Picking the lowest uncovered vertex means its partner is always
// larger, so these are the only candidates.
inline std::vector<std::vector<std::size_t>> forward_incidence(const Graph& g) {
  std::vector<std::vector<std::size_t>> inc(static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t i = 0; i < g.edge_count(); ++i) inc[static_cast<std::size_t>(g.edges()[i].u)].push_back(i);
  return inc;
}

template <typename Visit>
void visit_matchings(const Graph& g, const std::vector<std::vector<std::size_t>>& inc,
                     std::vector<char>& covered, std::vector<std::size_t>& chosen, VertexId from,
                     Visit& visit) {
  const VertexId n = g.vertex_count();
  while (from < n && covered[static_cast<std::size_t>(from)]) ++from;
  if (from == n) {
    visit(chosen);
    return;
  }
  covered[static_cast<std::size_t>(from)] = 1;
  for (std::size_t idx : inc[static_cast<std::size_t>(from)]) {
    const VertexId partner = g.edges()[idx].v;
    if (covered[static_cast<std::size_t>(partner)]) continue;
    covered[static_cast<std::size_t>(partner)] = 1;
    chosen.push_back(idx);
    visit_matchings(g, inc, covered, chosen, from + 1, visit);
    chosen.pop_back();
    covered[static_cast<std::size_t>(partner)] = 0;
  }
  covered[static_cast<std::size_t>(from)] = 0;
}

}  // namespace detail

/// Calls `visit(const std::vector<std::size_t>& edge_indices)` once per perfect
/// matching, in lexicographic order of the matchings' sorted edge keys.
template <typename Visit>
void for_each_perfect_matching(const Graph& g, Visit&& visit) {
  if (g.vertex_count() % 2 != 0) return;
  auto inc = detail::forward_incidence(g);
  std::vector<char> covered(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(g.vertex_count() / 2));
  detail::visit_matchings(g, inc, covered, chosen, 0, visit);
}

inline std::vector<PerfectMatching> enumerate_perfect_matchings(const Graph& g) {
  std::vector<PerfectMatching> out;
  for_each_perfect_matching(g, [&](const std::vector<std::size_t>& pm) { out.push_back({pm}); });
  return out;
}

inline std::size_t count_perfect_matchings(const Graph& g) {
  std::size_t n = 0;
  for_each_perfect_matching(g, [&](const std::vector<std::size_t>&) { ++n; });
  return n;
}

/// Modes a matching assigns to every vertex of the graph.
inline std::vector<Mode> matching_modes(const Graph& g, const std::vector<std::size_t>& pm) {
  std::vector<Mode> modes(static_cast<std::size_t>(g.vertex_count()), 0);
  for (std::size_t idx : pm) {
    const Edge& e = g.edges()[idx];
    modes[static_cast<std::size_t>(e.u)] = e.mode_u;
    modes[static_cast<std::size_t>(e.v)] = e.mode_v;
  }
  return modes;
}

namespace detail {

template <typename Visit>
void visit_covering(const Graph& g, VertexId optional_below, const std::vector<std::vector<std::size_t>>& inc,
                    std::vector<char>& covered, std::vector<std::size_t>& chosen, VertexId from, Visit& visit) {
  const VertexId n = g.vertex_count();
  while (from < n && covered[static_cast<std::size_t>(from)]) ++from;
  if (from == n) {
    visit(chosen);
    return;
  }
  covered[static_cast<std::size_t>(from)] = 1;
  if (from < optional_below) visit_covering(g, optional_below, inc, covered, chosen, from + 1, visit);
  for (std::size_t idx : inc[static_cast<std::size_t>(from)]) {
    const VertexId partner = g.edges()[idx].v;
    if (covered[static_cast<std::size_t>(partner)]) continue;
    covered[static_cast<std::size_t>(partner)] = 1;
    chosen.push_back(idx);
    visit_covering(g, optional_below, inc, covered, chosen, from + 1, visit);
    chosen.pop_back();
    covered[static_cast<std::size_t>(partner)] = 0;
  }
  covered[static_cast<std::size_t>(from)] = 0;
}

}  // namespace detail

/// Marks a vertex left uncovered by a (non-perfect) matching.
inline constexpr Mode absent_mode = -1;

/// Calls `visit(edge_indices)` for every matching that covers all vertices
/// >= optional_below; vertices below it may stay uncovered. With
/// optional_below = 0 these are exactly the perfect matchings.
template <typename Visit>
void for_each_covering_matching(const Graph& g, VertexId optional_below, Visit&& visit) {
  auto inc = detail::forward_incidence(g);
  std::vector<char> covered(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<std::size_t> chosen;
  detail::visit_covering(g, optional_below, inc, covered, chosen, 0, visit);
}

/// Flattened matching structure of one topology. Amplitudes for any weight
/// vector follow from products over each row of `edges`; the weights
/// themselves are not stored, so one table serves a whole optimization run.
struct MatchingTable {
  std::vector<std::uint32_t> offsets{0};  // row m is edges[offsets[m], offsets[m+1])
  std::vector<std::uint32_t> edges;
  std::vector<std::uint32_t> ket_of;     // ket index per matching
  std::vector<std::vector<Mode>> kets;   // full-vertex kets, ascending

  std::size_t matching_count() const { return ket_of.size(); }

  /// Perfect matchings of `g`, or with optional_below > 0 every matching
  /// covering the vertices from optional_below on (uncovered vertices read
  /// absent_mode).
  static MatchingTable build(const Graph& g, VertexId optional_below = 0) {
    MatchingTable t;
    std::map<std::vector<Mode>, std::uint32_t> index;
    std::vector<std::vector<Mode>> raw;
    auto add = [&](const std::vector<std::size_t>& pm) {
      std::vector<Mode> modes(static_cast<std::size_t>(g.vertex_count()), absent_mode);
      for (std::size_t idx : pm) {
        t.edges.push_back(static_cast<std::uint32_t>(idx));
        const Edge& e = g.edges()[idx];
        modes[static_cast<std::size_t>(e.u)] = e.mode_u;
        modes[static_cast<std::size_t>(e.v)] = e.mode_v;
      }
      t.offsets.push_back(static_cast<std::uint32_t>(t.edges.size()));
      raw.push_back(std::move(modes));
    };
    if (optional_below > 0)
      for_each_covering_matching(g, optional_below, add);
    else
      for_each_perfect_matching(g, add);
    for (const auto& k : raw) index.emplace(k, 0);
    std::uint32_t next = 0;
    for (auto& [k, id] : index) {
      id = next++;
      t.kets.push_back(k);
    }
    t.ket_of.reserve(raw.size());
    for (const auto& k : raw) t.ket_of.push_back(index.at(k));
    return t;
  }

  /// Table for the same graph with edge `removed` deleted: drops matchings
  /// that used it and renumbers later edges. Kets are kept (some may become
  /// unreachable), which is harmless for amplitude sums.
  MatchingTable without_edge(std::size_t removed) const {
    MatchingTable t;
    t.kets = kets;
    const auto r = static_cast<std::uint32_t>(removed);
    for (std::size_t m = 0; m < matching_count(); ++m) {
      const auto b = edges.begin() + offsets[m], e = edges.begin() + offsets[m + 1];
      if (std::find(b, e, r) != e) continue;
      for (auto it = b; it != e; ++it) t.edges.push_back(*it > r ? *it - 1 : *it);
      t.offsets.push_back(static_cast<std::uint32_t>(t.edges.size()));
      t.ket_of.push_back(ket_of[m]);
    }
    return t;
  }

  /// Unnormalized amplitude per ket for the given weights.
  std::vector<double> amplitudes(std::span<const double> w) const {
    std::vector<double> amp(kets.size(), 0.0);
    for (std::size_t m = 0; m < matching_count(); ++m) {
      double p = 1.0;
      for (std::uint32_t j = offsets[m]; j < offsets[m + 1]; ++j) p *= w[edges[j]];
      amp[ket_of[m]] += p;
    }
    return amp;
  }
};

}  // namespace halo
