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
 * @file graph.hpp
 * @brief Colored, weighted experiment graphs.
 *
 * A vertex is a path to a detector (or, for gates, an incoming photon). An
 * edge is a correlated photon pair: it carries one mode ("color") at each of
 * its endpoints and a real, signed amplitude. Several edges may join the
 * same vertex pair as long as their mode pairs differ.
 *
 * Graphs are immutable values. Edges are stored in canonical form
 * (u < v) and sorted by key, so two graphs with the same edge set compare
 * equal regardless of the order the edges were supplied in.
 */
#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halo/error.hpp"

namespace halo {

using VertexId = int;
using Mode = int;

/// Identity of an edge within a graph: endpoints and endpoint modes, u < v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;
  Mode mode_u = 0;
  Mode mode_v = 0;

  auto operator<=>(const EdgeKey&) const = default;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Mode mode_u = 0;
  Mode mode_v = 0;
  double weight = 1.0;

  EdgeKey key() const { return {u, v, mode_u, mode_v}; }

  /// Same edge with endpoints ordered so that u < v.
  Edge canonical() const {
    if (u <= v) return *this;
    return {v, u, mode_v, mode_u, weight};
  }

  /// Mode this edge assigns to `vertex`, which must be an endpoint.
  Mode mode_at(VertexId vertex) const { return vertex == u ? mode_u : mode_v; }
  VertexId other(VertexId vertex) const { return vertex == u ? v : u; }
  bool touches(VertexId vertex) const { return u == vertex || v == vertex; }

  bool operator==(const Edge&) const = default;
};

enum class Role { detector, input };

class Graph {
 public:
  Graph() = default;

  Graph(int vertex_count, std::vector<int> dimensions, std::vector<Edge> edges = {},
        std::vector<Role> roles = {})
      : vertex_count_(vertex_count),
        dimensions_(std::move(dimensions)),
        roles_(std::move(roles)),
        edges_(std::move(edges)) {
    if (roles_.empty()) roles_.assign(static_cast<std::size_t>(std::max(vertex_count_, 0)), Role::detector);
    for (auto& e : edges_) e = e.canonical();
    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    validate();
  }

  int vertex_count() const { return vertex_count_; }
  const std::vector<int>& dimensions() const { return dimensions_; }
  int dimension(VertexId v) const { return dimensions_.at(static_cast<std::size_t>(v)); }
  const std::vector<Role>& roles() const { return roles_; }
  Role role(VertexId v) const { return roles_.at(static_cast<std::size_t>(v)); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::vector<VertexId> vertices_with_role(Role r) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < vertex_count_; ++v)
      if (roles_[static_cast<std::size_t>(v)] == r) out.push_back(v);
    return out;
  }
  std::vector<VertexId> detector_vertices() const { return vertices_with_role(Role::detector); }
  std::vector<VertexId> input_vertices() const { return vertices_with_role(Role::input); }
  bool has_inputs() const {
    return std::find(roles_.begin(), roles_.end(), Role::input) != roles_.end();
  }

  std::vector<double> weights() const {
    std::vector<double> w;
    w.reserve(edges_.size());
    for (const auto& e : edges_) w.push_back(e.weight);
    return w;
  }

  /// Index of the edge with this key, or npos.
  std::size_t find(const EdgeKey& key) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                               [](const Edge& e, const EdgeKey& k) { return e.key() < k; });
    if (it != edges_.end() && it->key() == key) return static_cast<std::size_t>(it - edges_.begin());
    return npos;
  }

  Graph with_weights(std::span<const double> w) const {
    if (w.size() != edges_.size())
      throw Error(ErrorCode::invalid_param, "weight vector length does not match edge count");
    Graph g = *this;
    for (std::size_t i = 0; i < w.size(); ++i) g.edges_[i].weight = w[i];
    return g;
  }

  Graph with_edges(std::vector<Edge> edges) const {
    return Graph(vertex_count_, dimensions_, std::move(edges), roles_);
  }

  Graph with_roles(std::vector<Role> roles) const {
    return Graph(vertex_count_, dimensions_, edges_, std::move(roles));
  }

  Graph without_edge(std::size_t index) const {
    Graph g = *this;
    g.edges_.erase(g.edges_.begin() + static_cast<std::ptrdiff_t>(index));
    return g;
  }

  Graph scaled(double factor) const {
    Graph g = *this;
    for (auto& e : g.edges_) e.weight *= factor;
    return g;
  }

  bool operator==(const Graph&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void validate() const {
    if (vertex_count_ < 0) throw Error(ErrorCode::invalid_graph, "negative vertex count");
    const auto n = static_cast<std::size_t>(vertex_count_);
    if (dimensions_.size() != n)
      throw Error(ErrorCode::invalid_graph, "dimensions length " + std::to_string(dimensions_.size()) +
                                                " does not match vertex count " + std::to_string(n));
    if (roles_.size() != n) throw Error(ErrorCode::invalid_graph, "roles length does not match vertex count");
    for (int d : dimensions_)
      if (d < 1) throw Error(ErrorCode::invalid_graph, "vertex dimension must be positive");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u < 0 || e.v >= vertex_count_)
        throw Error(ErrorCode::invalid_graph, "edge endpoint out of range");
      if (e.u == e.v) throw Error(ErrorCode::invalid_graph, "self-loop on vertex " + std::to_string(e.u));
      if (e.mode_u < 0 || e.mode_u >= dimension(e.u) || e.mode_v < 0 || e.mode_v >= dimension(e.v))
        throw Error(ErrorCode::invalid_graph, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                                  ") mode exceeds vertex dimension");
      if (role(e.u) == Role::input && role(e.v) == Role::input)
        throw Error(ErrorCode::invalid_graph, "edge joins two input vertices");
      if (i > 0 && edges_[i - 1].key() == e.key())
        throw Error(ErrorCode::invalid_graph, "duplicate edge (" + std::to_string(e.u) + "," +
                                                  std::to_string(e.v) + "," + std::to_string(e.mode_u) +
                                                  "," + std::to_string(e.mode_v) + ")");
    }
  }

  int vertex_count_ = 0;
  std::vector<int> dimensions_;
  std::vector<Role> roles_;
  std::vector<Edge> edges_;
};

/// Every vertex pair with every mode combination, unit weights. Pairs for
/// which `allowed(u, v)` is false are left out.
template <typename PairFilter>
Graph complete_graph(int vertex_count, const std::vector<int>& dimensions, PairFilter&& allowed) {
  if (vertex_count < 2 || vertex_count % 2 != 0)
    throw Error(ErrorCode::invalid_param, "complete graph needs an even vertex count >= 2");
  std::vector<Edge> edges;
  for (VertexId u = 0; u < vertex_count; ++u)
    for (VertexId v = u + 1; v < vertex_count; ++v) {
      if (!allowed(u, v)) continue;
      for (Mode a = 0; a < dimensions.at(static_cast<std::size_t>(u)); ++a)
        for (Mode b = 0; b < dimensions.at(static_cast<std::size_t>(v)); ++b) edges.push_back({u, v, a, b, 1.0});
    }
  return Graph(vertex_count, dimensions, std::move(edges));
}

inline Graph complete_graph(int vertex_count, const std::vector<int>& dimensions) {
  return complete_graph(vertex_count, dimensions, [](VertexId, VertexId) { return true; });
}

}  // namespace halo
