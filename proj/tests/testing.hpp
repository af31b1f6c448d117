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

// Shared fixtures and brute-force oracles for the test binaries.
#pragma once

#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "halo/graph.hpp"
#include "halo/state.hpp"

namespace halo::testing {

#ifndef HALO_ASSETS_DIR
#define HALO_ASSETS_DIR "assets"
#endif

inline std::string asset(const std::string& rel) { return std::string(HALO_ASSETS_DIR) + "/" + rel; }

/// Four vertices, pairing {01,23} in mode 0, {02,13} in mode 1, {03,12} in mode 2.
inline Graph ghz43_graph() {
  return Graph(4, {3, 3, 3, 3},
               {{0, 1, 0, 0, 1.0}, {2, 3, 0, 0, 1.0}, {0, 2, 1, 1, 1.0},
                {1, 3, 1, 1, 1.0}, {0, 3, 2, 2, 1.0}, {1, 2, 2, 2, 1.0}});
}

/// The graph above plus 01 and 23 in mode 3: four wanted terms and the two
/// cross terms 0033 and 3300.
inline Graph ghz44_attempt() {
  auto e = ghz43_graph().edges();
  e.push_back({0, 1, 3, 3, 1.0});
  e.push_back({2, 3, 3, 3, 1.0});
  return Graph(4, {4, 4, 4, 4}, e);
}

/// Random multigraph: even vertex count in [2, max_vertices], up to
/// max_edges distinct colored edges with weights in [-1, 1].
inline Graph random_graph(std::mt19937_64& rng, int max_vertices, int max_edges, int max_dim = 3) {
  std::uniform_int_distribution<int> nv(1, max_vertices / 2);
  const int n = 2 * nv(rng);
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::vector<int> dims(static_cast<std::size_t>(n));
  for (auto& d : dims) d = dim(rng);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, max_edges);
  std::map<EdgeKey, Edge> edges;
  const int want = count(rng);
  for (int tries = 0; static_cast<int>(edges.size()) < want && tries < 20 * want; ++tries) {
    int u = vert(rng), v = vert(rng);
    if (u == v) continue;
    Edge e{u, v, std::uniform_int_distribution<int>(0, dims[static_cast<std::size_t>(u)] - 1)(rng),
           std::uniform_int_distribution<int>(0, dims[static_cast<std::size_t>(v)] - 1)(rng), weight(rng)};
    e = e.canonical();
    edges.emplace(e.key(), e);
  }
  std::vector<Edge> list;
  for (auto& [k, e] : edges) list.push_back(e);
  return Graph(n, dims, list);
}

/// Independent state oracle: every subset of V/2 edges, kept when it covers
/// each vertex exactly once.
inline std::map<Ket, double> subset_oracle(const Graph& g) {
  std::map<Ket, double> out;
  const int n = g.vertex_count();
  const auto m = g.edge_count();
  if (n % 2 != 0 || n == 0) return out;
  const std::size_t k = static_cast<std::size_t>(n / 2);
  std::vector<std::size_t> pick(k);
  // Lexicographic k-subsets of {0..m-1}.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == k) {
      std::vector<int> hits(static_cast<std::size_t>(n), 0);
      Ket ket(static_cast<std::size_t>(n), -1);
      double amp = 1;
      for (auto i : pick) {
        const auto& e = g.edges()[i];
        ++hits[static_cast<std::size_t>(e.u)];
        ++hits[static_cast<std::size_t>(e.v)];
        ket[static_cast<std::size_t>(e.u)] = e.mode_u;
        ket[static_cast<std::size_t>(e.v)] = e.mode_v;
        amp *= e.weight;
      }
      for (int h : hits)
        if (h != 1) return;
      out[ket] += amp;
      return;
    }
    for (std::size_t i = from; i + (k - pos) <= m; ++i) {
      pick[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline double distance(const StateVector& s, const std::map<Ket, double>& oracle) {
  double worst = 0;
  for (const auto& [k, a] : s.terms()) {
    auto it = oracle.find(k);
    worst = std::max(worst, std::abs(a - (it == oracle.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, a] : oracle) worst = std::max(worst, std::abs(s.amplitude(k) - a));
  return worst;
}

}  // namespace halo::testing
