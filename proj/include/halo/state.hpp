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
 * @file state.hpp
 * @brief Post-selected states of experiment graphs.
 *
 * Conditioning on exactly one photon per detector keeps only the events in
 * which the firing pair sources form a perfect matching of the graph. Each
 * matching contributes the product of its edge weights to the ket that reads
 * off the mode of every vertex; matchings landing on the same ket add up,
 * which is where constructive and destructive interference come from. Only
 * this first-order term is modelled.
 */
#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/matching.hpp"

namespace halo {

using Ket = std::vector<Mode>;
using Amplitude = std::complex<double>;

/// Amplitudes with modulus below this are treated as exactly zero.
inline constexpr double amplitude_epsilon = 1e-12;

/// Digits for modes < 10, otherwise comma separated.
inline std::string ket_string(const Ket& ket) {
  bool small = true;
  for (Mode m : ket) small &= (m >= 0 && m < 10);
  std::string s;
  for (std::size_t i = 0; i < ket.size(); ++i) {
    if (small) {
      s += static_cast<char>('0' + ket[i]);
    } else {
      if (i) s += ',';
      s += ket[i] < 0 ? std::string("-") : std::to_string(ket[i]);
    }
  }
  return s;
}

class StateVector {
 public:
  using Terms = std::map<Ket, Amplitude>;

  StateVector() = default;
  explicit StateVector(Terms terms, bool normalized = false) : terms_(std::move(terms)), normalized_(normalized) {
    prune();
  }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  bool normalized() const { return normalized_; }

  Amplitude amplitude(const Ket& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Amplitude{} : it->second;
  }

  double norm_squared() const {
    double n = 0;
    for (const auto& [k, a] : terms_) n += std::norm(a);
    return n;
  }

  /// <this|other>
  Amplitude inner(const StateVector& other) const {
    Amplitude s{};
    for (const auto& [k, a] : terms_) s += std::conj(a) * other.amplitude(k);
    return s;
  }

  bool operator==(const StateVector&) const = default;

 private:
  void prune() {
    std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < amplitude_epsilon; });
  }

  Terms terms_;
  bool normalized_ = false;
};

/// Unit 2-norm copy with phases preserved. Throws ZeroState when nothing
/// survives pruning.
inline StateVector normalize(const StateVector& s) {
  const double n = std::sqrt(s.norm_squared());
  if (s.empty() || n < amplitude_epsilon) throw Error(ErrorCode::zero_state, "cannot normalize the zero state");
  StateVector::Terms t;
  for (const auto& [k, a] : s.terms()) t.emplace(k, a / n);
  return StateVector(std::move(t), true);
}

namespace detail {

inline StateVector matching_state(const Graph& g, const std::vector<VertexId>& readout) {
  StateVector::Terms terms;
  for_each_perfect_matching(g, [&](const std::vector<std::size_t>& pm) {
    double amp = 1.0;
    for (std::size_t idx : pm) amp *= g.edges()[idx].weight;
    const auto modes = matching_modes(g, pm);
    Ket ket;
    ket.reserve(readout.size());
    for (VertexId v : readout) ket.push_back(modes[static_cast<std::size_t>(v)]);
    terms[ket] += amp;
  });
  return StateVector(std::move(terms));
}

inline std::vector<VertexId> all_vertices(const Graph& g) {
  std::vector<VertexId> v(static_cast<std::size_t>(g.vertex_count()));
  for (VertexId i = 0; i < g.vertex_count(); ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace detail

/// Post-selected, unnormalized state read off the detector vertices in
/// ascending order. Input vertices, if any, must still be covered by every
/// contributing matching but do not appear in the ket; use project_inputs
/// first to fix their modes. Odd vertex counts give the zero state.
inline StateVector state_from_graph(const Graph& g) {
  return detail::matching_state(g, g.detector_vertices());
}

/// Like state_from_graph but every vertex, input or not, appears in the ket.
/// For a gate graph this is its channel (Choi) state.
inline StateVector full_state(const Graph& g) { return detail::matching_state(g, detail::all_vertices(g)); }

}  // namespace halo
