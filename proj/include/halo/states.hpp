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
 * @file states.hpp
 * @brief Target states: GHZ families, Bell pairs, AME(4,3), explicit ket lists.
 *
 * A TargetSpec is always normalized and never holds the same ket twice.
 * Particles are addressed by position; a particle of dimension 1 is an
 * ancilla whose mode is fixed to 0.
 */
#pragma once

#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "halo/error.hpp"
#include "halo/state.hpp"

namespace halo {

class TargetSpec {
 public:
  struct Term {
    Ket ket;
    Amplitude amplitude;
  };

  TargetSpec() = default;

  TargetSpec(std::vector<Term> terms, std::vector<int> dimensions)
      : terms_(std::move(terms)), dimensions_(std::move(dimensions)) {
    if (terms_.empty()) throw Error(ErrorCode::invalid_param, "target has no kets");
    std::set<Ket> seen;
    double norm = 0;
    for (const auto& t : terms_) {
      if (t.ket.size() != dimensions_.size())
        throw Error(ErrorCode::parse_error, "ket '" + ket_string(t.ket) + "' length does not match dimensions");
      for (std::size_t i = 0; i < t.ket.size(); ++i)
        if (t.ket[i] < 0 || t.ket[i] >= dimensions_[i])
          throw Error(ErrorCode::parse_error, "ket '" + ket_string(t.ket) + "' mode exceeds dimension of particle " +
                                                  std::to_string(i));
      if (!seen.insert(t.ket).second) throw Error(ErrorCode::duplicate_ket, ket_string(t.ket));
      norm += std::norm(t.amplitude);
    }
    norm = std::sqrt(norm);
    if (norm < amplitude_epsilon) throw Error(ErrorCode::zero_state, "target amplitudes have zero norm");
    for (auto& t : terms_) t.amplitude /= norm;
  }

  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<int>& dimensions() const { return dimensions_; }
  std::size_t particle_count() const { return dimensions_.size(); }

  StateVector state() const {
    StateVector::Terms t;
    for (const auto& term : terms_) t.emplace(term.ket, term.amplitude);
    return StateVector(std::move(t), true);
  }

  /// This state tensored with ancillas fixed in `herald_modes`, each of
  /// dimension max(1, mode + 1).
  TargetSpec with_heralds(const std::vector<Mode>& herald_modes) const {
    std::vector<Term> t = terms_;
    std::vector<int> dims = dimensions_;
    for (Mode m : herald_modes) dims.push_back(m + 1);
    for (auto& term : t) term.ket.insert(term.ket.end(), herald_modes.begin(), herald_modes.end());
    return TargetSpec(std::move(t), std::move(dims));
  }

 private:
  std::vector<Term> terms_;
  std::vector<int> dimensions_;
};

/// sum_{i<d} |i...i> / sqrt(d) on n particles.
inline TargetSpec ghz(int particles, int dimension) {
  if (particles < 2) throw Error(ErrorCode::invalid_param, "GHZ state needs at least 2 particles");
  if (dimension < 2) throw Error(ErrorCode::invalid_param, "GHZ state needs dimension at least 2");
  std::vector<TargetSpec::Term> terms;
  for (Mode i = 0; i < dimension; ++i) terms.push_back({Ket(static_cast<std::size_t>(particles), i), 1.0});
  return TargetSpec(std::move(terms), std::vector<int>(static_cast<std::size_t>(particles), dimension));
}

/// GHZ state times `ancillas` trailing particles fixed in mode 0.
inline TargetSpec ghz_with_ancillas(int particles, int dimension, int ancillas) {
  if (ancillas < 0) throw Error(ErrorCode::invalid_param, "negative ancilla count");
  return ghz(particles, dimension).with_heralds(std::vector<Mode>(static_cast<std::size_t>(ancillas), 0));
}

/// (1/3) sum_{i,j<3} |i, j, i+j, i+2j> (mod 3): every 1- and 2-particle
/// marginal is maximally mixed.
inline TargetSpec ame43() {
  std::vector<TargetSpec::Term> terms;
  for (Mode i = 0; i < 3; ++i)
    for (Mode j = 0; j < 3; ++j) terms.push_back({{i, j, (i + j) % 3, (i + 2 * j) % 3}, 1.0});
  return TargetSpec(std::move(terms), {3, 3, 3, 3});
}

/// Maximally entangled two-particle state of dimension d, sum_i |ii>.
inline TargetSpec max_entangled(int dimension) { return ghz(2, dimension); }

/// Kets given as digit strings. Missing dimensions are inferred from the
/// largest digit at each position.
inline TargetSpec parse_target(const std::vector<std::string>& kets, const std::vector<Amplitude>& amplitudes,
                               std::vector<int> dimensions = {}) {
  if (kets.empty()) throw Error(ErrorCode::parse_error, "no kets given");
  if (kets.size() != amplitudes.size())
    throw Error(ErrorCode::parse_error, std::to_string(kets.size()) + " kets but " +
                                            std::to_string(amplitudes.size()) + " amplitudes");
  const std::size_t n = kets.front().size();
  std::vector<TargetSpec::Term> terms;
  for (std::size_t k = 0; k < kets.size(); ++k) {
    if (kets[k].size() != n) throw Error(ErrorCode::parse_error, "kets have different lengths");
    Ket ket;
    for (char c : kets[k]) {
      if (c < '0' || c > '9') throw Error(ErrorCode::parse_error, "ket '" + kets[k] + "' has a non-digit");
      ket.push_back(c - '0');
    }
    terms.push_back({std::move(ket), amplitudes[k]});
  }
  if (dimensions.empty()) {
    dimensions.assign(n, 1);
    for (const auto& t : terms)
      for (std::size_t i = 0; i < n; ++i) dimensions[i] = std::max(dimensions[i], t.ket[i] + 1);
  }
  return TargetSpec(std::move(terms), std::move(dimensions));
}

inline TargetSpec parse_target(const std::vector<std::string>& kets, const std::vector<double>& amplitudes,
                               std::vector<int> dimensions = {}) {
  return parse_target(kets, std::vector<Amplitude>(amplitudes.begin(), amplitudes.end()), std::move(dimensions));
}

}  // namespace halo
