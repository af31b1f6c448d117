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
 * @file verify.hpp
 * @brief Checks graphs against target states and gate truth tables.
 *
 * Gate graphs mark their incoming photons with Role::input. Fixing the mode
 * of every input (project_inputs) leaves an ordinary post-selected state on
 * the detectors; a gate is verified one computational basis input at a time
 * and post-selected on a single herald pattern for the ancilla detectors.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/state.hpp"
#include "halo/states.hpp"

namespace halo {

/// Default tolerances: exact constructions and freshly optimized graphs.
inline constexpr double exact_tolerance = 1e-9;
inline constexpr double optimized_tolerance = 1e-2;

struct Violation {
  std::vector<Mode> input;  // empty for state verification
  Ket observed;
  Amplitude amplitude;
  Ket expected;
};

struct InputAmplitude {
  std::vector<Mode> input;
  Ket expected;
  Amplitude amplitude;
  /// Share of the heralded output probability outside the expected ket.
  double residual = 0;
};

struct VerificationReport {
  bool pass = false;
  bool zero_state = false;
  double fidelity = 0;
  /// Probability mass of the normalized state on kets outside the target.
  double cross_term_mass = 0;
  std::vector<InputAmplitude> amplitudes;
  std::vector<Mode> herald;
  /// max |c| / min |c| - 1 over the basis inputs of a gate.
  double uniformity = 0;
  std::vector<Violation> violations;
};

/// PASS iff 1 - F <= tol, where the graph's detector state (inputs must be
/// projected first) is compared with the target. On FAIL the violations are
/// the fewest kets, largest deviation from the best multiple of the target
/// first, whose removal would leave at most tol of deviation.
inline VerificationReport verify_state(const Graph& g, const TargetSpec& t, double tol = exact_tolerance) {
  const auto readout = g.detector_vertices();
  if (readout.size() != t.particle_count())
    throw Error(ErrorCode::shape_mismatch, "target has " + std::to_string(t.particle_count()) +
                                               " particles, graph has " + std::to_string(readout.size()) +
                                               " detectors");
  VerificationReport r;
  const StateVector psi = state_from_graph(g);
  const StateVector target = t.state();
  const double norm = psi.norm_squared();
  if (psi.empty() || norm < amplitude_epsilon * amplitude_epsilon) {
    r.zero_state = true;
    for (const auto& [k, a] : target.terms()) r.violations.push_back({{}, k, Amplitude{}, k});
    return r;
  }
  const Amplitude overlap = target.inner(psi) / std::sqrt(norm);
  r.fidelity = std::min(1.0, std::norm(overlap));
  for (const auto& [k, a] : psi.terms())
    if (target.amplitude(k) == Amplitude{}) r.cross_term_mass += std::norm(a) / norm;

  std::set<Ket> kets;
  for (const auto& [k, a] : psi.terms()) kets.insert(k);
  for (const auto& [k, a] : target.terms()) kets.insert(k);
  // The squared deviations from the best fit add up to 1 - F.
  std::vector<std::pair<double, Violation>> found;
  double left = 0;
  for (const auto& k : kets) {
    const Amplitude observed = psi.amplitude(k) / std::sqrt(norm);
    const Amplitude fit = overlap * target.amplitude(k);
    const double dev = std::norm(observed - fit);
    left += dev;
    found.push_back({dev, {{}, k, observed, target.amplitude(k) == Amplitude{} ? Ket{} : k}});
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  r.pass = 1.0 - r.fidelity <= tol;
  for (auto& [d, v] : found) {
    if (r.pass || left <= tol) break;
    r.violations.push_back(std::move(v));
    left -= d;
  }
  if (!r.pass && r.violations.empty() && !found.empty()) r.violations.push_back(found.front().second);
  return r;
}

/// Keeps only the edges whose input-side mode equals the assigned mode of
/// that input; detector-detector edges are untouched and input vertices stay
/// (every contributing matching still covers each of them once).
inline Graph project_inputs(const Graph& g, const std::map<VertexId, Mode>& assignment) {
  for (VertexId v : g.input_vertices()) {
    auto it = assignment.find(v);
    if (it == assignment.end())
      throw Error(ErrorCode::unassigned_input, "input vertex " + std::to_string(v) + " has no mode");
    if (it->second < 0 || it->second >= g.dimension(v))
      throw Error(ErrorCode::unassigned_input, "mode " + std::to_string(it->second) + " out of range for input " +
                                                   std::to_string(v));
  }
  for (const auto& [v, m] : assignment)
    if (v < 0 || v >= g.vertex_count() || g.role(v) != Role::input)
      throw Error(ErrorCode::unassigned_input, "vertex " + std::to_string(v) + " is not an input");
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    bool keep = true;
    if (g.role(e.u) == Role::input) keep &= e.mode_u == assignment.at(e.u);
    if (g.role(e.v) == Role::input) keep &= e.mode_v == assignment.at(e.v);
    if (keep) kept.push_back(e);
  }
  return g.with_edges(std::move(kept));
}

/// Two-qudit gate truth table. `rule` maps a basis input (m, n) to its
/// output; the default is the controlled shift (m, n) -> (m, n + m mod d2).
struct GateSpec {
  int d1 = 2;
  int d2 = 2;
  std::vector<VertexId> logical_inputs;
  std::vector<VertexId> logical_outputs;
  std::vector<VertexId> ancilla_outputs;
  std::function<std::pair<Mode, Mode>(Mode, Mode)> rule;

  std::pair<Mode, Mode> apply(Mode m, Mode n) const {
    if (rule) return rule(m, n);
    return {m, (n + m) % d2};
  }

  /// CNOT(d1, d2) on vertices in1, in2 -> out1, out2 with the given ancillas.
  static GateSpec cnot(int d1, int d2, VertexId in1, VertexId in2, VertexId out1, VertexId out2,
                       std::vector<VertexId> ancillas) {
    if (d1 < 1 || d2 < 1) throw Error(ErrorCode::invalid_param, "gate dimensions must be positive");
    return GateSpec{d1, d2, {in1, in2}, {out1, out2}, std::move(ancillas), {}};
  }
};

/// Checks every basis input (m, n), in order m then n. With the inputs
/// fixed, the detector state read as (outputs, ancillas) and post-selected on
/// the herald pattern must be c |rule(m, n)> |herald>, with the same complex
/// c for all inputs. The herald is the ancilla pattern of the largest term
/// for input (0, 0). Residual heralded mass per input and the spread of c
/// (relative to c for (0, 0)) must both stay within tol.
inline VerificationReport verify_gate(const Graph& g, const GateSpec& spec, double tol = exact_tolerance) {
  if (spec.logical_inputs.size() != 2 || spec.logical_outputs.size() != 2)
    throw Error(ErrorCode::shape_mismatch, "gate needs two inputs and two outputs");
  const auto in = g.input_vertices();
  std::set<VertexId> inputs(in.begin(), in.end());
  std::set<VertexId> wanted(spec.logical_inputs.begin(), spec.logical_inputs.end());
  if (inputs != wanted) throw Error(ErrorCode::shape_mismatch, "graph inputs do not match the gate inputs");
  std::vector<VertexId> readout = spec.logical_outputs;
  readout.insert(readout.end(), spec.ancilla_outputs.begin(), spec.ancilla_outputs.end());
  {
    std::set<VertexId> r(readout.begin(), readout.end());
    auto det = g.detector_vertices();
    if (r.size() != readout.size() || r != std::set<VertexId>(det.begin(), det.end()))
      throw Error(ErrorCode::shape_mismatch, "outputs and ancillas must be exactly the detectors");
  }
  for (int i = 0; i < 2; ++i)
    if (g.dimension(spec.logical_inputs[static_cast<std::size_t>(i)]) < (i == 0 ? spec.d1 : spec.d2))
      throw Error(ErrorCode::shape_mismatch, "input dimension smaller than the gate dimension");

  VerificationReport r;
  std::vector<Amplitude> cs;
  bool have_herald = false;
  for (Mode m = 0; m < spec.d1; ++m)
    for (Mode n = 0; n < spec.d2; ++n) {
      const Graph p = project_inputs(g, {{spec.logical_inputs[0], m}, {spec.logical_inputs[1], n}});
      const StateVector s = detail::matching_state(p, readout);
      if (!have_herald) {
        double best = -1;
        for (const auto& [k, a] : s.terms())
          if (std::abs(a) > best) {
            best = std::abs(a);
            r.herald.assign(k.begin() + 2, k.end());
          }
        if (s.empty()) {
          r.zero_state = true;
          r.herald.assign(spec.ancilla_outputs.size(), 0);
        }
        have_herald = true;
      }
      const auto [om, on] = spec.apply(m, n);
      Ket expected{om, on};
      expected.insert(expected.end(), r.herald.begin(), r.herald.end());
      double heralded = 0;
      for (const auto& [k, a] : s.terms())
        if (std::equal(k.begin() + 2, k.end(), r.herald.begin())) heralded += std::norm(a);
      const Amplitude c = s.amplitude(expected);
      const double residual = heralded > 0 ? 1.0 - std::norm(c) / heralded : 1.0;
      r.amplitudes.push_back({{m, n}, expected, c, residual});
      cs.push_back(c);
      if (residual > tol || c == Amplitude{}) {
        bool any = false;
        for (const auto& [k, a] : s.terms())
          if (k != expected && std::equal(k.begin() + 2, k.end(), r.herald.begin()) &&
              std::norm(a) > tol * std::max(heralded, amplitude_epsilon)) {
            r.violations.push_back({{m, n}, k, a, expected});
            any = true;
          }
        if (!any) r.violations.push_back({{m, n}, {}, Amplitude{}, expected});
      }
    }

  double lo = INFINITY, hi = 0;
  for (const auto& c : cs) {
    lo = std::min(lo, std::abs(c));
    hi = std::max(hi, std::abs(c));
  }
  r.uniformity = lo > 0 ? hi / lo - 1.0 : INFINITY;
  const Amplitude c0 = cs.front();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (c0 == Amplitude{}) break;
    if (std::abs(cs[i] - c0) > tol * std::abs(c0) && r.amplitudes[i].residual <= tol && cs[i] != Amplitude{})
      r.violations.push_back({r.amplitudes[i].input, r.amplitudes[i].expected, cs[i], r.amplitudes[i].expected});
  }
  r.pass = r.violations.empty() && !r.zero_state;
  return r;
}

}  // namespace halo
