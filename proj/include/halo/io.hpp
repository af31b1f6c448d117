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
 * @file io.hpp
 * @brief JSON interchange for graphs, targets, configs, templates and reports.
 *
 * Objects keep their keys in insertion order so files are stable under
 * repeated writes. Doubles are printed in shortest round-trip form.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/halo.hpp"
#include "halo/optimize.hpp"
#include "halo/states.hpp"
#include "halo/verify.hpp"

namespace halo {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, what + ": " + e.what());
  }
}

inline Json edge_rows(const std::vector<Edge>& edges) {
  Json rows = Json::array();
  for (const auto& e : edges) rows.push_back({e.u, e.v, e.mode_u, e.mode_v, e.weight});
  return rows;
}

inline std::vector<Edge> parse_edges(const Json& rows) {
  std::vector<Edge> out;
  for (const auto& r : rows) {
    if (!r.is_array() || r.size() != 5) throw Error(ErrorCode::parse_error, "edge must be [u, v, mode_u, mode_v, weight]");
    out.push_back({r[0].get<VertexId>(), r[1].get<VertexId>(), r[2].get<Mode>(), r[3].get<Mode>(), r[4].get<double>()});
  }
  return out;
}

inline Json amplitude_json(Amplitude a) {
  if (a.imag() == 0) return a.real();
  return Json::array({a.real(), a.imag()});
}

inline Amplitude parse_amplitude(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::parse_error, "amplitude must be a number or [re, im]");
}

}  // namespace detail

inline std::string role_name(Role r) { return r == Role::input ? "input" : "detector"; }

inline Json to_json(const Graph& g) {
  Json roles = Json::array();
  for (Role r : g.roles()) roles.push_back(role_name(r));
  return Json{{"vertex_count", g.vertex_count()},
              {"dimensions", g.dimensions()},
              {"roles", roles},
              {"edges", detail::edge_rows(g.edges())}};
}

inline Graph graph_from_json(const Json& j) {
  return detail::parsing("graph", [&] {
    std::vector<Role> roles;
    if (j.contains("roles"))
      for (const auto& r : j.at("roles")) {
        const auto s = r.get<std::string>();
        if (s == "input")
          roles.push_back(Role::input);
        else if (s == "detector")
          roles.push_back(Role::detector);
        else
          throw Error(ErrorCode::parse_error, "unknown role '" + s + "'");
      }
    return Graph(j.at("vertex_count").get<int>(), j.at("dimensions").get<std::vector<int>>(),
                 detail::parse_edges(j.at("edges")), std::move(roles));
  });
}

inline Json to_json(const TargetSpec& t) {
  Json kets = Json::array(), amps = Json::array();
  for (const auto& term : t.terms()) {
    kets.push_back(ket_string(term.ket));
    amps.push_back(detail::amplitude_json(term.amplitude));
  }
  return Json{{"kets", kets}, {"amplitudes", amps}, {"dimensions", t.dimensions()}};
}

inline TargetSpec target_from_json(const Json& j) {
  return detail::parsing("target", [&] {
    std::vector<Amplitude> amps;
    for (const auto& a : j.at("amplitudes")) amps.push_back(detail::parse_amplitude(a));
    std::vector<int> dims;
    if (j.contains("dimensions")) dims = j.at("dimensions").get<std::vector<int>>();
    return parse_target(j.at("kets").get<std::vector<std::string>>(), amps, std::move(dims));
  });
}

inline Json to_json(const OptimizerConfig& c) {
  Json pairs = Json::array(), edges = Json::array();
  for (auto [a, b] : c.forbidden_pairs) pairs.push_back({a, b});
  for (const auto& k : c.forbidden_edges) edges.push_back({k.u, k.v, k.mode_u, k.mode_v});
  return Json{{"restarts", c.restarts},
              {"max_iters", c.max_iters},
              {"polish_iters", c.polish_iters},
              {"learning_rate", c.learning_rate},
              {"learning_rate_decay", c.learning_rate_decay},
              {"init_range", {c.init_low, c.init_high}},
              {"prune_threshold_fidelity", c.prune_threshold_fidelity},
              {"seed", c.seed},
              {"forbidden_pairs", pairs},
              {"forbidden_edges", edges},
              {"input_vertices", c.input_vertices},
              {"threads", c.threads}};
}

/// Missing keys keep their defaults; the result is validated.
inline OptimizerConfig config_from_json(const Json& j) {
  return detail::parsing("config", [&] {
    OptimizerConfig c;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("restarts", c.restarts);
    get("max_iters", c.max_iters);
    get("polish_iters", c.polish_iters);
    get("learning_rate", c.learning_rate);
    get("learning_rate_decay", c.learning_rate_decay);
    get("prune_threshold_fidelity", c.prune_threshold_fidelity);
    get("seed", c.seed);
    get("input_vertices", c.input_vertices);
    get("threads", c.threads);
    if (j.contains("init_range")) {
      const auto r = j.at("init_range").get<std::vector<double>>();
      if (r.size() != 2) throw Error(ErrorCode::parse_error, "init_range must be [low, high]");
      c.init_low = r[0];
      c.init_high = r[1];
    }
    if (j.contains("forbidden_pairs"))
      for (const auto& p : j.at("forbidden_pairs")) {
        const auto v = p.get<std::vector<VertexId>>();
        if (v.size() != 2) throw Error(ErrorCode::parse_error, "forbidden pair must have two vertices");
        c.forbidden_pairs.emplace_back(v[0], v[1]);
      }
    if (j.contains("forbidden_edges"))
      for (const auto& p : j.at("forbidden_edges")) {
        const auto v = p.get<std::vector<int>>();
        if (v.size() != 4) throw Error(ErrorCode::parse_error, "forbidden edge must be [u, v, mode_u, mode_v]");
        c.forbidden_edges.push_back({v[0], v[1], v[2], v[3]});
      }
    c.validate();
    return c;
  });
}

inline Json to_json(const DiscoveryResult& r) {
  return Json{{"fidelity", r.fidelity}, {"pm_count", r.pm_count}, {"edges", r.graph.edge_count()}, {"seed", r.seed}};
}

inline Json to_json(const HaloTemplate& t) {
  Json emitted = Json::array();
  for (const auto& e : t.emitted) emitted.push_back({{"modes", e.modes}, {"amplitude", e.amplitude}});
  Json j{{"main", t.main},
         {"main_modes", t.main_modes},
         {"ancilla_count", t.ancilla_count},
         {"herald_modes", t.herald_modes},
         {"subgraph", detail::edge_rows(t.subgraph)},
         {"amplitude_degree", t.amplitude_degree},
         {"emitted", emitted}};
  if (t.base) j["base"] = to_json(*t.base);
  return j;
}

/// Reads a template and checks it with validate_template; a template that
/// does not validate is reported as NotAHalo.
inline HaloTemplate template_from_json(const Json& j, double tol = 1e-9) {
  HaloTemplate t = detail::parsing("template", [&] {
    HaloTemplate t;
    t.main = j.at("main").get<std::vector<VertexId>>();
    t.main_modes = j.at("main_modes").get<std::vector<Mode>>();
    t.ancilla_count = j.at("ancilla_count").get<int>();
    t.herald_modes = j.at("herald_modes").get<std::vector<Mode>>();
    t.subgraph = detail::parse_edges(j.at("subgraph"));
    t.amplitude_degree = j.at("amplitude_degree").get<int>();
    if (t.main.size() != t.main_modes.size())
      throw Error(ErrorCode::parse_error, "main and main_modes differ in length");
    if (t.herald_modes.size() != static_cast<std::size_t>(t.ancilla_count))
      throw Error(ErrorCode::parse_error, "herald_modes must have one mode per ancilla");
    if (j.contains("emitted"))
      for (const auto& e : j.at("emitted"))
        t.emitted.push_back({e.at("modes").get<std::vector<Mode>>(), e.at("amplitude").get<double>()});
    else
      t.emitted.push_back({t.main_modes, 1.0});
    if (j.contains("base")) t.base = graph_from_json(j.at("base"));
    return t;
  });
  const auto report = validate_template(t, tol);
  if (!report.pass) {
    std::string msg = "template does not validate";
    for (const auto& p : report.problems) msg += "; " + p;
    throw Error(ErrorCode::not_a_halo, msg);
  }
  return t;
}

inline Json to_json(const Hypergraph& h) {
  Json hs = Json::array();
  for (const auto& e : h.hyperedges())
    hs.push_back({{"vertices", e.vertices}, {"modes", e.modes}, {"weight", e.weight}});
  return Json{{"base", to_json(h.base())}, {"hyperedges", hs}};
}

inline Hypergraph hypergraph_from_json(const Json& j) {
  return detail::parsing("hypergraph", [&] {
    std::vector<Hyperedge> hs;
    for (const auto& e : j.at("hyperedges"))
      hs.push_back({e.at("vertices").get<std::vector<VertexId>>(), e.at("modes").get<std::vector<Mode>>(),
                    e.contains("weight") ? e.at("weight").get<double>() : 1.0});
    return Hypergraph(graph_from_json(j.at("base")), std::move(hs));
  });
}

inline Json to_json(const VerificationReport& r) {
  Json amps = Json::array(), viol = Json::array();
  for (const auto& a : r.amplitudes)
    amps.push_back({{"input", a.input},
                    {"expected", ket_string(a.expected)},
                    {"amplitude", {a.amplitude.real(), a.amplitude.imag()}},
                    {"residual", a.residual}});
  for (const auto& v : r.violations)
    viol.push_back({{"input", v.input},
                    {"observed", ket_string(v.observed)},
                    {"amplitude", {v.amplitude.real(), v.amplitude.imag()}},
                    {"expected", ket_string(v.expected)}});
  Json j{{"status", r.pass ? "PASS" : "FAIL"}};
  if (r.amplitudes.empty()) {
    j["fidelity"] = r.fidelity;
    j["cross_term_mass"] = r.cross_term_mass;
  } else {
    j["herald"] = r.herald;
    j["uniformity"] = std::isfinite(r.uniformity) ? Json(r.uniformity) : Json(nullptr);
    j["amplitudes"] = amps;
  }
  j["zero_state"] = r.zero_state;
  j["violations"] = viol;
  return j;
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
}

/// Two-space indentation and a trailing newline.
inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_param, "cannot write " + path);
  out << j.dump(2) << '\n';
}

/// Loads a template asset; a missing file is MissingTemplate.
inline HaloTemplate load_template(const std::string& path, double tol = 1e-9) {
  std::ifstream probe(path);
  if (!probe) throw Error(ErrorCode::missing_template, "no template at " + path);
  return template_from_json(read_json(path), tol);
}

}  // namespace halo
