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

// Command line front end. Exit codes: 0 success or PASS, 1 usage, input or
// config error, 2 NoSolution / NotAHalo / verification FAIL.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "halo/constructions.hpp"
#include "halo/export.hpp"
#include "halo/halo.hpp"
#include "halo/io.hpp"
#include "halo/optimize.hpp"
#include "halo/states.hpp"
#include "halo/verify.hpp"

namespace {

using namespace halo;

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_param, "cannot write " + *path);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "not an integer list: '" + s + "'");
    }
  }
  return out;
}

std::vector<std::vector<int>> group_list(const std::string& s) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(int_list(item));
  return out;
}

// "target" is a target JSON object or one of the named families.
TargetSpec target_of(const Json& j) {
  return detail::parsing("target", [&] {
    if (!j.contains("family")) return target_from_json(j);
    const auto family = j.at("family").get<std::string>();
    if (family == "ghz") return ghz(j.at("particles").get<int>(), j.at("dimension").get<int>());
    if (family == "ame43") return ame43();
    if (family == "max_entangled") return max_entangled(j.at("dimension").get<int>());
    throw Error(ErrorCode::parse_error, "unknown target family '" + family + "'");
  });
}

int run_discover(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::optional<std::string>& out) {
  const Json cfg_json = read_json(config_path);
  OptimizerConfig cfg = config_from_json(cfg_json);
  if (seed) cfg.seed = *seed;
  DiscoveryResult r;
  try {
    if (cfg_json.contains("halo")) {
      const Json& h = cfg_json.at("halo");
      auto [dims, ancillas, emitted] = detail::parsing("halo", [&] {
        std::vector<EmittedTerm> em;
        for (const auto& e : h.at("emitted"))
          em.push_back({e.at("modes").get<std::vector<Mode>>(), e.value("amplitude", 1.0)});
        return std::make_tuple(h.at("main_dims").get<std::vector<int>>(), h.at("ancilla_count").get<int>(), em);
      });
      r = discover_halo(dims, ancillas, emitted, cfg);
    } else {
      if (!cfg_json.contains("target")) throw Error(ErrorCode::parse_error, "config has no target");
      TargetSpec t = target_of(cfg_json.at("target"));
      const int ancillas = cfg_json.value("ancillas", 0);
      if (ancillas < 0) throw Error(ErrorCode::invalid_param, "negative ancilla count");
      if (ancillas > 0) t = t.with_heralds(std::vector<Mode>(static_cast<std::size_t>(ancillas), 0));
      r = discover(t, cfg);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_solution) throw;
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (out) {
    emit(*out + ".graph.json", dump(to_json(r.graph)));
    emit(*out + ".result.json", dump(to_json(r)));
  }
  std::cout << dump(to_json(r));
  return r.fidelity >= cfg.prune_threshold_fidelity ? 0 : 2;
}

Json state_json(const StateVector& s) {
  Json kets = Json::array(), amps = Json::array();
  for (const auto& [k, a] : s.terms()) {
    kets.push_back(ket_string(k));
    amps.push_back(detail::amplitude_json(a));
  }
  return Json{{"kets", kets}, {"amplitudes", amps}};
}

Graph load_graph(const std::string& path) { return graph_from_json(read_json(path)); }

int finish_report(const VerificationReport& r, const std::optional<std::string>& out) {
  emit(out, dump(to_json(r)));
  return r.pass ? 0 : 2;
}

VerificationReport verify_construction(const std::string& family, int param, const Construction& c, double tol) {
  if (family == "cnot") {
    std::vector<VertexId> anc;
    for (VertexId v = 4; v < c.graph.vertex_count(); ++v) anc.push_back(v);
    return verify_gate(c.graph, GateSpec::cnot(2, 2 * param, 0, 1, 2, 3, anc), tol);
  }
  TargetSpec t = family == "ghz"     ? ghz(4, param)
                 : family == "ghz63" ? ghz(6 + 2 * param, 3)
                                     : max_entangled(2 * param);
  return verify_state(c.graph, t.with_heralds(c.heralds), tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based design of post-selected linear optics experiments"};
  app.require_subcommand(1);
  std::optional<std::string> out;
  std::string format = "json";
  double tol = exact_tolerance;
  std::optional<std::uint64_t> seed;

  auto* discover_cmd = app.add_subcommand("discover", "optimize and prune a graph for a target");
  std::string config_path;
  discover_cmd->add_option("--config", config_path, "config JSON")->required();
  discover_cmd->add_option("--seed", seed, "overrides the config seed");
  discover_cmd->add_option("--out", out, "output prefix for .graph.json and .result.json");

  auto* state_cmd = app.add_subcommand("state", "post-selected state of a graph");
  std::string graph_path;
  bool normalized = false;
  state_cmd->add_option("graph", graph_path)->required();
  state_cmd->add_flag("--normalize", normalized);
  state_cmd->add_option("--out", out);

  auto* fidelity_cmd = app.add_subcommand("fidelity", "fidelity of a graph with a target");
  std::string target_path;
  fidelity_cmd->add_option("graph", graph_path)->required();
  fidelity_cmd->add_option("target", target_path)->required();
  fidelity_cmd->add_option("--out", out);

  auto* extract_cmd = app.add_subcommand("extract-halo", "cut a HALO template out of a graph");
  std::string main_list, ancilla_list, supports, herald_edges;
  std::optional<std::string> base_path;
  extract_cmd->add_option("graph", graph_path)->required();
  extract_cmd->add_option("--main", main_list, "comma-separated main vertices")->required();
  extract_cmd->add_option("--ancillas", ancilla_list, "comma-separated ancilla vertices")->required();
  extract_cmd->add_option("--base", base_path, "base graph (default: edges not touching an ancilla)");
  extract_cmd->add_option("--supports", supports, "emission supports as main positions, e.g. 0,2;1,3");
  extract_cmd->add_option("--herald-edges", herald_edges,
                          "ancilla pairs joined by a unit mode-0 edge before extraction, e.g. 2,3");
  extract_cmd->add_option("--tol", tol);
  extract_cmd->add_option("--out", out);

  auto* expand_cmd = app.add_subcommand("expand", "replace hyperedges by template copies");
  std::string hyper_path, template_path;
  expand_cmd->add_option("hypergraph", hyper_path)->required();
  expand_cmd->add_option("template", template_path)->required();
  expand_cmd->add_option("--out", out);

  auto* construct_cmd = app.add_subcommand("construct", "build and verify a family member");
  std::string family;
  int param = 0;
  construct_cmd->add_option("family", family, "ghz, ghz63, swap or cnot")->required();
  construct_cmd->add_option("parameter", param, "d, n or k")->required();
  construct_cmd->add_option("--template", template_path)->required();
  construct_cmd->add_option("--tol", tol);
  construct_cmd->add_option("--out", out);

  auto* verify_cmd = app.add_subcommand("verify", "check a graph against a target or a gate");
  std::optional<std::string> verify_target, gate;
  int d1 = 2, d2 = 2;
  std::string inputs = "0,1", outputs = "2,3";
  std::optional<std::string> ancillas;
  verify_cmd->add_option("graph", graph_path)->required();
  verify_cmd->add_option("--target", verify_target, "target JSON");
  verify_cmd->add_option("--gate", gate, "gate name (cnot)");
  verify_cmd->add_option("--d1", d1);
  verify_cmd->add_option("--d2", d2);
  verify_cmd->add_option("--inputs", inputs);
  verify_cmd->add_option("--outputs", outputs);
  verify_cmd->add_option("--ancillas", ancillas, "default: every other detector");
  verify_cmd->add_option("--tol", tol);
  verify_cmd->add_option("--out", out);

  auto* export_cmd = app.add_subcommand("export", "render a graph or hypergraph");
  export_cmd->add_option("input", graph_path, "graph or hypergraph JSON")->required();
  export_cmd->add_option("--format", format, "dot, svg or json");
  export_cmd->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*discover_cmd) return run_discover(config_path, seed, out);

    if (*state_cmd) {
      StateVector s = state_from_graph(load_graph(graph_path));
      if (normalized) s = normalize(s);
      emit(out, dump(state_json(s)));
      return 0;
    }

    if (*fidelity_cmd) {
      const double f = fidelity(load_graph(graph_path), target_from_json(read_json(target_path)));
      emit(out, dump(Json{{"fidelity", f}}));
      return 0;
    }

    if (*extract_cmd) {
      Graph g = load_graph(graph_path);
      const auto main = int_list(main_list), anc = int_list(ancilla_list);
      if (!herald_edges.empty()) {
        auto edges = g.edges();
        for (const auto& p : group_list(herald_edges)) {
          if (p.size() != 2) throw Error(ErrorCode::parse_error, "herald edge needs two ancillas");
          edges.push_back({p[0], p[1], 0, 0, 1.0});
        }
        g = g.with_edges(std::move(edges));
      }
      Graph base;
      if (base_path) {
        base = load_graph(*base_path);
      } else {
        // Edges away from the ancillas; trailing ancillas are dropped.
        const auto is_ancilla = [&](VertexId v) { return std::find(anc.begin(), anc.end(), v) != anc.end(); };
        int n = g.vertex_count();
        while (n > 0 && is_ancilla(n - 1)) --n;
        std::vector<Edge> kept;
        for (const auto& e : g.edges())
          if (!is_ancilla(e.u) && !is_ancilla(e.v)) kept.push_back(e);
        std::vector<int> dims(g.dimensions().begin(), g.dimensions().begin() + n);
        std::vector<Role> roles(g.roles().begin(), g.roles().begin() + n);
        base = Graph(n, dims, std::move(kept), roles);
      }
      HaloTemplate t;
      try {
        t = extract_halo(g, main, anc, base, group_list(supports), tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::not_a_halo) throw;
        std::cerr << e.what() << "\n";
        return 2;
      }
      emit(out, dump(to_json(t)));
      return 0;
    }

    if (*expand_cmd) {
      const Hypergraph h = hypergraph_from_json(read_json(hyper_path));
      const HaloTemplate t = load_template(template_path);
      emit(out, dump(to_json(expand(h, t))));
      return 0;
    }

    if (*construct_cmd) {
      const HaloTemplate t = load_template(template_path);
      Construction c;
      if (family == "ghz")
        c = construct_ghz(param, t);
      else if (family == "ghz63")
        c = construct_ghz_family_63(param, t);
      else if (family == "swap")
        c = construct_swapping(param, t);
      else if (family == "cnot")
        c = construct_cnot(param, t);
      else
        throw Error(ErrorCode::invalid_param, "unknown family '" + family + "'");
      const auto report = verify_construction(family, param, c, tol);
      Json j = to_json(c.graph);
      j["hypergraph"] = to_json(c.hypergraph);
      j["report"] = to_json(report);
      emit(out, dump(j));
      return report.pass ? 0 : 2;
    }

    if (*verify_cmd) {
      const Graph g = load_graph(graph_path);
      if (verify_target) return finish_report(verify_state(g, target_from_json(read_json(*verify_target)), tol), out);
      if (!gate) throw Error(ErrorCode::invalid_param, "verify needs --target or --gate");
      if (*gate != "cnot") throw Error(ErrorCode::invalid_param, "unknown gate '" + *gate + "'");
      const auto in = int_list(inputs), o = int_list(outputs);
      if (in.size() != 2 || o.size() != 2) throw Error(ErrorCode::invalid_param, "a gate has two inputs and two outputs");
      std::vector<VertexId> anc;
      if (ancillas) {
        anc = int_list(*ancillas);
      } else {
        for (VertexId v : g.detector_vertices())
          if (v != o[0] && v != o[1]) anc.push_back(v);
      }
      return finish_report(verify_gate(g, GateSpec::cnot(d1, d2, in[0], in[1], o[0], o[1], anc), tol), out);
    }

    if (*export_cmd) {
      if (format != "dot" && format != "svg" && format != "json")
        throw Error(ErrorCode::invalid_param, "unknown format '" + format + "'");
      const Json j = read_json(graph_path);
      if (j.contains("hyperedges")) {
        const Hypergraph h = hypergraph_from_json(j);
        emit(out, format == "dot" ? to_dot(h) : format == "svg" ? to_svg(h) : dump(to_json(h)));
      } else {
        const Graph g = graph_from_json(j);
        emit(out, format == "dot" ? to_dot(g) : format == "svg" ? to_svg(g) : dump(to_json(g)));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::no_solution || e.code() == ErrorCode::not_a_halo ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
