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
 * @file export.hpp
 * @brief DOT and SVG renderings of graphs and hypergraphs.
 *
 * Output depends only on the graph: vertices sit on a circle in id order
 * and all coordinates are printed with fixed precision.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "halo/graph.hpp"
#include "halo/halo.hpp"

namespace halo {

/// Mode colors: blue, red, green, orange, then four more before repeating.
inline const std::string& mode_color(Mode m) {
  static const std::array<std::string, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return palette[static_cast<std::size_t>(m < 0 ? 0 : m) % palette.size()];
}

namespace detail {

inline std::string fixed(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s = buf;
  if (s == "-0.00" || s == "-0.000000") s.erase(0, 1);
  return s;
}

inline std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace detail

/// Hyperedges become small filled hub nodes joined to their vertices, with
/// each spoke colored by the mode it injects.
inline std::string to_dot(const Graph& g, const std::vector<Hyperedge>& hyperedges = {}) {
  std::ostringstream out;
  out << "graph G {\n  layout=circo;\n  node [shape=circle, fontname=\"Helvetica\"];\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v << " [label=\"" << v << "\"";
    if (g.role(v) == Role::input) out << ", shape=square";
    out << "];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  " << e.u << " -- " << e.v << " [color=\"" << mode_color(e.mode_u);
    if (e.mode_v != e.mode_u) out << ";0.5:" << mode_color(e.mode_v);
    out << "\", label=\"" << detail::short_number(e.weight) << "\", penwidth="
        << detail::fixed(1.0 + 2.0 * std::min(std::abs(e.weight), 2.0));
    if (e.weight < 0) out << ", style=dashed";
    out << "];\n";
  }
  for (std::size_t i = 0; i < hyperedges.size(); ++i) {
    const auto& h = hyperedges[i];
    out << "  h" << i << " [shape=point, width=0.15, xlabel=\"" << detail::short_number(h.weight) << "\"];\n";
    for (std::size_t j = 0; j < h.vertices.size(); ++j)
      out << "  h" << i << " -- " << h.vertices[j] << " [color=\"" << mode_color(h.modes[j]) << "\", penwidth=3];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const Hypergraph& h) { return to_dot(h.base(), h.hyperedges()); }

namespace detail {

struct Point {
  double x, y;
};

inline std::vector<Point> circle_layout(int n, double cx, double cy, double r) {
  std::vector<Point> p;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * i / std::max(n, 1) - std::numbers::pi / 2;
    p.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return p;
}

inline std::string pt(Point p) { return fixed(p.x) + "," + fixed(p.y); }

}  // namespace detail

/// Circular layout. An edge is a quadratic curve whose halves carry the mode
/// colors of its two endpoints; parallel edges fan out. Negative weights are
/// dashed. Hyperedges are drawn as translucent outlines around their
/// vertices.
inline std::string to_svg(const Graph& g, const std::vector<Hyperedge>& hyperedges = {}) {
  const double size = 480, c = size / 2, radius = 180;
  const auto pos = detail::circle_layout(g.vertex_count(), c, c, radius);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& h : hyperedges) {
    std::string pts;
    for (VertexId v : h.vertices) pts += (pts.empty() ? "" : " ") + detail::pt(pos[static_cast<std::size_t>(v)]);
    const auto& col = mode_color(h.modes.empty() ? 0 : h.modes.front());
    out << "<polygon points=\"" << pts << "\" fill=\"" << col << "\" fill-opacity=\"0.15\" stroke=\"" << col
        << "\" stroke-opacity=\"0.5\" stroke-width=\"34\" stroke-linejoin=\"round\"/>\n";
  }

  std::map<std::pair<VertexId, VertexId>, int> total, seen;
  for (const auto& e : g.edges()) ++total[{e.u, e.v}];
  for (const auto& e : g.edges()) {
    const auto key = std::make_pair(e.u, e.v);
    const int k = seen[key]++, m = total[key];
    const auto a = pos[static_cast<std::size_t>(e.u)], b = pos[static_cast<std::size_t>(e.v)];
    const double dx = b.x - a.x, dy = b.y - a.y, len = std::max(std::hypot(dx, dy), 1e-9);
    const double off = (k - (m - 1) / 2.0) * 16.0;
    const detail::Point ctrl{(a.x + b.x) / 2 - dy / len * off * 2, (a.y + b.y) / 2 + dx / len * off * 2};
    // Split the curve at t = 1/2.
    const detail::Point q0{(a.x + ctrl.x) / 2, (a.y + ctrl.y) / 2}, q1{(ctrl.x + b.x) / 2, (ctrl.y + b.y) / 2};
    const detail::Point mid{(q0.x + q1.x) / 2, (q0.y + q1.y) / 2};
    const std::string width = detail::fixed(1.0 + 2.0 * std::min(std::abs(e.weight), 2.0));
    const std::string dash = e.weight < 0 ? " stroke-dasharray=\"6,4\"" : "";
    out << "<path d=\"M" << detail::pt(a) << " Q" << detail::pt(q0) << " " << detail::pt(mid) << "\" fill=\"none\" stroke=\""
        << mode_color(e.mode_u) << "\" stroke-width=\"" << width << "\"" << dash << "/>\n";
    out << "<path d=\"M" << detail::pt(mid) << " Q" << detail::pt(q1) << " " << detail::pt(b) << "\" fill=\"none\" stroke=\""
        << mode_color(e.mode_v) << "\" stroke-width=\"" << width << "\"" << dash << "/>\n";
  }

  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto p = pos[static_cast<std::size_t>(v)];
    if (g.role(v) == Role::input)
      out << "<rect x=\"" << detail::fixed(p.x - 12) << "\" y=\"" << detail::fixed(p.y - 12)
          << "\" width=\"24\" height=\"24\" fill=\"white\" stroke=\"black\"/>\n";
    else
      out << "<circle cx=\"" << detail::fixed(p.x) << "\" cy=\"" << detail::fixed(p.y)
          << "\" r=\"12\" fill=\"white\" stroke=\"black\"/>\n";
    out << "<text x=\"" << detail::fixed(p.x) << "\" y=\"" << detail::fixed(p.y + 4)
        << "\" text-anchor=\"middle\" font-family=\"Helvetica\" font-size=\"12\">" << v << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string to_svg(const Hypergraph& h) { return to_svg(h.base(), h.hyperedges()); }

}  // namespace halo
