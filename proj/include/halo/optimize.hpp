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
 * @file optimize.hpp
 * @brief Fidelity, its gradient, weight optimization and topology discovery.
 *
 * Fidelity compares the graph's full-vertex post-selected state with a
 * target over the same particles:
 *
 *     F(w) = |<t|psi(w)>|^2 / <psi(w)|psi(w)>
 *
 * Every amplitude of psi is a homogeneous polynomial of degree V/2 in the
 * weights, so F is scale invariant and w . grad F = 0.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "halo/error.hpp"
#include "halo/graph.hpp"
#include "halo/matching.hpp"
#include "halo/state.hpp"
#include "halo/states.hpp"

namespace halo {

/// Fidelity of a fixed topology as a function of its weights. Building one
/// enumerates the matchings once; evaluation is then a pass over the table.
class FidelityObjective {
 public:
  FidelityObjective(const Graph& g, const TargetSpec& target) : FidelityObjective(MatchingTable::build(g), g, target) {}

  FidelityObjective(MatchingTable table, const Graph& g, const TargetSpec& target)
      : FidelityObjective(std::move(table), g.edge_count(), target_map(g, target)) {}

  /// Target given as ket -> amplitude over the table's kets (which may use
  /// absent_mode); it is normalized here.
  FidelityObjective(MatchingTable table, std::size_t edge_count, std::map<Ket, Amplitude> target)
      : table_(std::move(table)), edge_count_(edge_count), target_(std::move(target)) {
    double n = 0;
    for (const auto& [k, a] : target_) n += std::norm(a);
    if (n <= 0) throw Error(ErrorCode::zero_state, "target has zero norm");
    for (auto& [k, a] : target_) a /= std::sqrt(n);
    conj_target_.reserve(table_.kets.size());
    for (const auto& k : table_.kets) {
      auto it = target_.find(k);
      conj_target_.push_back(it == target_.end() ? Amplitude{} : std::conj(it->second));
    }
  }

  /// Same objective on the topology with edge `index` removed.
  FidelityObjective without_edge(std::size_t index) const {
    return FidelityObjective(table_.without_edge(index), edge_count_ - 1, target_);
  }

  const MatchingTable& table() const { return table_; }
  std::size_t edge_count() const { return edge_count_; }

  /// Returns F(w); fills `grad` (resized to the edge count) when given.
  double evaluate(std::span<const double> w, std::vector<double>* grad = nullptr) const {
    const auto amp = table_.amplitudes(w);
    Amplitude overlap{};
    double norm = 0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      overlap += conj_target_[k] * amp[k];
      norm += amp[k] * amp[k];
    }
    if (norm < amplitude_epsilon * amplitude_epsilon) {
      if (grad) grad->assign(edge_count_, 0.0);
      return 0.0;
    }
    const double ov2 = std::norm(overlap);
    // Round-off can push the ratio a few ulps past 1.
    const double f = std::min(1.0, ov2 / norm);
    if (!grad) return f;

    // dF/dA_k = 2 Re(conj(t_k) conj(<t|psi>)) / N - 2 |<t|psi>|^2 A_k / N^2
    std::vector<double> d_amp(amp.size());
    for (std::size_t k = 0; k < amp.size(); ++k)
      d_amp[k] = 2.0 * (conj_target_[k] * std::conj(overlap)).real() / norm - 2.0 * ov2 * amp[k] / (norm * norm);

    grad->assign(edge_count_, 0.0);
    std::vector<double> prefix, suffix;
    for (std::size_t m = 0; m < table_.matching_count(); ++m) {
      const double dk = d_amp[table_.ket_of[m]];
      if (dk == 0.0) continue;
      const std::uint32_t* row = table_.edges.data() + table_.offsets[m];
      const std::size_t m_size = table_.offsets[m + 1] - table_.offsets[m];
      prefix.resize(m_size + 1);
      suffix.resize(m_size + 1);
      prefix[0] = 1.0;
      for (std::size_t j = 0; j < m_size; ++j) prefix[j + 1] = prefix[j] * w[row[j]];
      suffix[m_size] = 1.0;
      for (std::size_t j = m_size; j-- > 0;) suffix[j] = suffix[j + 1] * w[row[j]];
      for (std::size_t j = 0; j < m_size; ++j) (*grad)[row[j]] += dk * prefix[j] * suffix[j + 1];
    }
    return f;
  }

 private:
  static std::map<Ket, Amplitude> target_map(const Graph& g, const TargetSpec& target) {
    if (target.particle_count() != static_cast<std::size_t>(g.vertex_count()))
      throw Error(ErrorCode::shape_mismatch, "target has " + std::to_string(target.particle_count()) +
                                                 " particles, graph has " + std::to_string(g.vertex_count()) +
                                                 " vertices");
    std::map<Ket, Amplitude> t;
    for (const auto& term : target.terms()) t.emplace(term.ket, term.amplitude);
    return t;
  }

  MatchingTable table_;
  std::size_t edge_count_ = 0;
  std::map<Ket, Amplitude> target_;
  std::vector<Amplitude> conj_target_;
};

/// Fidelity of the graph's full-vertex state with the target; 0 when the
/// graph has no perfect matching. Throws ShapeMismatch if the particle count
/// differs from the vertex count.
inline double fidelity(const Graph& g, const TargetSpec& target) {
  const auto w = g.weights();
  return FidelityObjective(g, target).evaluate(w);
}

/// Analytic gradient of fidelity() with respect to each edge weight, in
/// Graph::edges() order.
inline std::vector<double> fidelity_gradient(const Graph& g, const TargetSpec& target) {
  const auto w = g.weights();
  std::vector<double> grad;
  FidelityObjective(g, target).evaluate(w, &grad);
  return grad;
}

struct OptimizerConfig {
  int restarts = 16;
  int max_iters = 3000;
  /// Quasi-Newton (BFGS) iterations run after the gradient ascent; 0 turns
  /// the refinement off.
  int polish_iters = 400;
  double learning_rate = 0.5;
  double learning_rate_decay = 0.999;
  double init_low = -1.0;
  double init_high = 1.0;
  double prune_threshold_fidelity = 0.99;
  std::uint64_t seed = 0;
  /// Vertex pairs that may never share an edge.
  std::vector<std::pair<VertexId, VertexId>> forbidden_pairs;
  /// Individual edges (u, v, mode_u, mode_v) discovery may not use.
  std::vector<EdgeKey> forbidden_edges;
  /// Vertices treated as inputs: discovery leaves out edges between two of them
  /// and marks them with Role::input in the result.
  std::vector<VertexId> input_vertices;
  /// Worker threads for restarts; 0 picks the hardware concurrency. Results do
  /// not depend on this.
  int threads = 0;

  /// Throws InvalidParam for settings no run can use.
  void validate() const {
    if (restarts < 1) throw Error(ErrorCode::invalid_param, "restarts must be at least 1");
    if (max_iters < 0) throw Error(ErrorCode::invalid_param, "max_iters must be non-negative");
    if (polish_iters < 0) throw Error(ErrorCode::invalid_param, "polish_iters must be non-negative");
    if (!(learning_rate > 0)) throw Error(ErrorCode::invalid_param, "learning_rate must be positive");
    if (!(learning_rate_decay > 0 && learning_rate_decay <= 1))
      throw Error(ErrorCode::invalid_param, "learning_rate_decay must lie in (0, 1]");
    if (!(init_low < init_high)) throw Error(ErrorCode::invalid_param, "empty initialization range");
    if (!(prune_threshold_fidelity > 0 && prune_threshold_fidelity <= 1))
      throw Error(ErrorCode::invalid_param, "prune_threshold_fidelity must lie in (0, 1]");
    if (threads < 0) throw Error(ErrorCode::invalid_param, "threads must be non-negative");
  }
};

struct OptimizationResult {
  std::vector<double> weights;
  double fidelity = 0;
  int iterations = 0;
  int restart = 0;
};

struct DiscoveryResult {
  Graph graph;
  double fidelity = 0;
  std::size_t pm_count = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Independent stream per (seed, restart).
inline std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x68616c6fu};
  return std::mt19937_64(seq);
}

/// Divides by the largest |w|; F does not change.
inline void rescale(std::vector<double>& w) {
  double m = 0;
  for (double x : w) m = std::max(m, std::abs(x));
  if (m > 0)
    for (double& x : w) x /= m;
}

// Adapts a FidelityObjective to GSL's minimizer callbacks (minimizing 1 - F).
struct GslFidelity {
  const FidelityObjective* obj;
  std::vector<double> x, grad;

  static GslFidelity& load(const gsl_vector* v, void* p) {
    auto& c = *static_cast<GslFidelity*>(p);
    for (std::size_t i = 0; i < c.x.size(); ++i) c.x[i] = gsl_vector_get(v, i);
    return c;
  }
  static double f(const gsl_vector* v, void* p) {
    auto& c = load(v, p);
    return 1.0 - c.obj->evaluate(c.x);
  }
  static void fdf(const gsl_vector* v, void* p, double* value, gsl_vector* g) {
    auto& c = load(v, p);
    *value = 1.0 - c.obj->evaluate(c.x, &c.grad);
    for (std::size_t i = 0; i < c.x.size(); ++i) gsl_vector_set(g, i, -c.grad[i]);
  }
  static void df(const gsl_vector* v, void* p, gsl_vector* g) {
    double unused;
    fdf(v, p, &unused, g);
  }
};

/// Minimizes 1 - F with GSL's BFGS from `w`.
inline OptimizationResult polish(const FidelityObjective& obj, std::vector<double> w, int max_iters) {
  OptimizationResult out;
  out.weights = w;
  out.fidelity = obj.evaluate(w);
  const std::size_t n = w.size();
  if (n == 0) return out;

  GslFidelity ctx{&obj, std::vector<double>(n), {}};
  gsl_multimin_function_fdf fn;
  fn.n = n;
  fn.params = &ctx;
  fn.f = &GslFidelity::f;
  fn.df = &GslFidelity::df;
  fn.fdf = &GslFidelity::fdf;

  gsl_error_handler_t* old_handler = gsl_set_error_handler_off();
  gsl_vector* x0 = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x0, i, w[i]);
  gsl_multimin_fdfminimizer* m = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(m, &fn, x0, 0.01, 0.1);
  int it = 0;
  for (; it < max_iters; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(m) != GSL_SUCCESS) break;
    if (m->f < 1e-15) break;
    if (gsl_multimin_test_gradient(m->gradient, 1e-13) == GSL_SUCCESS) break;
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = gsl_vector_get(m->x, i);
  gsl_multimin_fdfminimizer_free(m);
  gsl_vector_free(x0);
  gsl_set_error_handler(old_handler);

  rescale(x);
  const double f = obj.evaluate(x);
  out.iterations = it;
  if (f > out.fidelity) {
    out.fidelity = f;
    out.weights = std::move(x);
  }
  return out;
}

/// Gradient ascent with a decaying step from `w`. The step is taken along
/// grad / |grad| * |w| so that it is invariant under rescaling of the
/// weights, then the weights are rescaled to max |w| = 1. Returns the best
/// point seen.
inline OptimizationResult ascend(const FidelityObjective& obj, std::vector<double> w, const OptimizerConfig& cfg) {
  OptimizationResult best;
  best.weights = w;
  best.fidelity = obj.evaluate(w);
  std::vector<double> grad;
  double lr = cfg.learning_rate;
  constexpr int stall_window = 200;
  double window_start = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double f = obj.evaluate(w, &grad);
    if (f > best.fidelity) {
      best.fidelity = f;
      best.weights = w;
    }
    best.iterations = it + 1;
    if (1.0 - f < 1e-14) break;
    if (it % stall_window == 0) {
      if (it > 0 && f - window_start < 1e-10) break;
      window_start = f;
    }
    double gn = 0, wn = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      gn += grad[i] * grad[i];
      wn += w[i] * w[i];
    }
    gn = std::sqrt(gn);
    if (gn < 1e-300) break;
    // Near a maximum the gradient vanishes linearly in the distance, so a
    // step proportional to |grad| converges; far away it is capped.
    const double step = lr * std::sqrt(wn) * std::min(1.0, gn);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += step * grad[i] / gn;
    rescale(w);
    lr *= cfg.learning_rate_decay;
  }
  const double f = obj.evaluate(w);
  if (f > best.fidelity) {
    best.fidelity = f;
    best.weights = w;
  }
  if (cfg.polish_iters > 0 && 1.0 - best.fidelity > 1e-14) {
    auto polished = polish(obj, best.weights, cfg.polish_iters);
    best.iterations += polished.iterations;
    if (polished.fidelity > best.fidelity) {
      best.fidelity = polished.fidelity;
      best.weights = std::move(polished.weights);
    }
  }
  return best;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += workers) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Multi-start ascent on a fixed topology. Restart r draws initial weights
/// uniformly from [init_low, init_high] using a generator seeded from
/// (seed, r). Ties on fidelity go to the lowest restart index.
inline OptimizationResult optimize_weights(const FidelityObjective& obj, const OptimizerConfig& cfg) {
  cfg.validate();
  std::vector<OptimizationResult> results(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = detail::restart_rng(cfg.seed, r);
    std::uniform_real_distribution<double> dist(cfg.init_low, cfg.init_high);
    std::vector<double> w(obj.edge_count());
    for (double& x : w) x = dist(rng);
    auto res = detail::ascend(obj, std::move(w), cfg);
    res.restart = r;
    results[static_cast<std::size_t>(r)] = std::move(res);
  });
  OptimizationResult best = results.front();
  for (const auto& r : results)
    if (r.fidelity > best.fidelity) best = r;
  return best;
}

/// Optimizes the weights of `g` (its own weights are ignored) and returns
/// the graph carrying the best weights found.
inline DiscoveryResult optimize_weights(const Graph& g, const TargetSpec& target, const OptimizerConfig& cfg) {
  cfg.validate();
  FidelityObjective obj(g, target);
  auto best = optimize_weights(obj, cfg);
  DiscoveryResult out;
  out.graph = g.with_weights(best.weights);
  out.fidelity = obj.evaluate(best.weights);
  out.pm_count = obj.table().matching_count();
  out.iterations = best.iterations;
  out.seed = cfg.seed;
  return out;
}

/// Pruning search from `start` (weights ignored) under objective `obj`,
/// which must be built on `start`. See discover().
inline DiscoveryResult discover_from(Graph graph, FidelityObjective obj, const OptimizerConfig& cfg) {
  cfg.validate();
  auto best = optimize_weights(obj, cfg);
  int iterations = best.iterations;
  if (best.fidelity < cfg.prune_threshold_fidelity)
    throw Error(ErrorCode::no_solution, "starting graph reaches fidelity " + std::to_string(best.fidelity) +
                                            " below threshold " + std::to_string(cfg.prune_threshold_fidelity));
  std::vector<double> w = best.weights;
  std::vector<char> needed(graph.edge_count(), 0);
  double current = best.fidelity;

  while (true) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
      if (needed[i]) continue;
      if (!pick || std::abs(w[i]) < std::abs(w[*pick])) pick = i;
    }
    if (!pick) break;
    const std::size_t idx = *pick;
    Graph trial_graph = graph.without_edge(idx);
    FidelityObjective trial = obj.without_edge(idx);
    std::vector<double> tw = w;
    tw.erase(tw.begin() + static_cast<std::ptrdiff_t>(idx));
    // An edge whose removal costs nothing needs no re-optimization.
    OptimizationResult res;
    const double dropped = trial.evaluate(tw);
    if (dropped >= current - 1e-13 && dropped >= cfg.prune_threshold_fidelity) {
      res.fidelity = dropped;
      res.weights = std::move(tw);
    } else if (cfg.polish_iters > 0) {
      // Warm start: the quasi-Newton stage alone converges much faster here.
      res = detail::polish(trial, std::move(tw), cfg.polish_iters);
    } else {
      res = detail::ascend(trial, std::move(tw), cfg);
    }
    iterations += res.iterations;
    if (res.fidelity >= cfg.prune_threshold_fidelity) {
      graph = std::move(trial_graph);
      obj = std::move(trial);
      w = std::move(res.weights);
      current = res.fidelity;
      // Any earlier verdict may change once the topology changes.
      needed.assign(graph.edge_count(), 0);
    } else {
      needed[idx] = 1;
    }
  }

  if (cfg.polish_iters > 0) {
    auto last = detail::polish(obj, w, cfg.polish_iters);
    iterations += last.iterations;
    if (last.fidelity > current) w = std::move(last.weights);
  }

  DiscoveryResult out;
  out.graph = graph.with_weights(w);
  out.fidelity = obj.evaluate(w);
  out.pm_count = count_perfect_matchings(out.graph);
  out.iterations = iterations;
  out.seed = cfg.seed;
  return out;
}

/// Topology search. Starts from the complete graph over the target's
/// particles (minus forbidden and input-input pairs), optimizes it, then
/// repeatedly tries deleting the remaining edge of smallest |w| (ties by edge
/// key) and re-optimizing from the current weights. A deletion is kept if
/// fidelity stays at or above the threshold, otherwise the edge is marked as
/// needed. Ends when every remaining edge is needed. Throws NoSolution if
/// the complete graph already misses the threshold.
inline DiscoveryResult discover(const TargetSpec& target, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(target.particle_count());
  std::vector<char> is_input(static_cast<std::size_t>(n), 0);
  for (VertexId v : cfg.input_vertices) {
    if (v < 0 || v >= n) throw Error(ErrorCode::invalid_param, "input vertex out of range");
    is_input[static_cast<std::size_t>(v)] = 1;
  }
  auto allowed = [&](VertexId u, VertexId v) {
    if (is_input[static_cast<std::size_t>(u)] && is_input[static_cast<std::size_t>(v)]) return false;
    for (auto [a, b] : cfg.forbidden_pairs)
      if ((a == u && b == v) || (a == v && b == u)) return false;
    return true;
  };
  std::vector<Role> roles(static_cast<std::size_t>(n), Role::detector);
  for (int v = 0; v < n; ++v)
    if (is_input[static_cast<std::size_t>(v)]) roles[static_cast<std::size_t>(v)] = Role::input;
  Graph graph = complete_graph(n, target.dimensions(), allowed);
  if (!cfg.forbidden_edges.empty()) {
    std::vector<Edge> kept;
    for (const auto& e : graph.edges()) {
      const bool banned = std::any_of(cfg.forbidden_edges.begin(), cfg.forbidden_edges.end(), [&](EdgeKey k) {
        return Edge{k.u, k.v, k.mode_u, k.mode_v}.canonical().key() == e.key();
      });
      if (!banned) kept.push_back(e);
    }
    graph = graph.with_edges(std::move(kept));
  }
  graph = graph.with_roles(roles);

  return discover_from(graph, FidelityObjective(graph, target), cfg);
}

}  // namespace halo
