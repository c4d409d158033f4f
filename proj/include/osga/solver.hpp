#pragma once

// OSGA driver for bound-constrained convex minimization.
//
// Each step builds a new linear lower model (gamma, h) from the latest
// subgradient, queries the subproblem solver twice for the maximizer of
// E = -(gamma_b + <h, x>) / Q(x), and adapts the step parameter alpha from
// the observed decrease of the error bound eta.

#include "osga/core.hpp"
#include "osga/subproblem_exact.hpp"
#include "osga/subproblem_inexact.hpp"
#include "osga/trace.hpp"

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace osga {

struct OsgaParams {
  double delta = 0.9;
  double alpha_max = 0.7;
  double kappa = 0.5;
  double kappa_prime = 0.5;
  double mu = 0.0;
  double f_target = -kInf;
  long max_iters = 100;
  double max_time = kInf;  ///< seconds
  double eta_tol = 0.0;    ///< stop once eta <= eta_tol; 0 disables

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("OsgaParams: delta must lie in (0,1)");
    if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
      throw DomainError("OsgaParams: alpha_max must lie in (0,1)");
    }
    if (!(kappa_prime > 0.0 && kappa_prime <= kappa)) {
      throw DomainError("OsgaParams: requires 0 < kappa' <= kappa");
    }
    if (!(mu >= 0.0)) throw DomainError("OsgaParams: mu must be >= 0");
    if (max_iters < 0) throw DomainError("OsgaParams: max_iters must be >= 0");
    if (!(max_time > 0.0)) throw DomainError("OsgaParams: max_time must be > 0");
    if (!(eta_tol >= 0.0)) throw DomainError("OsgaParams: eta_tol must be >= 0");
  }
};

template <class S>
concept Subsolver = requires(const S& s, const SubproblemInput& in, const ProxState& prox,
                             const BoxDomain& box) {
  { s(in, prox, box) } -> std::convertible_to<SubproblemSolution>;
};

struct OsgaState {
  Vector x_b;
  double f_xb = 0.0;
  Vector g_xb;
  double alpha = 0.0;
  Vector h;
  double gamma = 0.0;
  double eta = 0.0;
  Vector u;
  long iter = 0;
  long evaluations = 0;
  std::optional<StopReason> stopped;  ///< set once the state is terminal
};

/// Update of (alpha, h, gamma, eta, u) from the candidate values of one step.
struct PusCandidates {
  Vector h;
  double gamma = 0.0;
  double eta = 0.0;
  Vector u;
};

struct PusResult {
  double alpha = 0.0;
  Vector h;
  double gamma = 0.0;
  double eta = 0.0;
  Vector u;
  bool accepted = false;
};

/// Parameter update: alpha contracts by exp(-kappa) when the relative
/// decrease R of eta is below 1 and expands by exp(kappa' (R - 1)), capped at
/// alpha_max, otherwise. The candidates (h, gamma, eta, u) are accepted together
/// whenever they strictly decrease eta; h never moves without its gamma.
inline PusResult pus_update(double alpha, double eta, Vector h, double gamma, Vector u,
                            const PusCandidates& cand, const OsgaParams& params) {
  PusResult out{alpha, std::move(h), gamma, eta, std::move(u), false};
  const double ratio = (eta - cand.eta) / (params.delta * alpha * eta);
  if (ratio < 1.0) {
    out.alpha = alpha * std::exp(-params.kappa);
  } else {
    out.alpha = std::min(alpha * std::exp(params.kappa_prime * (ratio - 1.0)), params.alpha_max);
  }
  if (cand.eta < eta) {
    out.h = cand.h;
    out.gamma = cand.gamma;
    out.eta = cand.eta;
    out.u = cand.u;
    out.accepted = true;
  }
  return out;
}

namespace detail {

inline double evaluate(const FirstOrderOracle& oracle, const Vector& x, Vector& g,
                       OsgaState& state) {
  ++state.evaluations;
  const double f = oracle(x, g);
  if (g.size() != x.size()) {
    throw DimensionError("oracle returned a subgradient of length " + std::to_string(g.size()) +
                         " for a point of length " + std::to_string(x.size()));
  }
  return f;
}

/// Convex combination x_b + alpha (u - x_b), clipped to absorb rounding.
inline Vector blend(const Vector& x_b, const Vector& u, double alpha, const BoxDomain& box) {
  return project_to_box(x_b + alpha * (u - x_b), box);
}

/// Calls the subsolver; an empty result means the supremum is not positive.
template <Subsolver S>
std::optional<SubproblemSolution> maximize_e(const S& sub, double gamma, const Vector& h,
                                             const ProxState& prox, const BoxDomain& box) {
  try {
    SubproblemSolution sol = sub(SubproblemInput{gamma, h}, prox, box);
    if (!(sol.e > 0.0)) return std::nullopt;
    return sol;
  } catch (const NoRootError&) {
    return std::nullopt;
  } catch (const NonpositiveSupremumError&) {
    return std::nullopt;
  }
}

inline void check_prox(const ProxState& prox, const BoxDomain& box) {
  detail::require_same_size(prox.size(), box.size(), "osga");
  if (!box.contains(prox.center())) throw DomainError("osga: prox center must lie in the box");
}

}  // namespace detail

template <Subsolver S>
OsgaState osga_init(const FirstOrderOracle& oracle, const ProxState& prox, const BoxDomain& box,
                    const OsgaParams& params, const S& subsolver) {
  params.validate();
  detail::check_prox(prox, box);
  OsgaState st;
  st.x_b = prox.center();
  st.f_xb = detail::evaluate(oracle, st.x_b, st.g_xb, st);
  st.alpha = params.alpha_max;
  if (st.f_xb <= params.f_target) {
    st.h = st.g_xb;
    st.u = st.x_b;
    st.stopped = StopReason::target_reached;
    return st;
  }
  st.h = st.g_xb - params.mu * prox_gradient(st.x_b, prox);
  st.gamma = st.f_xb - params.mu * prox_value(st.x_b, prox) - st.h.dot(st.x_b);
  const double gamma_b = st.gamma - st.f_xb;
  SubproblemSolution sol = subsolver(SubproblemInput{gamma_b, st.h}, prox, box);
  if (!(sol.e > 0.0)) {
    throw NonpositiveSupremumError("osga_init: initial subproblem supremum " +
                                   std::to_string(sol.e) + " is not positive");
  }
  st.u = std::move(sol.u);
  st.eta = sol.e - params.mu;
  if (!(st.eta > 0.0)) {
    st.stopped = StopReason::nonpositive_eta;
  } else if (params.eta_tol > 0.0 && st.eta <= params.eta_tol) {
    st.stopped = StopReason::eta_tolerance;
  }
  return st;
}

template <Subsolver S>
OsgaState osga_step(OsgaState st, const FirstOrderOracle& oracle, const ProxState& prox,
                    const BoxDomain& box, const OsgaParams& params, const S& subsolver) {
  if (st.stopped) return st;
  const double mu = params.mu;
  ++st.iter;

  Vector g_x;
  const Vector x = detail::blend(st.x_b, st.u, st.alpha, box);
  const double f_x = detail::evaluate(oracle, x, g_x, st);
  const Vector g = mu > 0.0 ? Vector(g_x - mu * prox_gradient(x, prox)) : g_x;
  const Vector h_bar = st.h + st.alpha * (g - st.h);
  const double gamma_bar =
      st.gamma + st.alpha * (f_x - mu * prox_value(x, prox) - g.dot(x) - st.gamma);

  // Best of {x_b, x}; ties keep x_b.
  const bool x_better = f_x < st.f_xb;
  const Vector& x_b1 = x_better ? x : st.x_b;
  const double f_b1 = x_better ? f_x : st.f_xb;
  const Vector& g_b1 = x_better ? g_x : st.g_xb;

  const auto u1 = detail::maximize_e(subsolver, gamma_bar - f_b1, h_bar, prox, box);
  Vector x_best = x_b1;
  double f_best = f_b1;
  Vector g_best = g_b1;
  if (u1) {
    Vector g_x1;
    Vector x1 = detail::blend(st.x_b, u1->u, st.alpha, box);
    const double f_x1 = detail::evaluate(oracle, x1, g_x1, st);
    if (f_x1 < f_best) {
      x_best = std::move(x1);
      f_best = f_x1;
      g_best = std::move(g_x1);
    }
  }

  st.x_b = std::move(x_best);
  st.f_xb = f_best;
  st.g_xb = std::move(g_best);
  if (st.f_xb <= params.f_target) {
    st.stopped = StopReason::target_reached;
    return st;
  }

  const auto u_bar = detail::maximize_e(subsolver, gamma_bar - st.f_xb, h_bar, prox, box);
  if (!u_bar) {
    st.stopped = StopReason::nonpositive_eta;
    return st;
  }
  const double eta_bar = u_bar->e - mu;
  PusResult upd = pus_update(st.alpha, st.eta, std::move(st.h), st.gamma, std::move(st.u),
                             PusCandidates{h_bar, gamma_bar, eta_bar, u_bar->u}, params);
  st.alpha = upd.alpha;
  st.h = std::move(upd.h);
  st.gamma = upd.gamma;
  st.eta = upd.eta;
  st.u = std::move(upd.u);
  // eta bounds f_best - f*; with mu > 0 it can close to zero exactly.
  if (!(st.eta > 0.0)) {
    st.stopped = StopReason::nonpositive_eta;
  } else if (params.eta_tol > 0.0 && st.eta <= params.eta_tol) {
    st.stopped = StopReason::eta_tolerance;
  }
  return st;
}

struct SolveResult {
  Vector x_best;
  double f_best = 0.0;
  double f_initial = 0.0;
  long iterations = 0;
  long evaluations = 0;
  double elapsed_ms = 0.0;
  StopReason stop = StopReason::max_iters;
  std::vector<IterationTrace> trace;
};

/// Runs OSGA from the prox center. One trace record per step; records are
/// also forwarded to `sink` when given (time spent in the sink is excluded
/// from the reported timings).
template <Subsolver S>
SolveResult osga_solve(const FirstOrderOracle& oracle, const ProxState& prox,
                       const BoxDomain& box, const OsgaParams& params, S subsolver,
                       const TraceSink& sink = {}) {
  detail::Stopwatch clock;
  if constexpr (requires { subsolver.begin_iteration(0L, 0L); }) {
    subsolver.begin_iteration(0L, params.max_iters);
  }
  OsgaState st = osga_init(oracle, prox, box, params, subsolver);

  SolveResult res;
  res.f_initial = st.f_xb;
  while (!st.stopped) {
    if (st.iter >= params.max_iters) {
      st.stopped = StopReason::max_iters;
      break;
    }
    if (std::isfinite(params.max_time) && clock.elapsed_ms() >= 1e3 * params.max_time) {
      st.stopped = StopReason::max_time;
      break;
    }
    if constexpr (requires { subsolver.begin_iteration(0L, 0L); }) {
      subsolver.begin_iteration(st.iter + 1, params.max_iters);
    }
    st = osga_step(std::move(st), oracle, prox, box, params, subsolver);

    IterationTrace rec{st.iter, st.f_xb, st.eta, st.alpha, clock.elapsed_ms(), std::nullopt};
    res.trace.push_back(rec);
    if (sink) {
      clock.pause();
      sink(rec);
      clock.resume();
    }
  }

  res.x_best = std::move(st.x_b);
  res.f_best = st.f_xb;
  res.iterations = st.iter;
  res.evaluations = st.evaluations;
  res.elapsed_ms = clock.elapsed_ms();
  res.stop = *st.stopped;
  return res;
}

}  // namespace osga
