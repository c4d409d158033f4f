#pragma once

// Projected subgradient baselines with nonsummable diminishing steps.

#include "osga/core.hpp"
#include "osga/solver.hpp"
#include "osga/trace.hpp"

#include <cmath>
#include <utility>

namespace osga {

enum class PsgaVariant {
  step_size,    ///< alpha_k = scale / (sqrt(k) ||g_k||)
  step_length,  ///< alpha_k = scale / sqrt(k)
};

struct PsgaParams {
  PsgaVariant variant = PsgaVariant::step_size;
  double scale = 5.0;
  long max_iters = 100;
  double max_time = kInf;  ///< seconds

  static PsgaParams psga1(long iters = 100) { return {PsgaVariant::step_size, 5.0, iters}; }
  static PsgaParams psga2(long iters = 100) { return {PsgaVariant::step_length, 0.1, iters}; }

  void validate() const {
    if (!(scale > 0.0)) throw DomainError("PsgaParams: scale must be > 0");
    if (max_iters < 0) throw DomainError("PsgaParams: max_iters must be >= 0");
    if (!(max_time > 0.0)) throw DomainError("PsgaParams: max_time must be > 0");
  }
};

/// x_{k+1} = proj(x_k - alpha_k g_k) with k starting at 1. Iteration k
/// evaluates x_{k+1}; the trace reports the best value seen so far. A zero
/// subgradient ends the run with StopReason::stationary.
inline SolveResult psga_solve(const FirstOrderOracle& oracle, const BoxDomain& box,
                              const Vector& x0, const PsgaParams& params,
                              const TraceSink& sink = {}) {
  params.validate();
  detail::require_same_size(x0.size(), box.size(), "psga_solve");
  if (!box.contains(x0)) throw DomainError("psga_solve: x0 must lie in the box");
  detail::Stopwatch clock;

  SolveResult res;
  Vector x = x0;
  Vector g;
  double f = oracle(x, g);
  res.evaluations = 1;
  res.f_initial = f;
  res.f_best = f;
  res.x_best = x;

  long k = 0;
  while (true) {
    if (k >= params.max_iters) {
      res.stop = StopReason::max_iters;
      break;
    }
    if (std::isfinite(params.max_time) && clock.elapsed_ms() >= 1e3 * params.max_time) {
      res.stop = StopReason::max_time;
      break;
    }
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      res.stop = StopReason::stationary;
      break;
    }
    ++k;
    const double root_k = std::sqrt(static_cast<double>(k));
    const double alpha = params.variant == PsgaVariant::step_size
                             ? params.scale / (root_k * gnorm)
                             : params.scale / root_k;
    x = project_to_box(x - alpha * g, box);
    f = oracle(x, g);
    ++res.evaluations;
    if (f < res.f_best) {
      res.f_best = f;
      res.x_best = x;
    }

    IterationTrace rec{k, res.f_best, std::nullopt, std::nullopt, clock.elapsed_ms(),
                       std::nullopt};
    res.trace.push_back(rec);
    if (sink) {
      clock.pause();
      sink(rec);
      clock.resume();
    }
  }
  res.iterations = k;
  res.elapsed_ms = clock.elapsed_ms();
  return res;
}

}  // namespace osga
