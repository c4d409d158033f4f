#pragma once

// Inexact subproblem solver: the maximizer is x(lambda*) where lambda* is the
// positive zero of
//
//   phi(lambda) = Q(x(lambda)) / lambda + gamma + <h, x(lambda)>,
//   x(lambda)   = proj(x0 - lambda h),
//
// found by a bracketed secant/bisection hybrid. Also provides the closed form
// for the nonnegative orthant with the prox centered at the origin.

#include "osga/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace osga {

class NoRootError : public Error {
 public:
  using Error::Error;
};

class NoPositiveMaximumError : public Error {
 public:
  using Error::Error;
};

struct ZeroFinderConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_iters = 200;
  double bracket_growth = 2.0;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_iters < 1 || !(bracket_growth > 1.0)) {
      throw DomainError("ZeroFinderConfig: tolerances must be > 0, max_iters >= 1, growth > 1");
    }
  }
};

inline constexpr int kMaxBracketExpansions = 512;

inline double phi(double lambda, const SubproblemInput& in, const ProxState& prox,
                  const BoxDomain& box) {
  if (!(lambda > 0.0)) throw DomainError("phi: lambda must be positive");
  const Vector x = project_to_box(prox.center() - lambda * in.h, box);
  return prox_value(x, prox) / lambda + in.gamma + in.h.dot(x);
}

inline SubproblemSolution solve_phi_root(const SubproblemInput& in, const ProxState& prox,
                                         const BoxDomain& box, const ZeroFinderConfig& cfg = {}) {
  cfg.validate();
  detail::require_same_size(in.h.size(), prox.size(), "solve_phi_root");
  detail::require_same_size(in.h.size(), box.size(), "solve_phi_root");
  auto f = [&](double l) { return phi(l, in, prox, box); };

  auto finish = [&](double lambda, bool converged) {
    SubproblemSolution sol;
    sol.lambda = lambda;
    sol.e = 1.0 / lambda;
    sol.u = project_to_box(prox.center() - lambda * in.h, box);
    sol.converged = converged;
    return sol;
  };

  // Bracket [lo, hi] with phi(lo) > 0 > phi(hi); phi -> +inf as lambda -> 0+.
  double lo = 1.0, hi = 1.0;
  double flo = f(1.0), fhi = flo;
  if (flo == 0.0) return finish(1.0, true);
  int expansions = 0;
  if (flo > 0.0) {
    while (fhi > 0.0) {
      if (++expansions > kMaxBracketExpansions || std::isinf(hi)) {
        throw NoRootError("solve_phi_root: no sign change found (is sup E positive?)");
      }
      lo = hi;
      flo = fhi;
      hi *= cfg.bracket_growth;
      fhi = f(hi);
    }
  } else {
    while (flo < 0.0) {
      if (++expansions > kMaxBracketExpansions || lo == 0.0) {
        throw NoRootError("solve_phi_root: no sign change found (is sup E positive?)");
      }
      hi = lo;
      fhi = flo;
      lo /= cfg.bracket_growth;
      flo = f(lo);
    }
  }
  if (flo == 0.0) return finish(lo, true);
  if (fhi == 0.0) return finish(hi, true);

  // Alternate secant and bisection steps. The secant uses the two most recent
  // iterates and falls back to bisection when it leaves the bracket.
  double prev = lo, fprev = flo;
  double cur = hi, fcur = fhi;
  for (int it = 0; it < cfg.max_iters; ++it) {
    double next = 0.5 * (lo + hi);
    if (it % 2 == 0 && fcur != fprev) {
      const double secant = cur - fcur * (cur - prev) / (fcur - fprev);
      if (secant > lo && secant < hi) next = secant;
    }
    const double fnext = f(next);
    prev = cur;
    fprev = fcur;
    cur = next;
    fcur = fnext;
    if (fnext > 0.0) {
      lo = next;
      flo = fnext;
    } else if (fnext < 0.0) {
      hi = next;
      fhi = fnext;
    }
    if (fnext == 0.0 || std::abs(fnext) <= cfg.abs_tol) return finish(next, true);
    if (hi - lo <= cfg.rel_tol * lo) {
      return finish(std::abs(fhi) < std::abs(flo) ? hi : lo, true);
    }
  }
  return finish(0.5 * (lo + hi), false);
}

/// Closed-form maximizer on the nonnegative orthant with the prox centered at 0.
/// e is the larger root of Q0 e^2 + gamma e - 0.5 ||h_-||^2 = 0, with h_- = min(h, 0).
inline SubproblemSolution nonneg_closed_form(const SubproblemInput& in, const ProxState& prox) {
  detail::require_same_size(in.h.size(), prox.size(), "nonneg_closed_form");
  if (!prox.center().isZero(0.0)) {
    throw DomainError("nonneg_closed_form: prox center must be the origin");
  }
  const Vector hminus = in.h.cwiseMin(0.0);
  const double beta1 = prox.q0();
  const double beta2 = in.gamma;
  const double beta3 = 0.5 * hminus.squaredNorm() - in.h.dot(hminus);
  const double disc = beta2 * beta2 - 4.0 * beta1 * beta3;
  if (disc < 0.0) {
    throw NoPositiveMaximumError("nonneg_closed_form: negative discriminant");
  }
  const double root = std::sqrt(disc);
  // Larger root; the second form avoids cancellation when beta2 > 0.
  const double e = beta2 <= 0.0 ? (-beta2 + root) / (2.0 * beta1) : -2.0 * beta3 / (beta2 + root);
  if (!(e > 0.0)) {
    throw NoPositiveMaximumError("nonneg_closed_form: maximum " + std::to_string(e) +
                                 " is not positive");
  }
  SubproblemSolution sol;
  sol.e = e;
  sol.lambda = 1.0 / e;
  sol.u = -hminus / e;
  return sol;
}

/// Subsolver adaptor for the OSGA driver. The driver reports its progress via
/// begin_iteration; tolerance is tightened over the final stretch of the run.
struct InexactSubsolver {
  ZeroFinderConfig config{};
  double final_rel_tol = 1e-12;
  double final_fraction = 0.1;
  bool tightened = false;

  void begin_iteration(long iter, long max_iters) {
    tightened = max_iters > 0 && static_cast<double>(iter) >
                                     (1.0 - final_fraction) * static_cast<double>(max_iters);
  }

  SubproblemSolution operator()(const SubproblemInput& in, const ProxState& prox,
                                const BoxDomain& box) const {
    ZeroFinderConfig cfg = config;
    if (tightened) cfg.rel_tol = std::min(cfg.rel_tol, final_rel_tol);
    return solve_phi_root(in, prox, box, cfg);
  }
};

}  // namespace osga
