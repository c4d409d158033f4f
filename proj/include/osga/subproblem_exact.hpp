#pragma once

// Exact global maximization of E(x) = -(gamma + <h, x>) / Q(x) over a box.
//
// The maximizer lies on the projected path x(lambda) = proj(x0 - lambda h),
// which is affine between consecutive coordinate breakpoints. On each such
// segment E reduces to a scalar rational (a + b l) / (c + d l + s l^2) with a
// closed-form maximizer, so the global maximum is the best segment maximum.

#include "osga/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace osga {

class InvalidSegmentError : public Error {
 public:
  using Error::Error;
};

/// Value of lambda at which coordinate i of proj(x0 - lambda h) hits its bound.
/// Always >= 0 for x0 inside the box; +inf when h_i == 0 or the bound is infinite.
inline double coordinate_breakpoint(Eigen::Index i, const Vector& x0, const Vector& h,
                                    const BoxDomain& box) {
  const double hi = h[i];
  double bp = kInf;
  if (hi < 0.0) {
    bp = -(box.upper()[i] - x0[i]) / hi;
  } else if (hi > 0.0) {
    bp = -(box.lower()[i] - x0[i]) / hi;
  }
  return bp + 0.0;  // normalizes -0.0
}

struct BreakpointList {
  /// 0 = lambdas.front() < ... < lambdas.back() = +inf
  std::vector<double> lambdas;
  /// Per-coordinate breakpoints, unsorted.
  Vector raw;

  std::size_t segment_count() const { return lambdas.size() - 1; }
};

inline BreakpointList build_breakpoints(const Vector& x0, const Vector& h, const BoxDomain& box) {
  detail::require_same_size(x0.size(), h.size(), "build_breakpoints");
  detail::require_same_size(x0.size(), box.size(), "build_breakpoints");
  BreakpointList out;
  out.raw.resize(h.size());
  out.lambdas.reserve(static_cast<std::size_t>(h.size()) + 2);
  out.lambdas.push_back(0.0);
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    out.raw[i] = coordinate_breakpoint(i, x0, h, box);
    out.lambdas.push_back(out.raw[i]);
  }
  out.lambdas.push_back(kInf);
  std::sort(out.lambdas.begin(), out.lambdas.end());
  out.lambdas.erase(std::unique(out.lambdas.begin(), out.lambdas.end()), out.lambdas.end());
  return out;
}

/// x(lambda) = p + lambda q on one segment of the projected path.
struct SegmentPath {
  Vector p;
  Vector q;
};

/// Affine form of the projected path on segment k (0-based), i.e. on
/// [lambdas[k], lambdas[k+1]].
inline SegmentPath segment_path(std::size_t k, const BreakpointList& bp, const Vector& x0,
                                const Vector& h, const BoxDomain& box) {
  if (k >= bp.segment_count()) {
    throw std::out_of_range("segment_path: segment " + std::to_string(k) + " of " +
                            std::to_string(bp.segment_count()));
  }
  const double lo = bp.lambdas[k];
  const double hi = bp.lambdas[k + 1];
  SegmentPath path{x0, Vector::Zero(x0.size())};
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (h[i] == 0.0) continue;
    if (hi <= bp.raw[i]) {
      path.q[i] = -h[i];
    } else if (lo >= bp.raw[i]) {
      path.p[i] = h[i] > 0.0 ? box.lower()[i] : box.upper()[i];
    }
  }
  return path;
}

/// phi(l) = (a + b l) / (c + d l + s l^2)
struct RationalCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double d = 0.0;
  double s = 0.0;

  bool constant() const { return s == 0.0 && d == 0.0 && b == 0.0; }

  /// Evaluates phi, with the limit value at +inf.
  double operator()(double lambda) const {
    if (std::isinf(lambda)) {
      if (s > 0.0) return 0.0;
      if (d != 0.0) return b / d;
      return a / c;
    }
    return (a + b * lambda) / (c + lambda * (d + s * lambda));
  }
};

inline RationalCoeffs rational_coeffs(const Vector& p, const Vector& q, const SubproblemInput& in,
                                      const ProxState& prox) {
  detail::require_same_size(p.size(), q.size(), "rational_coeffs");
  detail::require_same_size(p.size(), in.h.size(), "rational_coeffs");
  const Vector dp = p - prox.center();
  RationalCoeffs r;
  r.a = -in.gamma - in.h.dot(p);
  r.b = -in.h.dot(q);
  r.c = prox.q0() + 0.5 * dp.squaredNorm();
  r.d = dp.dot(q);
  r.s = 0.5 * q.squaredNorm();
  return r;
}

struct RationalMax {
  double lambda = 0.0;
  double value = 0.0;
};

/// Maximizes phi over [lo, hi] (hi may be +inf). The unconstrained maximizer
/// is computed in closed form; if it falls outside the segment the better
/// endpoint is returned, preferring lo on ties.
inline RationalMax maximize_rational(const RationalCoeffs& r, double lo, double hi) {
  const auto [a, b, c, d, s] = r;
  if (!(c > 0.0) || s < 0.0 || !(lo <= hi)) {
    throw InvalidSegmentError("maximize_rational: requires c > 0, s >= 0, lo <= hi");
  }

  if (s == 0.0) {
    if (b != 0.0 || d != 0.0) {
      throw InvalidSegmentError("maximize_rational: s == 0 requires b == d == 0");
    }
    // Constant segment. Report lambda = c/a when it lies in the segment so that
    // lambda * value == 1 at the global maximizer.
    const double value = a / c;
    double lambda = lo;
    if (a > 0.0) lambda = std::clamp(c / a, lo, hi);
    return {lambda, value};
  }

  if (!(4.0 * s * c > d * d)) {
    throw InvalidSegmentError("maximize_rational: requires 4 s c > d^2");
  }

  RationalMax best{};
  bool interior = false;
  if (b != 0.0) {
    const double disc = a * a - b * (a * d - b * c) / s;
    const double w = std::sqrt(std::max(disc, 0.0));
    // Both forms equal (w - a) / b; the second avoids cancellation when a > 0.
    const double lambda = a > 0.0 ? (b * c - a * d) / (s * (a + w)) : (w - a) / b;
    if (lambda >= lo && lambda <= hi) {
      best = {lambda, w / (c + lambda * (d + s * lambda))};
      interior = true;
    }
  } else if (a > 0.0) {
    const double lambda = -d / (2.0 * s);
    if (lambda >= lo && lambda <= hi) {
      best = {lambda, 4.0 * a * s / (4.0 * c * s - d * d)};
      interior = true;
    }
  } else if (a == 0.0) {
    return {lo, 0.0};
  } else if (std::isinf(hi)) {
    return {kInf, 0.0};
  }

  if (!interior) {
    const double vlo = r(lo);
    const double vhi = r(hi);
    best = vhi > vlo ? RationalMax{hi, vhi} : RationalMax{lo, vlo};
  }
  return best;
}

enum class Positivity { optional, required };

namespace detail {

/// Point on the projected path; lambda = +inf gives the limit point where
/// finite (coordinates running to an infinite bound are left at x0 - lambda_fallback h).
inline Vector path_point(double lambda, const Vector& x0, const Vector& h, const BoxDomain& box,
                         double lambda_fallback) {
  if (!std::isinf(lambda)) return project_to_box(x0 - lambda * h, box);
  Vector u = project_to_box(x0 - lambda_fallback * h, box);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (h[i] > 0.0 && std::isfinite(box.lower()[i])) u[i] = box.lower()[i];
    if (h[i] < 0.0 && std::isfinite(box.upper()[i])) u[i] = box.upper()[i];
  }
  return u;
}

}  // namespace detail

/// Exact bound-constrained subproblem solver.
///
/// Segment coefficients are accumulated from prefix sums (pinned coordinates)
/// and suffix sums (moving coordinates) over the sorted breakpoints, so the
/// sweep is O(n log n). On every segment d == 0, because a coordinate either
/// moves with p_i = x0_i or is pinned with q_i = 0.
///
/// With Positivity::required a supremum <= 0 throws NonpositiveSupremumError.
inline SubproblemSolution bcss(const SubproblemInput& in, const ProxState& prox,
                               const BoxDomain& box,
                               Positivity positivity = Positivity::optional) {
  const Vector& x0 = prox.center();
  const Vector& h = in.h;
  detail::require_same_size(h.size(), x0.size(), "bcss");
  detail::require_same_size(h.size(), box.size(), "bcss");
  const Eigen::Index n = h.size();

  SubproblemSolution sol;
  if (h.isZero(0.0)) {
    sol.u = x0;
    sol.e = -in.gamma / prox.q0();
    sol.lambda = sol.e > 0.0 ? 1.0 / sol.e : kInf;
  } else {
    const BreakpointList bp = build_breakpoints(x0, h, box);

    // Coordinates with h_i != 0, ordered by breakpoint.
    std::vector<Eigen::Index> order;
    order.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (h[i] != 0.0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return bp.raw[x] < bp.raw[y]; });
    const std::size_t nz = order.size();

    // pinned_*[j]: contribution of order[0..j) pinned at their bounds.
    // moving_*[j]: contribution of order[j..nz) moving along -h.
    std::vector<double> pinned_a(nz + 1, 0.0), pinned_c(nz + 1, 0.0);
    std::vector<double> moving_a(nz + 1, 0.0), moving_hh(nz + 1, 0.0);
    for (std::size_t j = 0; j < nz; ++j) {
      const Eigen::Index i = order[j];
      const double bound = h[i] > 0.0 ? box.lower()[i] : box.upper()[i];
      double da = 0.0, dc = 0.0;
      if (std::isfinite(bound)) {
        da = -h[i] * bound;
        dc = 0.5 * (bound - x0[i]) * (bound - x0[i]);
      }
      pinned_a[j + 1] = pinned_a[j] + da;
      pinned_c[j + 1] = pinned_c[j] + dc;
    }
    for (std::size_t j = nz; j-- > 0;) {
      const Eigen::Index i = order[j];
      moving_a[j] = moving_a[j + 1] - h[i] * x0[i];
      moving_hh[j] = moving_hh[j + 1] + h[i] * h[i];
    }

    RationalMax best{0.0, -kInf};
    std::size_t pinned = 0;
    for (std::size_t k = 0; k < bp.segment_count(); ++k) {
      const double lo = bp.lambdas[k];
      const double hi = bp.lambdas[k + 1];
      while (pinned < nz && bp.raw[order[pinned]] <= lo) ++pinned;
      RationalCoeffs r;
      r.a = -in.gamma + pinned_a[pinned] + moving_a[pinned];
      r.b = moving_hh[pinned];
      r.c = prox.q0() + pinned_c[pinned];
      r.d = 0.0;
      r.s = 0.5 * moving_hh[pinned];
      const RationalMax m = maximize_rational(r, lo, hi);
      // A constant tail takes over a maximum reached at its left end; it is
      // the same point, and its lambda satisfies lambda * e == 1.
      if (m.value > best.value || (r.constant() && best.lambda == lo)) best = m;
    }

    sol.e = best.value;
    sol.lambda = best.lambda;
    const double fallback = bp.lambdas.size() > 2 ? bp.lambdas[bp.lambdas.size() - 2] : 1.0;
    sol.u = detail::path_point(best.lambda, x0, h, box, fallback);
  }

  if (positivity == Positivity::required && !(sol.e > 0.0)) {
    throw NonpositiveSupremumError("bcss: subproblem supremum " + std::to_string(sol.e) +
                                   " is not positive");
  }
  return sol;
}

/// Subsolver adaptor for the OSGA driver.
struct ExactSubsolver {
  SubproblemSolution operator()(const SubproblemInput& in, const ProxState& prox,
                                const BoxDomain& box) const {
    return bcss(in, prox, box);
  }
};

}  // namespace osga
