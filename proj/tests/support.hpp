#pragma once

// Shared helpers for the unit and acceptance tests: seeded random subproblem
// instances and a brute-force grid maximizer of E used as an independent oracle.

#include "osga/core.hpp"
#include "osga/problems/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace osga::testing {

struct RandomSubproblem {
  SubproblemInput input;
  ProxState prox{Vector::Zero(1), 1.0};
  BoxDomain box = BoxDomain::unbounded(1);
};

/// Random box with mixed finite and infinite sides, centre inside the box, and
/// gamma chosen so that E(x0) = t > 0 (hence sup E > 0).
inline RandomSubproblem random_subproblem(problems::SplitMix64& rng, Eigen::Index n,
                                          bool allow_infinite = true) {
  Vector lo(n), hi(n), x0(n), h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double centre = 4.0 * rng.uniform() - 2.0;
    const double width = 0.2 + 3.0 * rng.uniform();
    lo[i] = centre - width * rng.uniform();
    hi[i] = lo[i] + width;
    if (allow_infinite) {
      const double r = rng.uniform();
      if (r < 0.15) lo[i] = -kInf;
      else if (r < 0.3) hi[i] = kInf;
      else if (r < 0.36) {
        lo[i] = -kInf;
        hi[i] = kInf;
      }
    }
    double a = lo[i], b = hi[i];
    if (!std::isfinite(a) && !std::isfinite(b)) {
      a = centre - 1.0;
      b = centre + 1.0;
    } else if (!std::isfinite(a)) {
      a = b - 2.0;
    } else if (!std::isfinite(b)) {
      b = a + 2.0;
    }
    x0[i] = a + (b - a) * rng.uniform();
    // A few exact zeros exercise the h_i == 0 coordinates.
    h[i] = rng.uniform() < 0.1 ? 0.0 : 2.0 * rng.normal();
  }
  const double q0 = 0.1 + 2.0 * rng.uniform();
  const double t = 0.3 + 2.0 * rng.uniform();
  RandomSubproblem out;
  out.box = BoxDomain(lo, hi);
  out.prox = ProxState(x0, q0);
  out.input = SubproblemInput{-h.dot(x0) - q0 * t, h};
  return out;
}

namespace detail {

/// Per-axis search window. Infinite sides are cut at radius 2 ||h|| / E(x0),
/// outside of which E < E(x0) (the numerator grows at most linearly in
/// r = ||x - x0|| while Q grows like r^2 / 2).
inline std::vector<std::pair<double, double>> search_window(const RandomSubproblem& p) {
  const Vector& x0 = p.prox.center();
  const double e0 = e_value(p.input, x0, p.prox);
  const double radius = e0 > 0.0 ? 2.0 * p.input.h.norm() / e0 + 1e-9 : 1e3;
  std::vector<std::pair<double, double>> w;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    w.emplace_back(std::max(p.box.lower()[i], x0[i] - radius),
                   std::min(p.box.upper()[i], x0[i] + radius));
  }
  return w;
}

inline double axis_point(const std::pair<double, double>& w, int k, int points) {
  if (points == 1) return w.first;
  return w.first + (w.second - w.first) * static_cast<double>(k) / (points - 1);
}

/// Exact maximum of E over the last coordinate t in [lo, hi] with the other
/// coordinates fixed: E(t) = (alpha - h t) / (beta + (t - c)^2 / 2). The
/// stationary points solve (h/2) s^2 - alpha' s - h beta = 0, s = t - c.
inline double last_axis_max(double alpha, double beta, double h, double c, double lo, double hi,
                            double& arg) {
  auto value = [&](double t) { return (alpha - h * t) / (beta + 0.5 * (t - c) * (t - c)); };
  double best = value(lo);
  arg = lo;
  auto consider = [&](double t) {
    t = std::clamp(t, lo, hi);
    const double v = value(t);
    if (v > best) {
      best = v;
      arg = t;
    }
  };
  consider(hi);
  const double ap = alpha - h * c;
  if (h == 0.0) {
    if (ap > 0.0) consider(c);
  } else {
    const double root = std::sqrt(ap * ap + 2.0 * h * h * beta);
    consider(c + (ap + root) / h);
    consider(c + (ap - root) / h);
  }
  return best;
}

}  // namespace detail

/// Maximum of E over a tensor grid with `points` nodes per axis on the search
/// window, followed by `zoom_passes` refinements of `zoom_points` nodes per axis
/// around the incumbent. For n == 3 the first pass grids the first two axes and
/// maximizes the third in closed form.
inline double grid_max_e(const RandomSubproblem& p, int points = 2001, int zoom_passes = 8,
                         int zoom_points = 41) {
  const Eigen::Index n = p.input.h.size();
  const Vector& x0 = p.prox.center();
  const Vector& h = p.input.h;
  auto window = detail::search_window(p);
  Vector best_x = x0;
  double best = e_value(p.input, x0, p.prox);

  // Coarse pass.
  Vector x = x0;
  if (n <= 2) {
    const double q0 = p.prox.q0(), gamma = p.input.gamma;
    const int outer = n == 2 ? points : 1;
    for (int a = 0; a < outer; ++a) {
      double base_num = -gamma, base_den = q0;
      if (n == 2) {
        const double y = detail::axis_point(window[1], a, points);
        base_num -= h[1] * y;
        base_den += 0.5 * (y - x0[1]) * (y - x0[1]);
      }
      for (int b = 0; b < points; ++b) {
        const double t = detail::axis_point(window[0], b, points);
        const double v = (base_num - h[0] * t) / (base_den + 0.5 * (t - x0[0]) * (t - x0[0]));
        if (v > best) {
          best = v;
          best_x[0] = t;
          if (n == 2) best_x[1] = detail::axis_point(window[1], a, points);
        }
      }
    }
  } else {
    for (int a = 0; a < points; ++a) {
      x[0] = detail::axis_point(window[0], a, points);
      for (int b = 0; b < points; ++b) {
        x[1] = detail::axis_point(window[1], b, points);
        const double d0 = x[0] - x0[0], d1 = x[1] - x0[1];
        const double alpha = -p.input.gamma - h[0] * x[0] - h[1] * x[1];
        const double beta = p.prox.q0() + 0.5 * (d0 * d0 + d1 * d1);
        double t = 0.0;
        const double v = detail::last_axis_max(alpha, beta, h[2], x0[2], window[2].first,
                                               window[2].second, t);
        if (v > best) {
          best = v;
          best_x = x;
          best_x[2] = t;
        }
      }
    }
  }

  // Refinement around the incumbent; E is quasiconcave where positive, so the
  // global maximizer stays within two cells of the best node.
  std::vector<double> cell(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    cell[i] = (window[i].second - window[i].first) / std::max(points - 1, 1);
  }
  for (int pass = 0; pass < zoom_passes; ++pass) {
    std::vector<std::pair<double, double>> local;
    for (Eigen::Index i = 0; i < n; ++i) {
      local.emplace_back(std::max(window[i].first, best_x[i] - 2.0 * cell[i]),
                         std::min(window[i].second, best_x[i] + 2.0 * cell[i]));
      cell[i] = (local.back().second - local.back().first) / (zoom_points - 1);
    }
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      for (Eigen::Index i = 0; i < n; ++i) x[i] = detail::axis_point(local[i], idx[i], zoom_points);
      const double v = e_value(p.input, x, p.prox);
      if (v > best) {
        best = v;
        best_x = x;
      }
      Eigen::Index i = 0;
      while (i < n && ++idx[i] == zoom_points) idx[i++] = 0;
      if (i == n) break;
    }
  }
  return best;
}

inline bool in_box(const Vector& x, const BoxDomain& box) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= box.lower()[i] && x[i] <= box.upper()[i])) return false;
  }
  return true;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace osga::testing
