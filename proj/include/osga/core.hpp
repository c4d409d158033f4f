#pragma once

// Shared domain types: boxes, the quadratic prox-function, first-order
// oracles and the rational objective E maximized by the subproblem solvers.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace osga {

using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// The subproblem supremum came out <= 0 where a positive value was required.
class NonpositiveSupremumError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BoxDomain
// ---------------------------------------------------------------------------

/// Axis-parallel box [lower, upper]. Entries may be -inf / +inf.
class BoxDomain {
 public:
  BoxDomain() = default;

  BoxDomain(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    detail::require_same_size(lower_.size(), upper_.size(), "BoxDomain");
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
      if (std::isnan(lower_[i]) || std::isnan(upper_[i])) {
        throw DomainError("BoxDomain: NaN bound at index " + std::to_string(i));
      }
      if (lower_[i] == kInf || upper_[i] == -kInf || lower_[i] > upper_[i]) {
        throw DomainError("BoxDomain: empty interval at index " + std::to_string(i));
      }
    }
  }

  static BoxDomain uniform(Eigen::Index n, double lo, double hi) {
    return BoxDomain(Vector::Constant(n, lo), Vector::Constant(n, hi));
  }

  static BoxDomain unbounded(Eigen::Index n) { return uniform(n, -kInf, kInf); }

  Eigen::Index size() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool contains(const Vector& x) const {
    if (x.size() != size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    }
    return true;
  }

 private:
  Vector lower_;
  Vector upper_;
};

/// Componentwise clip of y into the box. Infinite bounds pass through min/max.
inline Vector project_to_box(const Vector& y, const BoxDomain& box) {
  detail::require_same_size(y.size(), box.size(), "project_to_box");
  return y.cwiseMin(box.upper()).cwiseMax(box.lower());
}

// ---------------------------------------------------------------------------
// ProxState: Q(x) = q0 + 0.5 * ||x - center||^2
// ---------------------------------------------------------------------------

class ProxState {
 public:
  ProxState() = default;

  ProxState(Vector center, double q0) : center_(std::move(center)), q0_(q0) {
    if (!(q0_ > 0.0) || !std::isfinite(q0_)) {
      throw DomainError("ProxState: q0 must be positive and finite");
    }
  }

  /// Default constant used by the benchmarks: 0.5 * ||x0||_2 + machine epsilon.
  /// The norm is deliberately not squared.
  static double default_q0(const Vector& x0) {
    return 0.5 * x0.norm() + std::numeric_limits<double>::epsilon();
  }

  const Vector& center() const { return center_; }
  double q0() const { return q0_; }
  Eigen::Index size() const { return center_.size(); }

 private:
  Vector center_;
  double q0_ = 1.0;
};

inline double prox_value(const Vector& x, const ProxState& prox) {
  detail::require_same_size(x.size(), prox.size(), "prox_value");
  return prox.q0() + 0.5 * (x - prox.center()).squaredNorm();
}

inline Vector prox_gradient(const Vector& x, const ProxState& prox) {
  detail::require_same_size(x.size(), prox.size(), "prox_gradient");
  return x - prox.center();
}

// ---------------------------------------------------------------------------
// First-order oracle
// ---------------------------------------------------------------------------

/// Evaluates f(x) and writes a subgradient into g (resized as needed).
/// Must be pure: the solvers count evaluations themselves.
using FirstOrderOracle = std::function<double(const Vector& x, Vector& g)>;

// ---------------------------------------------------------------------------
// Subproblem: sup_{x in box} E(x) = -(gamma + <h, x>) / Q(x)
// ---------------------------------------------------------------------------

struct SubproblemInput {
  double gamma = 0.0;
  Vector h;
};

struct SubproblemSolution {
  Vector u;              ///< maximizer, inside the box
  double e = 0.0;        ///< E(gamma, h), the supremum
  double lambda = kInf;  ///< path parameter with u = proj(x0 - lambda h); 1/e when e > 0
  bool converged = true; ///< false only for an iterative solve that hit its iteration cap
};

inline double e_value(const SubproblemInput& in, const Vector& x, const ProxState& prox) {
  detail::require_same_size(in.h.size(), x.size(), "e_value");
  return -(in.gamma + in.h.dot(x)) / prox_value(x, prox);
}

}  // namespace osga
