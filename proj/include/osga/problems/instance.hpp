#pragma once

// Regularized regression and deblurring objectives over a box, and the seeded
// ill-conditioned generator for the regression suite.

#include "osga/core.hpp"
#include "osga/problems/operators.hpp"
#include "osga/problems/rng.hpp"
#include "osga/problems/tv.hpp"

#include <Eigen/QR>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace osga::problems {

/// Data term (l22: 0.5 ||Ax - b||^2, l1: ||Ax - b||_1) plus weighted
/// regularizer (l22r: 0.5 ||x||^2, l1r: ||x||_1, itv / atv: total variation).
enum class ObjectiveKind { l22l22r, l22l1r, l1l22r, l1l1r, l22itv, l1itv, l22atv, l1atv };

inline constexpr std::array<std::pair<ObjectiveKind, std::string_view>, 8> kObjectiveNames{{
    {ObjectiveKind::l22l22r, "l22l22r"},
    {ObjectiveKind::l22l1r, "l22l1r"},
    {ObjectiveKind::l1l22r, "l1l22r"},
    {ObjectiveKind::l1l1r, "l1l1r"},
    {ObjectiveKind::l22itv, "l22itv"},
    {ObjectiveKind::l1itv, "l1itv"},
    {ObjectiveKind::l22atv, "l22atv"},
    {ObjectiveKind::l1atv, "l1atv"},
}};

inline std::string_view to_string(ObjectiveKind k) {
  for (const auto& [kind, name] : kObjectiveNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

inline std::optional<ObjectiveKind> parse_objective_kind(std::string_view name) {
  for (const auto& [kind, n] : kObjectiveNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

inline bool is_tv(ObjectiveKind k) {
  return k == ObjectiveKind::l22itv || k == ObjectiveKind::l1itv || k == ObjectiveKind::l22atv ||
         k == ObjectiveKind::l1atv;
}

inline bool has_l1_data(ObjectiveKind k) {
  return k == ObjectiveKind::l1l22r || k == ObjectiveKind::l1l1r || k == ObjectiveKind::l1itv ||
         k == ObjectiveKind::l1atv;
}

struct ProblemInstance {
  ObjectiveKind kind = ObjectiveKind::l22l22r;
  LinearOperator op;
  Vector b;
  double reg_weight = 1.0;
  BoxDomain box;
  Vector x0;                    ///< starting point / prox center, inside the box
  std::optional<double> f_hat;  ///< known or reference minimum
  Eigen::Index image_rows = 0;  ///< image shape for TV kinds
  Eigen::Index image_cols = 0;
  std::optional<ImageBuffer> truth;     ///< clean image (deblurring)
  std::optional<ImageBuffer> observed;  ///< degraded observation (deblurring)

  Eigen::Index dimension() const { return op.cols(); }
};

/// Seeded ill-conditioned regression instance:
///   A = U diag(s) V^T, U, V orthonormal factors of seeded Gaussian matrices,
///   s_i = 10^(-6 i / (n-1)) (condition number 1e6),
///   b = A x_true + 0.1 * uniform noise, x_true uniform on [0, 1],
///   box [0.05, 0.95]^n, x0 = 0.5, unit regularizer weight.
/// Draw order: U entries, V entries (row-major), x_true, noise.
inline ProblemInstance make_synthetic(ObjectiveKind kind, Eigen::Index n, std::uint64_t seed) {
  if (is_tv(kind)) {
    throw DomainError("make_synthetic: kind " + std::string(to_string(kind)) +
                      " is an imaging model");
  }
  if (n < 2) throw DomainError("make_synthetic: n must be >= 2");

  SplitMix64 rng(seed);
  auto gaussian = [&] {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    }
    return Matrix(Eigen::HouseholderQR<Matrix>(g).householderQ());
  };
  const Matrix u = gaussian();
  const Matrix v = gaussian();
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s[i] = std::pow(10.0, -6.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  Matrix a = u * s.asDiagonal() * v.transpose();

  Vector x_true(n);
  for (Eigen::Index i = 0; i < n; ++i) x_true[i] = rng.uniform();
  Vector b = a * x_true;
  for (Eigen::Index i = 0; i < n; ++i) b[i] += 0.1 * rng.uniform();

  ProblemInstance inst;
  inst.kind = kind;
  inst.op = make_dense(std::move(a));
  inst.b = std::move(b);
  inst.reg_weight = 1.0;
  inst.box = BoxDomain::uniform(n, 0.05, 0.95);
  inst.x0 = Vector::Constant(n, 0.5);
  return inst;
}

namespace detail {

inline Vector sign(const Vector& v) {
  return v.unaryExpr([](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
}

}  // namespace detail

/// f and a subgradient for the instance's objective; sign(0) = 0 throughout.
inline FirstOrderOracle objective_oracle(const ProblemInstance& inst) {
  if (is_tv(inst.kind)) {
    osga::detail::require_same_size(inst.image_rows * inst.image_cols, inst.dimension(),
                                    "objective_oracle image shape");
  }
  return [op = inst.op, b = inst.b, kind = inst.kind, w = inst.reg_weight,
          rows = inst.image_rows, cols = inst.image_cols](const Vector& x, Vector& g) {
    const Vector r = op.apply(x) - b;
    double f = 0.0;
    if (has_l1_data(kind)) {
      f = r.lpNorm<1>();
      g = op.adjoint(detail::sign(r));
    } else {
      f = 0.5 * r.squaredNorm();
      g = op.adjoint(r);
    }
    switch (kind) {
      case ObjectiveKind::l22l22r:
      case ObjectiveKind::l1l22r:
        f += w * 0.5 * x.squaredNorm();
        g += w * x;
        break;
      case ObjectiveKind::l22l1r:
      case ObjectiveKind::l1l1r:
        f += w * x.lpNorm<1>();
        g += w * detail::sign(x);
        break;
      case ObjectiveKind::l22itv:
      case ObjectiveKind::l1itv:
        f += w * itv_value(x, rows, cols);
        g += w * itv_subgradient(x, rows, cols);
        break;
      case ObjectiveKind::l22atv:
      case ObjectiveKind::l1atv:
        f += w * atv_value(x, rows, cols);
        g += w * atv_subgradient(x, rows, cols);
        break;
    }
    return f;
  };
}

}  // namespace osga::problems
