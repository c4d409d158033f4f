#pragma once

// Matrix-free linear operators: dense matrices and periodic 2-D blurs.

#include "osga/core.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace osga::problems {

using Matrix = Eigen::MatrixXd;

class LinearOperator {
 public:
  using Map = std::function<Vector(const Vector&)>;

  LinearOperator() = default;
  LinearOperator(Eigen::Index rows, Eigen::Index cols, Map apply, Map adjoint)
      : rows_(rows), cols_(cols), apply_(std::move(apply)), adjoint_(std::move(adjoint)) {}

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  Vector apply(const Vector& x) const {
    osga::detail::require_same_size(x.size(), cols_, "LinearOperator::apply");
    return apply_(x);
  }

  Vector adjoint(const Vector& y) const {
    osga::detail::require_same_size(y.size(), rows_, "LinearOperator::adjoint");
    return adjoint_(y);
  }

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Map apply_;
  Map adjoint_;
};

inline LinearOperator make_dense(Matrix a) {
  auto m = std::make_shared<const Matrix>(std::move(a));
  return LinearOperator(
      m->rows(), m->cols(), [m](const Vector& x) -> Vector { return *m * x; },
      [m](const Vector& y) -> Vector { return m->transpose() * y; });
}

inline LinearOperator make_identity(Eigen::Index n) {
  return LinearOperator(
      n, n, [](const Vector& x) { return x; }, [](const Vector& y) { return y; });
}

/// k x k box filter with weights 1/k^2.
inline Matrix uniform_kernel(int k) {
  if (k < 1) throw DomainError("uniform_kernel: size must be >= 1");
  return Matrix::Constant(k, k, 1.0 / (static_cast<double>(k) * k));
}

/// k x k sampled Gaussian exp(-(r^2 + c^2) / (2 sigma^2)), normalized to sum 1.
inline Matrix gaussian_kernel(int k, double sigma) {
  if (k < 1) throw DomainError("gaussian_kernel: size must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("gaussian_kernel: sigma must be > 0");
  Matrix w(k, k);
  const double c = 0.5 * (k - 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double r2 = (i - c) * (i - c) + (j - c) * (j - c);
      w(i, j) = std::exp(-r2 / (2.0 * sigma * sigma));
    }
  }
  return w / w.sum();
}

/// Periodic 2-D convolution on row-major rows x cols images.
///
///   (Ax)[i,j]   = sum_{a,b} K[a,b] x[i - (a - ca), j - (b - cb)]
///   (A^T y)[i,j] = sum_{a,b} K[a,b] y[i + (a - ca), j + (b - cb)]
///
/// with (ca, cb) the kernel center and indices taken modulo the image size, so
/// an impulse at (i0, j0) maps to a copy of K centered there.
inline LinearOperator make_blur(const Matrix& kernel, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::Index kr = kernel.rows();
  const Eigen::Index kc = kernel.cols();
  if (kr % 2 == 0 || kc % 2 == 0) throw DimensionError("make_blur: kernel dims must be odd");
  if (kr > rows || kc > cols || rows < 1 || cols < 1) {
    throw DimensionError("make_blur: kernel " + std::to_string(kr) + "x" + std::to_string(kc) +
                         " larger than image " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  auto k = std::make_shared<const Matrix>(kernel);
  const Eigen::Index ca = kr / 2;
  const Eigen::Index cb = kc / 2;
  auto wrap = [](Eigen::Index v, Eigen::Index n) { return ((v % n) + n) % n; };

  // sign = -1 convolves, +1 correlates.
  auto sweep = [=](const Vector& in, int sign) {
    Vector out = Vector::Zero(rows * cols);
    for (Eigen::Index a = 0; a < kr; ++a) {
      for (Eigen::Index b = 0; b < kc; ++b) {
        const double w = (*k)(a, b);
        if (w == 0.0) continue;
        const Eigen::Index di = sign * (a - ca);
        const Eigen::Index dj = sign * (b - cb);
        for (Eigen::Index i = 0; i < rows; ++i) {
          const Eigen::Index si = wrap(i + di, rows);
          const double* src = in.data() + si * cols;
          double* dst = out.data() + i * cols;
          const Eigen::Index shift = wrap(dj, cols);
          // dst[j] += w * src[(j + shift) mod cols], split to avoid the modulo.
          for (Eigen::Index j = 0; j < cols - shift; ++j) dst[j] += w * src[j + shift];
          for (Eigen::Index j = cols - shift; j < cols; ++j) dst[j] += w * src[j + shift - cols];
        }
      }
    }
    return out;
  };
  return LinearOperator(
      rows * cols, rows * cols, [sweep](const Vector& x) { return sweep(x, -1); },
      [sweep](const Vector& y) { return sweep(y, +1); });
}

}  // namespace osga::problems
