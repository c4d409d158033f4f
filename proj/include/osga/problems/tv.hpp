#pragma once

// Grayscale images and discrete total variation.

#include "osga/core.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace osga::problems {

/// Row-major grayscale image; pixel (i, j) is pixels[i * cols + j].
struct ImageBuffer {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Vector pixels;

  ImageBuffer() = default;
  ImageBuffer(Eigen::Index r, Eigen::Index c, Vector px) : rows(r), cols(c), pixels(std::move(px)) {
    osga::detail::require_same_size(pixels.size(), r * c, "ImageBuffer");
  }
  ImageBuffer(Eigen::Index r, Eigen::Index c, double fill)
      : rows(r), cols(c), pixels(Vector::Constant(r * c, fill)) {}

  double& operator()(Eigen::Index i, Eigen::Index j) { return pixels[i * cols + j]; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return pixels[i * cols + j]; }

  friend bool operator==(const ImageBuffer& a, const ImageBuffer& b) {
    return a.rows == b.rows && a.cols == b.cols && a.pixels == b.pixels;
  }
};

namespace detail {

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline void check_tv_shape(Eigen::Index rows, Eigen::Index cols, Eigen::Index size) {
  if (rows < 2 || cols < 2) {
    throw DimensionError("total variation needs at least a 2x2 image, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  osga::detail::require_same_size(size, rows * cols, "total variation");
}

}  // namespace detail

// The flat-vector overloads take the image shape explicitly; the solver works
// on flattened images.

/// Isotropic TV: sqrt((down diff)^2 + (right diff)^2) over pixels with both
/// neighbours, plus |down diff| along the last column and |right diff| along
/// the last row.
inline double itv_value(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  detail::check_tv_shape(rows, cols, x.size());
  double tv = 0.0;
  for (Eigen::Index i = 0; i + 1 < rows; ++i) {
    for (Eigen::Index j = 0; j + 1 < cols; ++j) {
      const double c = x[i * cols + j];
      const double dv = x[(i + 1) * cols + j] - c;
      const double dh = x[i * cols + j + 1] - c;
      tv += std::sqrt(dv * dv + dh * dh);
    }
    tv += std::abs(x[(i + 1) * cols + cols - 1] - x[i * cols + cols - 1]);
  }
  const Eigen::Index last = (rows - 1) * cols;
  for (Eigen::Index j = 0; j + 1 < cols; ++j) tv += std::abs(x[last + j + 1] - x[last + j]);
  return tv;
}

/// Subgradient of itv_value; terms of zero magnitude contribute 0.
inline Vector itv_subgradient(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  detail::check_tv_shape(rows, cols, x.size());
  Vector g = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < rows; ++i) {
    for (Eigen::Index j = 0; j + 1 < cols; ++j) {
      const Eigen::Index p = i * cols + j;
      const Eigen::Index down = p + cols;
      const Eigen::Index right = p + 1;
      const double dv = x[down] - x[p];
      const double dh = x[right] - x[p];
      const double t = std::sqrt(dv * dv + dh * dh);
      if (t > 0.0) {
        g[down] += dv / t;
        g[right] += dh / t;
        g[p] -= (dv + dh) / t;
      }
    }
    const Eigen::Index p = i * cols + cols - 1;
    const double s = detail::sign(x[p + cols] - x[p]);
    g[p + cols] += s;
    g[p] -= s;
  }
  const Eigen::Index last = (rows - 1) * cols;
  for (Eigen::Index j = 0; j + 1 < cols; ++j) {
    const double s = detail::sign(x[last + j + 1] - x[last + j]);
    g[last + j + 1] += s;
    g[last + j] -= s;
  }
  return g;
}

/// Anisotropic TV: sum of |down diff| and |right diff| over all pixel pairs.
inline double atv_value(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  detail::check_tv_shape(rows, cols, x.size());
  double tv = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Eigen::Index p = i * cols + j;
      if (i + 1 < rows) tv += std::abs(x[p + cols] - x[p]);
      if (j + 1 < cols) tv += std::abs(x[p + 1] - x[p]);
    }
  }
  return tv;
}

inline Vector atv_subgradient(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  detail::check_tv_shape(rows, cols, x.size());
  Vector g = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Eigen::Index p = i * cols + j;
      if (i + 1 < rows) {
        const double s = detail::sign(x[p + cols] - x[p]);
        g[p + cols] += s;
        g[p] -= s;
      }
      if (j + 1 < cols) {
        const double s = detail::sign(x[p + 1] - x[p]);
        g[p + 1] += s;
        g[p] -= s;
      }
    }
  }
  return g;
}

inline double itv_value(const ImageBuffer& img) { return itv_value(img.pixels, img.rows, img.cols); }
inline Vector itv_subgradient(const ImageBuffer& img) {
  return itv_subgradient(img.pixels, img.rows, img.cols);
}
inline double atv_value(const ImageBuffer& img) { return atv_value(img.pixels, img.rows, img.cols); }
inline Vector atv_subgradient(const ImageBuffer& img) {
  return atv_subgradient(img.pixels, img.rows, img.cols);
}

}  // namespace osga::problems
