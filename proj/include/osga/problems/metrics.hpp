#pragma once

#include "osga/core.hpp"
#include "osga/problems/tv.hpp"

#include <cmath>

namespace osga::problems {

/// 20 log10(sqrt(mn) / ||x - x_t||_F) for pixels in [0, 1]; +inf when x == x_t.
inline double psnr(const Vector& x, const Vector& truth) {
  osga::detail::require_same_size(x.size(), truth.size(), "psnr");
  const double err = (x - truth).norm();
  if (err == 0.0) return kInf;
  return 20.0 * std::log10(std::sqrt(static_cast<double>(x.size())) / err);
}

/// 20 log10(||y - x_t||_F / ||x - x_t||_F); +inf when x == x_t.
inline double isnr(const Vector& x, const Vector& observed, const Vector& truth) {
  osga::detail::require_same_size(x.size(), truth.size(), "isnr");
  osga::detail::require_same_size(observed.size(), truth.size(), "isnr");
  const double err = (x - truth).norm();
  if (err == 0.0) return kInf;
  return 20.0 * std::log10((observed - truth).norm() / err);
}

inline double psnr(const ImageBuffer& x, const ImageBuffer& truth) {
  return psnr(x.pixels, truth.pixels);
}

inline double isnr(const ImageBuffer& x, const ImageBuffer& observed, const ImageBuffer& truth) {
  return isnr(x.pixels, observed.pixels, truth.pixels);
}

/// Relative error of function values (f_k - f_hat) / (f_0 - f_hat).
inline double delta_rel(double f_k, double f_0, double f_hat) {
  if (!(f_0 > f_hat)) throw DomainError("delta_rel: requires f_0 > f_hat");
  return (f_k - f_hat) / (f_0 - f_hat);
}

}  // namespace osga::problems
