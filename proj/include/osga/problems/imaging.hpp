#pragma once

// Deblurring test problems: degradation pipeline and a synthetic test image.

#include "osga/core.hpp"
#include "osga/problems/instance.hpp"
#include "osga/problems/operators.hpp"
#include "osga/problems/rng.hpp"
#include "osga/problems/tv.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace osga::problems {

struct NoiseSpec {
  enum class Kind { gaussian, salt_pepper };
  Kind kind = Kind::gaussian;
  double level = 0.0;  ///< standard deviation, or fraction of corrupted pixels

  static NoiseSpec gaussian(double sigma) { return {Kind::gaussian, sigma}; }
  static NoiseSpec salt_pepper(double fraction) { return {Kind::salt_pepper, fraction}; }
};

/// Default Gaussian noise level for the l2^2 deblurring models: 10^(-3/2).
inline const double kDefaultGaussianSigma = std::pow(10.0, -1.5);

/// y = blur(x_t) + noise. Salt-and-pepper replaces exactly round(level * mn)
/// distinct pixels by 0 or 1 with equal probability. The result is not clipped.
inline ImageBuffer degrade(const ImageBuffer& truth, const LinearOperator& blur,
                           const NoiseSpec& noise, std::uint64_t seed) {
  if (!std::isfinite(noise.level) || noise.level < 0.0 ||
      (noise.kind == NoiseSpec::Kind::salt_pepper && noise.level > 1.0)) {
    throw DomainError("degrade: invalid noise level " + std::to_string(noise.level));
  }
  ImageBuffer y(truth.rows, truth.cols, blur.apply(truth.pixels));
  SplitMix64 rng(seed);
  const auto count = static_cast<std::uint64_t>(y.pixels.size());
  if (noise.kind == NoiseSpec::Kind::gaussian) {
    if (noise.level > 0.0) {
      for (Eigen::Index i = 0; i < y.pixels.size(); ++i) y.pixels[i] += noise.level * rng.normal();
    }
  } else {
    const auto corrupt = static_cast<std::uint64_t>(std::llround(noise.level * count));
    std::vector<std::uint64_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint64_t t = 0; t < corrupt; ++t) {
      const std::uint64_t j = t + rng.below(count - t);
      std::swap(idx[t], idx[j]);
      y.pixels[static_cast<Eigen::Index>(idx[t])] = rng.uniform() < 0.5 ? 0.0 : 1.0;
    }
  }
  return y;
}

/// Piecewise-smooth test image with values in [0, 1]: a shaded background,
/// a bright rectangle, a mid-gray disk and a dark square.
inline ImageBuffer synthetic_phantom(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 2 || cols < 2) throw DimensionError("synthetic_phantom: image must be >= 2x2");
  ImageBuffer img(rows, cols, 0.0);
  const double r = static_cast<double>(rows);
  const double c = static_cast<double>(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double y = (static_cast<double>(i) + 0.5) / r;
      const double x = (static_cast<double>(j) + 0.5) / c;
      double v = 0.15 + 0.2 * x;
      if (y > 0.15 && y < 0.45 && x > 0.1 && x < 0.55) v = 0.9;
      const double dy = y - 0.65, dx = x - 0.65;
      if (dx * dx + dy * dy < 0.22 * 0.22) v = 0.55;
      if (y > 0.6 && y < 0.72 && x > 0.58 && x < 0.7) v = 0.0;
      if (y > 0.7 && y < 0.9 && x > 0.12 && x < 0.35) v = 0.75 - 0.5 * (y - 0.7);
      img(i, j) = v;
    }
  }
  return img;
}

/// Box-constrained deblurring model on [0, 1]^{mn}: data term per kind plus
/// reg_weight * TV. Starts from the observation clipped to the box.
inline ProblemInstance make_deblur(ObjectiveKind kind, const ImageBuffer& truth,
                                   const Matrix& kernel, const NoiseSpec& noise,
                                   double reg_weight, std::uint64_t seed) {
  if (!is_tv(kind)) {
    throw DomainError("make_deblur: kind " + std::string(to_string(kind)) +
                      " is not a total-variation model");
  }
  if (!(reg_weight >= 0.0)) throw DomainError("make_deblur: reg_weight must be >= 0");
  LinearOperator blur = make_blur(kernel, truth.rows, truth.cols);
  ImageBuffer observed = degrade(truth, blur, noise, seed);

  ProblemInstance inst;
  inst.kind = kind;
  inst.op = std::move(blur);
  inst.b = observed.pixels;
  inst.reg_weight = reg_weight;
  inst.box = BoxDomain::uniform(truth.pixels.size(), 0.0, 1.0);
  inst.x0 = project_to_box(observed.pixels, inst.box);
  inst.image_rows = truth.rows;
  inst.image_cols = truth.cols;
  inst.truth = truth;
  inst.observed = std::move(observed);
  return inst;
}

}  // namespace osga::problems
