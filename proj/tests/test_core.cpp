#include "osga/core.hpp"
#include "osga/problems/rng.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using osga::BoxDomain;
using osga::kInf;
using osga::ProxState;
using osga::SubproblemInput;
using osga::Vector;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(BoxDomain, RejectsInvertedOrEmptyBounds) {
  EXPECT_THROW(BoxDomain(vec({1.0}), vec({0.0})), osga::DomainError);
  EXPECT_THROW(BoxDomain(vec({kInf}), vec({kInf})), osga::DomainError);
  EXPECT_THROW(BoxDomain(vec({-kInf}), vec({-kInf})), osga::DomainError);
  EXPECT_THROW(BoxDomain(vec({0.0, 0.0}), vec({1.0})), osga::DimensionError);
  EXPECT_NO_THROW(BoxDomain(vec({0.0}), vec({0.0})));
}

TEST(ProjectToBox, ClipsCoordinates) {
  const BoxDomain box = BoxDomain::uniform(2, 0.0, 1.0);
  EXPECT_EQ(osga::project_to_box(vec({-0.5, 1.5}), box), vec({0.0, 1.0}));
  EXPECT_EQ(osga::project_to_box(vec({0.3, 0.7}), box), vec({0.3, 0.7}));
  const BoxDomain half(vec({0.0}), vec({kInf}));
  EXPECT_EQ(osga::project_to_box(vec({-2.0}), half), vec({0.0}));
  EXPECT_THROW(osga::project_to_box(vec({1.0}), box), osga::DimensionError);
}

TEST(ProjectToBox, IdempotentAndFeasible) {
  osga::problems::SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = osga::testing::random_subproblem(rng, 5);
    Vector y(5);
    for (int i = 0; i < 5; ++i) y[i] = 10.0 * rng.normal();
    const Vector once = osga::project_to_box(y, p.box);
    EXPECT_TRUE(p.box.contains(once));
    EXPECT_EQ(osga::project_to_box(once, p.box), once);
  }
}

TEST(Prox, ValueExamples) {
  EXPECT_DOUBLE_EQ(osga::prox_value(vec({3.0, 4.0}), ProxState(vec({0.0, 0.0}), 1.0)), 13.5);
  EXPECT_DOUBLE_EQ(osga::prox_value(vec({0.2, 0.3}), ProxState(vec({0.2, 0.3}), 0.7)), 0.7);
  EXPECT_DOUBLE_EQ(osga::prox_value(vec({1.0, 2.0}), ProxState(vec({1.0, 1.0}), 0.5)), 1.0);
  EXPECT_THROW(osga::prox_value(vec({1.0}), ProxState(vec({1.0, 1.0}), 0.5)),
               osga::DimensionError);
}

TEST(Prox, GradientExamples) {
  EXPECT_EQ(osga::prox_gradient(vec({2.0, 3.0}), ProxState(vec({2.0, 3.0}), 1.0)),
            vec({0.0, 0.0}));
  EXPECT_EQ(osga::prox_gradient(vec({1.0, -2.0}), ProxState(vec({0.0, 0.0}), 1.0)),
            vec({1.0, -2.0}));
  EXPECT_EQ(osga::prox_gradient(vec({0.0, 3.0}), ProxState(vec({1.0, 1.0}), 1.0)),
            vec({-1.0, 2.0}));
}

TEST(Prox, RejectsNonpositiveConstant) {
  EXPECT_THROW(ProxState(vec({0.0}), 0.0), osga::DomainError);
  EXPECT_THROW(ProxState(vec({0.0}), -1.0), osga::DomainError);
}

TEST(Prox, DefaultConstantUsesUnsquaredNorm) {
  const Vector x0 = vec({3.0, 4.0});
  EXPECT_DOUBLE_EQ(ProxState::default_q0(x0),
                   2.5 + std::numeric_limits<double>::epsilon());
  EXPECT_GT(ProxState::default_q0(vec({0.0, 0.0})), 0.0);
}

TEST(Prox, QuadraticIdentityOnRandomPairs) {
  osga::problems::SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Vector c(4), x(4), z(4);
    for (int i = 0; i < 4; ++i) {
      c[i] = rng.normal();
      x[i] = rng.normal();
      z[i] = rng.normal();
    }
    const ProxState prox(c, 0.1 + rng.uniform());
    const double lhs = osga::prox_value(z, prox);
    const double rhs = osga::prox_value(x, prox) + osga::prox_gradient(x, prox).dot(z - x) +
                       0.5 * (z - x).squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(EValue, Examples) {
  const ProxState unit(vec({0.0}), 1.0);
  EXPECT_DOUBLE_EQ(osga::e_value(SubproblemInput{-1.0, vec({0.0})}, vec({0.0}), unit), 1.0);
  EXPECT_DOUBLE_EQ(osga::e_value(SubproblemInput{0.0, vec({1.0})}, vec({2.0}), unit), -2.0 / 3.0);
  const double x = std::sqrt(3.0) - 1.0;
  EXPECT_NEAR(osga::e_value(SubproblemInput{-1.0, vec({-1.0})}, vec({x}), unit),
              (1.0 + std::sqrt(3.0)) / 2.0, 1e-15);
}

TEST(EValue, DenominatorBoundedByQ0) {
  osga::problems::SplitMix64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = osga::testing::random_subproblem(rng, 3, false);
    Vector x(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = p.box.lower()[i] + (p.box.upper()[i] - p.box.lower()[i]) * rng.uniform();
    }
    EXPECT_GE(osga::prox_value(x, p.prox), p.prox.q0());
  }
}

}  // namespace
