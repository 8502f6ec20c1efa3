#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phasecon/metric.hpp"

using namespace phasecon;

TEST(Metric, MinkowskiIsExactlyEta) {
  const MetricField eta = MetricField::minkowski();
  const Tensor2 g = eta.at(SpacetimeEvent(5, -3, 2, 1));
  EXPECT_EQ(g(0, 0), -1.0);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(g(i, i), 1.0);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (m != n) EXPECT_EQ(g(m, n), 0.0);
  EXPECT_EQ(g.symmetry(), Symmetry::Symmetric);
  EXPECT_TRUE(eta.is_flat());
}

TEST(Metric, SchwarzschildComponents) {
  const double M = 1.0, r = 10.0, th = 1.1;
  const Tensor2 g = MetricField::schwarzschild(M).at(SpacetimeEvent(0, r, th, 0.3));
  EXPECT_DOUBLE_EQ(g(0, 0), -(1 - 2 * M / r));
  EXPECT_DOUBLE_EQ(g(1, 1), 1 / (1 - 2 * M / r));
  EXPECT_DOUBLE_EQ(g(2, 2), r * r);
  EXPECT_DOUBLE_EQ(g(3, 3), r * r * std::sin(th) * std::sin(th));
}

TEST(Metric, SchwarzschildHorizonGuard) {
  const MetricField g = MetricField::schwarzschild(1.0);
  EXPECT_THROW(g.at(SpacetimeEvent(0, 2.0, 1.0, 0)), OutsideDomain);
  EXPECT_THROW(g.at(SpacetimeEvent(0, 1.5, 1.0, 0)), OutsideDomain);
  EXPECT_THROW(g.at(SpacetimeEvent(0, 2.0 * (1 + 1e-7), 1.0, 0)), OutsideDomain);
  EXPECT_NO_THROW(g.at(SpacetimeEvent(0, 2.0 * (1 + 1e-5), 1.0, 0)));
}

TEST(Metric, WeakFieldComponents) {
  const double M = 1.0;
  const SpacetimeEvent x(0, 30, 40, 0);  // r = 50
  const Tensor2 g = MetricField::weak_field(M).at(x);
  const double phi = -M / 50.0;
  EXPECT_DOUBLE_EQ(g(0, 0), -(1 + 2 * phi));
  EXPECT_DOUBLE_EQ(g(1, 1), 1 - 2 * phi);
  EXPECT_DOUBLE_EQ(g(3, 3), 1 - 2 * phi);
  EXPECT_THROW(MetricField::weak_field(M).at(SpacetimeEvent(0, 0, 0, 0)), OutsideDomain);
}

TEST(Metric, InverseTimesMetricIsIdentity) {
  const MetricField g = MetricField::schwarzschild(2.0);
  const SpacetimeEvent x(0, 7.5, 0.8, 1.0);
  const Tensor2 a = g.at(x), b = g.inverse_at(x);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(m, k) * b(k, n);
      EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-14);
    }
  EXPECT_NEAR(determinant(a), -std::pow(7.5, 4) * std::sin(0.8) * std::sin(0.8), 1e-9);
}

TEST(Metric, ClosedFormDerivativeMatchesNumeric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(4.0, 60.0), th(0.3, 2.8), c(-20.0, 20.0);
  for (const MetricField& g : {MetricField::schwarzschild(1.0), MetricField::weak_field(1.0)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const SpacetimeEvent x = g.name().starts_with("schwarzschild")
                                   ? SpacetimeEvent(0, r(rng), th(rng), 1.0)
                                   : SpacetimeEvent(0, c(rng), c(rng), 5.0 + r(rng));
      const Tensor3 a = g.derivative_at(x), b = g.numeric_derivative_at(x);
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n)
            ASSERT_NEAR(a(l, m, n), b(l, m, n), 1e-8 * std::max(1.0, std::abs(a(l, m, n)))) << g.name();
    }
  }
}

TEST(Metric, NonSymmetricEvaluatorRejected) {
  const MetricField bad("bad", [](const SpacetimeEvent&) {
    Tensor2 g = minkowski_eta();
    Tensor2 h = covariant2();
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) h(m, n) = g(m, n);
    h(0, 1) = 0.1;
    return h;
  });
  EXPECT_THROW(bad.at(SpacetimeEvent()), SymmetryViolation);
}
