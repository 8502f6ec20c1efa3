#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "../oracles.hpp"
#include "phasecon/curvature.hpp"

using namespace phasecon;

namespace {

const double kHalfPi = std::numbers::pi / 2;

void expect_gamma_matches_oracle(const MetricField& g, double M, double r, double th,
                                 double tol) {
  const Tensor3 G = christoffel(g, SpacetimeEvent(0, r, th, 0.4));
  const auto ref = oracle::schwarzschild_gamma_table(M, r, th);
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        ASSERT_NEAR(G(a, m, n), ref[a][m][n], tol) << a << m << n << " r=" << r;
}

}  // namespace

TEST(Christoffel, FlatIsZero) {
  const Tensor3 G = christoffel(MetricField::minkowski(), SpacetimeEvent(1, 2, 3, 4));
  EXPECT_EQ(G.max_abs(), 0.0);
}

TEST(Christoffel, SchwarzschildSpotValues) {
  const Tensor3 G = christoffel(MetricField::schwarzschild(1.0), SpacetimeEvent(0, 10, kHalfPi, 0));
  EXPECT_NEAR(G(1, 0, 0), 0.008, 1e-8);  // (M/r^2)(1 - 2M/r)
  EXPECT_NEAR(G(2, 1, 2), 0.1, 1e-8);    // 1/r
}

TEST(Christoffel, ClosedFormDerivativesMatchOracle) {
  const MetricField g = MetricField::schwarzschild(1.0);
  for (double r : {4.0, 10.0, 37.0, 100.0})
    for (double th : {0.4, kHalfPi, 2.5}) expect_gamma_matches_oracle(g, 1.0, r, th, 1e-8);
}

TEST(Christoffel, NumericDerivativesMatchOracle) {
  const MetricField g = MetricField::schwarzschild(1.0).without_closed_form_derivative();
  EXPECT_FALSE(g.has_closed_form_derivative());
  for (double r : {4.0, 10.0, 37.0, 100.0})
    for (double th : {0.4, kHalfPi, 2.5}) expect_gamma_matches_oracle(g, 1.0, r, th, 1e-6);
}

TEST(Christoffel, WeakFieldStaticComponent) {
  // hand derivation for g00 = -(1+2Phi), gij = (1-2Phi) delta: Gamma^i_00 = d_i Phi / (1 - 2Phi)
  const double M = 1.0;
  const SpacetimeEvent x(0, 3, -4, 12);  // r = 13
  const double r = 13.0, phi = -M / r;
  const Tensor3 G = christoffel(MetricField::weak_field(M), x);
  for (int i = 1; i < 4; ++i) {
    const double dphi = M * x[i] / (r * r * r);
    EXPECT_NEAR(G(i, 0, 0), dphi / (1 - 2 * phi), 1e-14);
  }
}

TEST(Christoffel, LowerIndexSymmetry) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(4.0, 80.0), th(0.3, 2.8), c(-30.0, 30.0);
  struct Case {
    MetricField g;
    double tol;
  };
  const Case cases[] = {
      {MetricField::schwarzschild(1.0), 1e-8},
      {MetricField::weak_field(1.0), 1e-8},
      {MetricField::schwarzschild(1.0).without_closed_form_derivative(), 1e-6},
      {MetricField::weak_field(1.0).without_closed_form_derivative(), 1e-6},
  };
  for (const auto& cs : cases) {
    const bool spherical = cs.g.name().starts_with("schwarzschild");
    for (int trial = 0; trial < 25; ++trial) {
      const SpacetimeEvent x = spherical ? SpacetimeEvent(0, r(rng), th(rng), 0.0)
                                         : SpacetimeEvent(0, c(rng), c(rng), 10.0 + r(rng));
      const Tensor3 G = christoffel(cs.g, x);
      for (int a = 0; a < 4; ++a)
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n) ASSERT_NEAR(G(a, m, n), G(a, n, m), cs.tol);
    }
  }
}

TEST(Christoffel, LoweredFirstIndex) {
  const MetricField g = MetricField::schwarzschild(1.0);
  const SpacetimeEvent x(0, 10, kHalfPi, 0);
  // Gamma_{r tt} = g_rr Gamma^r_tt = M/r^2
  EXPECT_NEAR(christoffel_lowered(g, x)(1, 0, 0), 0.01, 1e-12);
}

TEST(Ricci, FlatIsZero) {
  const MetricField eta = MetricField::minkowski();
  const SpacetimeEvent x(0, 1, 2, 3);
  EXPECT_EQ(ricci(eta, x).max_abs(), 0.0);
  EXPECT_EQ(scalar_curvature(eta, x), 0.0);
  EXPECT_EQ(einstein_tensor(eta, x).max_abs(), 0.0);
}

TEST(Ricci, SchwarzschildVacuum) {
  const MetricField g = MetricField::schwarzschild(1.0);
  for (double r : {4.0, 6.0, 10.0, 25.0, 50.0, 100.0}) {
    const SpacetimeEvent x(0, r, 1.0, 0.5);
    EXPECT_LT(ricci(g, x).max_abs(), 1e-5) << "r = " << r;
    EXPECT_LT(einstein_tensor(g, x).max_abs(), 1e-5) << "r = " << r;
  }
}

TEST(Ricci, WeakFieldOffSource) {
  // R_00 ~ Laplacian(Phi), which vanishes away from the point mass.
  const MetricField g = MetricField::weak_field(1.0);
  EXPECT_LT(std::abs(ricci(g, SpacetimeEvent(0, 20, 5, -7))(0, 0)), 1e-5);
}

TEST(Ricci, RiemannContractsToRicci) {
  const MetricField g = MetricField::schwarzschild(1.0);
  const SpacetimeEvent x(0, 9, 1.2, 0);
  const Tensor4 R = riemann(g, x);
  const Tensor2 ric = ricci(g, x);
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < 4; ++n) {
      double c = 0.0;
      for (int r = 0; r < 4; ++r) c += R(r, s, r, n);
      EXPECT_NEAR(c, ric(s, n), 1e-9);
    }
  // closed form R^t_{rtr} = 2M / (r^2 (r - 2M))
  EXPECT_NEAR(R(0, 1, 0, 1), 2.0 / (81.0 * 7.0), 1e-7);
}

TEST(Einstein, TraceIdentity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(4.0, 60.0), c(-20.0, 20.0);
  // a metric with nonzero curvature: conformally flat g = exp(2 s) eta, s = 0.01 x1 x2
  const MetricField conformal("conformal", [](const SpacetimeEvent& x) {
    const double w = std::exp(0.02 * x[1] * x[2]);
    Tensor2 g = covariant2();
    g(0, 0) = -w;
    g(1, 1) = g(2, 2) = g(3, 3) = w;
    return g;
  });
  for (const MetricField& g :
       {MetricField::schwarzschild(1.0), MetricField::weak_field(1.0), conformal}) {
    for (int trial = 0; trial < 5; ++trial) {
      const SpacetimeEvent x = g.name().starts_with("schwarzschild")
                                   ? SpacetimeEvent(0, r(rng), 1.0, 0)
                                   : SpacetimeEvent(0, 0.2 * c(rng), 0.2 * c(rng), 8.0 + r(rng));
      const Tensor2 G = einstein_tensor(g, x);
      const Tensor2 inv = g.inverse_at(x);
      double trace = 0.0;
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) trace += inv(m, n) * G(m, n);
      const double R = scalar_curvature(g, x);
      EXPECT_LE(std::abs(trace + R), 1e-8 * std::max(std::abs(R), 1e-300) + 1e-14) << g.name();
    }
  }
}

TEST(Bianchi, FlatIsExactlyZero) {
  EXPECT_EQ(bianchi_residual(MetricField::minkowski(), SpacetimeEvent(0, 1, 2, 3)), 0.0);
}

TEST(Bianchi, WeakFieldBelowRegressionBound) {
  EXPECT_LT(bianchi_residual(MetricField::weak_field(1.0), SpacetimeEvent(0, 10, 3, -2)), 1e-4);
}

TEST(Bianchi, SchwarzschildSecondOrder) {
  const MetricField g = MetricField::schwarzschild(1.0);
  const SpacetimeEvent x(0, 8, 1.0, 0);
  const double h = 0.08;
  const double e1 = bianchi_residual(g, x, h);
  const double e2 = bianchi_residual(g, x, h / 2);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
}
