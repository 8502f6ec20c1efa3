#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "phasecon/electromagnetic.hpp"

using namespace phasecon;

TEST(Faraday, TensorFromEandB) {
  const Tensor2 F = faraday_tensor({1, 2, 3}, {4, 5, 6});
  EXPECT_EQ(F(1, 0), 1.0);
  EXPECT_EQ(F(0, 1), -1.0);
  EXPECT_EQ(F(3, 0), 3.0);
  EXPECT_EQ(F(1, 2), 6.0);  // eps_123 B_z
  EXPECT_EQ(F(2, 3), 4.0);
  EXPECT_EQ(F(3, 1), 5.0);
  EXPECT_EQ(F(2, 1), -6.0);
  EXPECT_EQ(F.symmetry(), Symmetry::Antisymmetric);
}

TEST(Faraday, AsymmetricEvaluatorRejected) {
  const FaradayField bad("bad", [](const SpacetimeEvent&) {
    Tensor2 f = covariant2();
    f(0, 1) = 1.0;
    f(1, 0) = -1.0 + 1e-9;
    return f;
  });
  EXPECT_THROW(bad.at(SpacetimeEvent()), MalformedFaraday);
  const FaradayField fine("fine", [](const SpacetimeEvent&) {
    Tensor2 f = covariant2();
    f(0, 1) = 1.0;
    f(1, 0) = -1.0 + 1e-11;
    return f;
  });
  const Tensor2 f = fine.at(SpacetimeEvent());
  EXPECT_EQ(f(0, 1), -f(1, 0));
}

TEST(FaradayFromPotential, ZeroPotential) {
  const auto a = VectorPotential::constant({0, 0, 0, 0});
  EXPECT_EQ(faraday_from_potential(a, SpacetimeEvent(1, 2, 3, 4)).max_abs(), 0.0);
}

TEST(FaradayFromPotential, SymmetricGaugeGivesUniformBz) {
  // A = (0, -Bz y/2, Bz x/2, 0): F_12 = d_1 A_2 - d_2 A_1 = Bz
  const auto a = VectorPotential::symmetric_gauge({0, 0, 1});
  for (const SpacetimeEvent& x : {SpacetimeEvent(0, 0, 0, 0), SpacetimeEvent(3, -2, 5, 1)}) {
    const Tensor2 F = faraday_from_potential(a, x);
    EXPECT_NEAR(F(1, 2), 1.0, 1e-10);
    EXPECT_NEAR(F(2, 1), -1.0, 1e-10);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        if (!((m == 1 && n == 2) || (m == 2 && n == 1))) EXPECT_NEAR(F(m, n), 0.0, 1e-10);
  }
}

TEST(FaradayFromPotential, LinearScalarPotential) {
  // A = (-Ex x1, 0, 0, 0): F_01 = d_0 A_1 - d_1 A_0 = Ex
  const double Ex = 0.7;
  const VectorPotential a("ramp", [Ex](const SpacetimeEvent& x) {
    return FourVector::covariant({-Ex * x[1], 0, 0, 0});
  });
  EXPECT_NEAR(faraday_from_potential(a, SpacetimeEvent(0, 2, 0, 0))(0, 1), Ex, 1e-10);
}

TEST(FaradayFromPotential, UniformPotentialReproducesFaradayTensor) {
  const Vec3 E{0.1, -0.2, 0.3}, B{0.5, 0.4, -1.0};
  const Tensor2 expect = faraday_tensor(E, B);
  const auto a = VectorPotential::uniform(E, B);
  const Tensor2 numeric = faraday_from_potential(a, SpacetimeEvent(1, 2, -1, 3));
  const Tensor2 closed = FaradayField::from_potential(a).at(SpacetimeEvent(1, 2, -1, 3));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      EXPECT_NEAR(numeric(m, n), expect(m, n), 1e-10);
      EXPECT_NEAR(closed(m, n), expect(m, n), 1e-15);
    }
}

TEST(FaradayFromPotential, AntisymmetricEverywhere) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  const auto a = VectorPotential::coulomb(2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacetimeEvent x(c(rng), c(rng), c(rng), 6.0 + c(rng));
    const Tensor2 F = faraday_from_potential(a, x);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) ASSERT_LE(std::abs(F(m, n) + F(n, m)), 1e-12);
  }
}

TEST(FaradayFromPotential, CoulombFieldPointsRadially) {
  // A_0 = -Q/r gives E = Q r_hat / r^2
  const double Q = 3.0;
  const auto a = VectorPotential::coulomb(Q);
  const SpacetimeEvent x(0, 3, 4, 0);
  const Tensor2 F = faraday_from_potential(a, x);
  EXPECT_NEAR(F(1, 0), Q * 3.0 / 125.0, 1e-9);
  EXPECT_NEAR(F(2, 0), Q * 4.0 / 125.0, 1e-9);
  EXPECT_THROW(a.at(SpacetimeEvent(0, 0, 0, 0)), OutsideDomain);
}

TEST(FaradayFromPotential, GaugeInvariance) {
  const auto a = VectorPotential::symmetric_gauge({0.3, -0.2, 1.0});
  const auto chi = [](const SpacetimeEvent& x) {
    return std::sin(x[1]) * std::cos(0.5 * x[2]) + 0.1 * x[0] * x[3] * x[3];
  };
  const auto b = VectorPotential::gauge_transformed(a, chi);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacetimeEvent x(c(rng), c(rng), c(rng), c(rng));
    const Tensor2 diff = faraday_from_potential(b, x) - faraday_from_potential(a, x);
    ASSERT_LT(diff.max_abs(), 1e-8);
  }
}

TEST(Closure, UniformFieldsVanish) {
  const auto a = VectorPotential::uniform({0.1, 0.2, 0.3}, {1, -1, 0.5});
  EXPECT_LE(closure_residual(a, SpacetimeEvent(0, 1, 2, 3)), 1e-12);
  EXPECT_LE(closure_residual(VectorPotential::constant({1, 2, 3, 4}), SpacetimeEvent()), 1e-12);
}

TEST(Closure, SymmetricGaugeBelowRegressionBound) {
  const auto a = VectorPotential::symmetric_gauge({0, 0, 1});
  EXPECT_LT(closure_residual(a, SpacetimeEvent(0, 1.5, -0.5, 2)), 1e-8);
}

TEST(Closure, PointChargeBelowRegressionBound) {
  const VectorPotential dipole("1/r", [](const SpacetimeEvent& x) {
    const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    return FourVector::covariant({1.0 / r, 0, 0, 0});
  });
  EXPECT_LT(closure_residual(dipole, SpacetimeEvent(0, 3, 4, 0)), 1e-6);
}

TEST(Closure, WaldPotentialOnSchwarzschildChart) {
  EXPECT_LT(closure_residual(VectorPotential::wald(0.01), SpacetimeEvent(0, 10, 1.0, 0.3)), 1e-6);
}
