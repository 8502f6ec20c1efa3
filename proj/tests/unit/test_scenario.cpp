#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phasecon/scenario.hpp"

using namespace phasecon;

TEST(LoadScenario, MinimalDocumentIsFreeParticle) {
  const Scenario sc = load_scenario("");
  EXPECT_EQ(sc.metric.kind, MetricKind::Minkowski);
  EXPECT_EQ(sc.field.kind, FieldKind::None);
  EXPECT_EQ(sc.particle.mass(), 1.0);
  EXPECT_EQ(sc.particle.charge(), 0.0);
  EXPECT_EQ(sc.initial.u[0], 1.0);
  EXPECT_EQ(sc.initial.u[1], 0.0);
}

TEST(LoadScenario, CircularOrbitKeyword) {
  const Scenario sc = load_scenario(
      "[metric]\ntype = schwarzschild\nM = 1\n[initial]\norbit = circular\nr0 = 10\n");
  const auto& u = sc.initial.u;
  EXPECT_NEAR(u[3] / u[0], std::sqrt(1.0 / 1000.0), 1e-15);
  EXPECT_EQ(sc.initial.x[1], 10.0);
  EXPECT_NEAR(minkowski_norm(u, sc.metric_field(), sc.initial.x), -1.0, 1e-15);
}

TEST(LoadScenario, InsideHorizonRejected) {
  try {
    load_scenario("[metric]\ntype = schwarzschild\nM = 1\n[initial]\norbit = circular\nr0 = 1.5\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("horizon"), std::string::npos);
  }
  EXPECT_THROW(load_scenario("[metric]\ntype = schwarzschild\n[initial]\norbit = circular\nr0 = 2.5\n"),
               ValidationError);  // no circular orbit below 3M
  EXPECT_THROW(load_scenario("[metric]\ntype = schwarzschild\n[initial]\nposition = 0, 1.9, 1, 0\n"),
               ValidationError);
}

TEST(LoadScenario, UnknownKeysAndSectionsRejected) {
  try {
    load_scenario("[metric]\ntype = minkowski\nmass = 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.key(), "mass");
  }
  EXPECT_THROW(load_scenario("[metrics]\n"), ParseError);
  EXPECT_THROW(load_scenario("colour = blue\n"), ParseError);
  EXPECT_THROW(load_scenario("[em]\ntype = uniform\nQ = 1\n"), ValidationError);
}

TEST(LoadScenario, MalformedLinesRejected) {
  EXPECT_THROW(load_scenario("[metric\n"), ParseError);
  EXPECT_THROW(load_scenario("[metric]\ntype minkowski\n"), ParseError);
  EXPECT_THROW(load_scenario("[particle]\nm =\n"), ParseError);
  EXPECT_THROW(load_scenario("[particle]\nm = 1\nm = 2\n"), ParseError);
  EXPECT_THROW(load_scenario("[particle]\n[particle]\n"), ParseError);
  EXPECT_THROW(load_scenario("[particle]\nm = heavy\n"), ParseError);
  EXPECT_THROW(load_scenario("[em]\ntype = uniform\nB = 0, 1\n"), ParseError);
  EXPECT_THROW(load_scenario("[em]\ntype = plasma\n"), ParseError);
}

TEST(LoadScenario, ValuesAndExpressions) {
  const Scenario sc = load_scenario(
      "name = demo  # trailing comment\n"
      "[metric]\ntype = schwarzschild\nM = 2\n"
      "[initial]\nposition = 0, 20, pi/2, -pi/4\nu = 0, 0, 0.01\n"
      "[integrator]\nmethod = rk45\ntolerance = 1e-9\ntau_max = 2*pi\nmax_steps = 1000\n"
      "renormalize = true\n");
  EXPECT_EQ(sc.name, "demo");
  EXPECT_EQ(sc.metric.mass, 2.0);
  EXPECT_DOUBLE_EQ(sc.initial.x[2], std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(sc.initial.x[3], -std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(sc.integrator.tau_max, 2 * std::numbers::pi);
  EXPECT_EQ(sc.integrator.method, Method::Rk45Adaptive);
  EXPECT_EQ(sc.integrator.max_steps, 1000);
  EXPECT_TRUE(sc.integrator.renormalize);
  EXPECT_EQ(sc.initial.u[3], 0.01);
  EXPECT_NEAR(minkowski_norm(sc.initial.u, sc.metric_field(), sc.initial.x), -1.0, 1e-14);
}

TEST(LoadScenario, InvalidParameters) {
  EXPECT_THROW(load_scenario("[particle]\nm = 0\n"), ValidationError);
  EXPECT_THROW(load_scenario("[integrator]\nstep = -1\n"), ValidationError);
  EXPECT_THROW(load_scenario("[integrator]\nmax_steps = 2.5\n"), ValidationError);
  EXPECT_THROW(load_scenario("[initial]\nvelocity = 1.2, 0, 0\n"), ValidationError);
  EXPECT_THROW(load_scenario("[initial]\nvelocity = 0.1, 0, 0\nu = 0.1, 0, 0\n"), ValidationError);
  EXPECT_THROW(load_scenario("[metric]\ntype = minkowski\nM = 1\n"), ValidationError);
  EXPECT_THROW(load_scenario("[em]\ntype = wald\nB = 1\n"), ValidationError);
  EXPECT_THROW(load_scenario("[metric]\ntype = schwarzschild\n[initial]\nposition = 0, 10, 1, 0\n"
                             "[em]\ntype = uniform\nB = 0, 0, 1\n"),
               ValidationError);
  EXPECT_THROW(load_scenario("[em]\ntype = coulomb\nQ = 1\n"), ValidationError);  // r = 0
}

TEST(LoadScenario, OracleCompatibility) {
  EXPECT_THROW(load_scenario("[oracle]\ntype = cyclotron\n"), ValidationError);
  EXPECT_THROW(load_scenario("[oracle]\ntype = precession\n"), ValidationError);
  EXPECT_THROW(load_scenario("[em]\ntype = uniform\nE = 1, 0, 0\nB = 0, 0, 1\n[particle]\ne = 1\n"
                             "[oracle]\ntype = exb-drift\n"),
               ValidationError);  // |E| = |B|
  EXPECT_NO_THROW(load_scenario("[oracle]\ntype = free\n"));
}

TEST(LoadScenario, VelocityAndSpatialUAgree) {
  const double v = 0.6, g = 1.25;
  const Scenario a = load_scenario("[initial]\nvelocity = 0.6, 0, 0\n");
  const Scenario b = load_scenario("[initial]\nu = 0.75, 0, 0\n");
  EXPECT_NEAR(a.initial.u[0], g, 1e-15);
  EXPECT_NEAR(a.initial.u[1], g * v, 1e-15);
  EXPECT_NEAR(b.initial.u[0], g, 1e-15);
}

TEST(InitialData, EccentricTurningPoints) {
  const PhaseState s = schwarzschild_eccentric_initial(1.0, 20.0, 0.1);
  const MetricField g = MetricField::schwarzschild(1.0);
  EXPECT_EQ(s.x[1], 18.0);
  EXPECT_EQ(s.u[1], 0.0);
  EXPECT_NEAR(minkowski_norm(s.u, g, s.x), -1.0, 1e-14);
  // effective potential (1 - 2M/r)(1 + L^2/r^2) equals E^2 at apoapsis too
  const double f = 1 - 2.0 / 18.0;
  const double E = f * s.u[0], L = 18.0 * 18.0 * s.u[3];
  EXPECT_NEAR((1 - 2.0 / 22.0) * (1 + L * L / (22.0 * 22.0)), E * E, 1e-14);
  EXPECT_THROW(schwarzschild_eccentric_initial(1.0, 20.0, 1.2), ValidationError);
}

TEST(Builtins, AllLoadAndAreNormalised) {
  const auto names = builtin_scenario_names();
  EXPECT_EQ(names.size(), 8u);
  for (const auto& n : names) {
    const Scenario sc = load_scenario(builtin_scenario_text(n));
    EXPECT_EQ(sc.name, n);
    EXPECT_NEAR(minkowski_norm(sc.initial.u, sc.metric_field(), sc.initial.x), -1.0, 1e-14) << n;
    EXPECT_GT(sc.initial.u[0], 0.0);
  }
  EXPECT_THROW(builtin_scenario_text("nope"), ValidationError);
}

TEST(Builtins, ResolveByNameOrPath) {
  EXPECT_EQ(resolve_scenario("cyclotron").name, "cyclotron");
  EXPECT_THROW(resolve_scenario("/nonexistent/file.cfg"), ValidationError);
}
