#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "phasecon/report.hpp"

using namespace phasecon;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void expect_bit_identical(const std::vector<TrajectorySample>& a,
                          const std::vector<TrajectorySample>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(bit_equal(a[i].state.tau, b[i].state.tau));
    ASSERT_TRUE(bit_equal(a[i].norm_residual, b[i].norm_residual));
    for (int m = 0; m < 4; ++m) {
      ASSERT_TRUE(bit_equal(a[i].state.x[m], b[i].state.x[m])) << i << ' ' << m;
      ASSERT_TRUE(bit_equal(a[i].state.u[m], b[i].state.u[m])) << i << ' ' << m;
    }
  }
}

Scenario builtin(const std::string& name) { return load_scenario(builtin_scenario_text(name)); }

}  // namespace

TEST(Run, FreeParticleElevenRows) {
  Scenario sc = builtin("free");
  sc.integrator.tau_max = 1;
  sc.integrator.step = 0.1;
  const RunReport r = run(sc);
  std::ostringstream out;
  emit(r, Format::Csv, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "tau,t,x,y,z,u0,u1,u2,u3,norm_residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 11);
  for (const auto& s : r.samples) EXPECT_DOUBLE_EQ(s.state.x[0], s.state.tau);
  EXPECT_EQ(r.summary.at("oracle_linear_error"), 0.0);
}

TEST(Run, CyclotronOracle) {
  const RunReport r = run(builtin("cyclotron"));
  EXPECT_LT(r.summary.at("oracle_radius_error"), 1e-6);
  EXPECT_LT(r.summary.at("oracle_period_error"), 1e-6);
  EXPECT_LT(r.summary.at("oracle_closure_error"), 1e-6);
  EXPECT_LT(r.summary.at("max_norm_residual"), 1e-8);
}

TEST(Run, ExBDriftOracle) {
  const RunReport r = run(builtin("exb-drift"));
  EXPECT_LT(r.summary.at("oracle_drift_error"), 1e-4);
  EXPECT_NEAR(r.summary.at("drift_vy"), -0.1, 1e-4);
}

TEST(Run, NewtonianLimit) {
  const RunReport r = run(builtin("weak-field-newtonian"));
  const double phi = r.summary.at("max_potential");
  const double v2 = r.summary.at("max_speed_squared");
  // relative deviation of du/dtau from -grad Phi is second order in Phi and v
  EXPECT_LT(r.summary.at("oracle_newtonian_error"), 5.0 * (phi * phi + v2));
}

TEST(Run, TerminalStatusRecordedNotThrown) {
  Scenario sc = load_scenario(
      "[metric]\ntype = schwarzschild\n[initial]\nposition = 0, 4, pi/2, 0\n"
      "[integrator]\ntau_max = 100\n");
  const RunReport r = run(sc);
  EXPECT_EQ(r.status, TerminalStatus::DomainExit);
  EXPECT_TRUE(r.integration_failed());
  EXPECT_EQ(r.labels.at("status"), "domain_exit");
}

TEST(Serialization, CsvRoundTripIsBitExact) {
  for (const char* name : {"cyclotron", "schwarzschild-precession", "coulomb"}) {
    Scenario sc = builtin(name);
    sc.integrator.tau_max = std::min(sc.integrator.tau_max, 50.0);
    const RunReport r = run(sc);
    std::stringstream buf;
    write_csv(r.samples, buf);
    expect_bit_identical(read_csv(buf), r.samples);
  }
}

TEST(Serialization, JsonRoundTripIsBitExact) {
  Scenario sc = builtin("combined-schwarzschild-B");
  sc.integrator.tau_max = 20;
  const RunReport r = run(sc);
  std::stringstream buf;
  write_json(r, buf);
  expect_bit_identical(read_json(buf), r.samples);
}

TEST(Serialization, JsonHasSummaryAndScenarioEcho) {
  Scenario sc = builtin("cyclotron");
  std::stringstream buf;
  write_json(run(sc), buf);
  const std::string s = buf.str();
  EXPECT_NE(s.find("\"summary\""), std::string::npos);
  EXPECT_NE(s.find("\"oracle_radius_error\""), std::string::npos);
  EXPECT_NE(s.find("\"scenario\""), std::string::npos);
  EXPECT_NE(s.find("\"norm_residual\""), std::string::npos);
}

TEST(Serialization, MalformedCsvRejected) {
  std::istringstream bad_header("tau,t\n1,2\n");
  EXPECT_THROW(read_csv(bad_header), ParseError);
  std::istringstream bad_row("tau,t,x,y,z,u0,u1,u2,u3,norm_residual\n1,2,3\n");
  EXPECT_THROW(read_csv(bad_row), ParseError);
}

TEST(Serialization, Deterministic) {
  std::ostringstream a, b;
  emit(run(builtin("coulomb")), Format::Json, a);
  emit(run(builtin("coulomb")), Format::Json, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Check, BianchiFlatIsZero) {
  const RunReport r = check(builtin("free"), Checker::Bianchi);
  EXPECT_EQ(r.summary.at("residual"), 0.0);
  EXPECT_EQ(r.summary.at("passed"), 1.0);
}

TEST(Check, ClosureNeedsPotential) {
  EXPECT_THROW(check(builtin("free"), Checker::Closure), IncompatibleChecker);
  EXPECT_THROW(check(builtin("schwarzschild-circular"), Checker::MinimalSubstitution),
               IncompatibleChecker);
}

TEST(Check, ClosureSymmetricGauge) {
  const Scenario sc = load_scenario(
      "[em]\ntype = symmetric-gauge\nB = 0, 0, 1\n[particle]\ne = 1\n"
      "[initial]\nposition = 0, 0.5, 0.2, 0\nvelocity = 0.1, 0, 0\n[integrator]\ntau_max = 5\n");
  const RunReport r = check(sc, Checker::Closure);
  EXPECT_LT(r.summary.at("residual"), 1e-8);
}

TEST(Check, MassInvarianceOnSchwarzschild) {
  Scenario sc = builtin("schwarzschild-circular");
  const RunReport r = check(sc, Checker::MassInvariance);
  EXPECT_LT(r.summary.at("residual"), 1e-12);
  EXPECT_EQ(r.labels.at("mode"), "trajectory");
}

TEST(Check, MassInvarianceDecomposedWithField) {
  const RunReport r = check(builtin("cyclotron"), Checker::MassInvariance);
  EXPECT_LE(r.summary.at("residual"), 1e-14);
  EXPECT_EQ(r.labels.at("mode"), "decomposed");
}

TEST(Check, ParseNames) {
  EXPECT_EQ(parse_checker("minimal-substitution"), Checker::MinimalSubstitution);
  EXPECT_THROW(parse_checker("curl"), ValidationError);
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_THROW(parse_format("xml"), ValidationError);
}
