// Analytic comparisons attached to a run's summary.

#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "phasecon/report.hpp"

namespace phasecon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Position at proper time tau by Hermite interpolation between samples.
std::optional<SpacetimeEvent> position_at(const std::vector<TrajectorySample>& s, double tau) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].state.tau >= tau && s[i - 1].state.tau <= tau)
      return interpolate_position(s[i - 1].state, s[i].state, tau);
  }
  return std::nullopt;
}

// Algebraic (Kasa) circle fit in the x-y plane; returns the radius.
double fit_circle_radius(const std::vector<TrajectorySample>& s) {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (const auto& smp : s) {
    const double x = smp.state.x[1], y = smp.state.x[2];
    const Eigen::Vector3d row(x, y, 1.0);
    A += row * row.transpose();
    b += row * -(x * x + y * y);
  }
  const Eigen::Vector3d c = A.ldlt().solve(b);
  const double cx = -0.5 * c[0], cy = -0.5 * c[1];
  return std::sqrt(cx * cx + cy * cy - c[2]);
}

void free_oracle(RunReport& r) {
  const auto& x0 = r.scenario.initial.x;
  const auto& u0 = r.scenario.initial.u;
  double err = 0.0;
  for (const auto& s : r.samples)
    for (std::size_t mu = 0; mu < kDim; ++mu)
      err = std::max(err, std::abs(s.state.x[mu] - (x0[mu] + u0[mu] * s.state.tau)));
  r.summary["oracle_linear_error"] = err;
}

void cyclotron_oracle(RunReport& r) {
  const Scenario& sc = r.scenario;
  const double m = sc.particle.mass();
  const double eB = std::abs(sc.particle.charge() * sc.field.B[2]);
  const auto& u = sc.initial.u;
  const double gamma = u[0];
  const double u_perp = std::hypot(u[1], u[2]);  // gamma v_perp
  const double radius = m * u_perp / eB;
  const double period = kTwoPi * gamma * m / eB;  // coordinate time
  r.summary["oracle_radius"] = radius;
  r.summary["oracle_period"] = period;

  r.summary["radius_measured"] = fit_circle_radius(r.samples);
  r.summary["oracle_radius_error"] = std::abs(r.summary["radius_measured"] - radius) / radius;

  // gyrophase of the velocity, unwrapped, as a function of coordinate time
  double prev = std::atan2(r.samples.front().state.u[2], r.samples.front().state.u[1]);
  double turned = 0.0, t_prev = r.samples.front().state.x[0];
  std::optional<double> measured;
  for (std::size_t i = 1; i < r.samples.size() && !measured; ++i) {
    const auto& st = r.samples[i].state;
    const double ph = std::atan2(st.u[2], st.u[1]);
    double d = ph - prev;
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d < -std::numbers::pi) d += kTwoPi;
    const double next = turned + d;
    if (std::abs(next) >= kTwoPi) {
      const double f = (kTwoPi - std::abs(turned)) / std::abs(d);
      measured = t_prev + f * (st.x[0] - t_prev);
    }
    turned = next;
    prev = ph;
    t_prev = st.x[0];
  }
  if (measured) {
    r.summary["period_measured"] = *measured;
    r.summary["oracle_period_error"] = std::abs(*measured - period) / period;
  } else {
    r.summary["oracle_period_error"] = std::numeric_limits<double>::infinity();
  }

  // return to the initial point after one proper-time period
  if (auto x = position_at(r.samples, kTwoPi * m / eB)) {
    const auto& x0 = sc.initial.x;
    r.summary["oracle_closure_error"] =
        std::hypot((*x)[1] - x0[1], (*x)[2] - x0[2], (*x)[3] - x0[3] - u[3] / u[0] * ((*x)[0] - x0[0])) /
        radius;
  } else {
    r.summary["oracle_closure_error"] = std::numeric_limits<double>::infinity();
  }
}

void exb_oracle(RunReport& r) {
  const Scenario& sc = r.scenario;
  const auto& E = sc.field.E;
  const auto& B = sc.field.B;
  const double b2 = B[0] * B[0] + B[1] * B[1] + B[2] * B[2];
  const Vec3 vd = {(E[1] * B[2] - E[2] * B[1]) / b2, (E[2] * B[0] - E[0] * B[2]) / b2,
                   (E[0] * B[1] - E[1] * B[0]) / b2};
  const double e2 = E[0] * E[0] + E[1] * E[1] + E[2] * E[2];
  // proper-time gyro-period in the drift frame, where only B' = sqrt(B^2 - E^2) remains
  const double period =
      kTwoPi * sc.particle.mass() / (std::abs(sc.particle.charge()) * std::sqrt(b2 - e2));
  const double tau = sc.oracle.orbits * period;
  r.summary["oracle_drift_speed"] = norm3(vd);
  auto x = position_at(r.samples, tau);
  if (!x) {
    r.summary["oracle_drift_error"] = std::numeric_limits<double>::infinity();
    return;
  }
  const auto& x0 = sc.initial.x;
  const double dt = (*x)[0] - x0[0];
  Vec3 v{};
  for (std::size_t i = 0; i < 3; ++i) v[i] = ((*x)[i + 1] - x0[i + 1]) / dt;
  r.summary["drift_vx"] = v[0];
  r.summary["drift_vy"] = v[1];
  r.summary["drift_vz"] = v[2];
  r.summary["drift_speed_measured"] = norm3(v);
  r.summary["oracle_drift_error"] = norm3({v[0] - vd[0], v[1] - vd[1], v[2] - vd[2]});
  r.summary["oracle_drift_speed_error"] = std::abs(norm3(v) - norm3(vd)) / norm3(vd);
}

void circular_oracle(RunReport& r) {
  const double M = r.scenario.metric.mass;
  const double r0 = r.scenario.initial_spec.r0;
  const double omega = std::sqrt(M / (r0 * r0 * r0));
  double pointwise = 0.0, radial = 0.0;
  for (const auto& s : r.samples) {
    pointwise = std::max(pointwise, std::abs(s.state.u[3] / s.state.u[0] - omega) / omega);
    radial = std::max(radial, std::abs(s.state.x[1] - r0) / r0);
  }
  const auto& a = r.samples.front().state.x;
  const auto& b = r.samples.back().state.x;
  const double mean = (b[3] - a[3]) / (b[0] - a[0]);
  r.summary["oracle_omega"] = omega;
  r.summary["omega_measured"] = mean;
  r.summary["oracle_omega_error"] = std::max(pointwise, std::abs(mean - omega) / omega);
  r.summary["radius_drift"] = radial;
}

// Periapsis passages: u^r changes sign from - to +. Within the bracketing step
// r(tau) is the cubic Hermite through (r, u^r) at both ends; its minimum is found
// from the quadratic derivative and phi is interpolated the same way.
std::vector<double> periapsis_angles(const std::vector<TrajectorySample>& s) {
  std::vector<double> out;
  if (!s.empty() && s.front().state.u[1] == 0.0) out.push_back(s.front().state.x[3]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto& a = s[i - 1].state;
    const auto& b = s[i].state;
    if (!(a.u[1] < 0.0 && b.u[1] >= 0.0)) continue;
    const double h = b.tau - a.tau;
    // r(s) = h00 ra + h10 h va + h01 rb + h11 h vb on s in [0,1]
    const double ra = a.x[1], rb = b.x[1], va = h * a.u[1], vb = h * b.u[1];
    // dr/ds = A s^2 + B s + C
    const double A = 6 * ra + 3 * va - 6 * rb + 3 * vb;
    const double B = -6 * ra - 4 * va + 6 * rb - 2 * vb;
    const double C = va;
    double root;
    if (std::abs(A) < 1e-300) {
      root = -C / B;
    } else {
      const double disc = std::sqrt(std::max(0.0, B * B - 4 * A * C));
      const double q = -0.5 * (B + std::copysign(disc, B));
      const double r1 = q / A, r2 = C / q;
      root = (r1 >= 0.0 && r1 <= 1.0) ? r1 : r2;
    }
    root = std::clamp(root, 0.0, 1.0);
    out.push_back(interpolate_position(a, b, a.tau + root * h)[3]);
  }
  return out;
}

void precession_oracle(RunReport& r) {
  const double M = r.scenario.metric.mass;
  const double a = r.scenario.initial_spec.a;
  const double ecc = r.scenario.initial_spec.ecc;
  const double formula = 6.0 * std::numbers::pi * M / (a * (1.0 - ecc * ecc));
  r.summary["precession_formula"] = formula;
  const auto phis = periapsis_angles(r.samples);
  const int orbits = r.scenario.oracle.orbits;
  const int available = static_cast<int>(phis.size()) - 1;
  r.summary["orbits_measured"] = std::max(0, std::min(orbits, available));
  if (available < orbits) {
    r.summary["precession_error"] = std::numeric_limits<double>::infinity();
    return;
  }
  const double measured = (phis[orbits] - phis[0] - orbits * kTwoPi) / orbits;
  r.summary["precession_measured"] = measured;
  r.summary["precession_error"] = std::abs(measured - formula) / formula;
}

void newtonian_oracle(RunReport& r) {
  const Scenario& sc = r.scenario;
  const double M = sc.metric.mass;
  const NonLinearConnection c = sc.connection();
  double err = 0.0, phi_max = 0.0, v2_max = 0.0;
  for (const auto& s : r.samples) {
    const auto& x = s.state.x;
    const double rr = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    const FourVector acc = contravariant_acceleration(c, sc.particle, x, s.state.u);
    double diff = 0.0;
    for (std::size_t i = 1; i < kDim; ++i) {
      const double newton = -M * x[i] / (rr * rr * rr);  // -grad Phi
      diff += (acc[i] - newton) * (acc[i] - newton);
    }
    err = std::max(err, std::sqrt(diff) / (M / (rr * rr)));
    phi_max = std::max(phi_max, M / rr);
    double v2 = 0.0;
    for (std::size_t i = 1; i < kDim; ++i) v2 += s.state.u[i] * s.state.u[i];
    v2_max = std::max(v2_max, v2 / (s.state.u[0] * s.state.u[0]));
  }
  r.summary["oracle_newtonian_error"] = err;
  r.summary["max_potential"] = phi_max;
  r.summary["max_speed_squared"] = v2_max;
}

}  // namespace

void apply_oracle(RunReport& r) {
  if (r.samples.empty()) return;
  switch (r.scenario.oracle.kind) {
    case OracleKind::None: break;
    case OracleKind::Free: free_oracle(r); break;
    case OracleKind::Cyclotron: cyclotron_oracle(r); break;
    case OracleKind::ExBDrift: exb_oracle(r); break;
    case OracleKind::CircularOrbit: circular_oracle(r); break;
    case OracleKind::Precession: precession_oracle(r); break;
    case OracleKind::Newtonian: newtonian_oracle(r); break;
  }
}

}  // namespace phasecon
