#include "phasecon/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasecon/ode.hpp"

namespace phasecon {

using State8 = ode::State<8>;

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidConfig("integrator step must be > 0");
  if (!(tolerance > 0.0)) throw InvalidConfig("integrator tolerance must be > 0");
  if (!(tau_max > 0.0) || !std::isfinite(tau_max))
    throw InvalidConfig("integrator tau_max must be > 0");
  if (max_steps < 1) throw InvalidConfig("integrator max_steps must be >= 1");
}

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Completed: return "completed";
    case TerminalStatus::MaxSteps: return "max_steps";
    case TerminalStatus::DomainExit: return "domain_exit";
    case TerminalStatus::Stopped: return "stopped";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Transport law

AccelerationTerms acceleration_terms(const NonLinearConnection& c, const Particle& particle,
                                     const SpacetimeEvent& x, const FourVector& u) {
  if (u.variance() != Variance::Contravariant)
    throw VarianceMismatch("acceleration: u must be contravariant");
  c.guard().check(x);
  std::array<double, 4> zeroth{};
  std::array<double, 4> first{};
  if (c.has_zeroth_order()) {
    const Tensor2 h0 = c.h0(x);
    const double inv_m = 1.0 / particle.mass();
    for (std::size_t m = 0; m < kDim; ++m) {
      double s = 0.0;
      for (std::size_t g = 0; g < kDim; ++g) s += h0(m, g) * u[g];
      zeroth[m] = inv_m * s;
    }
  }
  if (c.has_first_order()) {
    const Tensor3 h1 = c.h1(x);
    for (std::size_t m = 0; m < kDim; ++m) {
      double s = 0.0;
      for (std::size_t g = 0; g < kDim; ++g)
        for (std::size_t a = 0; a < kDim; ++a) s += h1(m, g, a) * u[g] * u[a];
      first[m] = s;
    }
  }
  return {FourVector::covariant(zeroth), FourVector::covariant(first)};
}

FourVector acceleration(const NonLinearConnection& c, const Particle& particle,
                        const SpacetimeEvent& x, const FourVector& u) {
  return acceleration_terms(c, particle, x, u).total();
}

FourVector contravariant_acceleration(const NonLinearConnection& c, const Particle& particle,
                                      const SpacetimeEvent& x, const FourVector& u) {
  const FourVector a = acceleration(c, particle, x, u);
  // eta is its own inverse
  const Tensor2 g_inv = c.metric().is_flat() ? minkowski_eta() : c.metric().inverse_at(x);
  std::array<double, 4> out{};
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) out[m] += g_inv(m, n) * a[n];
  return FourVector::contravariant(out);
}

TrajectorySample make_sample(const PhaseState& state, const MetricField& g) {
  TrajectorySample s;
  s.state = state;
  const Tensor2 metric = g.at(state.x);
  s.norm_residual = minkowski_norm(state.u, metric) + 1.0;
  double u_t = 0.0;
  for (std::size_t n = 0; n < kDim; ++n) u_t += metric(0, n) * state.u[n];
  s.diagnostics["energy"] = -u_t;
  return s;
}

// ---------------------------------------------------------------------------
// Generic driver over an 8-component state

namespace {

State8 pack(const SpacetimeEvent& x, const std::array<double, 4>& v) {
  return {x[0], x[1], x[2], x[3], v[0], v[1], v[2], v[3]};
}

SpacetimeEvent position_of(const State8& y) { return SpacetimeEvent(y[0], y[1], y[2], y[3]); }

std::array<double, 4> tail_of(const State8& y) { return {y[4], y[5], y[6], y[7]}; }

// A transport problem: rhs, state <-> PhaseState conversion and guard.
struct Problem {
  std::function<State8(double, const State8&)> rhs;
  std::function<PhaseState(double, const State8&)> to_phase;
  std::function<State8(const State8&)> renormalize;
  DomainGuard guard;
  MetricField metric;
};

double clamp_adaptive(double h, const IntegratorConfig& cfg) {
  return std::clamp(h, kMinAdaptiveStep, std::max(kMinAdaptiveStep, cfg.tau_max / 10.0));
}

struct Accepted {
  State8 y;
  double h_used;
  double h_next;
};

Accepted adaptive_step(const Problem& p, double tau, const State8& y, double h, double h_cap,
                       const IntegratorConfig& cfg) {
  for (;;) {
    const double trial = std::min(h, h_cap);
    const auto r = ode::dormand_prince_step<8>(p.rhs, tau, y, trial, cfg.tolerance, cfg.tolerance);
    if (std::isfinite(r.error_norm) && r.error_norm <= 1.0) {
      const double grow =
          r.error_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.error_norm, -0.2), 0.2, 5.0);
      return {r.y, trial, clamp_adaptive(trial * grow, cfg)};
    }
    if (trial <= kMinAdaptiveStep) {
      std::ostringstream os;
      os << "adaptive step rejected at minimum step " << kMinAdaptiveStep << " (tau = " << tau
         << ", error norm " << r.error_norm << ")";
      throw StepRejected(os.str());
    }
    const double shrink = std::isfinite(r.error_norm)
                              ? std::clamp(0.9 * std::pow(r.error_norm, -0.2), 0.2, 0.9)
                              : 0.2;
    h = std::max(kMinAdaptiveStep, trial * shrink);
  }
}

TerminalStatus drive(const Problem& p, double tau0, const State8& y0, const IntegratorConfig& cfg,
                     const SampleSink& sink, std::string* message) {
  cfg.validate();
  auto set_message = [&](const std::string& m) {
    if (message) *message = m;
  };
  set_message("");

  State8 y = y0;
  double tau = tau0;
  const double tau_end = tau0 + cfg.tau_max;
  p.guard.check(position_of(y));
  sink(make_sample(p.to_phase(tau, y), p.metric));

  const bool fixed = cfg.method == Method::Rk4Fixed;
  const long n_fixed =
      fixed ? static_cast<long>(std::ceil(cfg.tau_max / cfg.step - 1e-9)) : 0;
  double h_adaptive = clamp_adaptive(cfg.step, cfg);

  for (long k = 1;; ++k) {
    if (fixed ? k > n_fixed : tau >= tau_end) return TerminalStatus::Completed;
    if (k > cfg.max_steps) {
      set_message("max_steps reached");
      return TerminalStatus::MaxSteps;
    }
    State8 next;
    double tau_next;
    try {
      if (fixed) {
        tau_next = k == n_fixed ? tau_end : tau0 + static_cast<double>(k) * cfg.step;
        next = ode::rk4_step<8>(p.rhs, tau, y, tau_next - tau);
      } else {
        const Accepted a = adaptive_step(p, tau, y, h_adaptive, tau_end - tau, cfg);
        next = a.y;
        tau_next = (tau_end - tau) <= a.h_used ? tau_end : tau + a.h_used;
        h_adaptive = a.h_next;
      }
      if (cfg.renormalize) next = p.renormalize(next);
      p.guard.check(position_of(next));
    } catch (const OutsideDomain& e) {
      set_message(e.what());
      return TerminalStatus::DomainExit;
    }
    y = next;
    tau = tau_next;
    const PhaseState ps = p.to_phase(tau, y);
    sink(make_sample(ps, p.metric));
    if (cfg.stop && cfg.stop(ps)) {
      set_message("stop predicate");
      return TerminalStatus::Stopped;
    }
  }
}

State8 renormalize_velocity(const MetricField& g, const State8& y) {
  const FourVector u = FourVector::contravariant(tail_of(y));
  const double n = minkowski_norm(u, g, position_of(y));
  if (!(n < 0.0)) return y;
  const double s = 1.0 / std::sqrt(-n);
  State8 out = y;
  for (std::size_t i = 4; i < 8; ++i) out[i] *= s;
  return out;
}

Problem connection_problem(const NonLinearConnection& c, const Particle& particle) {
  Problem p{
      [c, particle](double, const State8& y) {
        const SpacetimeEvent x = position_of(y);
        const FourVector u = FourVector::contravariant(tail_of(y));
        const FourVector a = contravariant_acceleration(c, particle, x, u);
        return State8{y[4], y[5], y[6], y[7], a[0], a[1], a[2], a[3]};
      },
      [](double tau, const State8& y) {
        return PhaseState{tau, position_of(y), FourVector::contravariant(tail_of(y))};
      },
      [g = c.metric()](const State8& y) { return renormalize_velocity(g, y); },
      c.guard(),
      c.metric(),
  };
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

PhaseState step(const NonLinearConnection& c, const Particle& particle, const PhaseState& state,
                const IntegratorConfig& cfg) {
  cfg.validate();
  const Problem p = connection_problem(c, particle);
  const State8 y = pack(state.x, state.u.components());
  p.guard.check(state.x);
  State8 next;
  double h;
  if (cfg.method == Method::Rk4Fixed) {
    h = cfg.step;
    next = ode::rk4_step<8>(p.rhs, state.tau, y, h);
  } else {
    const Accepted a =
        adaptive_step(p, state.tau, y, clamp_adaptive(cfg.step, cfg), cfg.tau_max, cfg);
    next = a.y;
    h = a.h_used;
  }
  if (cfg.renormalize) next = p.renormalize(next);
  p.guard.check(position_of(next));
  return p.to_phase(state.tau + h, next);
}

TerminalStatus integrate(const NonLinearConnection& c, const Particle& particle,
                         const PhaseState& initial, const IntegratorConfig& cfg,
                         const SampleSink& sink, std::string* message) {
  return drive(connection_problem(c, particle), initial.tau,
               pack(initial.x, initial.u.components()), cfg, sink, message);
}

Trajectory integrate(const NonLinearConnection& c, const Particle& particle,
                     const PhaseState& initial, const IntegratorConfig& cfg) {
  Trajectory t;
  t.status = integrate(
      c, particle, initial, cfg, [&t](const TrajectorySample& s) { t.samples.push_back(s); },
      &t.message);
  return t;
}

Trajectory geodesic_integrate(const MetricField& g, const Particle& particle,
                              const PhaseState& initial, const IntegratorConfig& cfg) {
  return integrate(gravitational_connection(g), particle, initial, cfg);
}

Trajectory minimal_substitution_trajectory(const VectorPotential& a, const MetricField& g,
                                           const Particle& particle, const PhaseState& initial,
                                           const IntegratorConfig& cfg) {
  const double m = particle.mass();
  const double e = particle.charge();

  // u^mu from canonical momentum
  auto velocity = [a, g, m, e](const SpacetimeEvent& x, const std::array<double, 4>& pi) {
    const FourVector A = a.at(x);
    std::array<double, 4> p{};
    for (std::size_t n = 0; n < kDim; ++n) p[n] = (pi[n] - e * A[n]) / m;
    const Tensor2 g_inv = g.inverse_at(x);
    std::array<double, 4> u{};
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t n = 0; n < kDim; ++n) u[i] += g_inv(i, n) * p[n];
    return u;
  };

  Problem p{
      [a, g, m, e, velocity](double, const State8& y) {
        const SpacetimeEvent x = position_of(y);
        const std::array<double, 4> u = velocity(x, tail_of(y));
        const Tensor3 dg = g.derivative_at(x);
        const Tensor2 dA = a.gradient_at(x);
        State8 out{u[0], u[1], u[2], u[3], 0, 0, 0, 0};
        for (std::size_t mu = 0; mu < kDim; ++mu) {
          double geo = 0.0;
          for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t j = 0; j < kDim; ++j) geo += dg(mu, i, j) * u[i] * u[j];
          double em = 0.0;
          for (std::size_t b = 0; b < kDim; ++b) em += dA(mu, b) * u[b];
          out[4 + mu] = 0.5 * m * geo + e * em;
        }
        return out;
      },
      [velocity](double tau, const State8& y) {
        const SpacetimeEvent x = position_of(y);
        return PhaseState{tau, x, FourVector::contravariant(velocity(x, tail_of(y)))};
      },
      [a, g, m, e, velocity](const State8& y) {
        // rescale the kinetic part only
        const SpacetimeEvent x = position_of(y);
        const FourVector u = FourVector::contravariant(velocity(x, tail_of(y)));
        const double n = minkowski_norm(u, g, x);
        if (!(n < 0.0)) return y;
        const FourVector A = a.at(x);
        const double s = 1.0 / std::sqrt(-n);
        const Tensor2 metric = g.at(x);
        State8 out = y;
        for (std::size_t mu = 0; mu < kDim; ++mu) {
          double p = 0.0;
          for (std::size_t nu = 0; nu < kDim; ++nu) p += metric(mu, nu) * u[nu];
          out[4 + mu] = m * s * p + e * A[mu];
        }
        return out;
      },
      DomainGuard::intersect(g.guard(), a.guard()),
      g,
  };

  const Tensor2 metric0 = g.at(initial.x);
  const FourVector A0 = a.at(initial.x);
  std::array<double, 4> pi0{};
  for (std::size_t mu = 0; mu < kDim; ++mu) {
    double p = 0.0;
    for (std::size_t nu = 0; nu < kDim; ++nu) p += metric0(mu, nu) * initial.u[nu];
    pi0[mu] = m * p + e * A0[mu];
  }

  Trajectory t;
  t.status = drive(p, initial.tau, pack(initial.x, pi0), cfg,
                   [&t](const TrajectorySample& s) { t.samples.push_back(s); }, &t.message);
  return t;
}

// ---------------------------------------------------------------------------
// Coordinate-time force

namespace {

// 4-point Lagrange interpolation through (ts[i0..i0+3], vs[i0..i0+3]).
double lagrange4(const std::vector<double>& ts, const std::vector<double>& vs, std::size_t i0,
                 double t) {
  double sum = 0.0;
  for (std::size_t j = i0; j < i0 + 4; ++j) {
    double w = 1.0;
    for (std::size_t k = i0; k < i0 + 4; ++k)
      if (k != j) w *= (t - ts[k]) / (ts[j] - ts[k]);
    sum += w * vs[j];
  }
  return sum;
}

}  // namespace

std::vector<CoordinateForce> coordinate_force(const std::vector<TrajectorySample>& samples,
                                              const Particle& particle) {
  const std::size_t n = samples.size();
  if (n < 4) throw InvalidConfig("coordinate_force: need at least 4 samples");
  std::vector<double> ts(n);
  std::array<std::vector<double>, 3> momentum;
  for (auto& m : momentum) m.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ts[k] = samples[k].state.x[0];
    if (k > 0 && !(ts[k] > ts[k - 1]))
      throw NonMonotoneTime("coordinate_force: coordinate time is not strictly increasing");
    for (std::size_t i = 0; i < 3; ++i)
      momentum[i][k] = particle.mass() * samples[k].state.u[i + 1];
  }

  // uniform grid with the same number of points
  const double t0 = ts.front();
  const double dt = (ts.back() - t0) / static_cast<double>(n - 1);
  std::vector<double> grid(n);
  std::array<std::vector<double>, 3> resampled;
  for (auto& r : resampled) r.resize(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k + 1 == n ? ts.back() : t0 + static_cast<double>(k) * dt;
    grid[k] = t;
    while (seg + 2 < n && ts[seg + 1] < t) ++seg;
    const std::size_t i0 = std::min(seg > 0 ? seg - 1 : 0, n - 4);
    for (std::size_t i = 0; i < 3; ++i) resampled[i][k] = lagrange4(ts, momentum[i], i0, t);
  }

  std::vector<CoordinateForce> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].t = grid[k];
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& q = resampled[i];
      double d;
      if (k == 0)
        d = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * dt);
      else if (k + 1 == n)
        d = (3.0 * q[n - 1] - 4.0 * q[n - 2] + q[n - 3]) / (2.0 * dt);
      else
        d = (q[k + 1] - q[k - 1]) / (2.0 * dt);
      out[k].force[i] = d;
    }
  }
  return out;
}

SpacetimeEvent interpolate_position(const PhaseState& a, const PhaseState& b, double tau) {
  const double h = b.tau - a.tau;
  const double s = (tau - a.tau) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  std::array<double, 4> c{};
  for (std::size_t m = 0; m < kDim; ++m)
    c[m] = h00 * a.x[m] + h10 * h * a.u[m] + h01 * b.x[m] + h11 * h * b.u[m];
  return SpacetimeEvent(c);
}

}  // namespace phasecon
