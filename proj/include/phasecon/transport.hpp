#pragma once

// Parallel transport in proper time. The state is (x^mu, u^mu), both
// contravariant, with p_mu = m u_mu. The transport law is
//
//   du_mu/dtau = (1/m) h0_{mu g}(x) u^g + h1_{mu g a}(x) u^g u^a
//
// and the integrator raises it with the local metric each stage. For h1 = -Gamma
// this is the contravariant geodesic equation; for h0 = eF it is the covariant
// Lorentz force.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "phasecon/connection.hpp"
#include "phasecon/electromagnetic.hpp"
#include "phasecon/metric.hpp"
#include "phasecon/tensor.hpp"

namespace phasecon {

struct PhaseState {
  double tau = 0.0;
  SpacetimeEvent x;
  FourVector u;  // contravariant unit tangent
};

struct TrajectorySample {
  PhaseState state;
  double norm_residual = 0.0;  // g_{mn} u^m u^n + 1
  std::map<std::string, double> diagnostics;
};

enum class Method { Rk4Fixed, Rk45Adaptive };

inline constexpr double kMinAdaptiveStep = 1e-8;

struct IntegratorConfig {
  Method method = Method::Rk4Fixed;
  double step = 1e-2;       // fixed step, or initial trial step for rk45
  double tolerance = 1e-10; // rk45 absolute and relative tolerance
  double tau_max = 10.0;
  long max_steps = 10'000'000;
  bool renormalize = false;  // project u back onto g(u,u) = -1 after each step
  std::function<bool(const PhaseState&)> stop;  // optional extra stop predicate

  /// Throws InvalidConfig on non-positive step/tolerance/tau_max or max_steps < 1.
  void validate() const;
};

enum class TerminalStatus { Completed, MaxSteps, DomainExit, Stopped };

const char* to_string(TerminalStatus s);

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TerminalStatus status = TerminalStatus::Completed;
  std::string message;
};

using SampleSink = std::function<void(const TrajectorySample&)>;

/// The two transport terms, both covariant, before summation.
struct AccelerationTerms {
  FourVector zeroth;  // (1/m) h0_{mu g} u^g
  FourVector first;   // h1_{mu g a} u^g u^a
  FourVector total() const { return first + zeroth; }
};

AccelerationTerms acceleration_terms(const NonLinearConnection& c, const Particle& particle,
                                     const SpacetimeEvent& x, const FourVector& u);

/// du_mu/dtau (covariant).
FourVector acceleration(const NonLinearConnection& c, const Particle& particle,
                        const SpacetimeEvent& x, const FourVector& u);

/// du^mu/dtau = g^{mu nu} du_nu/dtau, the quantity actually integrated.
FourVector contravariant_acceleration(const NonLinearConnection& c, const Particle& particle,
                                      const SpacetimeEvent& x, const FourVector& u);

TrajectorySample make_sample(const PhaseState& state, const MetricField& g);

/// One RK4 step of cfg.step, or one accepted RK45 step starting from cfg.step.
/// Throws OutsideDomain / StepRejected.
PhaseState step(const NonLinearConnection& c, const Particle& particle, const PhaseState& state,
                const IntegratorConfig& cfg);

/// Streams samples (initial state first) until tau_max, max_steps, a stop
/// predicate or domain exit. Domain exit is a status, StepRejected is thrown.
TerminalStatus integrate(const NonLinearConnection& c, const Particle& particle,
                         const PhaseState& initial, const IntegratorConfig& cfg,
                         const SampleSink& sink, std::string* message = nullptr);

Trajectory integrate(const NonLinearConnection& c, const Particle& particle,
                     const PhaseState& initial, const IntegratorConfig& cfg);

/// integrate(gravitational_connection(g), ...). The mass drops out.
Trajectory geodesic_integrate(const MetricField& g, const Particle& particle,
                              const PhaseState& initial, const IntegratorConfig& cfg);

/// Integrates the canonical momentum pi_mu = p_mu + e A_mu under the metric alone:
///   dx^mu/dtau = g^{mu nu}(pi_nu - e A_nu)/m
///   dpi_mu/dtau = (m/2) d_mu g_{ab} u^a u^b + e (d_mu A_b) u^b
/// and reports the kinetic u = p/m in the samples.
Trajectory minimal_substitution_trajectory(const VectorPotential& a, const MetricField& g,
                                           const Particle& particle, const PhaseState& initial,
                                           const IntegratorConfig& cfg);

struct CoordinateForce {
  double t;
  Vec3 force;  // d(m u^i)/dt, i.e. d(m gamma v)/dt in flat space
};

/// Resamples m u^i on a uniform coordinate-time grid (cubic interpolation) and
/// differentiates with central differences. Throws NonMonotoneTime.
std::vector<CoordinateForce> coordinate_force(const std::vector<TrajectorySample>& samples,
                                              const Particle& particle);

/// Cubic Hermite interpolation of x^mu(tau) between two samples using u = dx/dtau.
SpacetimeEvent interpolate_position(const PhaseState& a, const PhaseState& b, double tau);

}  // namespace phasecon
