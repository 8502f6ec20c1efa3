#pragma once

// Runnable scenarios loaded from flat key = value documents:
//
//   name = cyclotron
//   [metric]      type = minkowski | schwarzschild | weak-field ; M
//   [em]          type = none | uniform | coulomb | symmetric-gauge | wald ; E, B, Q
//   [particle]    m ; e
//   [initial]     position (t,x1,x2,x3) ; velocity (dx^i/dt) | u (u^i) ;
//                 orbit = circular | eccentric ; r0 ; a ; ecc
//   [integrator]  method = rk4 | rk45 ; step ; tolerance ; tau_max ; max_steps ; renormalize
//   [oracle]      type = none | free | cyclotron | exb-drift | circular-orbit |
//                        precession | newtonian ; orbits
//
// Unknown sections or keys are rejected. '#' starts a comment. Reals accept
// `pi`, products and quotients such as `2*pi` or `pi/2`.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasecon/connection.hpp"
#include "phasecon/electromagnetic.hpp"
#include "phasecon/metric.hpp"
#include "phasecon/transport.hpp"

namespace phasecon {

enum class MetricKind { Minkowski, Schwarzschild, WeakField };
enum class FieldKind { None, Uniform, Coulomb, SymmetricGauge, Wald };
enum class OrbitKind { None, Circular, Eccentric };
enum class OracleKind { None, Free, Cyclotron, ExBDrift, CircularOrbit, Precession, Newtonian };

const char* to_string(MetricKind k);
const char* to_string(FieldKind k);
const char* to_string(OrbitKind k);
const char* to_string(OracleKind k);
const char* to_string(Method m);

struct MetricSelection {
  MetricKind kind = MetricKind::Minkowski;
  double mass = 1.0;
};

struct FieldSelection {
  FieldKind kind = FieldKind::None;
  Vec3 E{};
  Vec3 B{};
  double source_charge = 0.0;  // coulomb Q
  double strength = 0.0;       // wald B
};

struct InitialSelection {
  std::array<double, 4> position{};
  std::optional<Vec3> velocity;   // coordinate velocity dx^i/dt
  std::optional<Vec3> spatial_u;  // u^i
  OrbitKind orbit = OrbitKind::None;
  double r0 = 0.0;
  double a = 0.0;
  double ecc = 0.0;
};

struct OracleSelection {
  OracleKind kind = OracleKind::None;
  int orbits = 10;
};

struct Scenario {
  std::string name = "unnamed";
  MetricSelection metric;
  FieldSelection field;
  Particle particle{1.0, 0.0};
  InitialSelection initial_spec;
  PhaseState initial;  // normalised: g(u,u) = -1, u^0 > 0
  IntegratorConfig integrator;
  OracleSelection oracle;

  MetricField metric_field() const;
  /// Potential whose exterior derivative is the scenario's field (none for FieldKind::None).
  std::optional<VectorPotential> potential() const;
  std::optional<FaradayField> faraday() const;
  /// Gravity (metric) superposed with e F when a field is present.
  NonLinearConnection connection() const;
};

/// Throws ParseError (malformed line, unknown section/key) or ValidationError.
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Solves u^0 > 0 from g(u,u) = -1 given spatial u^i. ValidationError if impossible.
FourVector normalized_from_spatial(const Tensor2& g, const Vec3& spatial_u);
/// u for coordinate velocity v = dx^i/dt. ValidationError if not timelike.
FourVector normalized_from_velocity(const Tensor2& g, const Vec3& velocity);

/// Equatorial Schwarzschild circular orbit: u^t = 1/sqrt(1-3M/r), u^phi = sqrt(M/r^3) u^t.
PhaseState schwarzschild_circular_initial(double mass, double r0);
/// Equatorial bound orbit started at periapsis r_p = a(1 - ecc), apoapsis a(1 + ecc).
PhaseState schwarzschild_eccentric_initial(double mass, double a, double ecc);

std::vector<std::string> builtin_scenario_names();
/// Text of a bundled scenario. Throws ValidationError for unknown names.
std::string builtin_scenario_text(std::string_view name);

/// Resolves a built-in name or a file path.
Scenario resolve_scenario(const std::string& name_or_path);

}  // namespace phasecon
