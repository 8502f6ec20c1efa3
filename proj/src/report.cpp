#include "phasecon/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "phasecon/curvature.hpp"

namespace phasecon {

namespace {

double max_norm_residual(const std::vector<TrajectorySample>& samples) {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.norm_residual));
  return m;
}

}  // namespace

RunReport run(const Scenario& scenario) {
  RunReport r;
  r.scenario = scenario;
  const Trajectory traj = integrate(scenario.connection(), scenario.particle, scenario.initial,
                                    scenario.integrator);
  r.samples = traj.samples;
  r.status = traj.status;
  r.message = traj.message;
  r.labels["status"] = to_string(traj.status);
  if (!traj.message.empty()) r.labels["message"] = traj.message;
  r.summary["max_norm_residual"] = max_norm_residual(r.samples);
  r.summary["samples"] = static_cast<double>(r.samples.size());
  r.summary["final_tau"] = r.samples.empty() ? 0.0 : r.samples.back().state.tau;
  apply_oracle(r);
  return r;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ValidationError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::array<double, 10> row_of(const TrajectorySample& s) {
  const auto& x = s.state.x;
  const auto& u = s.state.u;
  return {s.state.tau, x[0], x[1], x[2], x[3], u[0], u[1], u[2], u[3], s.norm_residual};
}

TrajectorySample sample_of(const std::array<double, 10>& v) {
  TrajectorySample s;
  s.state.tau = v[0];
  s.state.x = SpacetimeEvent(v[1], v[2], v[3], v[4]);
  s.state.u = FourVector::contravariant({v[5], v[6], v[7], v[8]});
  s.norm_residual = v[9];
  return s;
}

const std::array<std::string, 10>& columns() {
  static const std::array<std::string, 10> c = {"tau", "t",  "x",  "y",  "z",
                                                "u0",  "u1", "u2", "u3", "norm_residual"};
  return c;
}

}  // namespace

void write_csv(const std::vector<TrajectorySample>& samples, std::ostream& out) {
  out << kCsvHeader << '\n';
  char buf[32];
  for (const auto& s : samples) {
    const auto row = row_of(s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

std::vector<TrajectorySample> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ParseError(1, "", "expected CSV header '" + std::string(kCsvHeader) + "'");
  std::vector<TrajectorySample> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 10> v{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t comma = line.find(',', pos);
      const bool last = i + 1 == v.size();
      if (last != (comma == std::string::npos))
        throw ParseError(lineno, columns()[i], "expected 10 comma-separated values");
      const std::size_t end = last ? line.size() : comma;
      const char* first = line.data() + pos;
      const char* stop = line.data() + end;
      auto [ptr, ec] = std::from_chars(first, stop, v[i]);
      if (ec != std::errc() || ptr != stop) throw ParseError(lineno, columns()[i], "not a number");
      pos = end + 1;
    }
    out.push_back(sample_of(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json scenario_json(const Scenario& sc) {
  using nlohmann::json;
  json j;
  j["name"] = sc.name;
  j["metric"] = {{"type", to_string(sc.metric.kind)}};
  if (sc.metric.kind != MetricKind::Minkowski) j["metric"]["M"] = sc.metric.mass;
  json em = {{"type", to_string(sc.field.kind)}};
  switch (sc.field.kind) {
    case FieldKind::None: break;
    case FieldKind::Uniform:
      em["E"] = sc.field.E;
      em["B"] = sc.field.B;
      break;
    case FieldKind::SymmetricGauge: em["B"] = sc.field.B; break;
    case FieldKind::Coulomb: em["Q"] = sc.field.source_charge; break;
    case FieldKind::Wald: em["B"] = sc.field.strength; break;
  }
  j["em"] = em;
  j["particle"] = {{"m", sc.particle.mass()}, {"e", sc.particle.charge()}};
  j["initial"] = {{"position", sc.initial.x.coords()}, {"u", sc.initial.u.components()}};
  const auto& c = sc.integrator;
  j["integrator"] = {{"method", to_string(c.method)}, {"step", c.step},
                     {"tolerance", c.tolerance},      {"tau_max", c.tau_max},
                     {"max_steps", c.max_steps},      {"renormalize", c.renormalize}};
  j["oracle"] = {{"type", to_string(sc.oracle.kind)}, {"orbits", sc.oracle.orbits}};
  return j;
}

}  // namespace

void write_json(const RunReport& report, std::ostream& out) {
  using nlohmann::json;
  json j;
  j["scenario"] = scenario_json(report.scenario);
  j["columns"] = columns();
  json samples = json::array();
  for (const auto& s : report.samples) {
    const auto row = row_of(s);
    json o = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[columns()[i]] = row[i];
    samples.push_back(std::move(o));
  }
  j["samples"] = std::move(samples);
  j["status"] = to_string(report.status);
  j["message"] = report.message;
  j["summary"] = report.summary;
  j["labels"] = report.labels;
  out << j.dump(1) << '\n';
}

std::vector<TrajectorySample> read_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, "", std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("samples") || !j["samples"].is_array())
    throw ParseError(0, "samples", "missing samples array");
  std::vector<TrajectorySample> out;
  for (const auto& o : j["samples"]) {
    std::array<double, 10> v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto it = o.find(columns()[i]);
      if (it == o.end() || !it->is_number())
        throw ParseError(0, columns()[i], "missing or non-numeric sample field");
      v[i] = it->get<double>();
    }
    out.push_back(sample_of(v));
  }
  return out;
}

void emit(const RunReport& report, Format format, std::ostream& out) {
  if (format == Format::Csv)
    write_csv(report.samples, out);
  else
    write_json(report, out);
}

// ---------------------------------------------------------------------------
// Checkers

const char* to_string(Checker c) {
  switch (c) {
    case Checker::Bianchi: return "bianchi";
    case Checker::Closure: return "closure";
    case Checker::Norm: return "norm";
    case Checker::MassInvariance: return "mass-invariance";
    case Checker::MinimalSubstitution: return "minimal-substitution";
  }
  return "?";
}

Checker parse_checker(std::string_view name) {
  for (Checker c : {Checker::Bianchi, Checker::Closure, Checker::Norm, Checker::MassInvariance,
                    Checker::MinimalSubstitution})
    if (name == to_string(c)) return c;
  throw ValidationError("unknown checker '" + std::string(name) +
                        "' (expected bianchi, closure, norm, mass-invariance or "
                        "minimal-substitution)");
}

double checker_bound(Checker c, const Scenario& sc) {
  switch (c) {
    case Checker::Bianchi: return 1e-4;
    case Checker::Closure:
      // potentials linear in x are differentiated exactly up to rounding
      return sc.field.kind == FieldKind::Uniform || sc.field.kind == FieldKind::SymmetricGauge
                 ? 1e-8
                 : 1e-6;
    case Checker::Norm: return 1e-8;
    case Checker::MassInvariance:
      return sc.field.kind == FieldKind::None || sc.particle.charge() == 0.0 ? 1e-12 : 1e-14;
    case Checker::MinimalSubstitution: return 1e-6;
  }
  return 0.0;
}

std::vector<SpacetimeEvent> probe_events(const Scenario& sc, std::size_t count) {
  const Trajectory t = integrate(sc.connection(), sc.particle, sc.initial, sc.integrator);
  std::vector<SpacetimeEvent> out;
  const std::size_t n = t.samples.size();
  if (n == 0 || count == 0) return out;
  const std::size_t k = std::min(count, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = k == 1 ? 0 : i * (n - 1) / (k - 1);
    out.push_back(t.samples[idx].state.x);
  }
  return out;
}

namespace {

double max_state_difference(const std::vector<TrajectorySample>& a,
                            const std::vector<TrajectorySample>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i].state.tau - b[i].state.tau));
    for (std::size_t mu = 0; mu < kDim; ++mu) {
      m = std::max(m, std::abs(a[i].state.x[mu] - b[i].state.x[mu]));
      m = std::max(m, std::abs(a[i].state.u[mu] - b[i].state.u[mu]));
    }
  }
  return m;
}

double endpoint_separation(const Trajectory& a, const Trajectory& b) {
  if (a.samples.empty() || b.samples.empty()) return std::numeric_limits<double>::infinity();
  const auto& xa = a.samples.back().state.x;
  const auto& xb = b.samples.back().state.x;
  double s = 0.0;
  for (std::size_t mu = 0; mu < kDim; ++mu) s += (xa[mu] - xb[mu]) * (xa[mu] - xb[mu]);
  return std::sqrt(s);
}

}  // namespace

RunReport check(const Scenario& sc, Checker checker) {
  RunReport r;
  r.scenario = sc;
  r.labels["checker"] = to_string(checker);
  double residual = 0.0;

  switch (checker) {
    case Checker::Bianchi: {
      const MetricField g = sc.metric_field();
      for (const auto& x : probe_events(sc)) residual = std::max(residual, bianchi_residual(g, x));
      break;
    }
    case Checker::Closure: {
      const auto a = sc.potential();
      if (!a)
        throw IncompatibleChecker("closure needs a vector potential; scenario '" + sc.name +
                                  "' has no electromagnetic field");
      for (const auto& x : probe_events(sc)) residual = std::max(residual, closure_residual(*a, x));
      break;
    }
    case Checker::Norm: {
      const Trajectory t = integrate(sc.connection(), sc.particle, sc.initial, sc.integrator);
      r.samples = t.samples;
      r.status = t.status;
      r.message = t.message;
      residual = max_norm_residual(t.samples);
      break;
    }
    case Checker::MassInvariance: {
      const NonLinearConnection c = sc.connection();
      if (sc.field.kind == FieldKind::None || sc.particle.charge() == 0.0) {
        // h0 = 0: trajectories must not depend on the mass at all
        const Particle heavy(17.0 * sc.particle.mass(), sc.particle.charge());
        const Trajectory a = integrate(c, sc.particle, sc.initial, sc.integrator);
        const Trajectory b = integrate(c, heavy, sc.initial, sc.integrator);
        r.samples = a.samples;
        r.status = a.status;
        residual = max_state_difference(a.samples, b.samples);
        r.labels["mode"] = "trajectory";
      } else {
        // h0 != 0: doubling m at fixed e halves the zeroth-order term exactly
        const Particle heavy(2.0 * sc.particle.mass(), sc.particle.charge());
        const Trajectory t = integrate(c, sc.particle, sc.initial, sc.integrator);
        const std::size_t n = t.samples.size();
        const std::size_t probes = std::min<std::size_t>(n, 64);
        for (std::size_t i = 0; i < probes; ++i) {
          const auto& s = t.samples[probes == 1 ? 0 : i * (n - 1) / (probes - 1)].state;
          const AccelerationTerms light = acceleration_terms(c, sc.particle, s.x, s.u);
          const AccelerationTerms weighty = acceleration_terms(c, heavy, s.x, s.u);
          double scale = 0.0, diff = 0.0;
          for (std::size_t mu = 0; mu < kDim; ++mu) {
            scale = std::max(scale, std::abs(0.5 * light.zeroth[mu]));
            diff = std::max(diff, std::abs(weighty.zeroth[mu] - 0.5 * light.zeroth[mu]));
            diff = std::max(diff, std::abs(weighty.first[mu] - light.first[mu]));
          }
          residual = std::max(residual, scale > 0.0 ? diff / scale : diff);
        }
        r.labels["mode"] = "decomposed";
      }
      break;
    }
    case Checker::MinimalSubstitution: {
      const auto a = sc.potential();
      if (!a)
        throw IncompatibleChecker("minimal-substitution needs a vector potential; scenario '" +
                                  sc.name + "' has no electromagnetic field");
      const Trajectory lorentz = integrate(sc.connection(), sc.particle, sc.initial, sc.integrator);
      const Trajectory canonical = minimal_substitution_trajectory(
          *a, sc.metric_field(), sc.particle, sc.initial, sc.integrator);
      r.samples = lorentz.samples;
      r.status = lorentz.status;
      residual = endpoint_separation(lorentz, canonical);
      break;
    }
  }

  const double bound = checker_bound(checker, sc);
  r.summary["residual"] = residual;
  r.summary["bound"] = bound;
  r.summary["passed"] = residual <= bound ? 1.0 : 0.0;
  r.labels["status"] = to_string(r.status);
  return r;
}

}  // namespace phasecon
