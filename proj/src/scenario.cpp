#include "phasecon/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace phasecon {

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Minkowski: return "minkowski";
    case MetricKind::Schwarzschild: return "schwarzschild";
    case MetricKind::WeakField: return "weak-field";
  }
  return "?";
}

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::None: return "none";
    case FieldKind::Uniform: return "uniform";
    case FieldKind::Coulomb: return "coulomb";
    case FieldKind::SymmetricGauge: return "symmetric-gauge";
    case FieldKind::Wald: return "wald";
  }
  return "?";
}

const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::None: return "none";
    case OrbitKind::Circular: return "circular";
    case OrbitKind::Eccentric: return "eccentric";
  }
  return "?";
}

const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::None: return "none";
    case OracleKind::Free: return "free";
    case OracleKind::Cyclotron: return "cyclotron";
    case OracleKind::ExBDrift: return "exb-drift";
    case OracleKind::CircularOrbit: return "circular-orbit";
    case OracleKind::Precession: return "precession";
    case OracleKind::Newtonian: return "newtonian";
  }
  return "?";
}

const char* to_string(Method m) { return m == Method::Rk4Fixed ? "rk4" : "rk45"; }

// ---------------------------------------------------------------------------
// Scenario -> library objects

MetricField Scenario::metric_field() const {
  switch (metric.kind) {
    case MetricKind::Minkowski: return MetricField::minkowski();
    case MetricKind::Schwarzschild: return MetricField::schwarzschild(metric.mass);
    case MetricKind::WeakField: return MetricField::weak_field(metric.mass);
  }
  return MetricField::minkowski();
}

std::optional<VectorPotential> Scenario::potential() const {
  switch (field.kind) {
    case FieldKind::None: return std::nullopt;
    case FieldKind::Uniform: return VectorPotential::uniform(field.E, field.B);
    case FieldKind::Coulomb: return VectorPotential::coulomb(field.source_charge);
    case FieldKind::SymmetricGauge: return VectorPotential::symmetric_gauge(field.B);
    case FieldKind::Wald: return VectorPotential::wald(field.strength);
  }
  return std::nullopt;
}

std::optional<FaradayField> Scenario::faraday() const {
  switch (field.kind) {
    case FieldKind::None: return std::nullopt;
    case FieldKind::Uniform: return FaradayField::uniform(field.E, field.B);
    case FieldKind::SymmetricGauge: {
      // F taken numerically from the potential, exercising F = dA.
      const VectorPotential a = VectorPotential::symmetric_gauge(field.B);
      return FaradayField(
          "d(symmetric-gauge)",
          [a](const SpacetimeEvent& x) { return faraday_from_potential(a, x); }, a.guard());
    }
    case FieldKind::Coulomb:
    case FieldKind::Wald: return FaradayField::from_potential(*potential());
  }
  return std::nullopt;
}

NonLinearConnection Scenario::connection() const {
  const MetricField g = metric_field();
  NonLinearConnection c = gravitational_connection(g);
  if (auto f = faraday()) c = superpose(c, electromagnetic_connection(*f, particle.charge(), g));
  return c;
}

// ---------------------------------------------------------------------------
// Initial data

FourVector normalized_from_spatial(const Tensor2& g, const Vec3& s) {
  // g00 (u0)^2 + 2 b u0 + c = 0 with b = g0i u^i, c = gij u^i u^j + 1
  double b = 0.0, c = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    b += g(0, i + 1) * s[i];
    for (std::size_t j = 0; j < 3; ++j) c += g(i + 1, j + 1) * s[i] * s[j];
  }
  const double a = g(0, 0);
  if (a == 0.0) throw ValidationError("initial: g_00 = 0, cannot solve for u^0");
  const double disc = b * b - a * c;
  if (disc < 0.0) throw ValidationError("initial: no real u^0 normalises the tangent vector");
  const double root = std::sqrt(disc);
  const double r1 = (-b + root) / a;
  const double r2 = (-b - root) / a;
  const double u0 = std::max(r1, r2);
  if (!(u0 > 0.0)) throw ValidationError("initial: no future-directed u^0 exists");
  return FourVector::contravariant({u0, s[0], s[1], s[2]});
}

FourVector normalized_from_velocity(const Tensor2& g, const Vec3& v) {
  double q = g(0, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    q += 2.0 * g(0, i + 1) * v[i];
    for (std::size_t j = 0; j < 3; ++j) q += g(i + 1, j + 1) * v[i] * v[j];
  }
  if (!(q < 0.0)) throw ValidationError("initial: velocity is not timelike");
  const double u0 = 1.0 / std::sqrt(-q);
  return FourVector::contravariant({u0, u0 * v[0], u0 * v[1], u0 * v[2]});
}

PhaseState schwarzschild_circular_initial(double mass, double r0) {
  if (!(r0 > 2.0 * mass * (1.0 + kHorizonMargin)))
    throw ValidationError("initial: r0 is inside the horizon guard r > 2M(1+1e-6)");
  if (!(r0 > 3.0 * mass)) throw ValidationError("initial: no timelike circular orbit at r0 <= 3M");
  const double ut = 1.0 / std::sqrt(1.0 - 3.0 * mass / r0);
  const double uphi = std::sqrt(mass / (r0 * r0 * r0)) * ut;
  return PhaseState{0.0, SpacetimeEvent(0.0, r0, std::numbers::pi / 2, 0.0),
                    FourVector::contravariant({ut, 0.0, 0.0, uphi})};
}

PhaseState schwarzschild_eccentric_initial(double mass, double a, double ecc) {
  if (!(ecc > 0.0 && ecc < 1.0)) throw ValidationError("initial: ecc must be in (0, 1)");
  const double rp = a * (1.0 - ecc);
  const double ra = a * (1.0 + ecc);
  if (!(rp > 2.0 * mass * (1.0 + kHorizonMargin)))
    throw ValidationError("initial: periapsis is inside the horizon guard r > 2M(1+1e-6)");
  const double fp = 1.0 - 2.0 * mass / rp;
  const double fa = 1.0 - 2.0 * mass / ra;
  // equal effective potential (1-2M/r)(1+L^2/r^2) at both turning points
  const double L2 = (fa - fp) / (fp / (rp * rp) - fa / (ra * ra));
  if (!(L2 > 0.0)) throw ValidationError("initial: no bound orbit with these turning points");
  const double E2 = fp * (1.0 + L2 / (rp * rp));
  if (!(E2 < 1.0)) throw ValidationError("initial: orbit is not bound");
  const double ut = std::sqrt(E2) / fp;
  const double uphi = std::sqrt(L2) / (rp * rp);
  return PhaseState{0.0, SpacetimeEvent(0.0, rp, std::numbers::pi / 2, 0.0),
                    FourVector::contravariant({ut, 0.0, 0.0, uphi})};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

class Document {
 public:
  explicit Document(std::string_view text) {
    static const std::set<std::string> sections = {"",          "metric",     "em",    "particle",
                                                   "initial",   "integrator", "oracle"};
    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError(line, "", "unterminated section header");
        current = trim(std::string_view(s).substr(1, s.size() - 2));
        if (!sections.contains(current))
          throw ParseError(line, current, "unknown section [" + current + "]");
        if (seen_.contains(current)) throw ParseError(line, current, "duplicate section");
        seen_.insert(current);
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, "", "expected key = value");
      const std::string key = trim(std::string_view(s).substr(0, eq));
      const std::string value = trim(std::string_view(s).substr(eq + 1));
      if (key.empty()) throw ParseError(line, "", "empty key");
      if (value.empty()) throw ParseError(line, key, "empty value");
      auto& sec = data_[current];
      if (sec.contains(key)) throw ParseError(line, key, "duplicate key");
      sec[key] = Entry{value, line};
    }
  }

  /// Rejects keys of `section` not in `allowed`.
  void restrict(const std::string& section, const std::set<std::string>& allowed) const {
    auto it = data_.find(section);
    if (it == data_.end()) return;
    for (const auto& [key, entry] : it->second) {
      if (!allowed.contains(key)) {
        const std::string where = section.empty() ? "top level" : "[" + section + "]";
        throw ParseError(entry.line, key, "unknown key in " + where);
      }
    }
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end()) return nullptr;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? nullptr : &kt->second;
  }

 private:
  std::map<std::string, Section> data_;
  std::set<std::string> seen_;
};

double parse_atom(const std::string& tok, int line, const std::string& key) {
  if (tok == "pi") return std::numbers::pi;
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || tok.empty())
    throw ParseError(line, key, "not a number: '" + tok + "'");
  return v;
}

// number | pi, joined by '*' or '/', optional leading '-'
double parse_real(const Entry& e, const std::string& key) {
  std::string s = e.value;
  double sign = 1.0;
  if (!s.empty() && s.front() == '-' && s.find_first_of("*/") != std::string::npos) {
    sign = -1.0;
    s.erase(0, 1);
  }
  double acc = 0.0;
  char op = '*';
  bool first = true;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find_first_of("*/", pos);
    const std::string tok = trim(s.substr(pos, next == std::string::npos ? std::string::npos
                                                                          : next - pos));
    const double v = parse_atom(tok, e.line, key);
    if (first) {
      acc = v;
      first = false;
    } else {
      acc = op == '*' ? acc * v : acc / v;
    }
    if (next == std::string::npos) break;
    op = s[next];
    pos = next + 1;
  }
  const double out = sign * acc;
  if (!std::isfinite(out)) throw ParseError(e.line, key, "value is not finite");
  return out;
}

template <std::size_t N>
std::array<double, N> parse_list(const Entry& e, const std::string& key) {
  std::array<double, N> out{};
  std::size_t count = 0;
  std::size_t pos = 0;
  const std::string& s = e.value;
  for (;;) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok =
        trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (count >= N) throw ParseError(e.line, key, "expected " + std::to_string(N) + " values");
    out[count++] = parse_real(Entry{tok, e.line}, key);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (count != N) throw ParseError(e.line, key, "expected " + std::to_string(N) + " values");
  return out;
}

bool parse_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ParseError(e.line, key, "expected true or false");
}

template <class Enum>
Enum parse_enum(const Entry& e, const std::string& key,
                const std::vector<std::pair<std::string, Enum>>& options) {
  for (const auto& [name, value] : options)
    if (e.value == name) return value;
  std::string list;
  for (const auto& [name, value] : options) list += (list.empty() ? "" : ", ") + name;
  throw ParseError(e.line, key, "expected one of: " + list);
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

Scenario load_scenario(std::string_view text) {
  const Document doc(text);
  doc.restrict("", {"name"});
  doc.restrict("metric", {"type", "M"});
  doc.restrict("em", {"type", "E", "B", "Q"});
  doc.restrict("particle", {"m", "e"});
  doc.restrict("initial", {"position", "velocity", "u", "orbit", "r0", "a", "ecc"});
  doc.restrict("integrator",
               {"method", "step", "tolerance", "tau_max", "max_steps", "renormalize"});
  doc.restrict("oracle", {"type", "orbits"});

  Scenario sc;
  if (auto e = doc.find("", "name")) sc.name = e->value;

  auto real = [&](const std::string& section, const std::string& key) -> std::optional<double> {
    if (auto e = doc.find(section, key)) return parse_real(*e, key);
    return std::nullopt;
  };
  auto reject = [&](const std::string& section, const std::string& key, const std::string& why) {
    if (auto e = doc.find(section, key))
      throw ValidationError("line " + std::to_string(e->line) + " [" + key + "]: " + why);
  };

  // [metric]
  if (auto e = doc.find("metric", "type")) {
    sc.metric.kind = parse_enum<MetricKind>(*e, "type",
                                            {{"minkowski", MetricKind::Minkowski},
                                             {"schwarzschild", MetricKind::Schwarzschild},
                                             {"weak-field", MetricKind::WeakField}});
  }
  if (sc.metric.kind == MetricKind::Minkowski) {
    reject("metric", "M", "minkowski metric takes no mass");
  } else {
    sc.metric.mass = real("metric", "M").value_or(1.0);
    if (!(sc.metric.mass > 0.0)) throw ValidationError("[metric] M must be > 0");
  }
  const bool cartesian = sc.metric.kind != MetricKind::Schwarzschild;

  // [em]
  if (auto e = doc.find("em", "type")) {
    sc.field.kind = parse_enum<FieldKind>(*e, "type",
                                          {{"none", FieldKind::None},
                                           {"uniform", FieldKind::Uniform},
                                           {"coulomb", FieldKind::Coulomb},
                                           {"symmetric-gauge", FieldKind::SymmetricGauge},
                                           {"wald", FieldKind::Wald}});
  }
  auto vec = [&](const std::string& key) -> std::optional<Vec3> {
    if (auto e = doc.find("em", key)) return parse_list<3>(*e, key);
    return std::nullopt;
  };
  switch (sc.field.kind) {
    case FieldKind::None:
      reject("em", "E", "no field selected");
      reject("em", "B", "no field selected");
      reject("em", "Q", "no field selected");
      break;
    case FieldKind::Uniform:
      reject("em", "Q", "uniform field takes E and B");
      sc.field.E = vec("E").value_or(Vec3{});
      sc.field.B = vec("B").value_or(Vec3{});
      break;
    case FieldKind::SymmetricGauge:
      reject("em", "E", "symmetric-gauge potential carries only B");
      reject("em", "Q", "symmetric-gauge potential carries only B");
      sc.field.B = vec("B").value_or(Vec3{});
      break;
    case FieldKind::Coulomb:
      reject("em", "E", "coulomb field takes Q");
      reject("em", "B", "coulomb field takes Q");
      sc.field.source_charge = real("em", "Q").value_or(1.0);
      break;
    case FieldKind::Wald: {
      reject("em", "E", "wald field takes a scalar B");
      reject("em", "Q", "wald field takes a scalar B");
      if (auto e = doc.find("em", "B")) sc.field.strength = parse_real(*e, "B");
      break;
    }
  }
  if (sc.field.kind == FieldKind::Wald && sc.metric.kind != MetricKind::Schwarzschild)
    throw ValidationError("[em] wald field requires the schwarzschild metric");
  if (sc.field.kind != FieldKind::None && sc.field.kind != FieldKind::Wald && !cartesian)
    throw ValidationError("[em] " + std::string(to_string(sc.field.kind)) +
                          " field requires a Cartesian metric (minkowski or weak-field)");

  // [particle]
  {
    const double m = real("particle", "m").value_or(1.0);
    const double e = real("particle", "e").value_or(0.0);
    try {
      sc.particle = Particle(m, e);
    } catch (const InvalidParticle& err) {
      throw ValidationError(std::string("[particle] ") + err.what());
    }
  }

  // [initial]
  const MetricField g = sc.metric_field();
  auto& init = sc.initial_spec;
  if (auto e = doc.find("initial", "orbit")) {
    init.orbit = parse_enum<OrbitKind>(
        *e, "orbit", {{"circular", OrbitKind::Circular}, {"eccentric", OrbitKind::Eccentric}});
  }
  if (init.orbit != OrbitKind::None) {
    if (sc.metric.kind != MetricKind::Schwarzschild)
      throw ValidationError("[initial] orbit requires the schwarzschild metric");
    for (const char* k : {"position", "velocity", "u"})
      reject("initial", k, "orbit sets the initial state");
  }
  switch (init.orbit) {
    case OrbitKind::Circular:
      reject("initial", "a", "circular orbit takes r0");
      reject("initial", "ecc", "circular orbit takes r0");
      init.r0 = real("initial", "r0").value_or(10.0 * sc.metric.mass);
      sc.initial = schwarzschild_circular_initial(sc.metric.mass, init.r0);
      break;
    case OrbitKind::Eccentric:
      reject("initial", "r0", "eccentric orbit takes a and ecc");
      init.a = real("initial", "a").value_or(20.0 * sc.metric.mass);
      init.ecc = real("initial", "ecc").value_or(0.1);
      sc.initial = schwarzschild_eccentric_initial(sc.metric.mass, init.a, init.ecc);
      break;
    case OrbitKind::None: {
      for (const char* k : {"r0", "a", "ecc"}) reject("initial", k, "only valid with orbit");
      if (auto e = doc.find("initial", "position")) init.position = parse_list<4>(*e, "position");
      if (auto e = doc.find("initial", "velocity")) init.velocity = parse_list<3>(*e, "velocity");
      if (auto e = doc.find("initial", "u")) {
        if (init.velocity) throw ValidationError("[initial] give either velocity or u, not both");
        init.spatial_u = parse_list<3>(*e, "u");
      }
      const SpacetimeEvent x(init.position);
      Tensor2 metric;
      try {
        metric = g.at(x);
      } catch (const OutsideDomain& err) {
        throw ValidationError(std::string("[initial] position: ") + err.what());
      } catch (const SingularMetric& err) {
        throw ValidationError(std::string("[initial] position: ") + err.what());
      }
      FourVector u = init.spatial_u ? normalized_from_spatial(metric, *init.spatial_u)
                                    : normalized_from_velocity(metric, init.velocity.value_or(Vec3{}));
      sc.initial = PhaseState{0.0, x, u};
      break;
    }
  }
  if (auto pot = sc.potential(); pot && !pot->guard().contains(sc.initial.x))
    throw ValidationError("[initial] position: " + *pot->guard().violation(sc.initial.x));

  // [integrator]
  auto& cfg = sc.integrator;
  if (auto e = doc.find("integrator", "method"))
    cfg.method = parse_enum<Method>(*e, "method",
                                    {{"rk4", Method::Rk4Fixed}, {"rk45", Method::Rk45Adaptive}});
  if (auto v = real("integrator", "step")) cfg.step = *v;
  if (auto v = real("integrator", "tolerance")) cfg.tolerance = *v;
  if (auto v = real("integrator", "tau_max")) cfg.tau_max = *v;
  if (auto e = doc.find("integrator", "max_steps")) {
    const double v = parse_real(*e, "max_steps");
    if (v != std::floor(v) || v < 1.0 || v > 1e15)
      throw ValidationError("[integrator] max_steps must be a positive integer");
    cfg.max_steps = static_cast<long>(v);
  }
  if (auto e = doc.find("integrator", "renormalize")) cfg.renormalize = parse_bool(*e, "renormalize");
  try {
    cfg.validate();
  } catch (const InvalidConfig& err) {
    throw ValidationError(std::string("[integrator] ") + err.what());
  }

  // [oracle]
  if (auto e = doc.find("oracle", "type")) {
    sc.oracle.kind = parse_enum<OracleKind>(*e, "type",
                                            {{"none", OracleKind::None},
                                             {"free", OracleKind::Free},
                                             {"cyclotron", OracleKind::Cyclotron},
                                             {"exb-drift", OracleKind::ExBDrift},
                                             {"circular-orbit", OracleKind::CircularOrbit},
                                             {"precession", OracleKind::Precession},
                                             {"newtonian", OracleKind::Newtonian}});
  }
  if (auto e = doc.find("oracle", "orbits")) {
    const double v = parse_real(*e, "orbits");
    if (v != std::floor(v) || v < 1.0 || v > 1e6)
      throw ValidationError("[oracle] orbits must be a positive integer");
    sc.oracle.orbits = static_cast<int>(v);
  }

  const bool flat = sc.metric.kind == MetricKind::Minkowski;
  switch (sc.oracle.kind) {
    case OracleKind::None: break;
    case OracleKind::Free:
      if (!flat || sc.field.kind != FieldKind::None)
        throw ValidationError("[oracle] free requires minkowski and no field");
      break;
    case OracleKind::Cyclotron:
      if (!flat || sc.field.kind != FieldKind::Uniform || norm3(sc.field.E) != 0.0 ||
          sc.field.B[0] != 0.0 || sc.field.B[1] != 0.0 || sc.field.B[2] == 0.0 ||
          sc.particle.charge() == 0.0)
        throw ValidationError(
            "[oracle] cyclotron requires minkowski, uniform B along z, E = 0 and e != 0");
      break;
    case OracleKind::ExBDrift: {
      const auto& E = sc.field.E;
      const auto& B = sc.field.B;
      const double dot = E[0] * B[0] + E[1] * B[1] + E[2] * B[2];
      if (!flat || sc.field.kind != FieldKind::Uniform || dot != 0.0 ||
          !(norm3(E) < norm3(B)) || sc.particle.charge() == 0.0)
        throw ValidationError(
            "[oracle] exb-drift requires minkowski, uniform E perpendicular to B, |E| < |B|, e != 0");
      break;
    }
    case OracleKind::CircularOrbit:
      if (init.orbit != OrbitKind::Circular)
        throw ValidationError("[oracle] circular-orbit requires orbit = circular");
      break;
    case OracleKind::Precession:
      if (init.orbit != OrbitKind::Eccentric)
        throw ValidationError("[oracle] precession requires orbit = eccentric");
      break;
    case OracleKind::Newtonian:
      if (sc.metric.kind != MetricKind::WeakField || sc.field.kind != FieldKind::None)
        throw ValidationError("[oracle] newtonian requires the weak-field metric and no field");
      break;
  }
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

Scenario resolve_scenario(const std::string& name_or_path) {
  for (const auto& n : builtin_scenario_names())
    if (n == name_or_path) return load_scenario(builtin_scenario_text(n));
  return load_scenario_file(name_or_path);
}

}  // namespace phasecon
