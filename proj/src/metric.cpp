#include "phasecon/metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace phasecon {

namespace {

using Matrix4 = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;

Matrix4 as_matrix(const Tensor2& t) {
  Matrix4 m;
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b) m(a, b) = t(a, b);
  return m;
}

// Relative singularity threshold on det / prod(row scale).
constexpr double kSingularTolerance = 1e-13;

bool nearly_singular(const Tensor2& t, double det) {
  double scale = 1.0;
  for (std::size_t a = 0; a < kDim; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < kDim; ++b) row = std::max(row, std::abs(t(a, b)));
    if (row == 0.0) return true;
    scale *= row;
  }
  return !(std::abs(det) > kSingularTolerance * scale);
}

// `radial` selects r = x^1 (spherical chart) instead of the Cartesian radius.
DomainGuard horizon_guard(double mass, std::string what, bool radial) {
  const double r_min = 2.0 * mass * (1.0 + kHorizonMargin);
  return DomainGuard([r_min, what, radial](const SpacetimeEvent& x) -> std::optional<std::string> {
    const double r = radial ? x[1] : std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (!(r > r_min)) {
      std::ostringstream os;
      os << what << ": r = " << r << " is not outside 2M(1+1e-6) = " << r_min;
      return os.str();
    }
    return std::nullopt;
  });
}

}  // namespace

MetricField::MetricField(std::string name, Evaluator g, DerivativeEvaluator dg, DomainGuard guard,
                         bool flat)
    : impl_(std::make_shared<const Impl>(
          Impl{std::move(name), std::move(g), std::move(dg), std::move(guard), flat})) {}

MetricField MetricField::minkowski() {
  return MetricField(
      "minkowski", [](const SpacetimeEvent&) { return minkowski_eta(); },
      [](const SpacetimeEvent&) { return covariant3(); }, DomainGuard::everywhere(), true);
}

MetricField MetricField::schwarzschild(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw InvalidConfig("schwarzschild: mass must be positive");
  auto g = [mass](const SpacetimeEvent& x) {
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double f = 1.0 - 2.0 * mass / r;
    Tensor2 m = covariant2();
    m(0, 0) = -f;
    m(1, 1) = 1.0 / f;
    m(2, 2) = r * r;
    m(3, 3) = r * r * s * s;
    return m;
  };
  auto dg = [mass](const SpacetimeEvent& x) {
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double c = std::cos(x[2]);
    const double f = 1.0 - 2.0 * mass / r;
    const double df = 2.0 * mass / (r * r);
    Tensor3 d = covariant3();
    d(1, 0, 0) = -df;
    d(1, 1, 1) = -df / (f * f);
    d(1, 2, 2) = 2.0 * r;
    d(1, 3, 3) = 2.0 * r * s * s;
    d(2, 3, 3) = 2.0 * r * r * s * c;
    return d;
  };
  return MetricField("schwarzschild", g, dg, horizon_guard(mass, "schwarzschild", true));
}

MetricField MetricField::weak_field(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw InvalidConfig("weak-field: mass must be positive");
  auto g = [mass](const SpacetimeEvent& x) {
    const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    const double phi = -mass / r;
    Tensor2 m = covariant2();
    m(0, 0) = -(1.0 + 2.0 * phi);
    m(1, 1) = m(2, 2) = m(3, 3) = 1.0 - 2.0 * phi;
    return m;
  };
  auto dg = [mass](const SpacetimeEvent& x) {
    const double r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const double r3 = r2 * std::sqrt(r2);
    Tensor3 d = covariant3();
    for (std::size_t i = 1; i < kDim; ++i) {
      const double dphi = mass * x[i] / r3;
      d(i, 0, 0) = -2.0 * dphi;
      for (std::size_t j = 1; j < kDim; ++j) d(i, j, j) = -2.0 * dphi;
    }
    return d;
  };
  return MetricField("weak-field", g, dg, horizon_guard(mass, "weak-field", false));
}

Tensor2 MetricField::at(const SpacetimeEvent& x) const {
  impl_->guard.check(x);
  Tensor2 g = impl_->g(x);
  if (g.variance(0) != Variance::Covariant || g.variance(1) != Variance::Covariant)
    throw VarianceMismatch("metric evaluator must return a covariant tensor");
  g.mark(Symmetry::Symmetric);
  if (nearly_singular(g, determinant(g))) throw SingularMetric(impl_->name + ": singular metric");
  return g;
}

Tensor2 MetricField::inverse_at(const SpacetimeEvent& x) const { return inverse_metric(at(x)); }

Tensor3 MetricField::derivative_at(const SpacetimeEvent& x) const {
  if (!impl_->derivative) return numeric_derivative_at(x);
  impl_->guard.check(x);
  return impl_->derivative(x);
}

Tensor3 MetricField::numeric_derivative_at(const SpacetimeEvent& x) const {
  Tensor3 d = covariant3();
  auto field = [this](const SpacetimeEvent& y) { return at(y); };
  for (std::size_t l = 0; l < kDim; ++l) {
    const Tensor2 dl = partial_derivative(field, x, l);
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) d(l, m, n) = dl(m, n);
  }
  return d;
}

MetricField MetricField::without_closed_form_derivative() const {
  return MetricField(impl_->name + " (numeric)", impl_->g, {}, impl_->guard, impl_->flat);
}

double determinant(const Tensor2& t) { return as_matrix(t).determinant(); }

Tensor2 inverse_metric(const Tensor2& g) {
  const Matrix4 m = as_matrix(g);
  if (nearly_singular(g, m.determinant())) throw SingularMetric("metric is singular");
  const Matrix4 inv = m.inverse();
  Tensor2 out = contravariant2();
  for (std::size_t a = 0; a < kDim; ++a) {
    for (std::size_t b = a; b < kDim; ++b) {
      // symmetrise away rounding asymmetry of the LU inverse
      const double v = 0.5 * (inv(a, b) + inv(b, a));
      out(a, b) = v;
      out(b, a) = v;
    }
  }
  out.mark(Symmetry::Symmetric);
  return out;
}

namespace {

Tensor2 contract_first(const Tensor2& metric, const Tensor2& t, Variance result_first) {
  Tensor2 out({result_first, t.variance(1)});
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      double s = 0.0;
      for (std::size_t a = 0; a < kDim; ++a) s += metric(m, a) * t(a, n);
      out(m, n) = s;
    }
  return out;
}

}  // namespace

Tensor2 raise_index(const Tensor2& t, const MetricField& g, const SpacetimeEvent& x) {
  if (t.variance(0) != Variance::Covariant)
    throw VarianceMismatch("raise_index: first slot is already contravariant");
  return contract_first(g.inverse_at(x), t, Variance::Contravariant);
}

Tensor2 lower_index(const Tensor2& t, const MetricField& g, const SpacetimeEvent& x) {
  if (t.variance(0) != Variance::Contravariant)
    throw VarianceMismatch("lower_index: first slot is already covariant");
  return contract_first(g.at(x), t, Variance::Covariant);
}

FourVector raise(const FourVector& v, const Tensor2& g_inverse) {
  if (v.variance() != Variance::Covariant)
    throw VarianceMismatch("raise: vector is already contravariant");
  std::array<double, 4> out{};
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t a = 0; a < kDim; ++a) out[m] += g_inverse(m, a) * v[a];
  return FourVector::contravariant(out);
}

FourVector lower(const FourVector& v, const Tensor2& g) {
  if (v.variance() != Variance::Contravariant)
    throw VarianceMismatch("lower: vector is already covariant");
  std::array<double, 4> out{};
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t a = 0; a < kDim; ++a) out[m] += g(m, a) * v[a];
  return FourVector::covariant(out);
}

FourVector raise(const FourVector& v, const MetricField& g, const SpacetimeEvent& x) {
  return raise(v, g.inverse_at(x));
}

FourVector lower(const FourVector& v, const MetricField& g, const SpacetimeEvent& x) {
  return lower(v, g.at(x));
}

double minkowski_norm(const FourVector& u, const Tensor2& g) {
  if (u.variance() != Variance::Contravariant)
    throw VarianceMismatch("minkowski_norm: expects a contravariant vector");
  double s = 0.0;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) s += g(m, n) * u[m] * u[n];
  return s;
}

double minkowski_norm(const FourVector& u, const MetricField& g, const SpacetimeEvent& x) {
  return minkowski_norm(u, g.at(x));
}

}  // namespace phasecon
