#include "phasecon/electromagnetic.hpp"

#include <cmath>
#include <utility>

namespace phasecon {

Tensor2 faraday_tensor(const Vec3& E, const Vec3& B) {
  Tensor2 f = covariant2();
  for (std::size_t i = 0; i < 3; ++i) {
    f(i + 1, 0) = E[i];
    f(0, i + 1) = -E[i];
  }
  f(1, 2) = B[2];
  f(2, 1) = -B[2];
  f(2, 3) = B[0];
  f(3, 2) = -B[0];
  f(3, 1) = B[1];
  f(1, 3) = -B[1];
  f.mark(Symmetry::Antisymmetric);
  return f;
}

// ---------------------------------------------------------------------------
// VectorPotential

VectorPotential::VectorPotential(std::string label, Evaluator a, GradientEvaluator grad,
                                 DomainGuard guard)
    : label_(std::move(label)), a_(std::move(a)), grad_(std::move(grad)), guard_(std::move(guard)) {}

VectorPotential VectorPotential::uniform(const Vec3& E, const Vec3& B) {
  auto a = [E, B](const SpacetimeEvent& x) {
    const double rx = x[1], ry = x[2], rz = x[3];
    return FourVector::covariant({E[0] * rx + E[1] * ry + E[2] * rz,
                                  0.5 * (B[1] * rz - B[2] * ry),
                                  0.5 * (B[2] * rx - B[0] * rz),
                                  0.5 * (B[0] * ry - B[1] * rx)});
  };
  auto grad = [E, B](const SpacetimeEvent&) {
    Tensor2 d = covariant2();
    for (std::size_t i = 0; i < 3; ++i) d(i + 1, 0) = E[i];
    // d_m A_n for A = 1/2 B x r
    d(3, 1) = 0.5 * B[1];
    d(2, 1) = -0.5 * B[2];
    d(1, 2) = 0.5 * B[2];
    d(3, 2) = -0.5 * B[0];
    d(2, 3) = 0.5 * B[0];
    d(1, 3) = -0.5 * B[1];
    return d;
  };
  return VectorPotential("uniform", a, grad);
}

VectorPotential VectorPotential::symmetric_gauge(const Vec3& B) {
  VectorPotential p = uniform({0.0, 0.0, 0.0}, B);
  p.label_ = "symmetric-gauge";
  return p;
}

VectorPotential VectorPotential::coulomb(double q) {
  auto a = [q](const SpacetimeEvent& x) {
    const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    return FourVector::covariant({-q / r, 0.0, 0.0, 0.0});
  };
  auto grad = [q](const SpacetimeEvent& x) {
    const double r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const double r3 = r2 * std::sqrt(r2);
    Tensor2 d = covariant2();
    for (std::size_t i = 1; i < kDim; ++i) d(i, 0) = q * x[i] / r3;
    return d;
  };
  DomainGuard guard([](const SpacetimeEvent& x) -> std::optional<std::string> {
    if (x[1] * x[1] + x[2] * x[2] + x[3] * x[3] > 0.0) return std::nullopt;
    return std::string("coulomb: event at the point source");
  });
  return VectorPotential("coulomb", a, grad, guard);
}

VectorPotential VectorPotential::wald(double b) {
  auto a = [b](const SpacetimeEvent& x) {
    const double s = std::sin(x[2]);
    return FourVector::covariant({0.0, 0.0, 0.0, 0.5 * b * x[1] * x[1] * s * s});
  };
  auto grad = [b](const SpacetimeEvent& x) {
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double c = std::cos(x[2]);
    Tensor2 d = covariant2();
    d(1, 3) = b * r * s * s;
    d(2, 3) = b * r * r * s * c;
    return d;
  };
  return VectorPotential("wald", a, grad);
}

VectorPotential VectorPotential::constant(const std::array<double, 4>& value) {
  return VectorPotential(
      "constant", [value](const SpacetimeEvent&) { return FourVector::covariant(value); },
      [](const SpacetimeEvent&) { return covariant2(); });
}

VectorPotential VectorPotential::gauge_transformed(
    const VectorPotential& base, std::function<double(const SpacetimeEvent&)> chi) {
  auto a = [base, chi](const SpacetimeEvent& x) {
    std::array<double, 4> c = base.at(x).components();
    for (std::size_t m = 0; m < kDim; ++m) c[m] += partial_derivative(chi, x, m);
    return FourVector::covariant(c);
  };
  return VectorPotential(base.label() + "+gauge", a, {}, base.guard());
}

FourVector VectorPotential::at(const SpacetimeEvent& x) const {
  guard_.check(x);
  FourVector v = a_(x);
  if (v.variance() != Variance::Covariant)
    throw VarianceMismatch("vector potential must be covariant");
  return v;
}

Tensor2 VectorPotential::gradient_at(const SpacetimeEvent& x) const {
  if (grad_) {
    guard_.check(x);
    return grad_(x);
  }
  Tensor2 d = covariant2();
  auto field = [this](const SpacetimeEvent& y) { return at(y); };
  for (std::size_t m = 0; m < kDim; ++m) {
    const FourVector dm = partial_derivative(field, x, m);
    for (std::size_t n = 0; n < kDim; ++n) d(m, n) = dm[n];
  }
  return d;
}

// ---------------------------------------------------------------------------
// FaradayField

FaradayField::FaradayField(std::string label, Evaluator f, DomainGuard guard,
                           std::optional<Uniform> uniform)
    : label_(std::move(label)), f_(std::move(f)), guard_(std::move(guard)), uniform_(uniform) {}

FaradayField FaradayField::uniform(const Vec3& E, const Vec3& B) {
  const Tensor2 f = faraday_tensor(E, B);
  return FaradayField(
      "uniform", [f](const SpacetimeEvent&) { return f; }, DomainGuard::everywhere(),
      Uniform{E, B});
}

FaradayField FaradayField::from_potential(const VectorPotential& a) {
  auto f = [a](const SpacetimeEvent& x) {
    const Tensor2 d = a.gradient_at(x);
    Tensor2 out = covariant2();
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) out(m, n) = d(m, n) - d(n, m);
    return out;
  };
  return FaradayField("d(" + a.label() + ")", f, a.guard());
}

Tensor2 FaradayField::at(const SpacetimeEvent& x) const {
  guard_.check(x);
  const Tensor2 raw = f_(x);
  Tensor2 out = covariant2();
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      if (std::abs(raw(m, n) + raw(n, m)) > kFaradayAsymmetryTolerance)
        throw MalformedFaraday(label_ + ": Faraday tensor is not antisymmetric");
      out(m, n) = 0.5 * (raw(m, n) - raw(n, m));
    }
  out.mark(Symmetry::Antisymmetric);
  return out;
}

// ---------------------------------------------------------------------------
// d A and d d A

namespace {

double step_for(const SpacetimeEvent& x, std::size_t dir, std::optional<double> step,
                bool nested) {
  if (step) return *step;
  return nested ? nested_derivative_step(x, dir) : first_derivative_step(x, dir);
}

Tensor2 exterior_derivative(const VectorPotential& a, const SpacetimeEvent& x,
                            std::optional<double> step, bool nested) {
  std::array<FourVector, kDim> d;
  for (std::size_t m = 0; m < kDim; ++m)
    d[m] = partial_derivative(a, x, m, step_for(x, m, step, nested));
  Tensor2 f = covariant2();
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) f(m, n) = d[m][n] - d[n][m];
  return f;
}

}  // namespace

Tensor2 faraday_from_potential(const VectorPotential& a, const SpacetimeEvent& x,
                               std::optional<double> step) {
  Tensor2 f = exterior_derivative(a, x, step, false);
  f.mark(Symmetry::Antisymmetric);
  return f;
}

double closure_residual(const VectorPotential& a, const SpacetimeEvent& x,
                        std::optional<double> step) {
  auto field = [&](const SpacetimeEvent& y) { return exterior_derivative(a, y, step, true); };
  std::array<Tensor2, kDim> dF;
  for (std::size_t l = 0; l < kDim; ++l)
    dF[l] = partial_derivative(field, x, l, step_for(x, l, step, true));

  double worst = 0.0;
  for (std::size_t l = 0; l < kDim; ++l)
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) {
        const double c = dF[l](m, n) + dF[m](n, l) + dF[n](l, m);
        worst = std::max(worst, std::abs(c));
      }
  return worst;
}

}  // namespace phasecon
