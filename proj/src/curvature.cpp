#include "phasecon/curvature.hpp"

#include <array>
#include <cmath>

namespace phasecon {

namespace {

Tensor3 mixed3() {
  return Tensor3({Variance::Contravariant, Variance::Covariant, Variance::Covariant});
}

Tensor3 christoffel_from(const Tensor2& g_inv, const Tensor3& dg) {
  Tensor3 gamma = mixed3();
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = m; n < kDim; ++n) {
        double s = 0.0;
        for (std::size_t b = 0; b < kDim; ++b) {
          const double gab = g_inv(a, b);
          if (gab == 0.0) continue;
          s += gab * (dg(n, b, m) + dg(m, b, n) - dg(b, m, n));
        }
        gamma(a, m, n) = 0.5 * s;
        gamma(a, n, m) = 0.5 * s;
      }
  return gamma;
}

// dgamma[d](a, m, n) = d_d Gamma^a_{mn}
using ChristoffelGradient = std::array<Tensor3, kDim>;

ChristoffelGradient christoffel_gradient(const MetricField& g, const SpacetimeEvent& x,
                                         CurvatureStep step) {
  const ChristoffelField field(g);
  ChristoffelGradient d;
  for (std::size_t dir = 0; dir < kDim; ++dir) {
    const double s = step ? *step : nested_derivative_step(x, dir);
    d[dir] = partial_derivative(field, x, dir, s);
  }
  return d;
}

Tensor2 ricci_from(const Tensor3& gamma, const ChristoffelGradient& dgamma) {
  Tensor2 r = covariant2();
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      double s = 0.0;
      for (std::size_t a = 0; a < kDim; ++a) {
        s += dgamma[a](a, m, n) - dgamma[n](a, m, a);
        for (std::size_t b = 0; b < kDim; ++b) {
          s += gamma(a, b, a) * gamma(b, m, n) - gamma(a, b, n) * gamma(b, m, a);
        }
      }
      r(m, n) = s;
    }
  return r;
}

double trace(const Tensor2& g_inv, const Tensor2& t) {
  double s = 0.0;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) s += g_inv(m, n) * t(m, n);
  return s;
}

}  // namespace

Tensor3 christoffel(const MetricField& g, const SpacetimeEvent& x) {
  return christoffel_from(g.inverse_at(x), g.derivative_at(x));
}

Tensor3 christoffel_lowered(const MetricField& g, const SpacetimeEvent& x) {
  const Tensor2 metric = g.at(x);
  const Tensor3 gamma = christoffel(g, x);
  Tensor3 out = covariant3();
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) {
        double s = 0.0;
        for (std::size_t b = 0; b < kDim; ++b) s += metric(a, b) * gamma(b, m, n);
        out(a, m, n) = s;
      }
  return out;
}

Tensor2 ricci(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step) {
  return ricci_from(christoffel(g, x), christoffel_gradient(g, x, step));
}

Tensor4 riemann(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step) {
  const Tensor3 gamma = christoffel(g, x);
  const ChristoffelGradient dgamma = christoffel_gradient(g, x, step);
  Tensor4 r({Variance::Contravariant, Variance::Covariant, Variance::Covariant,
             Variance::Covariant});
  for (std::size_t rho = 0; rho < kDim; ++rho)
    for (std::size_t sg = 0; sg < kDim; ++sg)
      for (std::size_t m = 0; m < kDim; ++m)
        for (std::size_t n = 0; n < kDim; ++n) {
          double s = dgamma[m](rho, n, sg) - dgamma[n](rho, m, sg);
          for (std::size_t l = 0; l < kDim; ++l)
            s += gamma(rho, m, l) * gamma(l, n, sg) - gamma(rho, n, l) * gamma(l, m, sg);
          r(rho, sg, m, n) = s;
        }
  return r;
}

double scalar_curvature(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step) {
  return trace(g.inverse_at(x), ricci(g, x, step));
}

Tensor2 einstein_tensor(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step) {
  const Tensor2 metric = g.at(x);
  const Tensor2 r = ricci(g, x, step);
  const double scalar = trace(inverse_metric(metric), r);
  Tensor2 out = r;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) out(m, n) -= 0.5 * metric(m, n) * scalar;
  return out;
}

double bianchi_residual(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step) {
  const Tensor2 g_inv = g.inverse_at(x);
  const Tensor3 gamma = christoffel(g, x);
  const Tensor2 G = einstein_tensor(g, x, step);
  auto field = [&](const SpacetimeEvent& y) { return einstein_tensor(g, y, step); };

  // grad(a, m, n) = nabla_a G_{mn}
  Tensor3 grad = covariant3();
  for (std::size_t a = 0; a < kDim; ++a) {
    const double s = step ? *step : nested_derivative_step(x, a);
    const Tensor2 dG = partial_derivative(field, x, a, s);
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) {
        double v = dG(m, n);
        for (std::size_t l = 0; l < kDim; ++l)
          v -= gamma(l, a, m) * G(l, n) + gamma(l, a, n) * G(m, l);
        grad(a, m, n) = v;
      }
  }

  double worst = 0.0;
  for (std::size_t n = 0; n < kDim; ++n) {
    double div = 0.0;
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t a = 0; a < kDim; ++a) div += g_inv(m, a) * grad(a, m, n);
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

}  // namespace phasecon
