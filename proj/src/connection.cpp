#include "phasecon/connection.hpp"

#include <utility>

#include "phasecon/curvature.hpp"

namespace phasecon {

NonLinearConnection::NonLinearConnection(std::string label, ZerothOrder h0, FirstOrder h1,
                                         DomainGuard guard, MetricField metric)
    : label_(std::move(label)),
      h0_(std::move(h0)),
      h1_(std::move(h1)),
      guard_(DomainGuard::intersect(guard, metric.guard())),
      metric_(std::move(metric)) {}

NonLinearConnection NonLinearConnection::zero(MetricField metric) {
  return NonLinearConnection("zero", {}, {}, DomainGuard::everywhere(), std::move(metric));
}

Tensor2 NonLinearConnection::h0(const SpacetimeEvent& x) const {
  guard_.check(x);
  if (!h0_) return covariant2();
  return h0_(x);
}

Tensor3 NonLinearConnection::h1(const SpacetimeEvent& x) const {
  guard_.check(x);
  if (!h1_) return covariant3();
  return h1_(x);
}

Tensor2 eval_connection(const NonLinearConnection& c, const SpacetimeEvent& x,
                        const FourVector& p) {
  const FourVector up = p.variance() == Variance::Contravariant ? p : raise(p, c.metric(), x);
  Tensor2 f = c.h0(x);
  if (c.has_first_order()) {
    const Tensor3 h1 = c.h1(x);
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n) {
        double s = 0.0;
        for (std::size_t a = 0; a < kDim; ++a) s += h1(m, n, a) * up[a];
        f(m, n) += s;
      }
  }
  return f;
}

NonLinearConnection gravitational_connection(const MetricField& g) {
  if (g.is_flat()) {
    // Cartesian flat space: Gamma vanishes identically.
    return NonLinearConnection("gravity(" + g.name() + ")", {}, {}, DomainGuard::everywhere(), g);
  }
  auto h1 = [g](const SpacetimeEvent& x) { return -1.0 * christoffel_lowered(g, x); };
  return NonLinearConnection("gravity(" + g.name() + ")", {}, h1, DomainGuard::everywhere(), g);
}

NonLinearConnection electromagnetic_connection(const FaradayField& f, double charge,
                                               MetricField metric) {
  if (!std::isfinite(charge)) throw InvalidParticle("charge must be finite");
  NonLinearConnection::ZerothOrder h0;
  if (charge != 0.0) {
    h0 = [f, charge](const SpacetimeEvent& x) { return charge * f.at(x); };
  }
  return NonLinearConnection("em(" + f.label() + ")", h0, {}, f.guard(), std::move(metric));
}

NonLinearConnection superpose(const NonLinearConnection& a, const NonLinearConnection& b) {
  auto add0 = [](const NonLinearConnection::ZerothOrder& p,
                 const NonLinearConnection::ZerothOrder& q) -> NonLinearConnection::ZerothOrder {
    if (!p) return q;
    if (!q) return p;
    return [p, q](const SpacetimeEvent& x) { return p(x) + q(x); };
  };
  auto add1 = [](const NonLinearConnection::FirstOrder& p,
                 const NonLinearConnection::FirstOrder& q) -> NonLinearConnection::FirstOrder {
    if (!p) return q;
    if (!q) return p;
    return [p, q](const SpacetimeEvent& x) { return p(x) + q(x); };
  };
  const MetricField& metric = (a.metric().is_flat() && !b.metric().is_flat()) ? b.metric()
                                                                               : a.metric();
  return NonLinearConnection(a.label() + "+" + b.label(), add0(a.h0_, b.h0_), add1(a.h1_, b.h1_),
                             DomainGuard::intersect(a.guard_, b.guard_), metric);
}

}  // namespace phasecon
