#pragma once

// Non-linear connection on phase space, affine in momentum:
//
//   f_{mu nu}(x, p) = h0_{mu nu}(x) + h1_{mu nu alpha}(x) p^alpha
//
// h0 is the momentum-independent (zeroth-order) term, h1 the first-order term,
// both stored all-covariant. The gravitational connection sets h1 = -Gamma_{mu nu alpha};
// the electromagnetic one sets h0 = e F_{mu nu}.

#include <functional>
#include <string>

#include "phasecon/domain.hpp"
#include "phasecon/electromagnetic.hpp"
#include "phasecon/metric.hpp"
#include "phasecon/tensor.hpp"

namespace phasecon {

/// Test particle: mass m > 0 and charge e (geometric units).
class Particle {
 public:
  Particle(double mass, double charge) : mass_(mass), charge_(charge) {
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw InvalidParticle("particle mass must be finite and > 0");
    if (!std::isfinite(charge)) throw InvalidParticle("particle charge must be finite");
  }

  double mass() const noexcept { return mass_; }
  double charge() const noexcept { return charge_; }
  double charge_to_mass() const noexcept { return charge_ / mass_; }

 private:
  double mass_;
  double charge_;
};

class NonLinearConnection {
 public:
  using ZerothOrder = std::function<Tensor2(const SpacetimeEvent&)>;
  using FirstOrder = std::function<Tensor3(const SpacetimeEvent&)>;

  /// An empty h0/h1 function means that term is identically zero. `metric`
  /// raises and lowers indices when the connection is contracted or integrated.
  NonLinearConnection(std::string label, ZerothOrder h0, FirstOrder h1, DomainGuard guard,
                      MetricField metric);

  static NonLinearConnection zero(MetricField metric = MetricField::minkowski());

  const std::string& label() const noexcept { return label_; }
  const DomainGuard& guard() const noexcept { return guard_; }
  const MetricField& metric() const noexcept { return metric_; }
  bool has_zeroth_order() const noexcept { return static_cast<bool>(h0_); }
  bool has_first_order() const noexcept { return static_cast<bool>(h1_); }

  /// h0_{mu nu}(x); zero tensor when absent. Guard-checked.
  Tensor2 h0(const SpacetimeEvent& x) const;
  /// h1_{mu nu alpha}(x); zero tensor when absent. Guard-checked.
  Tensor3 h1(const SpacetimeEvent& x) const;

 private:
  friend NonLinearConnection superpose(const NonLinearConnection&, const NonLinearConnection&);

  std::string label_;
  ZerothOrder h0_;
  FirstOrder h1_;
  DomainGuard guard_;
  MetricField metric_;
};

/// f_{mu nu}(x, p). A covariant p is raised with the connection's metric first.
Tensor2 eval_connection(const NonLinearConnection& c, const SpacetimeEvent& x,
                        const FourVector& p);

/// h0 = 0, h1_{mu nu alpha} = -Gamma_{mu nu alpha} (first index lowered with g).
NonLinearConnection gravitational_connection(const MetricField& g);

/// h0_{mu nu} = e F_{mu nu}, h1 = 0. `metric` is the background used for index
/// raising when this connection is integrated on its own.
NonLinearConnection electromagnetic_connection(const FaradayField& f, double charge,
                                               MetricField metric = MetricField::minkowski());

/// Pointwise sum; guards intersect. The result keeps the first non-flat metric
/// of (a, b), or a's metric when both are flat.
NonLinearConnection superpose(const NonLinearConnection& a, const NonLinearConnection& b);

}  // namespace phasecon
