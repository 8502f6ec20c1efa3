#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "phasecon/domain.hpp"
#include "phasecon/tensor.hpp"

namespace phasecon {

/// Horizon margin: Schwarzschild events need r > 2M(1 + kHorizonMargin).
inline constexpr double kHorizonMargin = 1e-6;

/// A metric g_{mu nu}(x) as an evaluable field with signature (-,+,+,+).
///
/// The optional derivative evaluator returns dg(l, m, n) = d_l g_{mn}; when absent
/// derivatives fall back to central differences.
class MetricField {
 public:
  using Evaluator = std::function<Tensor2(const SpacetimeEvent&)>;
  using DerivativeEvaluator = std::function<Tensor3(const SpacetimeEvent&)>;

  MetricField(std::string name, Evaluator g, DerivativeEvaluator dg = {},
              DomainGuard guard = DomainGuard::everywhere(), bool flat = false);

  static MetricField minkowski();
  /// Schwarzschild coordinates (t, r, theta, phi).
  static MetricField schwarzschild(double mass);
  /// Cartesian isotropic weak field with Phi = -M/r:
  /// g00 = -(1 + 2 Phi), gij = (1 - 2 Phi) delta_ij.
  static MetricField weak_field(double mass);

  const std::string& name() const noexcept { return impl_->name; }
  const DomainGuard& guard() const noexcept { return impl_->guard; }
  bool is_flat() const noexcept { return impl_->flat; }
  bool has_closed_form_derivative() const noexcept {
    return static_cast<bool>(impl_->derivative);
  }

  /// g_{mu nu}(x): guard-checked, symmetric, nonsingular (SingularMetric otherwise).
  Tensor2 at(const SpacetimeEvent& x) const;
  /// g^{mu nu}(x).
  Tensor2 inverse_at(const SpacetimeEvent& x) const;
  /// d_l g_{mn}(x), closed form when available.
  Tensor3 derivative_at(const SpacetimeEvent& x) const;
  Tensor3 numeric_derivative_at(const SpacetimeEvent& x) const;

  /// Same field with the closed-form derivative dropped (forces numeric paths).
  MetricField without_closed_form_derivative() const;

 private:
  struct Impl {
    std::string name;
    Evaluator g;
    DerivativeEvaluator derivative;
    DomainGuard guard;
    bool flat;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Inverse of a symmetric covariant rank-2 tensor (SingularMetric when |det| is tiny).
Tensor2 inverse_metric(const Tensor2& g);
double determinant(const Tensor2& t);

/// Returns g^{mu a} t_{a nu} (first slot raised).
Tensor2 raise_index(const Tensor2& t, const MetricField& g, const SpacetimeEvent& x);
/// Returns g_{mu a} t^a_nu (first slot lowered).
Tensor2 lower_index(const Tensor2& t, const MetricField& g, const SpacetimeEvent& x);

FourVector raise(const FourVector& v, const Tensor2& g_inverse);
FourVector lower(const FourVector& v, const Tensor2& g);
FourVector raise(const FourVector& v, const MetricField& g, const SpacetimeEvent& x);
FourVector lower(const FourVector& v, const MetricField& g, const SpacetimeEvent& x);

/// g_{mu nu} u^mu u^nu for contravariant u.
double minkowski_norm(const FourVector& u, const MetricField& g, const SpacetimeEvent& x);
double minkowski_norm(const FourVector& u, const Tensor2& g);

}  // namespace phasecon
