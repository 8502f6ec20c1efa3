#pragma once

// Electromagnetic fields as geometric objects: potentials A_mu, Faraday tensors
// F_{mu nu} = d_mu A_nu - d_nu A_mu, and the closure check dF = 0.
//
// Convention: F_{i0} = E_i, F_{0i} = -E_i, F_{ij} = eps_{ijk} B_k. With h0 = eF
// the transport law then gives d(m gamma v)/dt = e(E + v x B). For a uniform E
// this corresponds to A_0 = E.x (A_0 = -phi in the (-,+,+,+) signature).

#include <functional>
#include <optional>
#include <string>

#include "phasecon/domain.hpp"
#include "phasecon/tensor.hpp"

namespace phasecon {

inline constexpr double kFaradayAsymmetryTolerance = 1e-10;

/// Faraday tensor for given E and B in the convention above.
Tensor2 faraday_tensor(const Vec3& E, const Vec3& B);

/// A_mu(x) covariant, with an optional closed-form gradient grad(m, n) = d_m A_n.
class VectorPotential {
 public:
  using Evaluator = std::function<FourVector(const SpacetimeEvent&)>;
  using GradientEvaluator = std::function<Tensor2(const SpacetimeEvent&)>;

  VectorPotential(std::string label, Evaluator a, GradientEvaluator grad = {},
                  DomainGuard guard = DomainGuard::everywhere());

  /// A_0 = E.x, A_i = 1/2 (B x r)_i in Cartesian coordinates.
  static VectorPotential uniform(const Vec3& E, const Vec3& B);
  /// A = 1/2 B x r; for B = (0,0,Bz): A = (0, -Bz y/2, Bz x/2, 0).
  static VectorPotential symmetric_gauge(const Vec3& B);
  /// Point source of charge Q at the Cartesian origin: A_0 = -Q/r.
  static VectorPotential coulomb(double source_charge);
  /// Uniform asymptotic field B along the polar axis of Schwarzschild
  /// coordinates (t, r, theta, phi): A_phi = B/2 r^2 sin^2(theta).
  static VectorPotential wald(double field_strength);
  /// Pure gauge: constant A_mu.
  static VectorPotential constant(const std::array<double, 4>& value);
  /// A_mu + d_mu chi, gradient of the scalar taken by central differences.
  static VectorPotential gauge_transformed(const VectorPotential& a,
                                           std::function<double(const SpacetimeEvent&)> chi);

  const std::string& label() const noexcept { return label_; }
  const DomainGuard& guard() const noexcept { return guard_; }
  bool has_closed_form_gradient() const noexcept { return static_cast<bool>(grad_); }

  FourVector at(const SpacetimeEvent& x) const;
  FourVector operator()(const SpacetimeEvent& x) const { return at(x); }
  /// d_m A_n, closed form when available, otherwise central differences.
  Tensor2 gradient_at(const SpacetimeEvent& x) const;

 private:
  std::string label_;
  Evaluator a_;
  GradientEvaluator grad_;
  DomainGuard guard_;
};

/// Antisymmetric F_{mu nu}(x).
class FaradayField {
 public:
  using Evaluator = std::function<Tensor2(const SpacetimeEvent&)>;

  struct Uniform {
    Vec3 E;
    Vec3 B;
  };

  FaradayField(std::string label, Evaluator f, DomainGuard guard = DomainGuard::everywhere(),
               std::optional<Uniform> uniform = std::nullopt);

  static FaradayField uniform(const Vec3& E, const Vec3& B);
  /// F = dA, from the potential's closed-form gradient when it has one.
  static FaradayField from_potential(const VectorPotential& a);

  const std::string& label() const noexcept { return label_; }
  const DomainGuard& guard() const noexcept { return guard_; }
  const std::optional<Uniform>& uniform_decomposition() const noexcept { return uniform_; }

  /// Throws MalformedFaraday when the evaluator's output is asymmetric beyond
  /// kFaradayAsymmetryTolerance; the returned tensor is exactly antisymmetric.
  Tensor2 at(const SpacetimeEvent& x) const;
  Tensor2 operator()(const SpacetimeEvent& x) const { return at(x); }

 private:
  std::string label_;
  Evaluator f_;
  DomainGuard guard_;
  std::optional<Uniform> uniform_;
};

/// F_{mn} = d_m A_n - d_n A_m by central differences (default first-derivative step).
Tensor2 faraday_from_potential(const VectorPotential& a, const SpacetimeEvent& x,
                               std::optional<double> step = std::nullopt);

/// max over (a, m, n) of |d_a F_mn + d_m F_na + d_n F_am|, F from
/// faraday_from_potential. Both differencing layers use `step`
/// (default nested_derivative_step per direction).
double closure_residual(const VectorPotential& a, const SpacetimeEvent& x,
                        std::optional<double> step = std::nullopt);

}  // namespace phasecon
