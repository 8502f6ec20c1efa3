#pragma once

// Metric-derived geometry. Christoffel symbols are stored as gamma(a, m, n) =
// Gamma^a_{mn}; Riemann as riemann(r, s, m, n) = R^r_{smn}.

#include <functional>
#include <optional>

#include "phasecon/metric.hpp"
#include "phasecon/tensor.hpp"

namespace phasecon {

/// Gamma^a_{mn} = 1/2 g^{ab} (g_{bm,n} + g_{bn,m} - g_{mn,b}).
Tensor3 christoffel(const MetricField& g, const SpacetimeEvent& x);

/// Gamma_{amn} = g_{ab} Gamma^b_{mn} (first-kind symbols, all covariant).
Tensor3 christoffel_lowered(const MetricField& g, const SpacetimeEvent& x);

/// Field wrapper x -> Gamma^a_{mn}(x).
class ChristoffelField {
 public:
  explicit ChristoffelField(MetricField g) : g_(std::move(g)) {}
  Tensor3 operator()(const SpacetimeEvent& x) const { return christoffel(g_, x); }
  const MetricField& metric() const noexcept { return g_; }

 private:
  MetricField g_;
};

/// Step for differentiating Christoffel symbols: `step` applies to every
/// direction when given, otherwise nested_derivative_step(x, dir).
using CurvatureStep = std::optional<double>;

/// R_{mn} = Gamma^a_{mn,a} - Gamma^a_{ma,n} + Gamma^a_{ba} Gamma^b_{mn} - Gamma^a_{bn} Gamma^b_{ma}.
Tensor2 ricci(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step = std::nullopt);

/// R^r_{smn} = Gamma^r_{ns,m} - Gamma^r_{ms,n} + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms}.
/// Contracting r with m reproduces ricci().
Tensor4 riemann(const MetricField& g, const SpacetimeEvent& x, CurvatureStep step = std::nullopt);

double scalar_curvature(const MetricField& g, const SpacetimeEvent& x,
                        CurvatureStep step = std::nullopt);

/// G_{mn} = R_{mn} - 1/2 g_{mn} R. No coupling constant is applied.
Tensor2 einstein_tensor(const MetricField& g, const SpacetimeEvent& x,
                        CurvatureStep step = std::nullopt);

/// max_n |g^{ma} nabla_a G_{mn}|, with every differencing layer using `step`.
/// Exactly zero for Minkowski (all Christoffels vanish identically).
double bianchi_residual(const MetricField& g, const SpacetimeEvent& x,
                        CurvatureStep step = std::nullopt);

}  // namespace phasecon
