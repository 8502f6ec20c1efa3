#pragma once

// Dense 4-dimensional tensors with runtime variance tags.
//
// Signature convention for the whole library is (-,+,+,+): eta_00 = -1,
// eta_11 = eta_22 = eta_33 = +1. Geometric units, c = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "phasecon/errors.hpp"

namespace phasecon {

inline constexpr std::size_t kDim = 4;

enum class Variance : unsigned char { Covariant, Contravariant };

inline const char* to_string(Variance v) {
  return v == Variance::Covariant ? "covariant" : "contravariant";
}

/// Spatial 3-vector (E, B, coordinate velocity).
using Vec3 = std::array<double, 3>;

class SpacetimeEvent {
 public:
  SpacetimeEvent() = default;
  explicit SpacetimeEvent(std::array<double, 4> coords) : coords_(coords) {
    for (double c : coords_) {
      if (!std::isfinite(c)) throw NonFiniteValue("SpacetimeEvent: non-finite coordinate");
    }
  }
  SpacetimeEvent(double t, double x1, double x2, double x3)
      : SpacetimeEvent(std::array<double, 4>{t, x1, x2, x3}) {}

  double operator[](std::size_t mu) const { return coords_[mu]; }
  const std::array<double, 4>& coords() const noexcept { return coords_; }

  /// Copy displaced by `delta` along coordinate `dir`.
  SpacetimeEvent shifted(std::size_t dir, double delta) const {
    auto c = coords_;
    c[dir] += delta;
    return SpacetimeEvent(c);
  }

  bool operator==(const SpacetimeEvent&) const = default;

 private:
  std::array<double, 4> coords_{};
};

class FourVector {
 public:
  FourVector() = default;
  FourVector(std::array<double, 4> components, Variance variance)
      : c_(components), variance_(variance) {
    for (double x : c_) {
      if (!std::isfinite(x)) throw NonFiniteValue("FourVector: non-finite component");
    }
  }

  static FourVector contravariant(std::array<double, 4> c) {
    return {c, Variance::Contravariant};
  }
  static FourVector covariant(std::array<double, 4> c) { return {c, Variance::Covariant}; }

  double operator[](std::size_t mu) const { return c_[mu]; }
  const std::array<double, 4>& components() const noexcept { return c_; }
  Variance variance() const noexcept { return variance_; }

  FourVector& operator+=(const FourVector& o) {
    require_same(o);
    for (std::size_t i = 0; i < kDim; ++i) c_[i] += o.c_[i];
    return *this;
  }
  FourVector& operator-=(const FourVector& o) {
    require_same(o);
    for (std::size_t i = 0; i < kDim; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  FourVector& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  friend FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
  friend FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
  friend FourVector operator*(double s, FourVector a) { return a *= s; }
  friend FourVector operator*(FourVector a, double s) { return a *= s; }

 private:
  void require_same(const FourVector& o) const {
    if (o.variance_ != variance_) {
      throw VarianceMismatch(std::string("FourVector: cannot combine ") + to_string(variance_) +
                             " with " + to_string(o.variance_));
    }
  }

  std::array<double, 4> c_{};
  Variance variance_ = Variance::Contravariant;
};

/// Optional symmetry marker for rank-2 tensors, validated when set.
enum class Symmetry : unsigned char { None, Symmetric, Antisymmetric };

inline constexpr double kSymmetryTolerance = 1e-12;

namespace detail {
constexpr std::size_t pow4(std::size_t r) { return r == 0 ? 1 : 4 * pow4(r - 1); }
}  // namespace detail

/// Dense rank-R tensor over index range 0..3, row-major storage.
template <std::size_t Rank>
class Tensor {
  static_assert(Rank >= 1 && Rank <= 4);

 public:
  static constexpr std::size_t kRank = Rank;
  static constexpr std::size_t kSize = detail::pow4(Rank);
  using Variances = std::array<Variance, Rank>;

  Tensor() { variances_.fill(Variance::Covariant); }
  explicit Tensor(Variances v) : variances_(v) {}

  template <class... I>
    requires(sizeof...(I) == Rank)
  double& operator()(I... idx) {
    return data_[flat(static_cast<std::size_t>(idx)...)];
  }
  template <class... I>
    requires(sizeof...(I) == Rank)
  double operator()(I... idx) const {
    return data_[flat(static_cast<std::size_t>(idx)...)];
  }

  std::span<const double, kSize> data() const noexcept { return data_; }
  std::span<double, kSize> data() noexcept { return data_; }
  const Variances& variances() const noexcept { return variances_; }
  Variance variance(std::size_t slot) const { return variances_[slot]; }

  Symmetry symmetry() const noexcept { return symmetry_; }

  /// Marks the tensor and validates the marker to kSymmetryTolerance.
  Tensor& mark(Symmetry s)
    requires(Rank == 2)
  {
    if (s != Symmetry::None) {
      const double sign = s == Symmetry::Symmetric ? -1.0 : 1.0;
      for (std::size_t m = 0; m < kDim; ++m) {
        for (std::size_t n = 0; n < kDim; ++n) {
          if (std::abs((*this)(m, n) + sign * (*this)(n, m)) > kSymmetryTolerance) {
            throw SymmetryViolation(s == Symmetry::Symmetric ? "tensor is not symmetric"
                                                             : "tensor is not antisymmetric");
          }
        }
      }
    }
    symmetry_ = s;
    return *this;
  }

  Tensor& operator+=(const Tensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < kSize; ++i) data_[i] += o.data_[i];
    symmetry_ = symmetry_ == o.symmetry_ ? symmetry_ : Symmetry::None;
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < kSize; ++i) data_[i] -= o.data_[i];
    symmetry_ = symmetry_ == o.symmetry_ ? symmetry_ : Symmetry::None;
    return *this;
  }
  Tensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  template <class... I>
  static constexpr std::size_t flat(I... idx) {
    std::size_t f = 0;
    ((f = f * kDim + idx), ...);
    return f;
  }

  void require_same(const Tensor& o) const {
    if (o.variances_ != variances_) throw VarianceMismatch("Tensor: index variances differ");
  }

  std::array<double, kSize> data_{};
  Variances variances_;
  Symmetry symmetry_ = Symmetry::None;
};

using Tensor2 = Tensor<2>;
using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

inline Tensor2 covariant2() { return Tensor2({Variance::Covariant, Variance::Covariant}); }
inline Tensor2 contravariant2() {
  return Tensor2({Variance::Contravariant, Variance::Contravariant});
}
inline Tensor3 covariant3() {
  return Tensor3({Variance::Covariant, Variance::Covariant, Variance::Covariant});
}

/// Minkowski metric eta_{mu nu}, marked symmetric.
inline Tensor2 minkowski_eta() {
  Tensor2 eta = covariant2();
  eta(0, 0) = -1.0;
  eta(1, 1) = eta(2, 2) = eta(3, 3) = 1.0;
  eta.mark(Symmetry::Symmetric);
  return eta;
}

// Finite-difference step scaling.
inline double first_derivative_step(const SpacetimeEvent& x, std::size_t dir) {
  static const double h = std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(1.0, std::abs(x[dir])) * h;
}

/// Larger step for nested differences (fourth root of epsilon).
inline double nested_derivative_step(const SpacetimeEvent& x, std::size_t dir) {
  static const double h = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
  return std::max(1.0, std::abs(x[dir])) * h;
}

/// Central difference (f(x + s e_dir) - f(x - s e_dir)) / (2s) of any field whose
/// values support subtraction and scaling (double, FourVector, Tensor<R>).
/// `step` defaults to first_derivative_step(x, dir).
template <class Field>
auto partial_derivative(const Field& field, const SpacetimeEvent& x, std::size_t dir,
                        std::optional<double> step = std::nullopt) {
  double s = step ? *step : first_derivative_step(x, dir);
  if (!(s > 0.0)) throw InvalidConfig("partial_derivative: step must be positive");
  const SpacetimeEvent plus = x.shifted(dir, s);
  const SpacetimeEvent minus = x.shifted(dir, -s);
  // Use the representable spacing actually realised by the stencil.
  const double span = plus[dir] - minus[dir];
  auto d = field(plus) - field(minus);
  d *= 1.0 / span;
  return d;
}

}  // namespace phasecon
