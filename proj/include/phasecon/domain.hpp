#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "phasecon/tensor.hpp"

namespace phasecon {

/// Pure predicate over events: std::nullopt when valid, otherwise the reason.
class DomainGuard {
 public:
  using Predicate = std::function<std::optional<std::string>(const SpacetimeEvent&)>;

  DomainGuard() = default;
  explicit DomainGuard(Predicate p) : predicate_(std::move(p)) {}

  /// Accepts every event.
  static DomainGuard everywhere() { return DomainGuard(); }

  std::optional<std::string> violation(const SpacetimeEvent& x) const {
    if (!predicate_) return std::nullopt;
    return predicate_(x);
  }
  bool contains(const SpacetimeEvent& x) const { return !violation(x).has_value(); }

  /// Throws OutsideDomain carrying the reason.
  void check(const SpacetimeEvent& x) const {
    if (auto why = violation(x)) throw OutsideDomain(*why);
  }

  bool unrestricted() const noexcept { return !predicate_; }

  static DomainGuard intersect(const DomainGuard& a, const DomainGuard& b) {
    if (a.unrestricted()) return b;
    if (b.unrestricted()) return a;
    return DomainGuard([a, b](const SpacetimeEvent& x) -> std::optional<std::string> {
      if (auto why = a.violation(x)) return why;
      return b.violation(x);
    });
  }

 private:
  Predicate predicate_;
};

}  // namespace phasecon
