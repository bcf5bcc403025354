// SPDX-License-Identifier: MIT
#pragma once

#include <compare>
#include <limits>
#include <ostream>
#include <string>

namespace epikit {

/**
 * Element of the extended real line [-inf, +inf].
 *
 * Backed by a double; NaN is rejected at construction. Addition follows the
 * convention inf - inf = +inf.
 */
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal pos_inf() { return ExtReal(kInf, Raw{}); }
  static constexpr ExtReal neg_inf() { return ExtReal(-kInf, Raw{}); }

  constexpr double value() const { return v_; }
  constexpr bool is_finite() const { return v_ > -kInf && v_ < kInf; }
  constexpr bool is_pos_inf() const { return v_ == kInf; }
  constexpr bool is_neg_inf() const { return v_ == -kInf; }

  constexpr ExtReal operator-() const { return ExtReal(-v_, Raw{}); }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    return a.v_ <=> b.v_;
  }

  std::string str() const;

 private:
  struct Raw {};
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr ExtReal(double v, Raw) : v_(v) {}

  double v_ = 0.0;
};

// a + b with +inf + -inf = +inf.
ExtReal xr_add(ExtReal a, ExtReal b);
// a - b with +inf - +inf = +inf.
ExtReal xr_sub(ExtReal a, ExtReal b);
// c * a for a finite scalar c, with 0 * inf = 0.
ExtReal xr_scale(double c, ExtReal a);

inline ExtReal operator+(ExtReal a, ExtReal b) { return xr_add(a, b); }
inline ExtReal operator-(ExtReal a, ExtReal b) { return xr_sub(a, b); }

inline ExtReal xr_min(ExtReal a, ExtReal b) { return b < a ? b : a; }
inline ExtReal xr_max(ExtReal a, ExtReal b) { return b > a ? b : a; }

inline std::ostream& operator<<(std::ostream& os, ExtReal a) { return os << a.str(); }

// max(a, 0) for a finite or infinite value.
inline ExtReal xr_pos(ExtReal a) { return a.value() > 0.0 ? a : ExtReal(0.0); }

}  // namespace epikit
