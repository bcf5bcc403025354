// SPDX-License-Identifier: MIT
#include "epikit/ext_real.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace epikit {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
}

std::string ExtReal::str() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v_);
  return buf;
}

ExtReal xr_add(ExtReal a, ExtReal b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

ExtReal xr_sub(ExtReal a, ExtReal b) { return xr_add(a, -b); }

ExtReal xr_scale(double c, ExtReal a) {
  if (std::isnan(c) || std::isinf(c)) throw std::domain_error("xr_scale: scalar must be finite");
  if (c == 0.0) return ExtReal(0.0);
  return ExtReal(c * a.value());
}

}  // namespace epikit
