// SPDX-License-Identifier: MIT
#include "epikit/catalog.hpp"

#include <cmath>

#include "epikit/norm.hpp"

namespace epikit {

namespace {

std::vector<double> parse_args(std::string_view s, std::string_view token) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find(',', pos), s.size());
    const std::string part(s.substr(pos, end - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v))
      throw CatalogError("bad number '" + part + "' in token '" + std::string(token) + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

void need(bool ok, std::string_view token, const std::string& what) {
  if (!ok) throw CatalogError("token '" + std::string(token) + "': " + what);
}

}  // namespace

Field make_field(std::string_view token, std::size_t dim) {
  const std::size_t colon = token.find(':');
  const std::string name(token.substr(0, colon));
  const std::vector<double> a =
      colon == std::string_view::npos ? std::vector<double>{} : parse_args(token.substr(colon + 1), token);
  need(dim >= 1, token, "dimension must be positive");

  if (name == "poly") {
    need(!a.empty(), token, "needs coefficients");
    need(dim == 1, token, "polynomials are one-dimensional");
    return [a](std::span<const double> x) {
      double v = 0.0;
      for (std::size_t k = a.size(); k-- > 0;) v = v * x[0] + a[k];
      return ExtReal(v);
    };
  }
  if (name == "const") {
    need(a.size() == 1, token, "needs one value");
    const double c = a[0];
    return [c](std::span<const double>) { return ExtReal(c); };
  }
  if (name == "affine") {
    need(a.size() == dim + 1, token, "needs " + std::to_string(dim + 1) + " values");
    return [a](std::span<const double> x) {
      double v = a.back();
      for (std::size_t i = 0; i < x.size(); ++i) v += a[i] * x[i];
      return ExtReal(v);
    };
  }
  if (name == "sqnorm") {
    need(a.size() == 1, token, "needs theta");
    const double t = a[0];
    return [t](std::span<const double> x) { return ExtReal(t * dot(x, x)); };
  }
  if (name == "hinge") {
    need(a.size() == 1 && a[0] >= 0.0, token, "needs theta >= 0");
    const double t = a[0];
    return [t](std::span<const double> x) {
      double v = 0.0;
      for (double c : x) v += std::max(0.0, c);
      return ExtReal(t * v);
    };
  }
  if (name == "ind_box") {
    need(a.size() == 2 && a[0] <= a[1], token, "needs lo <= hi");
    const double lo = a[0], hi = a[1];
    return [lo, hi](std::span<const double> x) {
      for (double c : x)
        if (c < lo || c > hi) return ExtReal::pos_inf();
      return ExtReal(0.0);
    };
  }
  need(a.empty(), token, "takes no arguments");
  if (name == "norm1" || name == "abs") return [](std::span<const double> x) { return ExtReal(norm1(x)); };
  if (name == "norm2") return [](std::span<const double> x) { return ExtReal(norm2(x)); };
  if (name == "ind_nonpos" || name == "ind_nonneg" || name == "ind_zero") {
    const int kind = name == "ind_nonpos" ? 0 : name == "ind_nonneg" ? 1 : 2;
    return [kind](std::span<const double> x) {
      for (double c : x) {
        const bool bad = kind == 0 ? c > 0.0 : kind == 1 ? c < 0.0 : c != 0.0;
        if (bad) return ExtReal::pos_inf();
      }
      return ExtReal(0.0);
    };
  }
  throw CatalogError("unknown catalog token '" + std::string(token) + "'");
}

std::string token_error(std::string_view token, std::size_t dim) {
  try {
    make_field(token, dim);
  } catch (const CatalogError& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> catalog_names() {
  return {"poly",  "const", "affine",     "sqnorm",     "norm1",    "norm2",  "abs",
          "hinge", "ind_nonpos", "ind_nonneg", "ind_zero", "ind_box"};
}

}  // namespace epikit
