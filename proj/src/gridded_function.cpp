// SPDX-License-Identifier: MIT
#include "epikit/gridded_function.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "epikit/parallel.hpp"

namespace epikit {

GriddedFunction::GriddedFunction(Grid grid, std::vector<ExtReal> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("GriddedFunction: value count does not match grid size");
}

ExtReal GriddedFunction::interpolate(std::span<const double> x) const {
  const std::size_t d = grid_.dim();
  if (x.size() != d) throw std::invalid_argument("GriddedFunction: point dimension mismatch");
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (std::size_t k = 0; k < d; ++k) {
    const Axis& a = grid_.axis(k);
    if (!(x[k] >= a.lo && x[k] <= a.hi)) return ExtReal::pos_inf();
    double t = (x[k] - a.lo) / a.step();
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= a.n - 1) i = a.n - 2;
    base[k] = i;
    frac[k] = std::clamp(t - static_cast<double>(i), 0.0, 1.0);
  }
  double acc = 0.0;
  bool pos = false, neg = false;
  const std::size_t corners = std::size_t{1} << d;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < d; ++k) {
      bool up = (c >> k) & 1u;
      w *= up ? frac[k] : 1.0 - frac[k];
      flat += (base[k] + (up ? 1 : 0)) * grid_.stride(k);
    }
    if (w <= 0.0) continue;
    ExtReal v = values_[flat];
    if (v.is_pos_inf()) pos = true;
    else if (v.is_neg_inf()) neg = true;
    else acc += w * v.value();
  }
  if (pos) return ExtReal::pos_inf();
  if (neg) return ExtReal::neg_inf();
  return ExtReal(acc);
}

GriddedFunction GriddedFunction::negated() const {
  std::vector<ExtReal> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](ExtReal a) { return -a; });
  return GriddedFunction(grid_, std::move(v));
}

bool GriddedFunction::has_finite() const {
  return std::any_of(values_.begin(), values_.end(), [](ExtReal a) { return a.is_finite(); });
}

bool GriddedFunction::has_neg_inf() const {
  return std::any_of(values_.begin(), values_.end(), [](ExtReal a) { return a.is_neg_inf(); });
}

GriddedFunction grid_sample(const Field& eval, const Grid& grid) {
  std::vector<ExtReal> v(grid.size());
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> x(grid.dim());
    for (std::size_t i = b; i < e; ++i) {
      grid.point(i, x);
      v[i] = eval(x);
    }
  }, 4096);
  return GriddedFunction(grid, std::move(v));
}

Field as_field(const GriddedFunction& g) {
  auto shared = std::make_shared<GriddedFunction>(g);
  return [shared](std::span<const double> x) { return shared->interpolate(x); };
}

}  // namespace epikit
