// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "epikit/ext_real.hpp"
#include "epikit/grid.hpp"

namespace epikit {

using Field = std::function<ExtReal(std::span<const double>)>;

/// Extended-real values on a uniform tensor grid.
class GriddedFunction {
 public:
  GriddedFunction(Grid grid, std::vector<ExtReal> values);

  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return grid_.dim(); }
  std::size_t size() const { return values_.size(); }
  std::span<const ExtReal> values() const { return values_; }
  ExtReal operator[](std::size_t flat) const { return values_[flat]; }
  ExtReal& at(std::size_t flat) { return values_[flat]; }

  /**
   * Multilinear interpolation. Returns +inf outside the box. An infinite
   * corner with positive weight makes the result infinite (+inf wins).
   */
  ExtReal interpolate(std::span<const double> x) const;

  GriddedFunction negated() const;
  bool has_finite() const;
  bool has_neg_inf() const;

 private:
  Grid grid_;
  std::vector<ExtReal> values_;
};

GriddedFunction grid_sample(const Field& eval, const Grid& grid);

// Field view of a gridded function (interpolating).
Field as_field(const GriddedFunction& g);

}  // namespace epikit
