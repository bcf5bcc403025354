// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace epikit {

/// Uniform axis with n >= 2 nodes from lo to hi inclusive.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  // Symmetric interpolation so that mirrored boxes give exactly mirrored nodes.
  double at(std::size_t i) const {
    const auto k = static_cast<double>(n - 1);
    return (lo * (k - static_cast<double>(i)) + hi * static_cast<double>(i)) / k;
  }
  // Axis covering [lo, hi] with spacing as close to `step` as the length allows.
  static Axis with_step(double lo, double hi, double step);
};

/// Tensor product of uniform axes, row-major with the last axis fastest.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);

  // [-radius, radius]^dim.
  static Grid cube(std::size_t dim, double radius, double step);
  // Product of this grid's axes followed by other's.
  Grid concat(const Grid& other) const;
  // Subgrid formed by axes [first, first + count).
  Grid slice(std::size_t first, std::size_t count) const;

  std::size_t dim() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const Axis& axis(std::size_t k) const { return axes_[k]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  void point(std::size_t flat, std::span<double> out) const;
  void unflatten(std::size_t flat, std::span<std::size_t> idx) const;
  std::size_t flatten(std::span<const std::size_t> idx) const;
  bool on_boundary(std::size_t flat) const;

  double max_step() const;
  double min_step() const;
  bool same_as(const Grid& other) const;
  std::string describe() const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/**
 * Tensor product of sorted coordinate lists; axes need not be uniform.
 *
 * Used for probing minimizations where a geometric refinement near a point
 * is needed.
 */
class ProbeGrid {
 public:
  ProbeGrid() = default;
  explicit ProbeGrid(std::vector<std::vector<double>> coords);
  explicit ProbeGrid(const Grid& g);

  // Symmetric axis on [-radius, radius]: uniform with `step`, plus points
  // +-radius * ratio^k (k = 1..levels) refining towards 0.
  static std::vector<double> refined_axis(double radius, double step, double ratio, int levels);

  std::size_t dim() const { return coords_.size(); }
  std::size_t size() const { return size_; }
  const std::vector<double>& coords(std::size_t k) const { return coords_[k]; }

  void point(std::size_t flat, std::span<double> out) const;
  bool on_boundary(std::size_t flat) const;
  double max_step() const;
  // Radius of the largest centred sup-ball inside the box.
  double inner_radius() const;

 private:
  std::vector<std::vector<double>> coords_;
  std::size_t size_ = 0;
};

}  // namespace epikit
