// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "epikit/ext_real.hpp"
#include "epikit/norm.hpp"
#include "epikit/point_cloud.hpp"

namespace epikit {

// Target clouds larger than this are searched through a CellIndex.
inline constexpr std::size_t kIndexThreshold = 4096;

/**
 * Uniform cell hash over a point cloud for nearest-point queries.
 *
 * Cells are visited in rings of growing sup-distance; a ring is skipped once
 * its lower bound exceeds the best distance found, which is valid for any
 * norm that dominates the sup-norm.
 */
class CellIndex {
 public:
  CellIndex(const PointCloud& cloud, const NormSpec& norm);

  // Distance from q to the nearest indexed point (+inf if the cloud is empty).
  double nearest(std::span<const double> q) const;

 private:
  static constexpr std::size_t kMaxDim = 8;
  using Key = std::array<std::int32_t, kMaxDim>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct Cell {
    std::uint32_t begin = 0, end = 0;
    Key key{};
  };

  Key key_of(std::span<const double> p) const;
  double scan_cell(const Cell& c, std::span<const double> q, double best) const;

  const NormSpec& norm_;
  std::size_t dim_;
  double cell_ = 1.0;
  std::vector<double> origin_;
  std::vector<std::int32_t> kmin_, kmax_;
  std::vector<double> sorted_;  // points grouped by cell
  std::vector<Cell> cells_;
  std::unordered_map<Key, std::uint32_t, KeyHash> lookup_;
};

// exs(C; D) = sup_{c in C} dist(c, D); exs(empty; D) = 0, exs(C; empty) = +inf.
ExtReal excess(const PointCloud& c, const PointCloud& d, const NormSpec& n);
ExtReal excess_bruteforce(const PointCloud& c, const PointCloud& d, const NormSpec& n);
ExtReal excess_indexed(const PointCloud& c, const PointCloud& d, const NormSpec& n);

// Points of c with N(p) <= rho.
PointCloud clip_to_ball(const PointCloud& c, double rho, const NormSpec& n);

// max(exs(C cap B(rho); D), exs(D cap B(rho); C)).
ExtReal truncated_hausdorff(const PointCloud& c, const PointCloud& d, double rho, const NormSpec& n);

}  // namespace epikit
