// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace epikit {

/// Finite set of points in R^d, stored flat.
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim, std::string tag = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }
  const std::string& tag() const { return tag_; }

  void add(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> data() const { return coords_; }

 private:
  std::size_t dim_;
  std::string tag_;
  std::vector<double> coords_;
};

}  // namespace epikit
