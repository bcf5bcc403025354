// SPDX-License-Identifier: MIT
#include "epikit/point_cloud.hpp"

#include <cmath>
#include <stdexcept>

namespace epikit {

PointCloud::PointCloud(std::size_t dim, std::string tag) : dim_(dim), tag_(std::move(tag)) {
  if (dim == 0) throw std::invalid_argument("PointCloud: dimension must be positive");
}

void PointCloud::add(std::span<const double> p) {
  if (p.size() != dim_) throw std::invalid_argument("PointCloud: point dimension mismatch");
  for (double c : p)
    if (!std::isfinite(c)) throw std::domain_error("PointCloud: coordinates must be finite");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

}  // namespace epikit
