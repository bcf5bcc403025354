// SPDX-License-Identifier: MIT
#include "epikit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epikit {

Axis Axis::with_step(double lo, double hi, double step) {
  if (!(step > 0) || !(hi > lo)) throw std::invalid_argument("Axis: need lo < hi and step > 0");
  auto cells = static_cast<std::size_t>(std::llround((hi - lo) / step));
  return Axis{lo, hi, std::max<std::size_t>(cells, 1) + 1};
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("Grid: at least one axis required");
  for (const auto& a : axes_) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi) || a.n < 2)
      throw std::invalid_argument("Grid: each axis needs finite lo < hi and n >= 2");
  }
  strides_.assign(axes_.size(), 1);
  size_ = 1;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= axes_[k].n;
  }
}

Grid Grid::cube(std::size_t dim, double radius, double step) {
  if (dim == 0) throw std::invalid_argument("Grid::cube: dimension must be positive");
  return Grid(std::vector<Axis>(dim, Axis::with_step(-radius, radius, step)));
}

Grid Grid::concat(const Grid& other) const {
  auto a = axes_;
  a.insert(a.end(), other.axes_.begin(), other.axes_.end());
  return Grid(std::move(a));
}

Grid Grid::slice(std::size_t first, std::size_t count) const {
  if (first + count > axes_.size() || count == 0) throw std::invalid_argument("Grid::slice: bad range");
  return Grid(std::vector<Axis>(axes_.begin() + static_cast<std::ptrdiff_t>(first),
                                axes_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

void Grid::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    std::size_t i = (flat / strides_[k]) % axes_[k].n;
    out[k] = axes_[k].at(i);
  }
}

void Grid::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) idx[k] = (flat / strides_[k]) % axes_[k].n;
}

std::size_t Grid::flatten(std::span<const std::size_t> idx) const {
  std::size_t f = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) f += idx[k] * strides_[k];
  return f;
}

bool Grid::on_boundary(std::size_t flat) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    std::size_t i = (flat / strides_[k]) % axes_[k].n;
    if (i == 0 || i + 1 == axes_[k].n) return true;
  }
  return false;
}

double Grid::max_step() const {
  double s = 0.0;
  for (const auto& a : axes_) s = std::max(s, a.step());
  return s;
}

double Grid::min_step() const {
  double s = axes_.empty() ? 0.0 : axes_[0].step();
  for (const auto& a : axes_) s = std::min(s, a.step());
  return s;
}

bool Grid::same_as(const Grid& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const auto& a = axes_[k];
    const auto& b = other.axes_[k];
    if (a.lo != b.lo || a.hi != b.hi || a.n != b.n) return false;
  }
  return true;
}

std::string Grid::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (k) os << " x ";
    os << "[" << axes_[k].lo << "," << axes_[k].hi << "]/" << (axes_[k].n - 1);
  }
  return os.str();
}

ProbeGrid::ProbeGrid(std::vector<std::vector<double>> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("ProbeGrid: at least one axis required");
  size_ = 1;
  for (auto& c : coords_) {
    if (c.empty()) throw std::invalid_argument("ProbeGrid: empty axis");
    for (double v : c)
      if (!std::isfinite(v)) throw std::invalid_argument("ProbeGrid: coordinates must be finite");
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    size_ *= c.size();
  }
}

ProbeGrid::ProbeGrid(const Grid& g) {
  std::vector<std::vector<double>> c(g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const auto& a = g.axis(k);
    c[k].resize(a.n);
    for (std::size_t i = 0; i < a.n; ++i) c[k][i] = a.at(i);
  }
  *this = ProbeGrid(std::move(c));
}

std::vector<double> ProbeGrid::refined_axis(double radius, double step, double ratio, int levels) {
  Axis a = Axis::with_step(-radius, radius, step);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.n; ++i) out.push_back(a.at(i));
  double r = step;
  for (int k = 0; k < levels; ++k) {
    r *= ratio;
    out.push_back(r);
    out.push_back(-r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ProbeGrid::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t k = coords_.size(); k-- > 0;) {
    const auto n = coords_[k].size();
    out[k] = coords_[k][flat % n];
    flat /= n;
  }
}

bool ProbeGrid::on_boundary(std::size_t flat) const {
  for (std::size_t k = coords_.size(); k-- > 0;) {
    const auto n = coords_[k].size();
    std::size_t i = flat % n;
    flat /= n;
    if (i == 0 || i + 1 == n) return true;
  }
  return false;
}

double ProbeGrid::max_step() const {
  double s = 0.0;
  for (const auto& c : coords_)
    for (std::size_t i = 1; i < c.size(); ++i) s = std::max(s, c[i] - c[i - 1]);
  return s;
}

double ProbeGrid::inner_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& c : coords_) r = std::min({r, -c.front(), c.back()});
  return r;
}

}  // namespace epikit
