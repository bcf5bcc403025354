// SPDX-License-Identifier: MIT
#include "epikit/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "epikit/parallel.hpp"

namespace epikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const PointCloud& c, const PointCloud& d, const NormSpec& n) {
  if (c.dim() != d.dim() || c.dim() != n.total_dim())
    throw std::invalid_argument("excess: dimension mismatch between clouds and norm");
}

}  // namespace

std::size_t CellIndex::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : k) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

CellIndex::CellIndex(const PointCloud& cloud, const NormSpec& norm)
    : norm_(norm), dim_(cloud.dim()) {
  if (dim_ > kMaxDim) throw std::invalid_argument("CellIndex: dimension too large");
  if (dim_ != norm.total_dim()) throw std::invalid_argument("CellIndex: norm dimension mismatch");
  const std::size_t np = cloud.size();
  origin_.assign(dim_, 0.0);
  kmin_.assign(dim_, 0);
  kmax_.assign(dim_, 0);
  if (np == 0) return;

  std::vector<double> lo(dim_, kInf), hi(dim_, -kInf);
  for (std::size_t i = 0; i < np; ++i) {
    auto p = cloud.point(i);
    for (std::size_t k = 0; k < dim_; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  // Cell side chosen so that a cloud filling its bounding box puts a few
  // points in each cell.
  double vol = 1.0;
  std::size_t spread_dims = 0;
  double max_ext = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double e = hi[k] - lo[k];
    max_ext = std::max(max_ext, e);
    if (e > 0) {
      vol *= e;
      ++spread_dims;
    }
  }
  if (max_ext <= 0) {
    cell_ = 1.0;
  } else {
    double per_cell = 2.0;
    cell_ = std::pow(vol * per_cell / static_cast<double>(np), 1.0 / static_cast<double>(spread_dims));
    cell_ = std::clamp(cell_, max_ext * 1e-6, max_ext);
  }
  origin_ = lo;

  std::vector<Key> keys(np);
  for (std::size_t i = 0; i < np; ++i) keys[i] = key_of(cloud.point(i));
  std::vector<std::uint32_t> order(np);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
  sorted_.resize(np * dim_);
  for (std::size_t r = 0; r < np; ++r) {
    auto p = cloud.point(order[r]);
    std::copy(p.begin(), p.end(), sorted_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
    const Key& k = keys[order[r]];
    if (cells_.empty() || cells_.back().key != k) {
      Cell c;
      c.begin = c.end = static_cast<std::uint32_t>(r);
      c.key = k;
      cells_.push_back(c);
    }
    cells_.back().end = static_cast<std::uint32_t>(r + 1);
  }
  lookup_.reserve(cells_.size() * 2);
  for (std::uint32_t i = 0; i < cells_.size(); ++i) lookup_.emplace(cells_[i].key, i);
  for (std::size_t k = 0; k < dim_; ++k) {
    kmin_[k] = std::numeric_limits<std::int32_t>::max();
    kmax_[k] = std::numeric_limits<std::int32_t>::min();
  }
  for (const auto& c : cells_)
    for (std::size_t k = 0; k < dim_; ++k) {
      kmin_[k] = std::min(kmin_[k], c.key[k]);
      kmax_[k] = std::max(kmax_[k], c.key[k]);
    }
}

CellIndex::Key CellIndex::key_of(std::span<const double> p) const {
  Key k{};
  for (std::size_t i = 0; i < dim_; ++i) {
    double c = std::floor((p[i] - origin_[i]) / cell_);
    c = std::clamp(c, -1e9, 1e9);
    k[i] = static_cast<std::int32_t>(c);
  }
  return k;
}

double CellIndex::scan_cell(const Cell& c, std::span<const double> q, double best) const {
  for (std::uint32_t r = c.begin; r < c.end; ++r) {
    double d = norm_.distance(q, {sorted_.data() + r * dim_, dim_});
    if (d < best) best = d;
  }
  return best;
}

double CellIndex::nearest(std::span<const double> q) const {
  if (cells_.empty()) return kInf;
  const Key qk = key_of(q);
  double best = kInf;

  // First ring that can contain an occupied cell.
  std::int64_t k0 = 0, kmax_ring = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    std::int64_t below = static_cast<std::int64_t>(kmin_[i]) - qk[i];
    std::int64_t above = static_cast<std::int64_t>(qk[i]) - kmax_[i];
    k0 = std::max({k0, below, above});
    kmax_ring = std::max({kmax_ring, std::abs(static_cast<std::int64_t>(kmax_[i]) - qk[i]),
                          std::abs(static_cast<std::int64_t>(kmin_[i]) - qk[i])});
  }

  auto ring_size = [&](std::int64_t k) {
    if (k == 0) return 1.0;
    return std::pow(2.0 * k + 1.0, static_cast<double>(dim_)) -
           std::pow(2.0 * k - 1.0, static_cast<double>(dim_));
  };

  Key probe{};
  std::array<std::int64_t, kMaxDim> off{};
  for (std::int64_t k = k0; k <= kmax_ring; ++k) {
    // Any point in ring k is at sup-distance >= (k - 1) * cell from q.
    if (k > 0 && static_cast<double>(k - 1) * cell_ >= best) break;
    if (ring_size(k) > static_cast<double>(cells_.size())) {
      // Ring larger than the occupied set: scan remaining cells directly.
      for (const auto& c : cells_) {
        std::int64_t cheb = 0;
        for (std::size_t i = 0; i < dim_; ++i)
          cheb = std::max(cheb, std::abs(static_cast<std::int64_t>(c.key[i]) - qk[i]));
        if (cheb < k) continue;
        if (cheb > 0 && static_cast<double>(cheb - 1) * cell_ >= best) continue;
        best = scan_cell(c, q, best);
      }
      break;
    }
    if (k == 0) {
      auto it = lookup_.find(qk);
      if (it != lookup_.end()) best = scan_cell(cells_[it->second], q, best);
      continue;
    }
    // Enumerate the ring face by face: axis j pinned at +-k, axes before j
    // restricted to |o| <= k-1, axes after j free in [-k, k].
    for (std::size_t j = 0; j < dim_; ++j) {
      for (int sign = -1; sign <= 1; sign += 2) {
        for (std::size_t i = 0; i < dim_; ++i) off[i] = (i < j) ? -(k - 1) : -k;
        off[j] = sign * k;
        bool done = false;
        while (!done) {
          bool valid = true;
          for (std::size_t i = 0; i < dim_; ++i) {
            std::int64_t c = qk[i] + off[i];
            if (c < kmin_[i] || c > kmax_[i]) {
              valid = false;
              break;
            }
            probe[i] = static_cast<std::int32_t>(c);
          }
          if (valid) {
            auto it = lookup_.find(probe);
            if (it != lookup_.end()) best = scan_cell(cells_[it->second], q, best);
          }
          // Odometer increment over free axes.
          done = true;
          for (std::size_t ii = dim_; ii-- > 0;) {
            if (ii == j) continue;
            std::int64_t lim = (ii < j) ? k - 1 : k;
            if (off[ii] < lim) {
              ++off[ii];
              for (std::size_t r = ii + 1; r < dim_; ++r)
                if (r != j) off[r] = (r < j) ? -(k - 1) : -k;
              done = false;
              break;
            }
          }
        }
      }
    }
  }
  return best;
}

ExtReal excess_bruteforce(const PointCloud& c, const PointCloud& d, const NormSpec& n) {
  check_dims(c, d, n);
  if (c.empty()) return ExtReal(0.0);
  if (d.empty()) return ExtReal::pos_inf();
  const std::size_t nc = c.size(), nd = d.size();
  std::vector<double> mins(nc, kInf);
  parallel_for(nc, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double best = kInf;
      for (std::size_t j = 0; j < nd; ++j) best = std::min(best, n.distance(c.point(i), d.point(j)));
      mins[i] = best;
    }
  }, 64);
  return ExtReal(*std::max_element(mins.begin(), mins.end()));
}

ExtReal excess_indexed(const PointCloud& c, const PointCloud& d, const NormSpec& n) {
  check_dims(c, d, n);
  if (c.empty()) return ExtReal(0.0);
  if (d.empty()) return ExtReal::pos_inf();
  CellIndex index(d, n);
  const std::size_t nc = c.size();
  std::vector<double> mins(nc, kInf);
  parallel_for(nc, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) mins[i] = index.nearest(c.point(i));
  });
  return ExtReal(*std::max_element(mins.begin(), mins.end()));
}

ExtReal excess(const PointCloud& c, const PointCloud& d, const NormSpec& n) {
  if (d.size() > kIndexThreshold && d.dim() <= 8) return excess_indexed(c, d, n);
  return excess_bruteforce(c, d, n);
}

PointCloud clip_to_ball(const PointCloud& c, double rho, const NormSpec& n) {
  if (c.dim() != n.total_dim()) throw std::invalid_argument("clip_to_ball: dimension mismatch");
  PointCloud out(c.dim(), c.tag());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (n(c.point(i)) <= rho) out.add(c.point(i));
  return out;
}

ExtReal truncated_hausdorff(const PointCloud& c, const PointCloud& d, double rho, const NormSpec& n) {
  if (!(rho >= 0.0)) throw std::invalid_argument("truncated_hausdorff: rho must be nonnegative");
  check_dims(c, d, n);
  ExtReal a = excess(clip_to_ball(c, rho, n), d, n);
  ExtReal b = excess(clip_to_ball(d, rho, n), c, n);
  return xr_max(a, b);
}

}  // namespace epikit
