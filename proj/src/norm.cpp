// SPDX-License-Identifier: MIT
#include "epikit/norm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epikit {

NormSpec::NormSpec(std::vector<NormBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("NormSpec: at least one block required");
  for (const auto& b : blocks_) {
    if (b.dim == 0) throw std::invalid_argument("NormSpec: block dimension must be positive");
    if (b.inner == InnerNorm::Abs && b.dim != 1)
      throw std::invalid_argument("NormSpec: ABS block must have dimension 1");
    total_dim_ += b.dim;
  }
}

NormSpec NormSpec::euclidean(std::size_t dim) { return NormSpec({{dim, InnerNorm::L2}}); }

NormSpec NormSpec::epigraph(std::size_t m, InnerNorm u_inner, std::size_t n) {
  return NormSpec({{m, u_inner}, {n, InnerNorm::L2}, {1, InnerNorm::Abs}});
}

NormSpec NormSpec::epigraph(std::size_t n) {
  return NormSpec({{n, InnerNorm::L2}, {1, InnerNorm::Abs}});
}

namespace {

double block_norm(InnerNorm inner, const double* v, std::size_t d) {
  switch (inner) {
    case InnerNorm::Abs:
      return std::fabs(v[0]);
    case InnerNorm::L1: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += std::fabs(v[i]);
      return s;
    }
    case InnerNorm::L2: {
      if (d == 1) return std::fabs(v[0]);
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += v[i] * v[i];
      return std::sqrt(s);
    }
  }
  return 0.0;
}

}  // namespace

double NormSpec::operator()(std::span<const double> v) const {
  if (v.size() != total_dim_) throw std::invalid_argument("NormSpec: dimension mismatch");
  double out = 0.0;
  std::size_t off = 0;
  for (const auto& b : blocks_) {
    out = std::max(out, block_norm(b.inner, v.data() + off, b.dim));
    off += b.dim;
  }
  return out;
}

double NormSpec::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != total_dim_ || b.size() != total_dim_)
    throw std::invalid_argument("NormSpec: dimension mismatch");
  double diff[16];
  std::vector<double> heap;
  double* d = diff;
  if (total_dim_ > 16) {
    heap.resize(total_dim_);
    d = heap.data();
  }
  for (std::size_t i = 0; i < total_dim_; ++i) d[i] = a[i] - b[i];
  double out = 0.0;
  std::size_t off = 0;
  for (const auto& blk : blocks_) {
    out = std::max(out, block_norm(blk.inner, d + off, blk.dim));
    off += blk.dim;
  }
  return out;
}

bool NormSpec::is_sup_norm() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const NormBlock& b) { return b.dim == 1; });
}

NormSpec NormSpec::without_last() const {
  if (blocks_.size() < 2) throw std::invalid_argument("NormSpec: cannot drop the only block");
  return NormSpec(std::vector<NormBlock>(blocks_.begin(), blocks_.end() - 1));
}

NormSpec NormSpec::with_alpha() const {
  auto b = blocks_;
  b.push_back({1, InnerNorm::Abs});
  return NormSpec(std::move(b));
}

double norm_eval(const NormSpec& n, std::span<const double> v) { return n(v); }

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace epikit
