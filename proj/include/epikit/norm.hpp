// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace epikit {

enum class InnerNorm { L1, L2, Abs };

struct NormBlock {
  std::size_t dim = 1;
  InnerNorm inner = InnerNorm::L2;
};

/**
 * Block max-norm: N(v) = max over blocks of the block's inner norm.
 *
 * Every such norm dominates the sup-norm, which the spatial indexes rely on.
 */
class NormSpec {
 public:
  NormSpec() = default;
  explicit NormSpec(std::vector<NormBlock> blocks);

  // Single L2 block of the given dimension.
  static NormSpec euclidean(std::size_t dim);
  // L1 or L2 block for u, L2 block for x, and |alpha|.
  static NormSpec epigraph(std::size_t m, InnerNorm u_inner, std::size_t n);
  // L2 block for x and |alpha|.
  static NormSpec epigraph(std::size_t n);

  std::size_t total_dim() const { return total_dim_; }
  const std::vector<NormBlock>& blocks() const { return blocks_; }

  double operator()(std::span<const double> v) const;
  double distance(std::span<const double> a, std::span<const double> b) const;

  // True when every block is one-dimensional, so N is the sup-norm.
  bool is_sup_norm() const;
  // Norm with the trailing block removed.
  NormSpec without_last() const;
  // Same blocks with one |alpha| block appended.
  NormSpec with_alpha() const;

 private:
  std::vector<NormBlock> blocks_;
  std::size_t total_dim_ = 0;
};

double norm_eval(const NormSpec& n, std::span<const double> v);

double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace epikit
