// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epikit/gridded_function.hpp"

namespace epikit {

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Function on R^dim named by a catalog token "name" or "name:a,b,...".
 *
 *   poly:c0,c1,..   c0 + c1 x + c2 x^2 + ..     (dim 1)
 *   const:c         c
 *   affine:a..,b    <a, x> + b                  (dim entries of a)
 *   sqnorm:t        t ||x||_2^2
 *   norm1, norm2    ||x||_1, ||x||_2
 *   abs             sum |x_i|
 *   hinge:t         t sum max(0, x_i)
 *   ind_nonpos, ind_nonneg, ind_zero
 *   ind_box:lo,hi   indicator of [lo, hi]^dim
 *
 * Throws CatalogError for unknown names or bad arguments.
 */
Field make_field(std::string_view token, std::size_t dim);

// Empty when the token is valid for `dim`, else the reason.
std::string token_error(std::string_view token, std::size_t dim);

std::vector<std::string> catalog_names();

}  // namespace epikit
