// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "epikit/distance.hpp"
#include "epikit/ext_real.hpp"
#include "epikit/gridded_function.hpp"
#include "epikit/norm.hpp"
#include "epikit/point_cloud.hpp"

namespace epikit {

enum class Orientation { Epi, Hypo };

struct ArgminResult {
  ExtReal inf;
  PointCloud points;  // eps-argmin on the grid
  bool on_boundary = false;  // every exact minimizer lies on the grid boundary
};

// Infimum over grid nodes and the nodes with g <= inf + eps (dom g only).
ArgminResult infimum_argmin(const GriddedFunction& g, double eps = 0.0);

// Nodes with g <= alpha.
PointCloud level_set(const GriddedFunction& g, double alpha);

// Nodes of dom g = {g < +inf}.
PointCloud domain_cloud(const GriddedFunction& g);

/**
 * Sampled epigraph (or hypograph) within alpha in [alpha_lo, alpha_hi].
 *
 * For each node with g <= alpha_hi, emits (x, a0), (x, a0 + step), ... up to
 * alpha_hi where a0 = max(g(x), alpha_lo). The hypograph variant emits
 * (x, a) for a <= g(x) within the same alpha window, stepping downward.
 */
PointCloud epi_cloud(const GriddedFunction& g, double alpha_lo, double alpha_hi, double alpha_step,
                     Orientation orientation = Orientation::Epi);

struct ConjugateValue {
  ExtReal value;
  bool boundary = false;  // every maximizer sits on the primal box boundary
};

// g*(y) = max over nodes x of <x, y> - g(x), at a single dual point.
ConjugateValue conjugate_at(const GriddedFunction& g, std::span<const double> y);

/// Tabulated conjugate g*(y) = max over nodes x of <x, y> - g(x).
struct ConjugateTable {
  std::shared_ptr<const GriddedFunction> primal;
  GriddedFunction raw;
  // Dual nodes where every maximizer sits on the primal box boundary.
  std::vector<char> boundary;

  // Value with boundary maximizers read as +inf (grid truncation of an
  // unbounded sup).
  ExtReal extended(std::size_t flat) const {
    return boundary[flat] ? ExtReal::pos_inf() : raw[flat];
  }
  // Extended value at an arbitrary dual point, computed from the primal table.
  ExtReal at(std::span<const double> y) const;
};

GriddedFunction conjugate(const GriddedFunction& g, const Grid& dual_grid);
ConjugateTable conjugate_table(const GriddedFunction& g, const Grid& dual_grid);

// Largest difference quotient over axis-adjacent node pairs inside the
// Euclidean ball of radius rho. Throws if g is not finite there.
double lipschitz_modulus(const GriddedFunction& g, double rho);

// sup over nodes in the Euclidean ball of radius rho of |g - h| (same grid).
double sup_abs_difference(const GriddedFunction& g, const GriddedFunction& h, double rho);

/**
 * Excess of the truncated epigraph of g over the epigraph of h.
 *
 * Both functions are taken as +inf off their grid nodes, so their epigraphs
 * are unions of vertical rays. `norm` covers the grid coordinates followed by
 * one |alpha| block. Exact for the grid-restricted functions.
 */
ExtReal epi_excess(const GriddedFunction& g, const GriddedFunction& h, double rho,
                   const NormSpec& norm, Orientation orientation = Orientation::Epi);

// Truncated Hausdorff distance between the epigraphs (hypographs) of g and h.
ExtReal epi_distance(const GriddedFunction& g, const GriddedFunction& h, double rho,
                     const NormSpec& norm, Orientation orientation = Orientation::Epi);

enum class EpiMethod { Cloud, Column };

struct ProfileOptions {
  EpiMethod method = EpiMethod::Cloud;
  std::optional<double> alpha_step;  // default: max grid step
  double build_margin = 1.0;         // clouds span |alpha| <= rho + margin
  Orientation orientation = Orientation::Epi;
};

struct ProfileEntry {
  int nu = 0;
  ExtReal distance;
};

struct ConvergenceProfile {
  double rho = 0.0;
  double tol = 0.0;
  std::vector<ProfileEntry> entries;
  std::optional<double> fitted_rate;
};

ConvergenceProfile epi_profile(std::span<const int> nus, std::span<const GriddedFunction> seq,
                               const GriddedFunction& g, double rho, const NormSpec& norm,
                               const ProfileOptions& options = {});

// Least-squares slope of log d against log nu over entries with tol < d < inf.
std::optional<double> fit_rate(std::span<const ProfileEntry> entries, double tol);

}  // namespace epikit
