// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <vector>

#include "epikit/ext_real.hpp"
#include "epikit/funcgrid.hpp"
#include "epikit/grid.hpp"
#include "epikit/gridded_function.hpp"
#include "epikit/rockafellian.hpp"

namespace epikit {

// Proxy for -inf when reading off dom(-psi) from a table.
inline constexpr double kHuge = 1e12;

/// Grid minimum of a tilted Rockafellian over u.
struct NumericMin {
  ExtReal value;  // -inf when `boundary` is set
  ExtReal raw;    // plain grid minimum
  // Every minimizer sits on the boundary of the probe box, so the true
  // infimum may be lower or unattained.
  bool boundary = false;
  std::vector<double> argmin;  // minimizer of least Euclidean norm
};

// l(x, y) = min over u probes of f(u, x) - <y, u>.
NumericMin lagrangian_numeric_detail(const RockafellianModel& f, std::span<const double> x,
                                     std::span<const double> y, const ProbeGrid& u_probe);
ExtReal lagrangian_numeric(const RockafellianModel& f, std::span<const double> x, std::span<const double> y,
                           const ProbeGrid& u_probe);

// iota_X(x) + g0(x) + <G(x), y> - h*(y). Throws if y is outside the dual box.
ExtReal lagrangian_composite_closed(const CompositeParams& p, const ConjugateTable& h_conj,
                                    std::span<const double> x, std::span<const double> y);

// g0(x) + sum_i h_i(x, y_i) with the piecewise terms of the ambiguity family.
ExtReal lagrangian_ambiguity_closed(const RockafellianModel& model, std::span<const double> x,
                                    std::span<const double> y);

/**
 * -sum_i p_i g_i*(y_i / p_i) + <x, sum_i y_i> for a splitting model, with
 * y = (y_1..y_m) in blocks of size n. Requires every p_i > 0; g_conj[i] is
 * the conjugate table of g_i.
 */
ExtReal lagrangian_splitting_closed(const RockafellianModel& model, std::span<const ConjugateTable> g_conj,
                                    std::span<const double> x, std::span<const double> y);

// psi(y) = -<b, y> - g0*(-A^T y) for G(x) = Ax - b and h = iota{0}.
ExtReal dual_affine_closed(const ConjugateTable& g0_conj, const std::vector<std::vector<double>>& A,
                           std::span<const double> b, std::span<const double> y);

/**
 * Joint table of f over (u, x) reduced over x.
 *
 * p[k] = min_x f(u_k, x) and xnorm[k] = least ||x||_2 among the x attaining
 * it, for each node u_k of the leading m axes.
 */
struct ReducedTable {
  Grid u_grid;
  Grid x_grid;
  std::vector<ExtReal> p;
  std::vector<double> xnorm;
  std::shared_ptr<const GriddedFunction> joint;
};

ReducedTable reduce_joint(const GriddedFunction& joint, std::size_t m);

// min_x f(0, x) over the joint table; u = 0 must be a grid node.
ExtReal table_inf_phi(const ReducedTable& t);

/// psi tabulated on a y grid.
struct DualFunction {
  Grid y_grid;
  std::vector<ExtReal> raw;
  std::vector<char> boundary;       // minimizers only on the u-box boundary
  std::vector<double> argmin_norm;  // least max{||u||_2, ||x||_2} over minimizers

  ExtReal value(std::size_t k) const { return boundary[k] ? ExtReal::neg_inf() : raw[k]; }
  GriddedFunction values() const;
  // Nodes with psi > -kHuge.
  std::vector<char> domain() const;
};

DualFunction dual_numeric(const ReducedTable& t, const Grid& y_grid);
DualFunction dual_numeric(const RockafellianModel& f, const Grid& y_grid, const Grid& joint);
NumericMin dual_value(const ReducedTable& t, std::span<const double> y);

/// l(., y) on the x grid of a joint table.
struct LagrangianTable {
  GriddedFunction values;  // boundary nodes carry -inf
  GriddedFunction raw;     // plain grid minima
  std::vector<char> boundary;
};

LagrangianTable lagrangian_table(const ReducedTable& t, std::span<const double> y);

struct WeakDualityReport {
  ExtReal sup_psi;
  ExtReal inf_phi;
  double violation = 0.0;  // max(sup psi - inf phi, 0)
  double gap = 0.0;        // |sup psi - inf phi| when both are finite
  double tol = 0.0;
  bool passed = false;
  bool degenerate = false;  // psi has no finite value
};

WeakDualityReport weak_duality_check(const DualFunction& psi, ExtReal inf_phi, double tol);

}  // namespace epikit
