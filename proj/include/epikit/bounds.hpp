// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epikit/ext_real.hpp"
#include "epikit/gridded_function.hpp"
#include "epikit/lagrangian.hpp"
#include "epikit/norm.hpp"
#include "epikit/rockafellian.hpp"

namespace epikit {

enum class BoundStatus { Pass, Fail, Inapplicable };

std::string to_string(BoundStatus s);

/// Radii entering a bound, with one flag per side condition.
struct RadiusBudget {
  double rho = 0.0;
  std::optional<double> rho_bar;
  std::optional<double> rho_prime;
  std::optional<double> rho_hat;
  std::optional<double> rho_breve;
  std::vector<std::pair<std::string, bool>> conditions;

  void require(std::string what, bool ok) { conditions.emplace_back(std::move(what), ok); }
  bool admissible() const;
};

struct BoundReport {
  std::string theorem;
  ExtReal lhs = 0.0;
  ExtReal rhs = 0.0;
  double tol = 0.0;
  double slack = 0.0;  // rhs + tol - lhs
  BoundStatus status = BoundStatus::Inapplicable;
  RadiusBudget radii;
  std::vector<std::pair<std::string, double>> ingredients;
  std::string note;

  void add(std::string name, double value) { ingredients.emplace_back(std::move(name), value); }
  void add(std::string name, ExtReal value) { ingredients.emplace_back(std::move(name), value.value()); }
};

// Fills slack and status from lhs, rhs, tol and radii.
void finalize(BoundReport& r);

// 2 * largest step among the given grids.
double grid_tol(std::initializer_list<const Grid*> grids);

// Theorem ids.
namespace bound_id {
inline constexpr const char* kMinvalInf = "approx_error.a.inf";
inline constexpr const char* kMinvalArgmin = "approx_error.a.argmin";
inline constexpr const char* kMinvalLevel = "approx_error.b.level";
inline constexpr const char* kTilted = "tilted_rockafellian.b";
inline constexpr const char* kComposite = "composite_haus";
inline constexpr const char* kInequalities = "inequalities";
inline constexpr const char* kConstraintComposite = "constraint_composite.b";
inline constexpr const char* kAmbiguity = "ambiguity.c";
inline constexpr const char* kSplitting = "splitting.b";
inline constexpr const char* kAugmentation = "augmentation.c";
inline constexpr const char* kLagrangian = "lagrangian_error";
inline constexpr const char* kDualA = "dual_error.a";
inline constexpr const char* kDualB = "dual_error.b";
}  // namespace bound_id

std::vector<std::string> all_bound_ids();

struct MinvalOptions {
  double eps = 0.0;
  std::optional<double> delta_a;  // default eps + 2 d + 1e-9
  std::optional<double> delta_b;  // default eps + d + 1e-9
};

/**
 * Approximation-error checks for g against h: the infimum gap, the argmin
 * excess and the level-set excess. `norm` covers x and alpha.
 */
std::vector<BoundReport> bound_minval(const GriddedFunction& g, const GriddedFunction& h, double rho,
                                      const NormSpec& norm, const MinvalOptions& options = {});

// Joint tables below have m leading u axes followed by x axes.

BoundReport bound_tilted(const GriddedFunction& f, const GriddedFunction& f_nu, std::size_t m,
                         std::span<const double> y, std::span<const double> y_nu, double rho);

/// Component tables of a composite instance.
struct CompositeTables {
  GriddedFunction X;               // 0 on X, +inf elsewhere, on the x grid
  std::vector<GriddedFunction> g;  // g0, g1..gm on the x grid
  GriddedFunction h;               // on an m-dimensional z grid
};

BoundReport bound_composite(const CompositeTables& a, const CompositeTables& b, const GriddedFunction& f,
                            const GriddedFunction& f_nu, double rho);

// g = (g0, g1..gm) on the x grid; joint u = (v0..vm, w1..wm).
BoundReport bound_inequalities(std::span<const GriddedFunction> g, std::span<const GriddedFunction> g_nu,
                               const GriddedFunction& f, const GriddedFunction& f_nu, double rho);

struct ConstraintCompositeTables {
  GriddedFunction g0;              // x grid
  std::vector<GriddedFunction> G;  // x grid
  GriddedFunction h;               // z grid
};

// Joint u = (v, w) with v in R^m.
BoundReport bound_constraint_composite(const ConstraintCompositeTables& a, const ConstraintCompositeTables& b,
                                       const GriddedFunction& f, const GriddedFunction& f_nu, double rho);

enum class ConstraintKind { Inequality, ConstraintComposite };

struct AmbiguityData {
  std::vector<GriddedFunction> g;  // g1..gm on the x grid
  std::vector<double> p, p_nu;
  double theta = 0.0;
  double theta_nu = 0.0;
};

// eta defaults to the least value with inf g_i >= -eta on the grid.
BoundReport bound_ambiguity(const AmbiguityData& d, const GriddedFunction& f, const GriddedFunction& f_nu,
                            double rho, std::optional<double> eta = std::nullopt);

struct SplittingData {
  std::vector<GriddedFunction> g, g_nu;  // on the x grid
  std::vector<double> p, p_nu;
};

BoundReport bound_splitting(const SplittingData& d, const GriddedFunction& f, const GriddedFunction& f_nu,
                            double rho, std::optional<double> eta = std::nullopt);

BoundReport bound_augmentation(const GriddedFunction& f, const GriddedFunction& f_nu, std::size_t m,
                               const AugmentationSpec& a, const AugmentationSpec& a_nu, double rho,
                               std::optional<double> eta = std::nullopt);

/**
 * Lagrangian error bound at y, y_nu. Without rho_hat the least radius that
 * meets the attainment condition on the grid is used; a supplied rho_hat
 * that fails it gives INAPPLICABLE with the offending x in the note.
 */
BoundReport bound_lagrangian(const ReducedTable& t, const ReducedTable& t_nu, std::span<const double> y,
                             std::span<const double> y_nu, double rho,
                             std::optional<double> rho_hat = std::nullopt);

enum class DualMode { A, B };

BoundReport bound_dual(const ReducedTable& t, const ReducedTable& t_nu, const DualFunction& psi,
                       const DualFunction& psi_nu, double rho, DualMode mode);

}  // namespace epikit
