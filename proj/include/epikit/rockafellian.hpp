// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "epikit/ext_real.hpp"
#include "epikit/grid.hpp"
#include "epikit/gridded_function.hpp"
#include "epikit/norm.hpp"

namespace epikit {

/// Finite multiplier vector y in R^m.
class MultiplierVector {
 public:
  MultiplierVector() = default;
  explicit MultiplierVector(std::vector<double> y);
  std::size_t size() const { return y_.size(); }
  std::span<const double> values() const { return y_; }
  double operator[](std::size_t i) const { return y_[i]; }

 private:
  std::vector<double> y_;
};

/// Axis-aligned box; an empty box means the whole space.
struct BoxSet {
  std::vector<double> lo, hi;
  bool contains(std::span<const double> x) const;
  bool is_whole_space() const { return lo.empty(); }
};

enum class Family { Composite, Inequality, ConstraintComposite, Ambiguity, Splitting, Augmented, Custom };

// phi = iota_X + g0 + h(G); f(u, x) = iota_X(x) + g0(x) + h(G(x) + u).
struct CompositeParams {
  BoxSet X;
  Field g0;
  std::vector<Field> G;  // real-valued components
  Field h;               // on R^m
};

// f(u, x) = g0(x + v0) + sum_i iota{g_i(x + v_i) + w_i <= 0}, u = (v0..vm, w1..wm).
struct InequalityParams {
  Field g0;
  std::vector<Field> g;
};

// f(u, x) = g0(x) + iota{h(G(x) + v) + w <= 0}, u = (v, w).
struct ConstraintCompositeParams {
  Field g0;
  std::vector<Field> G;
  Field h;
};

// f(u, x) = g0(x) + sum_i (p_i + u_i) g_i(x) + theta/2 ||u||^2 on {p + u in simplex}.
struct AmbiguityParams {
  Field g0;
  std::vector<Field> g;
  std::vector<double> p;
  double theta = 0.0;
};

// f(u, x) = sum_i p_i g_i(x + u_i), u = (u_1..u_m) with u_i in R^n.
struct SplittingParams {
  std::vector<Field> g;
  std::vector<double> p;
};

enum class AugmentationKind { IndicatorZero, Prox, Power };

/// Augmenting function a(u): iota{0}, theta ||u||_2^2, or theta ||u||^alpha.
struct AugmentationSpec {
  AugmentationKind kind = AugmentationKind::Prox;
  double theta = 1.0;
  double alpha = 1.0;
  InnerNorm norm = InnerNorm::L2;

  ExtReal operator()(std::span<const double> u) const;
  bool real_valued() const { return kind != AugmentationKind::IndicatorZero; }
};

class RockafellianModel;

struct AugmentedParams {
  std::shared_ptr<const RockafellianModel> base;
  AugmentationSpec aug;
};

using FamilyParams = std::variant<std::monostate, CompositeParams, InequalityParams,
                                  ConstraintCompositeParams, AmbiguityParams, SplittingParams,
                                  AugmentedParams>;

/**
 * Rockafellian f : R^m x R^n -> [-inf, inf] with f(0, .) = phi.
 *
 * Immutable; copies share the evaluator and the family record.
 */
class RockafellianModel {
 public:
  using Evaluator = std::function<ExtReal(std::span<const double>, std::span<const double>)>;

  RockafellianModel(std::size_t m, std::size_t n, Family family, Evaluator eval,
                    FamilyParams params = {});

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  Family family() const { return family_; }
  const FamilyParams& params() const { return *params_; }
  template <class T>
  const T* params_as() const {
    return std::get_if<T>(params_.get());
  }

  ExtReal operator()(std::span<const double> u, std::span<const double> x) const;
  // phi(x) = f(0, x).
  ExtReal phi(std::span<const double> x) const;

 private:
  std::size_t m_, n_;
  Family family_;
  Evaluator eval_;
  std::shared_ptr<const FamilyParams> params_;
};

RockafellianModel build_composite(CompositeParams p, std::size_t n);
RockafellianModel build_constraint_family(InequalityParams p, std::size_t n);
RockafellianModel build_constraint_family(ConstraintCompositeParams p, std::size_t n);
RockafellianModel build_ambiguity(AmbiguityParams p, std::size_t n);
RockafellianModel build_splitting(SplittingParams p, std::size_t n);
RockafellianModel augment(const RockafellianModel& f, AugmentationSpec a);
// f_y(u, x) = f(u, x) - <y, u>.
RockafellianModel tilt(const RockafellianModel& f, const MultiplierVector& y);

// Table of f over the joint grid (u axes first, then x axes).
GriddedFunction tabulate(const RockafellianModel& f, const Grid& joint);

// Table of f(u, x) - <y, u> from a joint table with m leading u axes.
GriddedFunction tilt_table(const GriddedFunction& f, std::size_t m, std::span<const double> y);

// Table of f(u, x) + a(u) from a joint table.
GriddedFunction augment_table(const GriddedFunction& f, std::size_t m, const AugmentationSpec& a);

// ------------------------------------------------------------------ exactness

/// Values p(u) = inf_x f(u, x) over a u-probe, with inf phi = p(0).
struct MinValueTable {
  ProbeGrid u_probe;
  std::vector<ExtReal> values;
  ExtReal inf_phi;
  std::string description;
};

MinValueTable min_value_table(const RockafellianModel& f, const ProbeGrid& u_probe,
                              const ProbeGrid& x_probe);

struct ExactnessOptions {
  // Caller estimate of the error of grid infima (e.g. Lipschitz constant
  // times x spacing). tol = 1e-9 + 2 * grid_inf_error.
  double grid_inf_error = 0.0;
};

struct ExactnessReport {
  MultiplierVector supported_by;
  bool decidable = true;
  bool exact = false;
  bool strict = false;
  double min_slack = 0.0;          // over probed u (u = 0 contributes 0)
  double min_slack_nonzero = 0.0;  // over probed u != 0
  std::vector<double> worst_u;
  double tol = 0.0;
  std::string grid_description;
};

ExactnessReport check_exactness(const MinValueTable& table, const MultiplierVector& y,
                                const ExactnessOptions& options = {});
ExactnessReport check_exactness(const RockafellianModel& f, const MultiplierVector& y,
                                const ProbeGrid& u_probe, const ProbeGrid& x_probe,
                                const ExactnessOptions& options = {});

/**
 * Supporting multiplier for an ambiguity Rockafellian.
 *
 * y_i = (2 inf phi + 4 eta) / alpha + margin where p_i > 0 and y_i = margin
 * where p_i = 0, alpha = min positive p_i. Requires inf g_i >= -eta on the
 * x-probe for i = 0..m.
 */
MultiplierVector ambiguity_support_vector(const RockafellianModel& f, double eta,
                                          const ProbeGrid& x_probe, double margin = 1e-6);

// ------------------------------------------------------------------ tightness

enum class TightnessMode { Empirical, Certificate };
enum class CertificateKind { Proximal, Sharp };

/**
 * Sufficient-condition data. Proximal: f(u, x) >= gamma - beta ||u||^2 with
 * beta in (0, theta). Sharp: f(u, x) >= gamma - beta ||u|| with
 * theta >= beta + kappa * rho_y + 1. Both need a witness u with ||u|| <= tau
 * and f(u, x) <= tau.
 */
struct TightnessCertificate {
  CertificateKind kind = CertificateKind::Proximal;
  double gamma = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double rho_y = 0.0;
};

struct TightnessOptions {
  TightnessMode mode = TightnessMode::Empirical;
  TightnessCertificate certificate;
  std::optional<double> margin;  // default 2 * max u-probe spacing
};

struct TightnessEntry {
  ExtReal inf;
  double argmin_norm = 0.0;
  double lower_bound_violation = 0.0;
  bool witness_found = false;
  bool ok = true;
};

struct TightnessReport {
  TightnessMode mode;
  std::vector<TightnessEntry> entries;
  double box_radius = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::string reason;
};

TightnessReport tightness_diagnostic(std::span<const RockafellianModel> models,
                                     std::span<const MultiplierVector> ys,
                                     std::span<const std::vector<double>> xs,
                                     const ProbeGrid& u_probe, const TightnessOptions& options);

}  // namespace epikit
