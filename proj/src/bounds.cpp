// SPDX-License-Identifier: MIT
#include "epikit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "epikit/distance.hpp"
#include "epikit/funcgrid.hpp"

namespace epikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt_point(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + fmt(p[i]);
  return s + ")";
}

// Least value of g over nodes with ||x||_2 <= rho.
ExtReal ball_min(const GriddedFunction& g, double rho) {
  std::vector<double> x(g.dim());
  ExtReal best = ExtReal::pos_inf();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.grid().point(i, x);
    if (norm2(x) <= rho) best = xr_min(best, g[i]);
  }
  return best;
}

// Least value of g over all nodes.
ExtReal grid_min(const GriddedFunction& g) {
  ExtReal best = ExtReal::pos_inf();
  for (ExtReal v : g.values()) best = xr_min(best, v);
  return best;
}

// Least value of a joint table over nodes with max{||u||_2, ||x||_2} <= rho.
ExtReal joint_ball_min(const GriddedFunction& f, std::size_t m, double rho) {
  std::vector<double> z(f.dim());
  ExtReal best = ExtReal::pos_inf();
  const std::span<const double> zs(z);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.grid().point(i, z);
    if (std::max(norm2(zs.first(m)), norm2(zs.subspan(m))) <= rho) best = xr_min(best, f[i]);
  }
  return best;
}

// sup over x nodes in B(rho) of ||(g_1(x), .., g_k(x))||_2.
double vector_sup_norm(std::span<const GriddedFunction> g, double rho) {
  if (g.empty()) return 0.0;
  const Grid& grid = g[0].grid();
  std::vector<double> x(grid.dim());
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    if (norm2(x) > rho) continue;
    double s = 0.0;
    for (const auto& gi : g) {
      if (!gi[i].is_finite()) return kInf;
      s += gi[i].value() * gi[i].value();
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

// sup over x nodes in B(rho) of ||G(x) - G_nu(x)||_2.
double vector_sup_diff(std::span<const GriddedFunction> g, std::span<const GriddedFunction> h, double rho) {
  if (g.empty()) return 0.0;
  const Grid& grid = g[0].grid();
  std::vector<double> x(grid.dim());
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    if (norm2(x) > rho) continue;
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const ExtReal d = xr_sub(g[k][i], h[k][i]);
      if (!d.is_finite()) return kInf;
      s += d.value() * d.value();
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

void check_same_grid(std::span<const GriddedFunction> g, const char* what) {
  for (const auto& gi : g)
    if (!gi.grid().same_as(g[0].grid())) throw std::invalid_argument(std::string(what) + ": component grids differ");
}

double max_lipschitz(std::span<const GriddedFunction> g, double rho) {
  double k = 0.0;
  for (const auto& gi : g) k = std::max(k, lipschitz_modulus(gi, rho));
  return k;
}

double max_step_of(std::span<const GriddedFunction> g) {
  double s = 0.0;
  for (const auto& gi : g) s = std::max(s, gi.grid().max_step());
  return s;
}

// u block(s) of a joint norm, then x and alpha.
NormSpec joint_norm(std::vector<NormBlock> u_blocks, std::size_t n) {
  u_blocks.push_back({n, InnerNorm::L2});
  u_blocks.push_back({1, InnerNorm::Abs});
  return NormSpec(std::move(u_blocks));
}

double diff_norm2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiplier vectors differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

ExtReal scale(double c, ExtReal d) { return xr_scale(c, d); }

// Lipschitz constant of the inner norm with respect to ||.||_2 on R^m.
double norm_factor(InnerNorm n, std::size_t m) {
  return n == InnerNorm::L1 ? std::sqrt(static_cast<double>(m)) : 1.0;
}

// Lipschitz modulus of a on the Euclidean ball of radius r, if finite.
std::optional<double> aug_kappa(const AugmentationSpec& a, std::size_t m, double r) {
  switch (a.kind) {
    case AugmentationKind::IndicatorZero:
      return std::nullopt;
    case AugmentationKind::Prox:
      return 2.0 * a.theta * r;
    case AugmentationKind::Power: {
      if (a.alpha < 1.0) return std::nullopt;
      const double c = norm_factor(a.norm, m);
      return a.theta * a.alpha * std::pow(c * r, a.alpha - 1.0) * c;
    }
  }
  return std::nullopt;
}

// sup over ||u||_2 <= r of |a_nu(u) - a(u)|, sampled on u nodes when the
// two functions are not of the same shape.
double aug_sup_diff(const AugmentationSpec& a, const AugmentationSpec& b, const Grid& u_grid, double r,
                    bool& sampled) {
  sampled = false;
  const std::size_t m = u_grid.dim();
  if (a.kind == AugmentationKind::Prox && b.kind == AugmentationKind::Prox)
    return std::fabs(b.theta - a.theta) * r * r;
  if (a.kind == AugmentationKind::Power && b.kind == AugmentationKind::Power && a.alpha == b.alpha &&
      a.norm == b.norm)
    return std::fabs(b.theta - a.theta) * std::pow(norm_factor(a.norm, m) * r, a.alpha);
  sampled = true;
  std::vector<double> u(m);
  double best = 0.0;
  for (std::size_t k = 0; k < u_grid.size(); ++k) {
    u_grid.point(k, u);
    if (norm2(u) > r) continue;
    const ExtReal d = xr_sub(b(u), a(u));
    if (!d.is_finite()) return kInf;
    best = std::max(best, std::fabs(d.value()));
  }
  return best;
}

}  // namespace

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Pass:
      return "PASS";
    case BoundStatus::Fail:
      return "FAIL";
    case BoundStatus::Inapplicable:
      return "INAPPLICABLE";
  }
  return "?";
}

bool RadiusBudget::admissible() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.second; });
}

void finalize(BoundReport& r) {
  const ExtReal s = xr_sub(xr_add(r.rhs, ExtReal(r.tol)), r.lhs);
  r.slack = s.value();
  if (!r.radii.admissible())
    r.status = BoundStatus::Inapplicable;
  else
    r.status = r.slack >= 0.0 ? BoundStatus::Pass : BoundStatus::Fail;
}

double grid_tol(std::initializer_list<const Grid*> grids) {
  double s = 0.0;
  for (const Grid* g : grids) s = std::max(s, g->max_step());
  return 2.0 * s;
}

std::vector<std::string> all_bound_ids() {
  using namespace bound_id;
  return {kMinvalInf,   kMinvalArgmin, kMinvalLevel,  kTilted,       kComposite,  kInequalities, kConstraintComposite,
          kAmbiguity,   kSplitting,    kAugmentation, kLagrangian,   kDualA,      kDualB};
}

// ------------------------------------------------------------------ minval

std::vector<BoundReport> bound_minval(const GriddedFunction& g, const GriddedFunction& h, double rho,
                                      const NormSpec& norm, const MinvalOptions& o) {
  const NormSpec xn = norm.without_last();
  const double tol = grid_tol({&g.grid(), &h.grid()});
  const ExtReal d = epi_distance(g, h, rho, norm);
  const double eps = o.eps;

  const ArgminResult ag = infimum_argmin(g, 0.0);
  const ArgminResult ah = infimum_argmin(h, 0.0);
  const bool g_hits = !clip_to_ball(ag.points, rho, xn).empty();
  const bool h_hits = !clip_to_ball(ah.points, rho, xn).empty();
  auto in_range = [&](ExtReal v) { return v.is_finite() && v.value() >= -rho && v.value() <= rho - eps; };

  std::vector<BoundReport> out;

  // (a)
  const double delta_a = o.delta_a.value_or(d.is_finite() ? eps + 2.0 * d.value() + 1e-9 : kInf);
  RadiusBudget ra;
  ra.rho = rho;
  ra.require("eps in [0, 2 rho]", eps >= 0.0 && eps <= 2.0 * rho);
  ra.require("delta > eps + 2 d", d.is_finite() && std::isfinite(delta_a) && delta_a > eps + 2.0 * d.value());
  ra.require("argmin g meets B(rho)", g_hits);
  ra.require("argmin h meets B(rho)", h_hits);
  ra.require("inf g in [-rho, rho - eps]", in_range(ag.inf));
  ra.require("inf h in [-rho, rho - eps]", in_range(ah.inf));

  {
    BoundReport r;
    r.theorem = bound_id::kMinvalInf;
    r.lhs = (ag.inf.is_finite() && ah.inf.is_finite()) ? ExtReal(std::fabs(ag.inf.value() - ah.inf.value()))
            : ag.inf == ah.inf                          ? ExtReal(0.0)
                                                        : ExtReal::pos_inf();
    r.rhs = d;
    r.tol = tol;
    r.radii = ra;
    r.add("inf g", ag.inf);
    r.add("inf h", ah.inf);
    r.add("d", d);
    finalize(r);
    out.push_back(std::move(r));
  }
  {
    BoundReport r;
    r.theorem = bound_id::kMinvalArgmin;
    if (std::isfinite(delta_a)) {
      const PointCloud h_eps = clip_to_ball(infimum_argmin(h, eps).points, rho, xn);
      r.lhs = excess(h_eps, infimum_argmin(g, delta_a).points, xn);
    } else {
      r.lhs = ExtReal::pos_inf();
    }
    r.rhs = d;
    r.tol = tol;
    r.radii = ra;
    r.add("eps", eps);
    r.add("delta", delta_a);
    r.add("d", d);
    finalize(r);
    out.push_back(std::move(r));
  }

  // (b)
  {
    const double delta_b = o.delta_b.value_or(d.is_finite() ? eps + d.value() + 1e-9 : kInf);
    BoundReport r;
    r.theorem = bound_id::kMinvalLevel;
    r.radii.rho = rho;
    r.radii.require("eps in [-rho, rho]", eps >= -rho && eps <= rho);
    r.radii.require("delta > eps + d", d.is_finite() && std::isfinite(delta_b) && delta_b > eps + d.value());
    if (std::isfinite(delta_b)) {
      const PointCloud lh = clip_to_ball(level_set(h, eps), rho, xn);
      r.lhs = excess(lh, level_set(g, delta_b), xn);
    } else {
      r.lhs = ExtReal::pos_inf();
    }
    r.rhs = d;
    r.tol = tol;
    r.add("eps", eps);
    r.add("delta", delta_b);
    r.add("d", d);
    finalize(r);
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------------ tilted

BoundReport bound_tilted(const GriddedFunction& f, const GriddedFunction& f_nu, std::size_t m,
                         std::span<const double> y, std::span<const double> y_nu, double rho) {
  if (y.size() != m || y_nu.size() != m) throw std::invalid_argument("bound_tilted: y must have m entries");
  const std::size_t n = f.dim() - m;
  const NormSpec N = NormSpec::epigraph(m, InnerNorm::L2, n);
  const double ymax = std::max(norm2(y), norm2(y_nu));

  BoundReport r;
  r.theorem = bound_id::kTilted;
  r.tol = grid_tol({&f.grid(), &f_nu.grid()});
  r.radii.rho = rho;
  r.radii.rho_bar = rho * (1.0 + ymax);
  r.radii.require("rho_bar >= rho (1 + max |y|)", true);

  const ExtReal d = epi_distance(f, f_nu, *r.radii.rho_bar, N);
  r.lhs = epi_distance(tilt_table(f, m, y), tilt_table(f_nu, m, y_nu), rho, N);
  r.rhs = xr_add(scale(1.0 + ymax, d), ExtReal(rho * diff_norm2(y, y_nu)));
  r.add("d_rho_bar(epi f, epi f_nu)", d);
  r.add("|y - y_nu|", diff_norm2(y, y_nu));
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ composite

BoundReport bound_composite(const CompositeTables& a, const CompositeTables& b, const GriddedFunction& f,
                            const GriddedFunction& f_nu, double rho) {
  if (a.g.empty() || a.g.size() != b.g.size()) throw std::invalid_argument("bound_composite: component mismatch");
  const std::size_t m = a.g.size() - 1;
  const std::size_t n = a.X.dim();
  check_same_grid(a.g, "bound_composite");
  check_same_grid(b.g, "bound_composite");
  const PointCloud xa = domain_cloud(a.X), xb = domain_cloud(b.X);
  if (xa.empty() || xb.empty()) throw std::invalid_argument("bound_composite: empty X cloud");

  BoundReport r;
  r.theorem = bound_id::kComposite;
  r.tol = std::max({grid_tol({&f.grid(), &f_nu.grid(), &a.X.grid(), &b.X.grid(), &a.h.grid(), &b.h.grid()}),
                    2.0 * max_step_of(a.g), 2.0 * max_step_of(b.g)});
  r.radii.rho = rho;

  const ExtReal dX = truncated_hausdorff(xa, xb, rho, NormSpec::euclidean(n));
  const double rho_prime = rho + dX.value() + a.X.grid().max_step();
  r.radii.rho_prime = rho_prime;
  r.radii.require("rho' > rho + d(X, X_nu)", dX.is_finite());

  std::vector<GriddedFunction> all(a.g);
  all.insert(all.end(), b.g.begin(), b.g.end());
  double kappa = kInf;
  if (dX.is_finite()) {
    try {
      kappa = max_lipschitz(all, rho_prime);
    } catch (const std::domain_error&) {
      r.note = "g not finite on B(rho')";
    }
  }
  r.radii.require("g_i Lipschitz on B(rho')", std::isfinite(kappa));

  std::vector<GriddedFunction> G(a.g.begin() + 1, a.g.end()), Gn(b.g.begin() + 1, b.g.end());
  double gsup = 0.0;
  for (const auto* gi : {&a.g[0], &b.g[0]}) {
    const double s = vector_sup_norm(std::span<const GriddedFunction>(gi, 1), rho);
    gsup = std::max(gsup, s);
  }
  gsup = std::max({gsup, vector_sup_norm(G, rho), vector_sup_norm(Gn, rho)});
  r.radii.rho_bar = rho + gsup;
  r.radii.require("rho_bar finite", std::isfinite(gsup));

  double gdiff = 0.0;
  for (std::size_t i = 0; i <= m; ++i) gdiff = std::max(gdiff, sup_abs_difference(a.g[i], b.g[i], rho));

  const double sm = std::sqrt(static_cast<double>(m));
  if (r.radii.admissible()) {
    const ExtReal dh = epi_distance(a.h, b.h, *r.radii.rho_bar, NormSpec::epigraph(m));
    r.rhs = xr_add(xr_add(scale(std::max(1.0, sm * kappa), dX), dh), ExtReal(sm * gdiff));
    r.add("d(X, X_nu)", dX);
    r.add("kappa(rho')", kappa);
    r.add("d_rho_bar(epi h, epi h_nu)", dh);
    r.add("sup |g_i - g_i_nu|", gdiff);
  } else {
    r.rhs = ExtReal::pos_inf();
  }
  r.lhs = epi_distance(f, f_nu, rho, NormSpec::epigraph(m, InnerNorm::L2, n));
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ constraint families

BoundReport bound_inequalities(std::span<const GriddedFunction> g, std::span<const GriddedFunction> g_nu,
                               const GriddedFunction& f, const GriddedFunction& f_nu, double rho) {
  if (g.empty() || g.size() != g_nu.size()) throw std::invalid_argument("bound_inequalities: component mismatch");
  const std::size_t mc = g.size() - 1;
  const std::size_t n = g[0].dim();

  BoundReport r;
  r.theorem = bound_id::kInequalities;
  r.tol = std::max({grid_tol({&f.grid(), &f_nu.grid()}), 2.0 * max_step_of(g), 2.0 * max_step_of(g_nu)});
  r.radii.rho = rho;
  r.radii.rho_bar = 2.0 * rho;

  ExtReal rhs(0.0);
  for (std::size_t i = 0; i <= mc; ++i) {
    const ExtReal d = epi_distance(g[i], g_nu[i], 2.0 * rho, NormSpec::epigraph(n));
    r.add("d_2rho(epi g" + std::to_string(i) + ")", d);
    rhs = xr_max(rhs, d);
  }
  std::vector<NormBlock> ub;
  for (std::size_t i = 0; i <= mc; ++i) ub.push_back({n, InnerNorm::L2});
  for (std::size_t i = 0; i < mc; ++i) ub.push_back({1, InnerNorm::Abs});
  r.lhs = epi_distance(f, f_nu, rho, joint_norm(std::move(ub), n));
  r.rhs = rhs;
  finalize(r);
  return r;
}

BoundReport bound_constraint_composite(const ConstraintCompositeTables& a, const ConstraintCompositeTables& b,
                                       const GriddedFunction& f, const GriddedFunction& f_nu, double rho) {
  if (a.G.empty() || a.G.size() != b.G.size())
    throw std::invalid_argument("bound_constraint_composite: component mismatch");
  const std::size_t m = a.G.size();
  const std::size_t n = a.g0.dim();

  BoundReport r;
  r.theorem = bound_id::kConstraintComposite;
  r.tol = std::max({grid_tol({&f.grid(), &f_nu.grid(), &a.g0.grid(), &b.g0.grid(), &a.h.grid(), &b.h.grid()}),
                    2.0 * max_step_of(a.G), 2.0 * max_step_of(b.G)});
  r.radii.rho = rho;

  const ExtReal d0 = epi_distance(a.g0, b.g0, rho, NormSpec::epigraph(n));
  r.radii.require("d(epi g0, epi g0_nu) finite", d0.is_finite());
  const double rho_prime = rho + (d0.is_finite() ? d0.value() : 0.0) + a.g0.grid().max_step();
  r.radii.rho_prime = rho_prime;

  std::vector<GriddedFunction> all(a.G);
  all.insert(all.end(), b.G.begin(), b.G.end());
  double kappa = kInf;
  try {
    kappa = max_lipschitz(all, rho_prime);
  } catch (const std::domain_error&) {
    r.note = "G not finite on B(rho')";
  }
  r.radii.require("G Lipschitz on B(rho')", std::isfinite(kappa));

  const double gsup = std::max(vector_sup_norm(a.G, rho), vector_sup_norm(b.G, rho));
  r.radii.rho_bar = rho + gsup;
  r.radii.require("rho_bar finite", std::isfinite(gsup));

  if (r.radii.admissible()) {
    const double sm = std::sqrt(static_cast<double>(m));
    const ExtReal dh = epi_distance(a.h, b.h, *r.radii.rho_bar, NormSpec::epigraph(m));
    const double gdiff = vector_sup_diff(a.G, b.G, rho_prime);
    r.rhs = xr_add(xr_add(scale(std::max(1.0, sm * kappa), d0), dh), ExtReal(gdiff));
    r.add("d_rho(epi g0, epi g0_nu)", d0);
    r.add("kappa(rho')", kappa);
    r.add("d_rho_bar(epi h, epi h_nu)", dh);
    r.add("sup |G - G_nu|", gdiff);
  } else {
    r.rhs = ExtReal::pos_inf();
  }
  r.lhs = epi_distance(f, f_nu, rho,
                       joint_norm({{m, InnerNorm::L2}, {1, InnerNorm::Abs}}, n));
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ ambiguity

BoundReport bound_ambiguity(const AmbiguityData& d, const GriddedFunction& f, const GriddedFunction& f_nu,
                            double rho, std::optional<double> eta) {
  const std::size_t m = d.p.size();
  if (d.g.size() != m || d.p_nu.size() != m) throw std::invalid_argument("bound_ambiguity: size mismatch");
  const std::size_t n = f.dim() - m;

  BoundReport r;
  r.theorem = bound_id::kAmbiguity;
  r.tol = std::max(grid_tol({&f.grid(), &f_nu.grid()}), 2.0 * max_step_of(d.g));
  r.radii.rho = rho;

  double need = 0.0;
  for (const auto& gi : d.g) need = std::max(need, -grid_min(gi).value());
  const double e = eta.value_or(need);
  r.radii.require("inf g_i >= -eta", e >= need);
  if (!r.radii.admissible()) r.note = "eta below -inf g_i = " + fmt(need);

  double l1 = 0.0, l2sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dp = d.p[i] - d.p_nu[i];
    l1 += std::fabs(dp);
    l2sq += dp * dp;
  }
  r.rhs = std::max(1.0, e + d.theta_nu) * l1 + 0.5 * d.theta_nu * l2sq + 0.5 * std::fabs(d.theta - d.theta_nu);
  r.lhs = epi_distance(f, f_nu, rho, joint_norm({{m, InnerNorm::L1}}, n));
  r.add("eta", e);
  r.add("|p - p_nu|_1", l1);
  r.add("|p - p_nu|_2^2", l2sq);
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ splitting

BoundReport bound_splitting(const SplittingData& d, const GriddedFunction& f, const GriddedFunction& f_nu,
                            double rho, std::optional<double> eta) {
  const std::size_t m = d.p.size();
  if (d.g.size() != m || d.g_nu.size() != m || d.p_nu.size() != m)
    throw std::invalid_argument("bound_splitting: size mismatch");
  const std::size_t n = d.g[0].dim();

  BoundReport r;
  r.theorem = bound_id::kSplitting;
  r.tol = std::max({grid_tol({&f.grid(), &f_nu.grid()}), 2.0 * max_step_of(d.g), 2.0 * max_step_of(d.g_nu)});
  r.radii.rho = rho;

  double need = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    need = std::max({need, -grid_min(d.g[i]).value(), -grid_min(d.g_nu[i]).value()});
  const double e = eta.value_or(need);
  r.radii.require("inf g_i, g_i_nu >= -eta", e >= need);

  double beta = kInf;
  ExtReal zero_sup = ExtReal::neg_inf();
  for (std::size_t i = 0; i < m; ++i) {
    if (d.p[i] > 0.0)
      beta = std::min(beta, d.p[i]);
    else
      zero_sup = xr_max(zero_sup, -ball_min(d.g[i].negated(), 2.0 * rho));
    if (d.p_nu[i] > 0.0)
      beta = std::min(beta, d.p_nu[i]);
    else
      zero_sup = xr_max(zero_sup, -ball_min(d.g_nu[i].negated(), 2.0 * rho));
  }
  r.radii.require("some weight positive", std::isfinite(beta));
  r.radii.require("zero-weight g_i bounded on B(2 rho)", !zero_sup.is_pos_inf());
  if (!r.radii.admissible()) {
    r.rhs = ExtReal::pos_inf();
    r.lhs = ExtReal(0.0);
    finalize(r);
    return r;
  }
  double rho_bar = std::max(2.0 * rho, (rho + e) / beta);
  if (zero_sup.is_finite()) rho_bar = std::max(rho_bar, zero_sup.value());
  r.radii.rho_bar = rho_bar;

  ExtReal dmax(0.0);
  double lam_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const ExtReal di = epi_distance(d.g[i], d.g_nu[i], rho_bar, NormSpec::epigraph(n));
    dmax = xr_max(dmax, di);
    const double t = rho_bar + di.value();
    lam_sq += t * t;
    r.add("d_rho_bar(epi g" + std::to_string(i + 1) + ")", di);
  }
  const double lambda = std::sqrt(lam_sq);
  const double dp = diff_norm2(d.p, d.p_nu);
  r.rhs = xr_add(scale(dp, ExtReal(lambda)), dmax);
  r.add("beta", beta);
  r.add("eta", e);
  r.add("lambda", lambda);
  r.add("|p - p_nu|_2", dp);

  std::vector<NormBlock> ub(m, NormBlock{n, InnerNorm::L2});
  r.lhs = epi_distance(f, f_nu, rho, joint_norm(std::move(ub), n));
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ augmentation

BoundReport bound_augmentation(const GriddedFunction& f, const GriddedFunction& f_nu, std::size_t m,
                               const AugmentationSpec& a, const AugmentationSpec& a_nu, double rho,
                               std::optional<double> eta) {
  const std::size_t n = f.dim() - m;
  const NormSpec N = NormSpec::epigraph(m, InnerNorm::L2, n);

  BoundReport r;
  r.theorem = bound_id::kAugmentation;
  r.tol = grid_tol({&f.grid(), &f_nu.grid()});
  r.radii.rho = rho;
  r.radii.require("a, a_nu real-valued", a.real_valued() && a_nu.real_valued());

  const ExtReal lo = xr_min(joint_ball_min(f, m, rho), joint_ball_min(f_nu, m, rho));
  const double need = lo.is_finite() ? std::max(0.0, -lo.value()) : (lo.is_neg_inf() ? kInf : 0.0);
  const double e = eta.value_or(need);
  r.radii.require("f, f_nu >= -eta on B(rho)", std::isfinite(e) && e >= need);

  const double rho_bar = std::max(rho, std::isfinite(e) ? e : rho);
  r.radii.rho_bar = rho_bar;
  const ExtReal d = epi_distance(f, f_nu, rho_bar, N);
  const double rho_prime = rho + (d.is_finite() ? d.value() : 0.0) + f.grid().max_step();
  r.radii.rho_prime = rho_prime;

  const auto ka = aug_kappa(a, m, rho_prime), kb = aug_kappa(a_nu, m, rho_prime);
  r.radii.require("a, a_nu Lipschitz on B(rho')", ka.has_value() && kb.has_value());
  r.lhs = epi_distance(augment_table(f, m, a), augment_table(f_nu, m, a_nu), rho, N);
  if (r.radii.admissible()) {
    const double kappa = std::max(*ka, *kb);
    bool sampled = false;
    const double sup = aug_sup_diff(a, a_nu, f.grid().slice(0, m), rho_prime, sampled);
    if (sampled) r.note = "sup |a_nu - a| sampled on u nodes";
    r.rhs = xr_add(scale(1.0 + kappa, d), ExtReal(sup));
    r.add("d_rho_bar(epi f, epi f_nu)", d);
    r.add("kappa(rho')", kappa);
    r.add("sup |a_nu - a|", sup);
    r.add("eta", e);
  } else {
    r.rhs = ExtReal::pos_inf();
  }
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ Lagrangian

namespace {

struct AttainResult {
  double need = 0.0;  // least admissible rho_hat
  std::vector<double> witness;
};

// For each x node with ||x||_2 <= rho and l(x, y) <= rho, the least ||u||_2
// over u nodes with f_y(u, x) <= max{-rho, l(x, y)}.
AttainResult attainment_radius(const ReducedTable& t, const GriddedFunction& l, std::span<const double> y,
                               double rho) {
  const GriddedFunction& J = *t.joint;
  const std::size_t m = t.u_grid.dim();
  const std::size_t nu = t.u_grid.size(), nx = t.x_grid.size();
  std::vector<double> u(m), un(nu), tiltv(nu), x(t.x_grid.dim());
  for (std::size_t k = 0; k < nu; ++k) {
    t.u_grid.point(k, u);
    un[k] = norm2(u);
    tiltv[k] = -dot(y, u);
  }
  AttainResult res;
  res.need = rho;
  for (std::size_t j = 0; j < nx; ++j) {
    t.x_grid.point(j, x);
    if (norm2(x) > rho || !(l[j] <= ExtReal(rho))) continue;
    const ExtReal thr = xr_max(ExtReal(-rho), l[j]);
    const double slackv = thr.is_finite() ? 1e-12 * (1.0 + std::fabs(thr.value())) : 0.0;
    double best = kInf;
    for (std::size_t k = 0; k < nu; ++k) {
      if (un[k] >= best) continue;
      const ExtReal v = xr_add(J[k * nx + j], ExtReal(tiltv[k]));
      if (v.is_neg_inf() || (v.is_finite() && thr.is_finite() && v.value() <= thr.value() + slackv)) best = un[k];
    }
    if (best > res.need) {
      res.need = best;
      res.witness = x;
    }
  }
  return res;
}

}  // namespace

BoundReport bound_lagrangian(const ReducedTable& t, const ReducedTable& t_nu, std::span<const double> y,
                             std::span<const double> y_nu, double rho, std::optional<double> rho_hat) {
  const std::size_t m = t.u_grid.dim();
  const std::size_t n = t.x_grid.dim();
  if (y.size() != m || y_nu.size() != m) throw std::invalid_argument("bound_lagrangian: y must have m entries");

  BoundReport r;
  r.theorem = bound_id::kLagrangian;
  r.tol = grid_tol({&t.joint->grid(), &t_nu.joint->grid()});
  r.radii.rho = rho;

  const LagrangianTable l = lagrangian_table(t, y);
  const LagrangianTable l_nu = lagrangian_table(t_nu, y_nu);
  const AttainResult at = attainment_radius(t, l.raw, y, rho);
  const AttainResult at_nu = attainment_radius(t_nu, l_nu.raw, y_nu, rho);
  const double need = std::max(at.need, at_nu.need);
  const double rh = rho_hat.value_or(need);
  r.radii.rho_hat = rh;
  r.radii.require("rho_hat >= rho", rh >= rho);
  const bool attained = std::isfinite(need) && rh >= need - 1e-12;
  r.radii.require("attainment within B(rho_hat)", attained);
  if (!attained) {
    const auto& w = at.need >= at_nu.need ? at.witness : at_nu.witness;
    r.note = "attainment fails at x = " + fmt_point(w) + " (needs " + fmt(need) + ")";
  }

  const double ymax = std::max(norm2(y), norm2(y_nu));
  const double rho_prime = (1.0 + ymax) * rh;
  r.radii.rho_prime = rho_prime;
  r.lhs = epi_distance(l.raw, l_nu.raw, rho, NormSpec::epigraph(n));
  if (r.radii.admissible()) {
    const ExtReal d = epi_distance(*t.joint, *t_nu.joint, rho_prime, NormSpec::epigraph(m, InnerNorm::L2, n));
    r.rhs = xr_add(scale(1.0 + ymax, d), ExtReal(rh * diff_norm2(y, y_nu)));
    r.add("d_rho'(epi f, epi f_nu)", d);
    r.add("rho_hat needed", need);
  } else {
    r.rhs = ExtReal::pos_inf();
  }
  finalize(r);
  return r;
}

// ------------------------------------------------------------------ dual

BoundReport bound_dual(const ReducedTable& t, const ReducedTable& t_nu, const DualFunction& psi,
                       const DualFunction& psi_nu, double rho, DualMode mode) {
  const Grid& yg = psi.y_grid;
  if (!yg.same_as(psi_nu.y_grid)) throw std::invalid_argument("bound_dual: y grids differ");
  const std::size_t m = t.u_grid.dim();
  const std::size_t n = t.x_grid.dim();
  const NormSpec N = NormSpec::epigraph(m, InnerNorm::L2, n);
  const std::vector<char> dom = psi.domain(), dom_nu = psi_nu.domain();
  std::vector<double> y(m);

  BoundReport r;
  r.theorem = mode == DualMode::A ? bound_id::kDualA : bound_id::kDualB;
  r.tol = grid_tol({&t.joint->grid(), &t_nu.joint->grid(), &yg});
  r.radii.rho = rho;

  // max over y nodes with ||y|| <= radius in the given domain(s) of
  // max{argmin norm, |psi|}; also counts the nodes.
  auto scan = [&](double radius, bool both, std::size_t& count) {
    double best = 0.0;
    count = 0;
    for (std::size_t k = 0; k < yg.size(); ++k) {
      yg.point(k, y);
      if (norm2(y) > radius) continue;
      const bool in = both ? (dom[k] && dom_nu[k]) : (dom[k] || dom_nu[k]);
      if (!in) continue;
      ++count;
      if (dom[k]) best = std::max({best, psi.argmin_norm[k], std::fabs(psi.raw[k].value())});
      if (dom_nu[k]) best = std::max({best, psi_nu.argmin_norm[k], std::fabs(psi_nu.raw[k].value())});
    }
    return best;
  };

  if (mode == DualMode::B) {
    std::size_t count = 0;
    const double rp = scan(rho, true, count);
    r.radii.require("Y(rho) nonempty", count > 0);
    r.radii.rho_prime = rp;
    r.radii.rho_bar = rp * (1.0 + rho);
    double lhs = 0.0;
    for (std::size_t k = 0; k < yg.size(); ++k) {
      yg.point(k, y);
      if (norm2(y) > rho || !dom[k] || !dom_nu[k]) continue;
      lhs = std::max(lhs, std::fabs(psi.raw[k].value() - psi_nu.raw[k].value()));
    }
    r.lhs = lhs;
    if (count > 0) {
      const ExtReal d = epi_distance(*t.joint, *t_nu.joint, *r.radii.rho_bar, N);
      r.rhs = scale(1.0 + rho, d);
      r.add("d_rho_bar(epi f, epi f_nu)", d);
    } else {
      r.rhs = ExtReal::pos_inf();
    }
    r.add("sampled y", static_cast<double>(count));
    finalize(r);
    return r;
  }

  PointCloud da(m), db(m);
  for (std::size_t k = 0; k < yg.size(); ++k) {
    yg.point(k, y);
    if (dom[k]) da.add(y);
    if (dom_nu[k]) db.add(y);
  }
  r.radii.require("dom(-psi) nonempty", !da.empty() && !db.empty());
  if (!r.radii.admissible()) {
    r.lhs = 0.0;
    r.rhs = ExtReal::pos_inf();
    finalize(r);
    return r;
  }
  const ExtReal ddom = truncated_hausdorff(da, db, rho, NormSpec::euclidean(m));
  r.radii.require("d(dom, dom_nu) finite", ddom.is_finite());
  const double rho_hat = rho + (ddom.is_finite() ? ddom.value() : 0.0) + yg.max_step();
  r.radii.rho_hat = rho_hat;
  std::size_t count = 0;
  const double rp = std::max(1.0, scan(rho_hat, false, count));
  r.radii.rho_prime = rp;
  r.radii.rho_bar = rp * (1.0 + rho_hat);
  r.lhs = epi_distance(psi_nu.values(), psi.values(), rho, NormSpec::epigraph(m), Orientation::Hypo);
  if (r.radii.admissible()) {
    const ExtReal d = epi_distance(*t.joint, *t_nu.joint, *r.radii.rho_bar, N);
    r.rhs = xr_add(scale(1.0 + rho_hat, d), scale(rp, ddom));
    r.add("d_rho_bar(epi f, epi f_nu)", d);
    r.add("d_rho(dom, dom_nu)", ddom);
  } else {
    r.rhs = ExtReal::pos_inf();
  }
  r.add("sampled y", static_cast<double>(count));
  finalize(r);
  return r;
}

}  // namespace epikit
