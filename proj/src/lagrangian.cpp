// SPDX-License-Identifier: MIT
#include "epikit/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "epikit/norm.hpp"
#include "epikit/parallel.hpp"

namespace epikit {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

double tie_eps(ExtReal best) { return 1e-9 * std::max(1.0, best.is_finite() ? std::abs(best.value()) : 0.0); }

bool is_minimizer(ExtReal v, ExtReal best, double eps) {
  if (best.is_neg_inf()) return v.is_neg_inf();
  if (best.is_pos_inf()) return false;
  return v.value() <= best.value() + eps;
}

void check_in_box(const Grid& g, std::span<const double> y, const char* what) {
  if (y.size() != g.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double slack = 1e-12 * std::max(1.0, std::abs(y[k]));
    if (y[k] < g.axis(k).lo - slack || y[k] > g.axis(k).hi + slack)
      throw std::out_of_range(std::string(what) + ": point outside the dual grid");
  }
}

// Node index of 0 on a uniform axis, if any.
std::optional<std::size_t> zero_node(const Axis& a) {
  for (std::size_t i = 0; i < a.n; ++i)
    if (a.at(i) == 0.0) return i;
  return std::nullopt;
}

// Flattened u nodes, their norms and boundary flags.
struct UNodes {
  std::vector<double> pts;
  std::vector<double> norms;
  std::vector<char> boundary;
};

UNodes u_nodes(const Grid& ug) {
  UNodes out;
  const std::size_t m = ug.dim();
  out.pts.resize(ug.size() * m);
  out.norms.resize(ug.size());
  out.boundary.resize(ug.size());
  for (std::size_t k = 0; k < ug.size(); ++k) {
    std::span<double> u(out.pts.data() + k * m, m);
    ug.point(k, u);
    out.norms[k] = norm2(u);
    out.boundary[k] = ug.on_boundary(k) ? 1 : 0;
  }
  return out;
}

NumericMin dual_at(const ReducedTable& t, const UNodes& un, std::span<const double> y) {
  const std::size_t m = t.u_grid.dim();
  const std::size_t nu = t.p.size();
  std::vector<ExtReal> vals(nu);
  ExtReal best = ExtReal::pos_inf();
  for (std::size_t k = 0; k < nu; ++k) {
    vals[k] = t.p[k] + ExtReal(-dot(y, std::span<const double>(un.pts.data() + k * m, m)));
    best = xr_min(best, vals[k]);
  }
  NumericMin r;
  r.raw = best;
  r.value = best;
  if (best.is_pos_inf()) return r;
  const double eps = tie_eps(best);
  bool all_boundary = true;
  double least = kInfD;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < nu; ++k) {
    if (!is_minimizer(vals[k], best, eps)) continue;
    all_boundary = all_boundary && un.boundary[k];
    const double nrm = std::max(un.norms[k], t.xnorm[k]);
    if (nrm < least) {
      least = nrm;
      arg = k;
    }
  }
  r.boundary = all_boundary;
  if (all_boundary) r.value = ExtReal::neg_inf();
  r.argmin.assign(un.pts.begin() + static_cast<std::ptrdiff_t>(arg * m),
                  un.pts.begin() + static_cast<std::ptrdiff_t>((arg + 1) * m));
  r.argmin.push_back(least);  // trailing entry: least joint norm
  return r;
}

}  // namespace

NumericMin lagrangian_numeric_detail(const RockafellianModel& f, std::span<const double> x,
                                     std::span<const double> y, const ProbeGrid& u_probe) {
  if (u_probe.size() == 0) throw std::invalid_argument("lagrangian_numeric: empty probe set");
  if (u_probe.dim() != f.m() || y.size() != f.m() || x.size() != f.n())
    throw std::invalid_argument("lagrangian_numeric: dimension mismatch");
  std::vector<ExtReal> vals(u_probe.size());
  parallel_for(u_probe.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> u(f.m());
    for (std::size_t i = b; i < e; ++i) {
      u_probe.point(i, u);
      vals[i] = f(u, x) + ExtReal(-dot(y, u));
    }
  }, 4096);
  ExtReal best = ExtReal::pos_inf();
  for (const auto& v : vals) best = xr_min(best, v);
  NumericMin r;
  r.raw = best;
  r.value = best;
  if (best.is_pos_inf()) return r;
  const double eps = tie_eps(best);
  bool all_boundary = true;
  double least = kInfD;
  std::vector<double> u(f.m());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!is_minimizer(vals[i], best, eps)) continue;
    all_boundary = all_boundary && u_probe.on_boundary(i);
    u_probe.point(i, u);
    const double nrm = norm2(u);
    if (nrm < least) {
      least = nrm;
      r.argmin = u;
    }
  }
  r.boundary = all_boundary;
  if (all_boundary) r.value = ExtReal::neg_inf();
  return r;
}

ExtReal lagrangian_numeric(const RockafellianModel& f, std::span<const double> x, std::span<const double> y,
                           const ProbeGrid& u_probe) {
  return lagrangian_numeric_detail(f, x, y, u_probe).value;
}

ExtReal lagrangian_composite_closed(const CompositeParams& p, const ConjugateTable& h_conj,
                                    std::span<const double> x, std::span<const double> y) {
  if (y.size() != p.G.size()) throw std::invalid_argument("lagrangian_composite_closed: dimension mismatch");
  check_in_box(h_conj.raw.grid(), y, "lagrangian_composite_closed");
  if (!p.X.contains(x)) return ExtReal::pos_inf();
  ExtReal total = p.g0(x);
  double inner = 0.0;
  for (std::size_t i = 0; i < p.G.size(); ++i) {
    const ExtReal gi = p.G[i](x);
    if (!gi.is_finite()) throw std::domain_error("lagrangian_composite_closed: G must be real-valued");
    inner += gi.value() * y[i];
  }
  return total + ExtReal(inner) + (-h_conj.at(y));
}

ExtReal lagrangian_ambiguity_closed(const RockafellianModel& model, std::span<const double> x,
                                    std::span<const double> y) {
  const auto* p = model.params_as<AmbiguityParams>();
  if (!p) throw std::invalid_argument("lagrangian_ambiguity_closed: model is not an ambiguity model");
  if (y.size() != p->g.size() || x.size() != model.n())
    throw std::invalid_argument("lagrangian_ambiguity_closed: dimension mismatch");
  const double theta = p->theta;
  ExtReal total = p->g0(x);
  for (std::size_t i = 0; i < p->g.size(); ++i) {
    const double pi = p->p[i];
    const double yi = y[i];
    const ExtReal gi = p->g[i](x);
    ExtReal term;
    if (theta == 0.0) {
      term = xr_scale(pi, xr_min(gi, ExtReal(yi)));
    } else if (gi <= ExtReal(yi)) {
      term = xr_scale(pi, gi);
    } else if (gi >= ExtReal(yi + theta * pi)) {
      term = pi * yi + 0.5 * theta * pi * pi;
    } else {
      const double d = gi.value() - yi;
      term = pi * gi.value() - d * d / (2.0 * theta);
    }
    total = total + term;
  }
  return total;
}

ExtReal lagrangian_splitting_closed(const RockafellianModel& model, std::span<const ConjugateTable> g_conj,
                                    std::span<const double> x, std::span<const double> y) {
  const auto* p = model.params_as<SplittingParams>();
  if (!p) throw std::invalid_argument("lagrangian_splitting_closed: model is not a splitting model");
  const std::size_t n = model.n();
  const std::size_t mb = p->g.size();
  if (g_conj.size() != mb || y.size() != mb * n || x.size() != n)
    throw std::invalid_argument("lagrangian_splitting_closed: dimension mismatch");
  for (double pi : p->p)
    if (!(pi > 0.0)) throw std::invalid_argument("lagrangian_splitting_closed: requires every p_i > 0");
  ExtReal total = 0.0;
  std::vector<double> ysum(n, 0.0), z(n);
  for (std::size_t i = 0; i < mb; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = y[i * n + k] / p->p[i];
      ysum[k] += y[i * n + k];
    }
    check_in_box(g_conj[i].raw.grid(), z, "lagrangian_splitting_closed");
    total = total + xr_scale(-p->p[i], g_conj[i].at(z));
  }
  return total + ExtReal(dot(x, ysum));
}

ExtReal dual_affine_closed(const ConjugateTable& g0_conj, const std::vector<std::vector<double>>& A,
                           std::span<const double> b, std::span<const double> y) {
  const std::size_t m = A.size();
  if (m == 0 || b.size() != m || y.size() != m) throw std::invalid_argument("dual_affine_closed: dimension mismatch");
  const std::size_t n = A[0].size();
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("dual_affine_closed: ragged matrix");
    for (std::size_t k = 0; k < n; ++k) z[k] -= A[i][k] * y[i];
  }
  check_in_box(g0_conj.raw.grid(), z, "dual_affine_closed");
  return ExtReal(-dot(b, y)) + (-g0_conj.at(z));
}

ReducedTable reduce_joint(const GriddedFunction& joint, std::size_t m) {
  const Grid& g = joint.grid();
  if (m == 0 || m >= g.dim()) throw std::invalid_argument("reduce_joint: bad split");
  ReducedTable t;
  t.u_grid = g.slice(0, m);
  t.x_grid = g.slice(m, g.dim() - m);
  t.joint = std::make_shared<const GriddedFunction>(joint);
  const std::size_t nx = t.x_grid.size();
  std::vector<double> xn(nx);
  {
    std::vector<double> x(t.x_grid.dim());
    for (std::size_t j = 0; j < nx; ++j) {
      t.x_grid.point(j, x);
      xn[j] = norm2(x);
    }
  }
  const std::size_t nu = t.u_grid.size();
  t.p.assign(nu, ExtReal::pos_inf());
  t.xnorm.assign(nu, kInfD);
  parallel_for(nu, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t off = k * nx;
      ExtReal best = ExtReal::pos_inf();
      for (std::size_t j = 0; j < nx; ++j) best = xr_min(best, joint[off + j]);
      t.p[k] = best;
      if (best.is_pos_inf()) continue;
      const double eps = tie_eps(best);
      double least = kInfD;
      for (std::size_t j = 0; j < nx; ++j)
        if (is_minimizer(joint[off + j], best, eps)) least = std::min(least, xn[j]);
      t.xnorm[k] = least;
    }
  });
  return t;
}

ExtReal table_inf_phi(const ReducedTable& t) {
  std::vector<std::size_t> idx(t.u_grid.dim());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto z = zero_node(t.u_grid.axis(k));
    if (!z) throw std::invalid_argument("table_inf_phi: u = 0 is not a grid node");
    idx[k] = *z;
  }
  return t.p[t.u_grid.flatten(idx)];
}

GriddedFunction DualFunction::values() const {
  std::vector<ExtReal> v(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) v[k] = value(k);
  return GriddedFunction(y_grid, std::move(v));
}

std::vector<char> DualFunction::domain() const {
  std::vector<char> d(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) d[k] = value(k) > ExtReal(-kHuge) ? 1 : 0;
  return d;
}

DualFunction dual_numeric(const ReducedTable& t, const Grid& y_grid) {
  if (y_grid.dim() != t.u_grid.dim()) throw std::invalid_argument("dual_numeric: y grid dimension mismatch");
  const UNodes un = u_nodes(t.u_grid);
  DualFunction d;
  d.y_grid = y_grid;
  d.raw.resize(y_grid.size());
  d.boundary.resize(y_grid.size());
  d.argmin_norm.resize(y_grid.size());
  parallel_for(y_grid.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> y(y_grid.dim());
    for (std::size_t k = b; k < e; ++k) {
      y_grid.point(k, y);
      const NumericMin r = dual_at(t, un, y);
      d.raw[k] = r.raw;
      d.boundary[k] = r.boundary ? 1 : 0;
      d.argmin_norm[k] = r.argmin.empty() ? kInfD : r.argmin.back();
    }
  }, 1);
  return d;
}

DualFunction dual_numeric(const RockafellianModel& f, const Grid& y_grid, const Grid& joint) {
  return dual_numeric(reduce_joint(tabulate(f, joint), f.m()), y_grid);
}

NumericMin dual_value(const ReducedTable& t, std::span<const double> y) {
  if (y.size() != t.u_grid.dim()) throw std::invalid_argument("dual_value: dimension mismatch");
  NumericMin r = dual_at(t, u_nodes(t.u_grid), y);
  if (!r.argmin.empty()) r.argmin.pop_back();
  return r;
}

LagrangianTable lagrangian_table(const ReducedTable& t, std::span<const double> y) {
  const std::size_t m = t.u_grid.dim();
  if (y.size() != m) throw std::invalid_argument("lagrangian_table: dimension mismatch");
  const UNodes un = u_nodes(t.u_grid);
  const std::size_t nu = t.u_grid.size();
  const std::size_t nx = t.x_grid.size();
  std::vector<double> tiltv(nu);
  for (std::size_t k = 0; k < nu; ++k) tiltv[k] = -dot(y, std::span<const double>(un.pts.data() + k * m, m));
  const GriddedFunction& joint = *t.joint;
  std::vector<ExtReal> vals(nx), raw(nx);
  std::vector<char> bnd(nx, 0);
  parallel_for(nx, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      ExtReal best = ExtReal::pos_inf();
      for (std::size_t k = 0; k < nu; ++k) best = xr_min(best, joint[k * nx + j] + ExtReal(tiltv[k]));
      raw[j] = best;
      if (!best.is_pos_inf()) {
        const double eps = tie_eps(best);
        bool all_boundary = true;
        for (std::size_t k = 0; k < nu && all_boundary; ++k)
          if (is_minimizer(joint[k * nx + j] + ExtReal(tiltv[k]), best, eps)) all_boundary = un.boundary[k];
        if (all_boundary) {
          bnd[j] = 1;
          best = ExtReal::neg_inf();
        }
      }
      vals[j] = best;
    }
  });
  return LagrangianTable{GriddedFunction(t.x_grid, std::move(vals)), GriddedFunction(t.x_grid, std::move(raw)),
                         std::move(bnd)};
}

WeakDualityReport weak_duality_check(const DualFunction& psi, ExtReal inf_phi, double tol) {
  WeakDualityReport r;
  r.inf_phi = inf_phi;
  r.tol = tol;
  r.sup_psi = ExtReal::neg_inf();
  bool any_finite = false;
  for (std::size_t k = 0; k < psi.raw.size(); ++k) {
    const ExtReal v = psi.value(k);
    any_finite = any_finite || v.is_finite();
    r.sup_psi = xr_max(r.sup_psi, v);
  }
  r.degenerate = !any_finite;
  if (r.sup_psi.is_finite() && inf_phi.is_finite()) {
    r.violation = std::max(0.0, r.sup_psi.value() - inf_phi.value());
    r.gap = std::abs(r.sup_psi.value() - inf_phi.value());
    r.passed = r.violation <= tol;
  } else {
    r.passed = r.sup_psi <= inf_phi;
    r.violation = r.passed ? 0.0 : kInfD;
    r.gap = (r.sup_psi == inf_phi) ? 0.0 : kInfD;
  }
  return r;
}

}  // namespace epikit
