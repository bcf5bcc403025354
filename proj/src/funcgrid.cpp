// SPDX-License-Identifier: MIT
#include "epikit/funcgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epikit/parallel.hpp"

namespace epikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ArgminResult infimum_argmin(const GriddedFunction& g, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("infimum_argmin: eps must be nonnegative");
  const Grid& grid = g.grid();
  ArgminResult out{ExtReal::pos_inf(), PointCloud(grid.dim(), "argmin"), false};
  for (std::size_t i = 0; i < g.size(); ++i) out.inf = xr_min(out.inf, g[i]);
  if (out.inf.is_pos_inf()) return out;
  const double cut = out.inf.is_neg_inf() ? -kInf : out.inf.value() + eps;
  std::vector<double> x(grid.dim());
  bool interior = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = g[i].value();
    if (v <= cut && v < kInf) {
      grid.point(i, x);
      out.points.add(x);
    }
    if (g[i] == out.inf && !grid.on_boundary(i)) interior = true;
  }
  out.on_boundary = !interior;
  return out;
}

PointCloud level_set(const GriddedFunction& g, double alpha) {
  const Grid& grid = g.grid();
  PointCloud out(grid.dim(), "level");
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].value() <= alpha) {
      grid.point(i, x);
      out.add(x);
    }
  }
  return out;
}

PointCloud domain_cloud(const GriddedFunction& g) {
  const Grid& grid = g.grid();
  PointCloud out(grid.dim(), "dom");
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_pos_inf()) {
      grid.point(i, x);
      out.add(x);
    }
  }
  return out;
}

PointCloud epi_cloud(const GriddedFunction& g, double alpha_lo, double alpha_hi, double alpha_step,
                     Orientation orientation) {
  if (!(alpha_step > 0.0)) throw std::invalid_argument("epi_cloud: alpha_step must be positive");
  if (!(alpha_lo <= alpha_hi)) throw std::invalid_argument("epi_cloud: alpha_lo > alpha_hi");
  const bool hypo = orientation == Orientation::Hypo;
  if (hypo) {
    // Hypograph points with alpha in [lo, hi] are the flipped epigraph points
    // of -g with alpha in [-hi, -lo].
    const double lo = alpha_lo;
    alpha_lo = -alpha_hi;
    alpha_hi = -lo;
  }
  const Grid& grid = g.grid();
  const std::size_t d = grid.dim();
  PointCloud out(d + 1, hypo ? "hypo" : "epi");
  std::vector<double> p(d + 1);
  const double slack = 1e-12 * std::max(1.0, std::fabs(alpha_hi));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = hypo ? -g[i].value() : g[i].value();
    if (!(v <= alpha_hi)) continue;
    grid.point(i, std::span<double>(p.data(), d));
    const double a0 = std::max(v, alpha_lo);
    for (std::size_t k = 0;; ++k) {
      const double a = a0 + static_cast<double>(k) * alpha_step;
      if (a > alpha_hi + slack) break;
      p[d] = hypo ? -a : a;
      out.add(p);
    }
  }
  return out;
}

ConjugateValue conjugate_at(const GriddedFunction& g, std::span<const double> y) {
  const Grid& grid = g.grid();
  if (y.size() != grid.dim()) throw std::invalid_argument("conjugate_at: dimension mismatch");
  std::vector<double> x(grid.dim());
  ExtReal best = ExtReal::neg_inf();
  bool interior = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].is_pos_inf()) continue;
    grid.point(i, x);
    ExtReal v = xr_sub(ExtReal(dot(x, y)), g[i]);
    const bool inner = !grid.on_boundary(i);
    if (v > best) {
      best = v;
      interior = inner;
    } else if (v == best && inner) {
      interior = true;
    }
  }
  return {best, !best.is_neg_inf() && !interior};
}

ExtReal ConjugateTable::at(std::span<const double> y) const {
  auto c = conjugate_at(*primal, y);
  return c.boundary ? ExtReal::pos_inf() : c.value;
}

ConjugateTable conjugate_table(const GriddedFunction& g, const Grid& dual_grid) {
  if (dual_grid.dim() != g.dim()) throw std::invalid_argument("conjugate: dual grid dimension mismatch");
  const Grid& grid = g.grid();
  const std::size_t d = grid.dim();
  // Precompute primal nodes in dom g.
  std::vector<double> xs;
  std::vector<double> gv;
  std::vector<char> inner;
  {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].is_pos_inf()) continue;
      grid.point(i, x);
      xs.insert(xs.end(), x.begin(), x.end());
      gv.push_back(g[i].value());
      inner.push_back(grid.on_boundary(i) ? 0 : 1);
    }
  }
  const std::size_t np = gv.size();
  std::vector<ExtReal> vals(dual_grid.size(), ExtReal::neg_inf());
  std::vector<char> boundary(dual_grid.size(), 0);
  parallel_for(dual_grid.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> y(d);
    for (std::size_t j = b; j < e; ++j) {
      dual_grid.point(j, y);
      double best = -kInf;
      bool interior = false;
      for (std::size_t i = 0; i < np; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += xs[i * d + k] * y[k];
        const double v = gv[i] == -kInf ? kInf : s - gv[i];
        if (v > best) {
          best = v;
          interior = inner[i];
        } else if (v == best && inner[i]) {
          interior = true;
        }
      }
      vals[j] = ExtReal(best);
      boundary[j] = (np > 0 && !interior) ? 1 : 0;
    }
  }, 16);
  return {std::make_shared<GriddedFunction>(g), GriddedFunction(dual_grid, std::move(vals)),
          std::move(boundary)};
}

GriddedFunction conjugate(const GriddedFunction& g, const Grid& dual_grid) {
  return conjugate_table(g, dual_grid).raw;
}

double lipschitz_modulus(const GriddedFunction& g, double rho) {
  const Grid& grid = g.grid();
  const std::size_t d = grid.dim();
  std::vector<double> x(d), y(d);
  std::vector<std::size_t> idx(d);
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    grid.point(i, x);
    if (norm2(x) > rho) continue;
    if (!g[i].is_finite()) throw std::domain_error("lipschitz_modulus: function not finite on the ball");
    grid.unflatten(i, idx);
    for (std::size_t k = 0; k < d; ++k) {
      if (idx[k] + 1 >= grid.axis(k).n) continue;
      const std::size_t j = i + grid.stride(k);
      grid.point(j, y);
      if (norm2(y) > rho) continue;
      if (!g[j].is_finite()) throw std::domain_error("lipschitz_modulus: function not finite on the ball");
      const double q = std::fabs(g[j].value() - g[i].value()) / (y[k] - x[k]);
      best = std::max(best, q);
    }
  }
  return best;
}

double sup_abs_difference(const GriddedFunction& g, const GriddedFunction& h, double rho) {
  if (!g.grid().same_as(h.grid())) throw std::invalid_argument("sup_abs_difference: grids differ");
  std::vector<double> x(g.dim());
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.grid().point(i, x);
    if (norm2(x) > rho) continue;
    if (g[i] == h[i]) continue;
    ExtReal diff = xr_sub(g[i], h[i]);
    if (!diff.is_finite()) return kInf;
    best = std::max(best, std::fabs(diff.value()));
  }
  return best;
}

namespace {

PointCloud clip_box(const PointCloud& c, double radius) {
  PointCloud out(c.dim(), c.tag());
  const std::size_t d = c.dim();
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto p = c.point(i);
    if (norm_inf(p.first(d - 1)) <= radius) out.add(p);
  }
  return out;
}

}  // namespace

ConvergenceProfile epi_profile(std::span<const int> nus, std::span<const GriddedFunction> seq,
                               const GriddedFunction& g, double rho, const NormSpec& norm,
                               const ProfileOptions& options) {
  if (nus.size() != seq.size()) throw std::invalid_argument("epi_profile: nu list and sequence differ in length");
  if (!(rho >= 0.0)) throw std::invalid_argument("epi_profile: rho must be nonnegative");
  ConvergenceProfile out;
  out.rho = rho;
  double max_step = g.grid().max_step();
  for (const auto& s : seq) max_step = std::max(max_step, s.grid().max_step());
  out.tol = 2.0 * max_step;
  const double build = rho + options.build_margin;
  const double astep = options.alpha_step.value_or(max_step);

  std::optional<PointCloud> g_cloud;
  if (options.method == EpiMethod::Cloud)
    g_cloud = clip_box(epi_cloud(g, -build, build, astep, options.orientation), build);

  for (std::size_t k = 0; k < seq.size(); ++k) {
    ExtReal d;
    if (options.method == EpiMethod::Cloud) {
      PointCloud c = clip_box(epi_cloud(seq[k], -build, build, astep, options.orientation), build);
      d = truncated_hausdorff(c, *g_cloud, rho, norm);
    } else {
      d = epi_distance(seq[k], g, rho, norm, options.orientation);
    }
    out.entries.push_back({nus[k], d});
  }
  out.fitted_rate = fit_rate(out.entries, out.tol);
  return out;
}

std::optional<double> fit_rate(std::span<const ProfileEntry> entries, double tol) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : entries) {
    if (e.nu <= 0 || !e.distance.is_finite() || !(e.distance.value() > tol)) continue;
    pts.emplace_back(std::log(static_cast<double>(e.nu)), std::log(e.distance.value()));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace epikit
