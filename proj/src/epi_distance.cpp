// SPDX-License-Identifier: MIT
// Epigraph excess between grid-restricted functions.
//
// The epigraph of a function that is +inf off its grid nodes is a union of
// vertical rays {z} x [g(z), inf). For a source point (z, a) with a >= g(z)
// the distance to the rays of h is min_z' max(N(z - z'), (h(z') - a)+), which
// is largest at the lowest admissible a = max(g(z), -rho).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epikit/funcgrid.hpp"
#include "epikit/parallel.hpp"

namespace epikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sources {
  std::vector<std::size_t> node;
  std::vector<double> a0;
};

Sources collect_sources(const GriddedFunction& g, double rho, const NormSpec& zn) {
  Sources s;
  const Grid& grid = g.grid();
  std::vector<double> z(grid.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = g[i].value();
    if (!(v <= rho)) continue;
    grid.point(i, z);
    if (zn(z) > rho) continue;
    s.node.push_back(i);
    s.a0.push_back(std::max(v, -rho));
  }
  return s;
}

double pos_gap(double target, double a0) {
  const double d = target - a0;
  return d > 0.0 ? d : 0.0;
}

// One-step min-dilation of m along axis k: m[i] = min(m[i-1], m[i], m[i+1]).
void dilate_axis(std::vector<double>& m, const Grid& grid, std::size_t k) {
  const std::size_t n = grid.axis(k).n;
  const std::size_t st = grid.stride(k);
  const std::size_t block = st * n;
  const std::size_t total = m.size();
  parallel_for(total / n, [&](std::size_t b, std::size_t e) {
    for (std::size_t line = b; line < e; ++line) {
      const std::size_t outer = line / st, inner = line % st;
      double* p = m.data() + outer * block + inner;
      double prev = p[0];
      for (std::size_t i = 0; i < n; ++i) {
        const double cur = p[i * st];
        double v = std::min(prev, cur);
        if (i + 1 < n) v = std::min(v, p[(i + 1) * st]);
        p[i * st] = v;
        prev = cur;
      }
    }
  }, 1024);
}

// Same grid, sup-type norm on z: dilate the target values by growing boxes.
// A node at sup-distance r enters the box exactly at threshold r.
double excess_dilation(const GriddedFunction& g, const GriddedFunction& h, const Sources& src) {
  const Grid& grid = h.grid();
  const std::size_t d = grid.dim();
  std::vector<double> m(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) m[i] = h[i].value();

  const std::size_t ns = src.node.size();
  std::vector<double> best(ns);
  std::vector<std::size_t> pending;
  for (std::size_t s = 0; s < ns; ++s) {
    best[s] = pos_gap(m[src.node[s]], src.a0[s]);
    if (best[s] > 0.0) pending.push_back(s);
  }
  std::vector<std::size_t> radius(d, 0);
  while (!pending.empty()) {
    double r = kInf;
    for (std::size_t k = 0; k < d; ++k)
      if (radius[k] + 1 < grid.axis(k).n)
        r = std::min(r, static_cast<double>(radius[k] + 1) * grid.axis(k).step());
    if (r == kInf) break;
    std::erase_if(pending, [&](std::size_t s) { return best[s] <= r; });
    if (pending.empty()) break;
    for (std::size_t k = 0; k < d; ++k) {
      if (radius[k] + 1 >= grid.axis(k).n) continue;
      if (static_cast<double>(radius[k] + 1) * grid.axis(k).step() <= r * (1.0 + 1e-12)) {
        dilate_axis(m, grid, k);
        ++radius[k];
      }
    }
    for (std::size_t s : pending) {
      const double c = std::max(r, pos_gap(m[src.node[s]], src.a0[s]));
      if (c < best[s]) best[s] = c;
    }
  }
  (void)g;
  return ns == 0 ? 0.0 : *std::max_element(best.begin(), best.end());
}

// General kernel: ring search around the nearest target node.
double excess_rings(const GriddedFunction& g, const GriddedFunction& h, const Sources& src,
                    const NormSpec& zn) {
  const Grid& sg = g.grid();
  const Grid& tg = h.grid();
  const std::size_t d = tg.dim();
  const double hmin = tg.min_step();
  const std::size_t ns = src.node.size();
  std::vector<double> best(ns, kInf);

  parallel_for(ns, [&](std::size_t b, std::size_t e) {
    std::vector<double> z(d), zt(d);
    std::vector<std::int64_t> base(d), off(d);
    std::vector<std::size_t> idx(d);
    for (std::size_t s = b; s < e; ++s) {
      sg.point(src.node[s], z);
      const double a0 = src.a0[s];
      std::int64_t kmax = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const Axis& ax = tg.axis(k);
        double t = std::round((z[k] - ax.lo) / ax.step());
        t = std::clamp(t, 0.0, static_cast<double>(ax.n - 1));
        base[k] = static_cast<std::int64_t>(t);
        kmax = std::max({kmax, base[k], static_cast<std::int64_t>(ax.n - 1) - base[k]});
      }
      double bs = kInf;
      auto visit = [&]() {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < d; ++k) {
          const std::int64_t c = base[k] + off[k];
          if (c < 0 || c >= static_cast<std::int64_t>(tg.axis(k).n)) return;
          idx[k] = static_cast<std::size_t>(c);
          flat += idx[k] * tg.stride(k);
        }
        const double v = h[flat].value();
        if (v == kInf) return;
        const double gap = pos_gap(v, a0);
        if (gap >= bs) return;
        for (std::size_t k = 0; k < d; ++k) zt[k] = tg.axis(k).at(idx[k]);
        const double c = std::max(zn.distance(z, zt), gap);
        if (c < bs) bs = c;
      };
      for (std::int64_t k = 0; k <= kmax; ++k) {
        if (k > 0 && (static_cast<double>(k) - 0.5) * hmin >= bs) break;
        if (k == 0) {
          std::fill(off.begin(), off.end(), 0);
          visit();
          continue;
        }
        for (std::size_t j = 0; j < d; ++j) {
          for (int sign = -1; sign <= 1; sign += 2) {
            for (std::size_t i = 0; i < d; ++i) off[i] = (i < j) ? -(k - 1) : -k;
            off[j] = sign * k;
            bool done = false;
            while (!done) {
              visit();
              done = true;
              for (std::size_t ii = d; ii-- > 0;) {
                if (ii == j) continue;
                const std::int64_t lim = (ii < j) ? k - 1 : k;
                if (off[ii] < lim) {
                  ++off[ii];
                  for (std::size_t r = ii + 1; r < d; ++r)
                    if (r != j) off[r] = (r < j) ? -(k - 1) : -k;
                  done = false;
                  break;
                }
              }
            }
          }
        }
      }
      best[s] = bs;
    }
  }, 16);
  return ns == 0 ? 0.0 : *std::max_element(best.begin(), best.end());
}

void check_norm(const GriddedFunction& g, const GriddedFunction& h, const NormSpec& norm) {
  if (g.dim() != h.dim()) throw std::invalid_argument("epi_excess: functions differ in dimension");
  if (norm.total_dim() != g.dim() + 1)
    throw std::invalid_argument("epi_excess: norm must cover the grid coordinates and alpha");
  const auto& last = norm.blocks().back();
  if (last.dim != 1 || norm.blocks().size() < 2)
    throw std::invalid_argument("epi_excess: norm must end with a one-dimensional alpha block");
}

}  // namespace

ExtReal epi_excess(const GriddedFunction& g, const GriddedFunction& h, double rho,
                   const NormSpec& norm, Orientation orientation) {
  if (!(rho >= 0.0)) throw std::invalid_argument("epi_excess: rho must be nonnegative");
  check_norm(g, h, norm);
  if (orientation == Orientation::Hypo)
    return epi_excess(g.negated(), h.negated(), rho, norm, Orientation::Epi);
  const NormSpec zn = norm.without_last();
  Sources src = collect_sources(g, rho, zn);
  if (src.node.empty()) return ExtReal(0.0);
  if (!std::any_of(h.values().begin(), h.values().end(), [](ExtReal v) { return !v.is_pos_inf(); }))
    return ExtReal::pos_inf();
  if (g.grid().same_as(h.grid()) && zn.is_sup_norm()) return ExtReal(excess_dilation(g, h, src));
  return ExtReal(excess_rings(g, h, src, zn));
}

ExtReal epi_distance(const GriddedFunction& g, const GriddedFunction& h, double rho,
                     const NormSpec& norm, Orientation orientation) {
  return xr_max(epi_excess(g, h, rho, norm, orientation), epi_excess(h, g, rho, norm, orientation));
}

}  // namespace epikit
