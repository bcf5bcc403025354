// SPDX-License-Identifier: MIT
// Reference implementations used only by the tests. They share no code with
// the library beyond plain data access.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Block layout: (dim, kind) with kind 1 = L1, 2 = L2, 0 = abs.
using Blocks = std::vector<std::pair<int, int>>;

inline double block_max_norm(const Blocks& blocks, const std::vector<double>& v) {
  double out = 0.0;
  std::size_t off = 0;
  for (auto [dim, kind] : blocks) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      double c = v[off + static_cast<std::size_t>(i)];
      if (kind == 2) s += c * c;
      else s += std::fabs(c);
    }
    if (kind == 2) s = std::sqrt(s);
    out = std::max(out, s);
    off += static_cast<std::size_t>(dim);
  }
  return out;
}

using Points = std::vector<std::vector<double>>;

inline double excess(const Points& c, const Points& d, const Blocks& b) {
  if (c.empty()) return 0.0;
  if (d.empty()) return kInf;
  double worst = 0.0;
  for (const auto& p : c) {
    double best = kInf;
    for (const auto& q : d) {
      std::vector<double> diff(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) diff[i] = p[i] - q[i];
      best = std::min(best, block_max_norm(b, diff));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

inline Points clip(const Points& c, double rho, const Blocks& b) {
  Points out;
  for (const auto& p : c)
    if (block_max_norm(b, p) <= rho) out.push_back(p);
  return out;
}

inline double hausdorff(const Points& c, const Points& d, double rho, const Blocks& b) {
  return std::max(excess(clip(c, rho, b), d, b), excess(clip(d, rho, b), c, b));
}

// Epigraph excess between functions given as node lists (x_k, v_k); v = +inf
// marks nodes outside the domain. Quadratic scan over a fine alpha sampling of
// the source ray and exact vertical placement on the target rays.
struct Sampled {
  Points x;
  std::vector<double> v;
};

inline double column_excess(const Sampled& g, const Sampled& h, double rho, const Blocks& xb) {
  double worst = 0.0;
  bool any_target = std::any_of(h.v.begin(), h.v.end(), [](double t) { return t < kInf; });
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    if (!(g.v[i] <= rho) || block_max_norm(xb, g.x[i]) > rho) continue;
    if (!any_target) return kInf;
    const double a = std::max(g.v[i], -rho);
    double best = kInf;
    for (std::size_t j = 0; j < h.x.size(); ++j) {
      if (h.v[j] == kInf) continue;
      std::vector<double> diff(g.x[i].size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = g.x[i][k] - h.x[j][k];
      double c = std::max(block_max_norm(xb, diff), std::max(0.0, h.v[j] - a));
      best = std::min(best, c);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

inline double column_distance(const Sampled& g, const Sampled& h, double rho, const Blocks& xb) {
  return std::max(column_excess(g, h, rho, xb), column_excess(h, g, rho, xb));
}

// Uniform 1-D nodes lo..hi with n points.
inline std::vector<double> nodes(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (lo * (n - 1 - i) + hi * i) / (n - 1);
  return out;
}

// Discrete conjugate by direct double loop.
inline double conjugate(const std::vector<double>& xs, const std::vector<double>& gv, double y) {
  double best = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (gv[i] < kInf) best = std::max(best, xs[i] * y - gv[i]);
  return best;
}

// Root of a continuous function on [a, b] with a sign change, by bisection.
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if ((fm <= 0) == (fa <= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
