// SPDX-License-Identifier: MIT
#include "epikit/rockafellian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "epikit/norm.hpp"
#include "epikit/parallel.hpp"

namespace epikit {

namespace {

ExtReal indicator_nonpos(ExtReal v) { return v <= ExtReal(0.0) ? ExtReal(0.0) : ExtReal::pos_inf(); }

std::vector<double> shifted(std::span<const double> x, std::span<const double> v) {
  std::vector<double> z(x.begin(), x.end());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] += v[k];
  return z;
}

constexpr double kSimplexTol = 1e-12;

std::vector<double> checked_simplex(std::vector<double> p) {
  if (p.empty()) throw std::invalid_argument("probability vector is empty");
  double sum = 0.0;
  for (double pi : p) {
    if (!std::isfinite(pi) || pi < -kSimplexTol) throw std::invalid_argument("probability vector has a negative entry");
    sum += pi;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) throw std::invalid_argument("probability vector does not sum to one");
  for (double& pi : p) pi = std::max(pi, 0.0) / sum;
  return p;
}

void check_dims(const RockafellianModel& f, std::span<const double> u, std::span<const double> x) {
  if (u.size() != f.m() || x.size() != f.n()) throw std::invalid_argument("Rockafellian argument dimension mismatch");
}

std::string describe_probe(const ProbeGrid& g) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const auto& c = g.coords(k);
    if (k) os << " x ";
    os << c.front() << ".." << c.back() << " (" << c.size() << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace

MultiplierVector::MultiplierVector(std::vector<double> y) : y_(std::move(y)) {
  for (double v : y_)
    if (!std::isfinite(v)) throw std::invalid_argument("multiplier vector must be finite");
}

bool BoxSet::contains(std::span<const double> x) const {
  if (is_whole_space()) return true;
  if (x.size() != lo.size()) throw std::invalid_argument("box dimension mismatch");
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] < lo[k] || x[k] > hi[k]) return false;
  return true;
}

ExtReal AugmentationSpec::operator()(std::span<const double> u) const {
  switch (kind) {
    case AugmentationKind::IndicatorZero:
      for (double v : u)
        if (v != 0.0) return ExtReal::pos_inf();
      return 0.0;
    case AugmentationKind::Prox: {
      const double r = norm2(u);
      return theta * r * r;
    }
    case AugmentationKind::Power: {
      double r = 0.0;
      switch (norm) {
        case InnerNorm::L1: r = norm1(u); break;
        case InnerNorm::L2: r = norm2(u); break;
        case InnerNorm::Abs: r = norm_inf(u); break;
      }
      return r == 0.0 ? 0.0 : theta * std::pow(r, alpha);
    }
  }
  return 0.0;
}

RockafellianModel::RockafellianModel(std::size_t m, std::size_t n, Family family, Evaluator eval,
                                     FamilyParams params)
    : m_(m), n_(n), family_(family), eval_(std::move(eval)),
      params_(std::make_shared<const FamilyParams>(std::move(params))) {
  if (n == 0) throw std::invalid_argument("decision dimension must be positive");
  if (!eval_) throw std::invalid_argument("missing evaluator");
}

ExtReal RockafellianModel::operator()(std::span<const double> u, std::span<const double> x) const {
  check_dims(*this, u, x);
  return eval_(u, x);
}

ExtReal RockafellianModel::phi(std::span<const double> x) const {
  const std::vector<double> zero(m_, 0.0);
  return (*this)(zero, x);
}

RockafellianModel build_composite(CompositeParams p, std::size_t n) {
  if (!p.g0 || !p.h || p.G.empty()) throw std::invalid_argument("composite model needs g0, G and h");
  if (!p.X.is_whole_space() && (p.X.lo.size() != n || p.X.hi.size() != n))
    throw std::invalid_argument("composite model: X has wrong dimension");
  const std::size_t m = p.G.size();
  auto shared = std::make_shared<const CompositeParams>(p);
  auto eval = [shared, m](std::span<const double> u, std::span<const double> x) -> ExtReal {
    if (!shared->X.contains(x)) return ExtReal::pos_inf();
    const ExtReal g0 = shared->g0(x);
    if (g0.is_pos_inf()) return g0;
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) {
      const ExtReal gi = shared->G[i](x);
      if (!gi.is_finite()) throw std::domain_error("composite model: G must be real-valued");
      z[i] = gi.value() + u[i];
    }
    return g0 + shared->h(z);
  };
  return RockafellianModel(m, n, Family::Composite, eval, std::move(p));
}

RockafellianModel build_constraint_family(InequalityParams p, std::size_t n) {
  if (!p.g0) throw std::invalid_argument("inequality model needs g0");
  const std::size_t mc = p.g.size();
  const std::size_t m = n * (mc + 1) + mc;
  auto shared = std::make_shared<const InequalityParams>(p);
  auto eval = [shared, n, mc](std::span<const double> u, std::span<const double> x) -> ExtReal {
    ExtReal total = shared->g0(shifted(x, u.subspan(0, n)));
    for (std::size_t i = 1; i <= mc; ++i) {
      if (total.is_pos_inf()) return total;
      const ExtReal gi = shared->g[i - 1](shifted(x, u.subspan(i * n, n)));
      const double w = u[n * (mc + 1) + i - 1];
      total = total + indicator_nonpos(gi + ExtReal(w));
    }
    return total;
  };
  return RockafellianModel(m, n, Family::Inequality, eval, std::move(p));
}

RockafellianModel build_constraint_family(ConstraintCompositeParams p, std::size_t n) {
  if (!p.g0 || !p.h || p.G.empty()) throw std::invalid_argument("constraint-composite model needs g0, G and h");
  const std::size_t mg = p.G.size();
  auto shared = std::make_shared<const ConstraintCompositeParams>(p);
  auto eval = [shared, mg](std::span<const double> u, std::span<const double> x) -> ExtReal {
    const ExtReal g0 = shared->g0(x);
    if (g0.is_pos_inf()) return g0;
    std::vector<double> z(mg);
    for (std::size_t i = 0; i < mg; ++i) {
      const ExtReal gi = shared->G[i](x);
      if (!gi.is_finite()) throw std::domain_error("constraint-composite model: G must be real-valued");
      z[i] = gi.value() + u[i];
    }
    return g0 + indicator_nonpos(shared->h(z) + ExtReal(u[mg]));
  };
  return RockafellianModel(mg + 1, n, Family::ConstraintComposite, eval, std::move(p));
}

RockafellianModel build_ambiguity(AmbiguityParams p, std::size_t n) {
  if (!p.g0 || p.g.empty()) throw std::invalid_argument("ambiguity model needs g0 and g");
  if (p.p.size() != p.g.size()) throw std::invalid_argument("ambiguity model: p and g differ in length");
  if (!(p.theta >= 0.0) || !std::isfinite(p.theta)) throw std::invalid_argument("ambiguity model: theta must be >= 0");
  p.p = checked_simplex(std::move(p.p));
  const std::size_t m = p.g.size();
  auto shared = std::make_shared<const AmbiguityParams>(p);
  auto eval = [shared, m](std::span<const double> u, std::span<const double> x) -> ExtReal {
    // Faces of the box [-p, 0] are accepted up to kSimplexTol so that grid
    // nodes computed with rounding still land on them.
    for (std::size_t i = 0; i < m; ++i)
      if (u[i] > kSimplexTol || shared->p[i] + u[i] < -kSimplexTol) return ExtReal::pos_inf();
    ExtReal total = shared->g0(x);
    for (std::size_t i = 0; i < m; ++i) {
      if (total.is_pos_inf()) return total;
      total = total + xr_scale(std::max(0.0, shared->p[i] + u[i]), shared->g[i](x));
    }
    const double r = norm2(u);
    return total + ExtReal(0.5 * shared->theta * r * r);
  };
  return RockafellianModel(m, n, Family::Ambiguity, eval, std::move(p));
}

RockafellianModel build_splitting(SplittingParams p, std::size_t n) {
  if (p.g.empty()) throw std::invalid_argument("splitting model needs g");
  if (p.p.size() != p.g.size()) throw std::invalid_argument("splitting model: p and g differ in length");
  p.p = checked_simplex(std::move(p.p));
  const std::size_t mb = p.g.size();
  auto shared = std::make_shared<const SplittingParams>(p);
  auto eval = [shared, mb, n](std::span<const double> u, std::span<const double> x) -> ExtReal {
    ExtReal total = 0.0;
    for (std::size_t i = 0; i < mb; ++i) {
      if (total.is_pos_inf()) return total;
      total = total + xr_scale(shared->p[i], shared->g[i](shifted(x, u.subspan(i * n, n))));
    }
    return total;
  };
  return RockafellianModel(n * mb, n, Family::Splitting, eval, std::move(p));
}

RockafellianModel augment(const RockafellianModel& f, AugmentationSpec a) {
  if (!(a.theta >= 0.0) || !std::isfinite(a.theta)) throw std::invalid_argument("augmentation: theta must be >= 0");
  if (a.kind == AugmentationKind::Power && !(a.alpha > 0.0))
    throw std::invalid_argument("augmentation: alpha must be > 0");
  auto base = std::make_shared<const RockafellianModel>(f);
  auto eval = [base, a](std::span<const double> u, std::span<const double> x) -> ExtReal {
    const ExtReal av = a(u);
    if (av.is_pos_inf()) return av;
    return (*base)(u, x) + av;
  };
  return RockafellianModel(f.m(), f.n(), Family::Augmented, eval, AugmentedParams{base, a});
}

RockafellianModel tilt(const RockafellianModel& f, const MultiplierVector& y) {
  if (y.size() != f.m()) throw std::invalid_argument("tilt: multiplier dimension mismatch");
  auto base = std::make_shared<const RockafellianModel>(f);
  auto eval = [base, y](std::span<const double> u, std::span<const double> x) -> ExtReal {
    return (*base)(u, x) + ExtReal(-dot(y.values(), u));
  };
  return RockafellianModel(f.m(), f.n(), Family::Custom, eval);
}

GriddedFunction tabulate(const RockafellianModel& f, const Grid& joint) {
  if (joint.dim() != f.m() + f.n()) throw std::invalid_argument("tabulate: joint grid dimension mismatch");
  std::vector<ExtReal> values(joint.size());
  const std::size_t m = f.m();
  parallel_for(joint.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> pt(joint.dim());
    for (std::size_t i = b; i < e; ++i) {
      joint.point(i, pt);
      values[i] = f(std::span<const double>(pt).subspan(0, m), std::span<const double>(pt).subspan(m));
    }
  });
  return GriddedFunction(joint, std::move(values));
}

GriddedFunction tilt_table(const GriddedFunction& f, std::size_t m, std::span<const double> y) {
  if (y.size() != m || m > f.dim()) throw std::invalid_argument("tilt_table: dimension mismatch");
  const Grid& g = f.grid();
  std::vector<ExtReal> values(f.size());
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> pt(g.dim());
    for (std::size_t i = b; i < e; ++i) {
      g.point(i, pt);
      values[i] = f[i] + ExtReal(-dot(y, std::span<const double>(pt).subspan(0, m)));
    }
  });
  return GriddedFunction(g, std::move(values));
}

GriddedFunction augment_table(const GriddedFunction& f, std::size_t m, const AugmentationSpec& a) {
  if (m > f.dim()) throw std::invalid_argument("augment_table: dimension mismatch");
  const Grid& g = f.grid();
  std::vector<ExtReal> values(f.size());
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> pt(g.dim());
    for (std::size_t i = b; i < e; ++i) {
      g.point(i, pt);
      values[i] = f[i] + a(std::span<const double>(pt).subspan(0, m));
    }
  });
  return GriddedFunction(g, std::move(values));
}

MinValueTable min_value_table(const RockafellianModel& f, const ProbeGrid& u_probe, const ProbeGrid& x_probe) {
  if (u_probe.size() == 0 || x_probe.size() == 0) throw std::invalid_argument("empty probe grid");
  if (u_probe.dim() != f.m() || x_probe.dim() != f.n()) throw std::invalid_argument("probe dimension mismatch");
  auto inf_over_x = [&](std::span<const double> u) {
    ExtReal best = ExtReal::pos_inf();
    std::vector<double> x(f.n());
    for (std::size_t j = 0; j < x_probe.size(); ++j) {
      x_probe.point(j, x);
      best = xr_min(best, f(u, x));
      if (best.is_neg_inf()) break;
    }
    return best;
  };
  MinValueTable t;
  t.u_probe = u_probe;
  t.values.resize(u_probe.size());
  parallel_for(u_probe.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> u(f.m());
    for (std::size_t i = b; i < e; ++i) {
      u_probe.point(i, u);
      t.values[i] = inf_over_x(u);
    }
  }, 1);
  const std::vector<double> zero(f.m(), 0.0);
  t.inf_phi = inf_over_x(zero);
  t.description = "u " + describe_probe(u_probe) + ", x " + describe_probe(x_probe);
  return t;
}

ExactnessReport check_exactness(const MinValueTable& table, const MultiplierVector& y,
                                const ExactnessOptions& options) {
  if (y.size() != table.u_probe.dim()) throw std::invalid_argument("check_exactness: multiplier dimension mismatch");
  ExactnessReport r;
  r.supported_by = y;
  r.tol = 1e-9 + 2.0 * options.grid_inf_error;
  r.grid_description = table.description;
  if (!table.inf_phi.is_finite()) {
    r.decidable = false;
    return r;
  }
  const double inf_phi = table.inf_phi.value();
  const double inf = std::numeric_limits<double>::infinity();
  r.min_slack = 0.0;
  r.min_slack_nonzero = inf;
  double worst = inf;
  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    table.u_probe.point(i, u);
    const ExtReal s = table.values[i] + ExtReal(-inf_phi - dot(y.values(), u));
    const double sv = s.value();
    const bool zero = std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; });
    if (!zero) r.min_slack_nonzero = std::min(r.min_slack_nonzero, sv);
    if (sv < worst) {
      worst = sv;
      r.worst_u = u;
    }
    r.min_slack = std::min(r.min_slack, sv);
  }
  r.exact = r.min_slack >= -r.tol;
  r.strict = r.exact && r.min_slack_nonzero > r.tol;
  return r;
}

ExactnessReport check_exactness(const RockafellianModel& f, const MultiplierVector& y, const ProbeGrid& u_probe,
                                const ProbeGrid& x_probe, const ExactnessOptions& options) {
  return check_exactness(min_value_table(f, u_probe, x_probe), y, options);
}

MultiplierVector ambiguity_support_vector(const RockafellianModel& f, double eta, const ProbeGrid& x_probe,
                                          double margin) {
  const auto* p = f.params_as<AmbiguityParams>();
  if (!p) throw std::invalid_argument("ambiguity_support_vector: model is not an ambiguity model");
  if (x_probe.dim() != f.n() || x_probe.size() == 0) throw std::invalid_argument("probe dimension mismatch");
  const std::size_t m = p->g.size();
  ExtReal delta0 = ExtReal::pos_inf();
  std::vector<double> x(f.n());
  for (std::size_t j = 0; j < x_probe.size(); ++j) {
    x_probe.point(j, x);
    if (p->g0(x) < ExtReal(-eta)) throw std::invalid_argument("ambiguity_support_vector: g0 below -eta");
    for (std::size_t i = 0; i < m; ++i)
      if (p->g[i](x) < ExtReal(-eta)) throw std::invalid_argument("ambiguity_support_vector: g_i below -eta");
    delta0 = xr_min(delta0, f.phi(x));
  }
  if (!delta0.is_finite()) throw std::domain_error("ambiguity_support_vector: inf phi is not finite");
  double alpha = std::numeric_limits<double>::infinity();
  for (double pi : p->p)
    if (pi > 0.0) alpha = std::min(alpha, pi);
  const double big = (2.0 * delta0.value() + 4.0 * eta) / alpha;
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = (p->p[i] > 0.0 ? big : 0.0) + margin;
  return MultiplierVector(std::move(y));
}

TightnessReport tightness_diagnostic(std::span<const RockafellianModel> models, std::span<const MultiplierVector> ys,
                                     std::span<const std::vector<double>> xs, const ProbeGrid& u_probe,
                                     const TightnessOptions& options) {
  if (models.size() != ys.size() || models.size() != xs.size())
    throw std::invalid_argument("tightness_diagnostic: sequences differ in length");
  if (u_probe.size() == 0) throw std::invalid_argument("tightness_diagnostic: empty probe box");
  TightnessReport rep;
  rep.mode = options.mode;
  rep.box_radius = u_probe.inner_radius();
  rep.margin = options.margin.value_or(2.0 * u_probe.max_step());
  rep.passed = true;
  const auto& cert = options.certificate;
  const double lb_tol = 1e-9;

  if (options.mode == TightnessMode::Certificate) {
    if (cert.kind == CertificateKind::Proximal && !(cert.beta > 0.0 && cert.beta < cert.theta)) {
      rep.passed = false;
      rep.reason = "certificate requires 0 < beta < theta";
    }
    if (cert.kind == CertificateKind::Sharp && !(cert.beta > 0.0)) {
      rep.passed = false;
      rep.reason = "certificate requires beta > 0";
    }
  }

  for (std::size_t k = 0; k < models.size(); ++k) {
    const RockafellianModel* f = &models[k];
    if (ys[k].size() != f->m() || xs[k].size() != f->n() || u_probe.dim() != f->m())
      throw std::invalid_argument("tightness_diagnostic: dimension mismatch");
    TightnessEntry entry;
    std::vector<double> u(f->m());
    if (options.mode == TightnessMode::Empirical) {
      std::vector<ExtReal> vals(u_probe.size());
      ExtReal inf = ExtReal::pos_inf();
      for (std::size_t i = 0; i < u_probe.size(); ++i) {
        u_probe.point(i, u);
        vals[i] = (*f)(u, xs[k]) + ExtReal(-dot(ys[k].values(), u));
        inf = xr_min(inf, vals[i]);
      }
      entry.inf = inf;
      if (inf.is_pos_inf()) {
        entry.argmin_norm = 0.0;
      } else {
        const double eps = 1e-9 * std::max(1.0, std::abs(inf.is_finite() ? inf.value() : 0.0));
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u_probe.size(); ++i) {
          const bool hit = inf.is_neg_inf() ? vals[i].is_neg_inf() : vals[i].value() <= inf.value() + eps;
          if (!hit) continue;
          u_probe.point(i, u);
          best = std::min(best, norm2(u));
        }
        entry.argmin_norm = best;
      }
      entry.witness_found = !inf.is_pos_inf();
      entry.ok = entry.argmin_norm <= rep.box_radius - rep.margin;
      if (!entry.ok && rep.reason.empty())
        rep.reason = "minimizer escapes the probe box at index " + std::to_string(k);
    } else {
      double theta_nu = cert.theta;
      const RockafellianModel* base = f;
      if (const auto* ap = f->params_as<AugmentedParams>()) {
        base = ap->base.get();
        theta_nu = ap->aug.theta;
      }
      const bool sharp = cert.kind == CertificateKind::Sharp;
      auto unorm = [&](std::span<const double> v) {
        if (const auto* ap = f->params_as<AugmentedParams>(); ap && sharp) {
          if (ap->aug.norm == InnerNorm::L1) return norm1(v);
          if (ap->aug.norm == InnerNorm::Abs) return norm_inf(v);
        }
        return norm2(v);
      };
      bool params_ok = sharp ? theta_nu >= cert.beta + cert.kappa * cert.rho_y + 1.0 &&
                                   norm2(ys[k].values()) <= cert.rho_y
                             : theta_nu >= cert.theta;
      ExtReal inf = ExtReal::pos_inf();
      double viol = 0.0;
      bool witness = false;
      for (std::size_t i = 0; i < u_probe.size(); ++i) {
        u_probe.point(i, u);
        const ExtReal v = (*base)(u, xs[k]);
        inf = xr_min(inf, v);
        const double r = unorm(u);
        const double lower = sharp ? cert.gamma - cert.beta * r : cert.gamma - cert.beta * r * r;
        if (v.is_neg_inf()) {
          viol = std::numeric_limits<double>::infinity();
        } else if (v.is_finite()) {
          viol = std::max(viol, lower - v.value());
        }
        if (r <= cert.tau && v <= ExtReal(cert.tau)) witness = true;
      }
      entry.inf = inf;
      entry.lower_bound_violation = viol;
      entry.witness_found = witness;
      // Entries with inf = +inf satisfy tightness trivially.
      entry.ok = inf.is_pos_inf() || (params_ok && viol <= lb_tol && witness);
      if (!entry.ok && rep.reason.empty()) {
        if (!params_ok) rep.reason = "augmentation parameter condition fails at index " + std::to_string(k);
        else if (viol > lb_tol) rep.reason = "lower bound violated at index " + std::to_string(k);
        else rep.reason = "no witness within tau at index " + std::to_string(k);
      }
    }
    rep.passed = rep.passed && entry.ok;
    rep.entries.push_back(entry);
  }
  if (rep.passed) rep.reason = "ok";
  return rep;
}

}  // namespace epikit
