// SPDX-License-Identifier: MIT
#include "epikit/scenarios.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "epikit/catalog.hpp"
#include "epikit/lagrangian.hpp"
#include "epikit/parallel.hpp"
#include "epikit/rockafellian.hpp"

namespace epikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rows = std::vector<ResultRow>;

// ------------------------------------------------------------------ registry

struct Entry {
  ScenarioInfo info;
  std::map<std::string, std::string> functions;
  std::map<std::string, double> params;
};

std::vector<Entry> make_registry() {
  using namespace bound_id;
  std::vector<Entry> r;
  const std::map<std::string, std::string> cubic_fns{
      {"g0", "affine:-1,0"}, {"g1", "poly:1,-1,-1,1"}, {"h", "ind_nonpos"}};

  r.push_back({{"cubic-nlp",
                "minimize -x subject to (x-1)^2 (x+1) <= 0 on [-2,2]; the constraint is relaxed by 1/nu",
                {"inf_phi", "inf_phi_nu", "epi_phi", "epi_f", "exactness", "closed_form", "weak_duality",
                 kMinvalInf, kMinvalArgmin, kMinvalLevel, kTilted, kComposite, kInequalities, kLagrangian, kDualA,
                 kDualB},
                {kMinvalInf, kMinvalArgmin, kMinvalLevel, kTilted, kComposite, kInequalities, kLagrangian, kDualA,
                 kDualB}},
               cubic_fns,
               {{"x_radius", 2.0},
                {"u_lo", -5.0},
                {"u_hi", 10.0},
                {"shift", 1.0},
                {"y", 1.0},
                {"rho_lag", 1.0},
                {"rho_dual", 1.0},
                {"rho_ineq", 1.0},
                {"ineq_box", 1.5},
                {"dual_y_lo", -0.5},
                {"dual_y_hi", 2.5},
                {"expect_inf_phi", -1.0},
                {"inf_phi_tol", 0.01},
                {"inf_phi_nu_lower", 1.0},
                {"epi_phi_lower", 0.5},
                {"exactness_y_max", 50.0},
                {"closed_form_tol", 1e-3},
                {"seed", 7.0}}});

  r.push_back({{"composite-translate",
                "cubic composite problem with the feasible box X shifted by translate/nu",
                {kComposite, kTilted, kLagrangian, kDualB, "weak_duality"},
                {kComposite, kTilted, kLagrangian, kDualB}},
               cubic_fns,
               {{"x_radius", 2.0},
                {"x_pad", 0.3},
                {"u_lo", -6.0},
                {"u_hi", 10.0},
                {"translate", 0.25},
                {"y", 1.0},
                {"y_nu", 1.2},
                {"rho_lag", 1.0},
                {"rho_dual", 1.0},
                {"dual_y_lo", -0.5},
                {"dual_y_hi", 1.5}}});

  auto pen_fns = cubic_fns;
  pen_fns["h_nu"] = "hinge:1";
  r.push_back({{"composite-penalty",
                "cubic composite problem with the constraint indicator replaced by nu * hinge",
                {kComposite, kLagrangian, kDualA, kDualB, "weak_duality"},
                {kComposite, kLagrangian, kDualA, kDualB}},
               pen_fns,
               {{"x_radius", 2.0},
                {"u_lo", -5.0},
                {"u_hi", 10.0},
                {"y", 0.5},
                {"rho_lag", 1.0},
                {"rho_dual", 1.0},
                {"dual_y_lo", -0.5},
                {"dual_y_hi", 2.5}}});

  r.push_back({{"constraint-composite",
                "minimize g0 subject to h(G(x)) <= 0 with g0 and G perturbed by O(1/nu)",
                {kConstraintComposite},
                {kConstraintComposite}},
               {{"g0", "poly:0,0,1"}, {"G", "affine:1,0"}, {"h", "poly:-1,0,1"}},
               {{"box", 1.5}, {"shift_g0", 1.0}, {"shift_G", 0.5}}});

  const std::map<std::string, std::string> amb_fns{{"g0", "const:0"}, {"g1", "poly:0,0,1"}, {"g2", "poly:1,-2,1"}};
  const std::map<std::string, double> amb_params{{"p1", 0.5},
                                                 {"p_shift", 0.5},
                                                 {"theta", 0.0},
                                                 {"theta_shift", 0.0},
                                                 {"x_lo", -1.0},
                                                 {"x_hi", 2.0},
                                                 {"u_box", 1.0},
                                                 {"u_pad", 0.5},
                                                 {"rho_dual", 1.0},
                                                 {"dual_y_radius", 1.5},
                                                 {"closed_form_tol", 1e-3},
                                                 {"seed", 11.0}};
  const std::vector<std::string> amb_checks{kAmbiguity,       kLagrangian, kDualA,        kDualB, "weak_duality",
                                            "closed_form", "exactness", "tightness"};
  const std::vector<std::string> amb_thms{kAmbiguity, kLagrangian, kDualA, kDualB};
  r.push_back({{"ambiguity", "ambiguity over two weights, p moved by p_shift/nu along (1,-1)", amb_checks, amb_thms},
               amb_fns,
               amb_params});
  auto prox_params = amb_params;
  prox_params["theta"] = 1.0;
  prox_params["theta_shift"] = 1.0;
  prox_params["p_shift"] = 0.0;
  r.push_back({{"ambiguity-prox", "ambiguity set with proximal weight theta + theta_shift/nu", amb_checks, amb_thms},
               amb_fns,
               prox_params});

  r.push_back({{"splitting",
                "two-block splitting with weights and the first block perturbed by O(1/nu)",
                {kSplitting, kLagrangian, kDualB, "weak_duality", "closed_form"},
                {kSplitting, kLagrangian, kDualB}},
               {{"g1", "poly:0.04,-0.4,1"}, {"g2", "poly:0.04,0.4,1"}},
               {{"p1", 0.5},
                {"p_shift", 0.1},
                {"g_shift", 0.5},
                {"box", 1.0},
                {"y1", 0.1},
                {"y2", -0.1},
                {"rho_lag", 1.0},
                {"rho_dual", 0.5},
                {"dual_y_radius", 0.6},
                {"closed_form_tol", 1e-3},
                {"seed", 13.0}}});

  r.push_back({{"augmented",
                "cubic composite Rockafellian with proximal augmentation theta + theta_shift/nu",
                {kAugmentation, kDualB, "weak_duality", "tightness"},
                {kAugmentation, kDualB}},
               cubic_fns,
               {{"x_radius", 2.0},
                {"u_lo", -5.0},
                {"u_hi", 10.0},
                {"shift", 1.0},
                {"theta", 1.0},
                {"theta_shift", 1.0},
                {"rho_dual", 1.0},
                {"dual_y_lo", -0.5},
                {"dual_y_hi", 1.5},
                {"cert_gamma", -2.0},
                {"cert_beta", 0.5},
                {"cert_tau", 1.0},
                {"cert_x", 1.0}}});

  r.push_back({{"dual-affine",
                "minimize g0(x) subject to x = 0 with g0 scaled by 1 + theta_shift/nu",
                {kTilted, kLagrangian, kDualA, kDualB, "weak_duality", "duality_gap", "closed_form"},
                {kTilted, kLagrangian, kDualA, kDualB}},
               {{"g0", "sqnorm:0.5"}},
               {{"theta_shift", 1.0},
                {"box", 2.0},
                {"y", 0.5},
                {"rho_lag", 1.0},
                {"rho_dual", 1.0},
                {"dual_y_radius", 1.5},
                {"closed_form_tol", 1e-3},
                {"seed", 17.0}}});
  return r;
}

const std::vector<Entry>& registry_entries() {
  static const std::vector<Entry> r = make_registry();
  return r;
}

const Entry& entry_for(std::string_view id) {
  for (const auto& e : registry_entries())
    if (e.info.id == id) return e;
  throw ConfigError("unknown scenario '" + std::string(id) + "'");
}

// ------------------------------------------------------------------ rows

std::string status_of(ExtReal lhs, ExtReal rhs, double tol) {
  return xr_sub(xr_add(rhs, ExtReal(tol)), lhs).value() >= 0.0 ? "PASS" : "FAIL";
}

// Row asserting lhs <= rhs + tol.
ResultRow check_row(const std::string& scen, int nu, std::string quantity, ExtReal lhs, ExtReal rhs, double tol,
                    std::string note = {}) {
  ResultRow r;
  r.scenario = scen;
  r.nu = nu;
  r.quantity = std::move(quantity);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.slack = xr_sub(xr_add(rhs, ExtReal(tol)), lhs).value();
  r.status = status_of(lhs, rhs, tol);
  r.note = std::move(note);
  return r;
}

ResultRow report_row(const std::string& scen, int nu, const BoundReport& b) {
  ResultRow r;
  r.scenario = scen;
  r.nu = nu;
  r.quantity = b.theorem;
  r.lhs = b.lhs;
  r.rhs = b.rhs;
  r.tol = b.tol;
  r.slack = b.slack;
  r.status = to_string(b.status);
  r.report = b;
  r.note = b.note;
  return r;
}

ResultRow error_row(const std::string& scen, int nu, std::string quantity, std::string note) {
  ResultRow r;
  r.scenario = scen;
  r.nu = nu;
  r.quantity = std::move(quantity);
  r.lhs = ExtReal::pos_inf();
  r.rhs = 0.0;
  r.slack = -kInf;
  r.status = "ERROR";
  r.note = std::move(note);
  return r;
}

// ------------------------------------------------------------------ context

struct Ctx {
  const ScenarioConfig& cfg;
  const Entry& entry;

  const std::string& id() const { return cfg.id; }
  double par(const std::string& k) const { return cfg.params.at(k); }
  Field fn(const std::string& slot) const { return make_field(cfg.functions.at(slot), 1); }
  bool wants(std::string_view check) const {
    return cfg.checks.empty() || std::find(cfg.checks.begin(), cfg.checks.end(), check) != cfg.checks.end();
  }
  double rho() const { return cfg.rho; }
};

Field plus(Field f, double c) {
  if (c == 0.0) return f;
  return [f = std::move(f), c](std::span<const double> x) { return xr_add(f(x), ExtReal(c)); };
}

Field times(Field f, double c) {
  return [f = std::move(f), c](std::span<const double> x) { return xr_scale(c, f(x)); };
}

Grid line(double lo, double hi, double step) { return Grid({Axis::with_step(lo, hi, step)}); }

GriddedFunction indicator_table(const BoxSet& X, const Grid& g) {
  return grid_sample([&](std::span<const double> x) { return X.contains(x) ? ExtReal(0.0) : ExtReal::pos_inf(); },
                     g);
}

// Runs per_nu for each nu in parallel and appends the rows in nu order.
void sweep(const ScenarioConfig& cfg, const std::function<void(int, Rows&)>& per_nu, Rows& out) {
  std::vector<Rows> parts(cfg.nu_list.size());
  parallel_for(
      cfg.nu_list.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) per_nu(cfg.nu_list[k], parts[k]);
      },
      1);
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
}

double max_abs_on(const GriddedFunction& g) {
  double m = 0.0;
  for (ExtReal v : g.values())
    if (v.is_finite()) m = std::max(m, std::fabs(v.value()));
  return m;
}

void weak_duality_rows(const Ctx& c, int nu, const DualFunction& psi, ExtReal inf_phi, double tol, Rows& rows,
                       bool with_gap = false) {
  if (!c.wants("weak_duality") && !(with_gap && c.wants("duality_gap"))) return;
  const WeakDualityReport w = weak_duality_check(psi, inf_phi, tol);
  if (w.degenerate) {
    rows.push_back(error_row(c.id(), nu, "weak_duality", "psi has no finite value on the y grid"));
    return;
  }
  if (c.wants("weak_duality")) rows.push_back(check_row(c.id(), nu, "weak_duality", w.sup_psi, inf_phi, tol));
  if (with_gap && c.wants("duality_gap"))
    rows.push_back(check_row(c.id(), nu, "duality_gap", ExtReal(w.gap), ExtReal(0.0), tol));
}

// Degeneracy guard on phi over the x probe: no finite value, or (when the
// probe is a box rather than the constraint set) every minimizer on its
// boundary.
void phi_guard(const Ctx& c, int nu, const RockafellianModel& f, const Grid& xg, bool probe_box, Rows& rows) {
  const ArgminResult a = infimum_argmin(grid_sample([&](std::span<const double> x) { return f.phi(x); }, xg));
  if (!a.inf.is_finite())
    rows.push_back(error_row(c.id(), nu, "phi.domain", "phi has no finite value on the x probe"));
  else if (probe_box && a.on_boundary)
    rows.push_back(error_row(c.id(), nu, "phi.argmin_boundary", "argmin of phi lies on the x probe boundary"));
}

// rho_hat from the quantification rule with K = {0}: the largest |G(x)| over
// table x nodes in X with |x| <= rho and l(x, y) <= rho, plus one u step.
double composite_rho_hat(const ReducedTable& t, const CompositeParams& p, std::span<const double> y, double rho) {
  const LagrangianTable l = lagrangian_table(t, y);
  std::vector<double> x(t.x_grid.dim());
  double delta = 0.0;
  for (std::size_t j = 0; j < t.x_grid.size(); ++j) {
    t.x_grid.point(j, x);
    if (norm2(x) > rho || !p.X.contains(x) || !(l.raw[j] <= ExtReal(rho))) continue;
    double s = 0.0;
    for (const auto& gi : p.G) s += gi(x).value() * gi(x).value();
    delta = std::max(delta, std::sqrt(s));
  }
  return std::max(rho, delta + t.u_grid.max_step());
}

// ------------------------------------------------------------------ cubic family

CompositeParams cubic_params(const Ctx& c, double shift, double translate, const std::string& h_slot = "h",
                             double h_scale = 1.0) {
  const double xr = c.par("x_radius");
  CompositeParams p;
  p.X = BoxSet{{-xr + translate}, {xr + translate}};
  p.g0 = c.fn("g0");
  p.G = {plus(c.fn("g1"), shift)};
  p.h = h_scale == 1.0 ? c.fn(h_slot) : times(c.fn(h_slot), h_scale);
  return p;
}

CompositeTables composite_tables(const CompositeParams& p, const Grid& xg, const Grid& zg) {
  CompositeTables t{indicator_table(p.X, xg), {grid_sample(p.g0, xg)}, grid_sample(p.h, zg)};
  for (const auto& gi : p.G) t.g.push_back(grid_sample(gi, xg));
  return t;
}

void run_cubic_nlp(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho(), xr = c.par("x_radius"), shift = c.par("shift");
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2), s4 = cfg.step_for(4);
  const Grid xg = line(-xr, xr, s1);
  const Grid joint = Grid({Axis::with_step(c.par("u_lo"), c.par("u_hi"), s2), Axis::with_step(-xr, xr, s2)});
  const Grid yg = line(c.par("dual_y_lo"), c.par("dual_y_hi"), s2);
  const std::vector<double> y{c.par("y")};

  const CompositeParams p0 = cubic_params(c, 0.0, 0.0);
  const RockafellianModel f0 = build_composite(p0, 1);
  const GriddedFunction phi = grid_sample([&](std::span<const double> x) { return f0.phi(x); }, xg);
  const GriddedFunction F = tabulate(f0, joint);
  const ReducedTable T = reduce_joint(F, 1);
  const DualFunction psi = dual_numeric(T, yg);

  // Components for the composite bound on the same x grid; the z grid covers
  // rho + sup |g_i| with room to spare.
  const double zr = rho + max_abs_on(grid_sample(p0.G[0], xg)) + std::fabs(shift) + max_abs_on(grid_sample(p0.g0, xg)) + 1.0;
  const Grid zg = line(-zr, zr, s1);
  const CompositeTables C0 = composite_tables(p0, xg, zg);

  const double rho_ineq = c.par("rho_ineq");
  const Grid joint4 = Grid::cube(4, c.par("ineq_box"), s4);
  auto ineq = [&](double sh) { return InequalityParams{p0.g0, {plus(p0.G[0], sh)}}; };
  const Grid xg_ineq = line(-2.0 * rho_ineq - s1, 2.0 * rho_ineq + s1, s1);
  std::optional<GriddedFunction> F4;
  std::vector<GriddedFunction> g_ineq;
  if (c.wants(bound_id::kInequalities)) {
    F4 = tabulate(build_constraint_family(ineq(0.0), 1), joint4);
    g_ineq = {grid_sample(p0.g0, xg_ineq), grid_sample(p0.G[0], xg_ineq)};
  }

  Rows& rows = out.rows;
  const ArgminResult a0 = infimum_argmin(phi);
  phi_guard(c, 0, f0, xg, false, rows);
  if (c.wants("inf_phi"))
    rows.push_back(check_row(c.id(), 0, "inf_phi", ExtReal(std::fabs(a0.inf.value() - c.par("expect_inf_phi"))),
                             ExtReal(c.par("inf_phi_tol")), 0.0, "inf phi = " + a0.inf.str()));

  if (c.wants("exactness")) {
    // Fine x probe and a u axis refined towards 0; refutation rows read
    // lhs = tol, rhs = weakest violation.
    const double hx = 1e-4;
    std::vector<double> xs;
    const auto nx = static_cast<std::size_t>(std::llround(2.0 * xr / hx));
    for (std::size_t i = 0; i <= nx; ++i) xs.push_back(-xr + static_cast<double>(i) * hx);
    ProbeGrid xp({xs});
    ProbeGrid up({ProbeGrid::refined_axis(1.0, 0.05, 0.5, 30)});
    const MinValueTable mv = min_value_table(f0, up, xp);
    ExactnessOptions opt;
    opt.grid_inf_error = hx;
    double weakest = kInf, tol = 0.0;
    const double ymax = c.par("exactness_y_max");
    for (int k = 0; k <= 10; ++k) {
      const ExactnessReport r = check_exactness(mv, MultiplierVector({ymax * k / 10.0}), opt);
      tol = r.tol;
      weakest = std::min(weakest, r.exact ? 0.0 : -r.min_slack);
    }
    rows.push_back(check_row(c.id(), 0, "exactness.refuted", ExtReal(tol), ExtReal(weakest), 0.0,
                             "y in [0, " + std::to_string(static_cast<int>(ymax)) + "]"));
  }

  if (c.wants("closed_form")) {
    const ConjugateTable hc = conjugate_table(C0.h, line(-1.0, 3.0, s1));
    const double ustep = 1e-3;
    const ProbeGrid up(line(c.par("u_lo"), c.par("u_hi"), ustep));
    std::mt19937 rng(static_cast<unsigned>(c.par("seed")));
    std::uniform_real_distribution<double> dx(-xr, xr), dy(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{dx(rng)}, yy{dy(rng)};
      const ExtReal a = lagrangian_composite_closed(p0, hc, x, yy);
      const ExtReal b = lagrangian_numeric(f0, x, yy, up);
      worst = std::max(worst, a == b ? 0.0 : std::fabs(xr_sub(a, b).value()));
    }
    rows.push_back(check_row(c.id(), 0, "closed_form.lagrangian_composite", ExtReal(worst),
                             ExtReal(c.par("closed_form_tol")), 0.0, "20 probes, u step 1e-3"));
    if (rows.back().status != "PASS") return;
  }

  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), rows);

  std::vector<ProfileEntry> prof_f(cfg.nu_list.size()), prof_phi(cfg.nu_list.size());
  auto per_nu = [&](int nu, Rows& r) {
    const double sh = shift / nu;
    const CompositeParams pn = cubic_params(c, sh, 0.0);
    const RockafellianModel fn = build_composite(pn, 1);
    const GriddedFunction phin = grid_sample([&](std::span<const double> x) { return fn.phi(x); }, xg);
    const GriddedFunction Fn = tabulate(fn, joint);
    const std::size_t k = static_cast<std::size_t>(
        std::find(cfg.nu_list.begin(), cfg.nu_list.end(), nu) - cfg.nu_list.begin());
    const double t1 = grid_tol({&xg}), t2 = grid_tol({&joint});

    if (c.wants("inf_phi_nu") && nu >= 2) {
      const ArgminResult an = infimum_argmin(phin);
      r.push_back(check_row(c.id(), nu, "inf_phi_nu.lower", ExtReal(c.par("inf_phi_nu_lower")), an.inf, t1));
    }
    const ExtReal dphi = epi_distance(phi, phin, rho, NormSpec::epigraph(1));
    prof_phi[k] = {nu, dphi};
    if (c.wants("epi_phi"))
      r.push_back(check_row(c.id(), nu, "epi_phi.separation", ExtReal(c.par("epi_phi_lower")), dphi, t1));
    const ExtReal df = epi_distance(F, Fn, rho, NormSpec::epigraph(1, InnerNorm::L2, 1));
    prof_f[k] = {nu, df};
    if (c.wants("epi_f")) r.push_back(check_row(c.id(), nu, "epi_f.distance", df, ExtReal(std::fabs(sh)), t2));

    if (c.wants(bound_id::kMinvalInf) || c.wants(bound_id::kMinvalArgmin) || c.wants(bound_id::kMinvalLevel))
      for (const auto& b : bound_minval(phi, phin, rho, NormSpec::epigraph(1)))
        if (c.wants(b.theorem)) r.push_back(report_row(c.id(), nu, b));
    if (c.wants(bound_id::kTilted)) r.push_back(report_row(c.id(), nu, bound_tilted(F, Fn, 1, y, y, rho)));
    if (c.wants(bound_id::kComposite))
      r.push_back(report_row(c.id(), nu, bound_composite(C0, composite_tables(pn, xg, zg), F, Fn, rho)));
    if (F4) {
      const GriddedFunction F4n = tabulate(build_constraint_family(ineq(sh), 1), joint4);
      const std::vector<GriddedFunction> gn{g_ineq[0], grid_sample(plus(p0.G[0], sh), xg_ineq)};
      r.push_back(report_row(c.id(), nu, bound_inequalities(g_ineq, gn, *F4, F4n, rho_ineq)));
    }
    const bool dual = c.wants(bound_id::kDualA) || c.wants(bound_id::kDualB) || c.wants("weak_duality");
    if (c.wants(bound_id::kLagrangian) || dual) {
      const ReducedTable Tn = reduce_joint(Fn, 1);
      if (c.wants(bound_id::kLagrangian))
        r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y, c.par("rho_lag"))));
      if (dual) {
        const DualFunction psin = dual_numeric(Tn, yg);
        if (c.wants(bound_id::kDualA))
          r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::A)));
        if (c.wants(bound_id::kDualB))
          r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
        weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r);
      }
    }
  };
  sweep(cfg, per_nu, rows);

  const double t2 = grid_tol({&joint}), t1 = grid_tol({&xg});
  out.profiles.push_back({"epi_f", ConvergenceProfile{rho, t2, prof_f, fit_rate(prof_f, t2)}});
  out.profiles.push_back({"epi_phi", ConvergenceProfile{rho, t1, prof_phi, fit_rate(prof_phi, t1)}});
}

void run_composite_translate(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho(), xr = c.par("x_radius"), pad = c.par("x_pad");
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2);
  const Grid xg = line(-xr - pad, xr + pad, s1);
  const Grid joint = Grid({Axis::with_step(c.par("u_lo"), c.par("u_hi"), s2), Axis::with_step(-xr - pad, xr + pad, s2)});
  const Grid yg = line(c.par("dual_y_lo"), c.par("dual_y_hi"), s2);
  const std::vector<double> y{c.par("y")}, y_nu{c.par("y_nu")};
  const double rho_lag = c.par("rho_lag");

  const CompositeParams p0 = cubic_params(c, 0.0, 0.0);
  const GriddedFunction F = tabulate(build_composite(p0, 1), joint);
  const ReducedTable T = reduce_joint(F, 1);
  const DualFunction psi = dual_numeric(T, yg);
  const double zr = rho + max_abs_on(grid_sample(p0.G[0], xg)) + max_abs_on(grid_sample(p0.g0, xg)) + 1.0;
  const Grid zg = line(-zr, zr, s1);
  const CompositeTables C0 = composite_tables(p0, xg, zg);
  const double rh0 = composite_rho_hat(T, p0, y, rho_lag);
  phi_guard(c, 0, build_composite(p0, 1), xg, false, out.rows);

  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), out.rows);
  sweep(cfg,
        [&](int nu, Rows& r) {
          const CompositeParams pn = cubic_params(c, 0.0, c.par("translate") / nu);
          phi_guard(c, nu, build_composite(pn, 1), xg, false, r);
          const GriddedFunction Fn = tabulate(build_composite(pn, 1), joint);
          const ReducedTable Tn = reduce_joint(Fn, 1);
          if (c.wants(bound_id::kComposite))
            r.push_back(report_row(c.id(), nu, bound_composite(C0, composite_tables(pn, xg, zg), F, Fn, rho)));
          if (c.wants(bound_id::kTilted)) r.push_back(report_row(c.id(), nu, bound_tilted(F, Fn, 1, y, y, rho)));
          if (c.wants(bound_id::kLagrangian)) {
            const double rh = std::max(rh0, composite_rho_hat(Tn, pn, y_nu, rho_lag));
            r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y_nu, rho_lag, rh)));
          }
          if (c.wants(bound_id::kDualB) || c.wants("weak_duality")) {
            const DualFunction psin = dual_numeric(Tn, yg);
            if (c.wants(bound_id::kDualB))
              r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
            weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r);
          }
        },
        out.rows);
}

void run_composite_penalty(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho(), xr = c.par("x_radius");
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2);
  const Grid xg = line(-xr, xr, s1);
  const Grid joint = Grid({Axis::with_step(c.par("u_lo"), c.par("u_hi"), s2), Axis::with_step(-xr, xr, s2)});
  const Grid yg = line(c.par("dual_y_lo"), c.par("dual_y_hi"), s2);
  const std::vector<double> y{c.par("y")};
  const double rho_lag = c.par("rho_lag");

  const CompositeParams p0 = cubic_params(c, 0.0, 0.0);
  const GriddedFunction F = tabulate(build_composite(p0, 1), joint);
  const ReducedTable T = reduce_joint(F, 1);
  const DualFunction psi = dual_numeric(T, yg);
  const double zr = rho + max_abs_on(grid_sample(p0.G[0], xg)) + max_abs_on(grid_sample(p0.g0, xg)) + 1.0;
  const Grid zg = line(-zr, zr, s1);
  const CompositeTables C0 = composite_tables(p0, xg, zg);
  const double rh0 = composite_rho_hat(T, p0, y, rho_lag);
  phi_guard(c, 0, build_composite(p0, 1), xg, false, out.rows);

  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), out.rows);
  sweep(cfg,
        [&](int nu, Rows& r) {
          const CompositeParams pn = cubic_params(c, 0.0, 0.0, "h_nu", static_cast<double>(nu));
          const GriddedFunction Fn = tabulate(build_composite(pn, 1), joint);
          const ReducedTable Tn = reduce_joint(Fn, 1);
          if (c.wants(bound_id::kComposite))
            r.push_back(report_row(c.id(), nu, bound_composite(C0, composite_tables(pn, xg, zg), F, Fn, rho)));
          if (c.wants(bound_id::kLagrangian)) {
            const double rh = std::max(rh0, composite_rho_hat(Tn, pn, y, rho_lag));
            r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y, rho_lag, rh)));
          }
          const DualFunction psin = dual_numeric(Tn, yg);
          if (c.wants(bound_id::kDualA))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::A)));
          if (c.wants(bound_id::kDualB))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
          weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r);
        },
        out.rows);
}

void run_constraint_composite(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho(), box = c.par("box");
  const double s1 = cfg.step_for(1), s3 = cfg.step_for(3);
  const Grid joint = Grid::cube(3, box, s3);
  const double xr = rho + std::fabs(c.par("shift_g0")) + 1.0;
  const Grid xg = line(-xr, xr, s1);
  const Field g0 = c.fn("g0"), G = c.fn("G"), h = c.fn("h");
  auto tables = [&](double sg0, double sG) {
    return ConstraintCompositeTables{grid_sample(plus(g0, sg0), xg), {grid_sample(plus(G, sG), xg)}, {Grid(), {}}};
  };
  ConstraintCompositeTables A = tables(0.0, 0.0);
  const double zr = rho + max_abs_on(A.G[0]) + std::fabs(c.par("shift_G")) + 1.0;
  const Grid zg = line(-zr, zr, s1);
  const GriddedFunction H = grid_sample(h, zg);
  A.h = H;
  const RockafellianModel f0 = build_constraint_family(ConstraintCompositeParams{g0, {G}, h}, 1);
  const GriddedFunction F = tabulate(f0, joint);
  phi_guard(c, 0, f0, joint.slice(2, 1), true, out.rows);
  sweep(cfg,
        [&](int nu, Rows& r) {
          if (!c.wants(bound_id::kConstraintComposite)) return;
          const double a = c.par("shift_g0") / nu, b = c.par("shift_G") / nu;
          ConstraintCompositeTables B = tables(a, b);
          B.h = H;
          const GriddedFunction Fn =
              tabulate(build_constraint_family(ConstraintCompositeParams{plus(g0, a), {plus(G, b)}, h}, 1), joint);
          r.push_back(report_row(c.id(), nu, bound_constraint_composite(A, B, F, Fn, rho)));
        },
        out.rows);
}

// ------------------------------------------------------------------ ambiguity

void run_ambiguity(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho();
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2), s3 = cfg.step_for(3);
  const double p1 = c.par("p1"), ps = c.par("p_shift"), th = c.par("theta"), ts = c.par("theta_shift");
  if (p1 < 0.0 || p1 > 1.0 || p1 + ps > 1.0 || p1 + ps < 0.0 || th < 0.0 || th + ts < 0.0)
    throw ConfigError("ambiguity: weights must stay in the simplex and theta >= 0");
  const Grid xg = line(c.par("x_lo"), c.par("x_hi"), s1);
  const Grid xaxis = line(c.par("x_lo"), c.par("x_hi"), s3);
  const Grid yg = Grid::cube(2, c.par("dual_y_radius"), s2);
  // The feasible u box is [-p_1, 0] x [-p_2, 0]; axis i uses step p_i / k so
  // both faces are nodes, padded by u_pad on each side.
  const double pad = c.par("u_pad");
  auto joint_for = [&](const std::vector<double>& p) {
    std::vector<Axis> ax;
    for (double pi : p) {
      const double k = std::round(pi / s3);
      if (k < 1.0) {
        ax.push_back(Axis::with_step(-pad, pad, s3));
        continue;
      }
      const double h = pi / k, a = std::ceil(pad / h);
      ax.push_back(Axis{-pi - a * h, a * h, static_cast<std::size_t>(k + 2.0 * a) + 1});
    }
    return Grid(ax).concat(xaxis);
  };
  auto model = [&](double nu) {
    AmbiguityParams a;
    a.g0 = c.fn("g0");
    a.g = {c.fn("g1"), c.fn("g2")};
    const double d = nu > 0 ? ps / nu : 0.0;
    a.p = {p1 + d, 1.0 - p1 - d};
    a.theta = nu > 0 ? th + ts / nu : th;
    return std::pair{build_ambiguity(a, 1), a};
  };
  const auto [f0, a0] = model(0);
  const Grid joint = joint_for(a0.p);
  const GriddedFunction F = tabulate(f0, joint);
  const ReducedTable T = reduce_joint(F, 1 + 1);
  const DualFunction psi = dual_numeric(T, yg);
  AmbiguityData data;
  data.g = {grid_sample(a0.g[0], xg), grid_sample(a0.g[1], xg)};
  data.p = a0.p;
  data.theta = a0.theta;

  const ProbeGrid xp(xg);
  double eta = 0.0;
  for (const auto& gi : data.g) {
    for (ExtReal v : gi.values()) eta = std::max(eta, -v.value());
  }
  for (ExtReal v : grid_sample(a0.g0, xg).values()) eta = std::max(eta, -v.value());
  const MultiplierVector ysv = ambiguity_support_vector(f0, eta, xp);
  const std::vector<double> y(ysv.values().begin(), ysv.values().end());

  Rows& rows = out.rows;
  phi_guard(c, 0, f0, xg, true, rows);
  if (c.wants("closed_form")) {
    const Grid ug = Grid::cube(2, c.par("u_box"), 0.005);
    const ProbeGrid up(ug);
    std::mt19937 rng(static_cast<unsigned>(c.par("seed")));
    std::uniform_real_distribution<double> dx(c.par("x_lo"), c.par("x_hi")), dy(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{dx(rng)}, yy{dy(rng), dy(rng)};
      const ExtReal a = lagrangian_ambiguity_closed(f0, x, yy);
      const ExtReal b = lagrangian_numeric(f0, x, yy, up);
      worst = std::max(worst, a == b ? 0.0 : std::fabs(xr_sub(a, b).value()));
    }
    rows.push_back(check_row(c.id(), 0, "closed_form.lagrangian_ambiguity", ExtReal(worst),
                             ExtReal(c.par("closed_form_tol")), 0.0, "20 probes, u step 0.005"));
    if (rows.back().status != "PASS") return;
  }
  if (c.wants("exactness")) {
    const ProbeGrid up(Grid::cube(2, 0.5, 0.05));
    const ProbeGrid xq(line(c.par("x_lo"), c.par("x_hi"), 1e-3));
    ExactnessOptions opt;
    double lip = 0.0;
    for (const auto& gi : data.g) lip = std::max(lip, lipschitz_modulus(gi, kInf));
    opt.grid_inf_error = lip * 1e-3;
    const ExactnessReport e = check_exactness(f0, ysv, up, xq, opt);
    rows.push_back(check_row(c.id(), 0, "exactness.support", ExtReal(-e.min_slack), ExtReal(0.0), e.tol,
                             e.exact ? "exact" : "not exact"));
  }
  if (c.wants("tightness")) {
    std::vector<RockafellianModel> models;
    std::vector<MultiplierVector> ys;
    std::vector<std::vector<double>> xs;
    for (int nu : cfg.nu_list) {
      models.push_back(model(nu).first);
      ys.push_back(ysv);
      xs.push_back({0.5});
    }
    const TightnessReport tr = tightness_diagnostic(models, ys, xs, ProbeGrid(Grid::cube(2, c.par("u_box"), s3)), {});
    double worst = 0.0;
    for (const auto& e : tr.entries) worst = std::max(worst, e.argmin_norm);
    rows.push_back(check_row(c.id(), 0, "tightness.empirical", ExtReal(worst), ExtReal(tr.box_radius - tr.margin), 0.0,
                             tr.reason));
  }
  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), rows);

  sweep(cfg,
        [&](int nu, Rows& r) {
          const auto [fn, an] = model(nu);
          const Grid joint_nu = joint_for(an.p);
          const GriddedFunction Fn = tabulate(fn, joint_nu);
          if (c.wants(bound_id::kAmbiguity)) {
            AmbiguityData d = data;
            d.p_nu = an.p;
            d.theta_nu = an.theta;
            r.push_back(report_row(c.id(), nu, bound_ambiguity(d, F, Fn, rho)));
          }
          const ReducedTable Tn = reduce_joint(Fn, 2);
          if (c.wants(bound_id::kLagrangian)) {
            const double rh = std::max({rho, norm2(a0.p), norm2(an.p)});
            r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y, rho, rh)));
          }
          const DualFunction psin = dual_numeric(Tn, yg);
          if (c.wants(bound_id::kDualA))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::A)));
          if (c.wants(bound_id::kDualB))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
          // u = 0 is not a node of the shifted grid; phi comes from the model.
          const ExtReal inf_phi_nu =
              infimum_argmin(grid_sample([&](std::span<const double> x) { return fn.phi(x); }, xaxis)).inf;
          weak_duality_rows(c, nu, psin, inf_phi_nu, grid_tol({&joint_nu, &yg}), r);
        },
        rows);
}

// ------------------------------------------------------------------ splitting

void run_splitting(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho();
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2), s3 = cfg.step_for(3);
  const double p1 = c.par("p1"), ps = c.par("p_shift"), gs = c.par("g_shift");
  const double beta_min = std::min({p1, 1.0 - p1, p1 + ps, 1.0 - p1 - ps});
  if (!(beta_min > 0.0)) throw ConfigError("splitting: weights must stay positive");
  const double box = c.par("box");
  const Grid joint = Grid::cube(2, box, s3).concat(Grid::cube(1, box, s3));
  const Grid yg = Grid::cube(2, c.par("dual_y_radius"), s2);
  const std::vector<double> y{c.par("y1"), c.par("y2")};
  const Field g1 = c.fn("g1"), g2 = c.fn("g2");

  auto model = [&](int nu) {
    SplittingParams s;
    const double d = nu > 0 ? ps / nu : 0.0;
    s.g = {plus(g1, nu > 0 ? gs / nu : 0.0), g2};
    s.p = {p1 + d, 1.0 - p1 - d};
    return std::pair{build_splitting(s, 1), s};
  };
  const auto [f0, sp0] = model(0);
  const GriddedFunction F = tabulate(f0, joint);
  const ReducedTable T = reduce_joint(F, 2);
  const DualFunction psi = dual_numeric(T, yg);

  // Component grid wide enough for rho_bar = max{2 rho, (rho + eta) / beta}.
  double eta = 0.0;
  const Grid probe = line(-4.0 * rho - 2.0, 4.0 * rho + 2.0, s1);
  for (const auto& gi : {g1, g2})
    for (ExtReal v : grid_sample(gi, probe).values()) eta = std::max(eta, -v.value());
  const double xr = std::max(2.0 * rho, (rho + eta) / beta_min) + 1.0;
  const Grid xg = line(-xr, xr, s1);
  SplittingData data;
  data.g = {grid_sample(g1, xg), grid_sample(g2, xg)};
  data.p = sp0.p;

  Rows& rows = out.rows;
  phi_guard(c, 0, f0, joint.slice(2, 1), true, rows);
  if (c.wants("closed_form")) {
    const Grid dual = line(-2.0, 2.0, s1);
    const Grid prim = line(-3.0, 3.0, s1);
    std::vector<ConjugateTable> conj{conjugate_table(grid_sample(g1, prim), dual),
                                     conjugate_table(grid_sample(g2, prim), dual)};
    const ProbeGrid up(Grid::cube(2, 1.5, 0.004));
    std::mt19937 rng(static_cast<unsigned>(c.par("seed")));
    std::uniform_real_distribution<double> dx(-0.5, 0.5), dy(-0.3, 0.3);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{dx(rng)}, yy{dy(rng), dy(rng)};
      const ExtReal a = lagrangian_splitting_closed(f0, conj, x, yy);
      const ExtReal b = lagrangian_numeric(f0, x, yy, up);
      worst = std::max(worst, a == b ? 0.0 : std::fabs(xr_sub(a, b).value()));
    }
    rows.push_back(check_row(c.id(), 0, "closed_form.lagrangian_splitting", ExtReal(worst),
                             ExtReal(c.par("closed_form_tol")), 0.0, "20 probes, u step 0.004"));
    if (rows.back().status != "PASS") return;
  }
  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), rows);

  sweep(cfg,
        [&](int nu, Rows& r) {
          const auto [fn, spn] = model(nu);
          const GriddedFunction Fn = tabulate(fn, joint);
          if (c.wants(bound_id::kSplitting)) {
            SplittingData d = data;
            d.g_nu = {grid_sample(spn.g[0], xg), data.g[1]};
            d.p_nu = spn.p;
            r.push_back(report_row(c.id(), nu, bound_splitting(d, F, Fn, rho)));
          }
          const ReducedTable Tn = reduce_joint(Fn, 2);
          if (c.wants(bound_id::kLagrangian))
            r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y, c.par("rho_lag"))));
          const DualFunction psin = dual_numeric(Tn, yg);
          if (c.wants(bound_id::kDualB))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
          weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r);
        },
        rows);
}

// ------------------------------------------------------------------ augmented

void run_augmented(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho(), xr = c.par("x_radius");
  const double s2 = cfg.step_for(2);
  const Grid joint = Grid({Axis::with_step(c.par("u_lo"), c.par("u_hi"), s2), Axis::with_step(-xr, xr, s2)});
  const Grid yg = line(c.par("dual_y_lo"), c.par("dual_y_hi"), s2);
  const double th = c.par("theta"), ts = c.par("theta_shift");
  if (th <= 0.0 || th + ts <= 0.0) throw ConfigError("augmented: theta must stay positive");
  const AugmentationSpec a0{AugmentationKind::Prox, th};

  const RockafellianModel f0 = build_composite(cubic_params(c, 0.0, 0.0), 1);
  const GriddedFunction F = tabulate(f0, joint);
  const GriddedFunction Fa = augment_table(F, 1, a0);
  const ReducedTable Ta = reduce_joint(Fa, 1);
  const DualFunction psi = dual_numeric(Ta, yg);

  Rows& rows = out.rows;
  phi_guard(c, 0, f0, joint.slice(1, 1), false, rows);
  if (c.wants("tightness")) {
    std::vector<RockafellianModel> models;
    std::vector<MultiplierVector> ys;
    std::vector<std::vector<double>> xs;
    for (int nu : cfg.nu_list) {
      models.push_back(augment(build_composite(cubic_params(c, c.par("shift") / nu, 0.0), 1),
                               {AugmentationKind::Prox, th + ts / nu}));
      ys.push_back(MultiplierVector({0.0}));
      xs.push_back({c.par("cert_x")});
    }
    TightnessOptions opt;
    opt.mode = TightnessMode::Certificate;
    opt.certificate = {CertificateKind::Proximal, c.par("cert_gamma"), c.par("cert_beta"), c.par("cert_tau"), th};
    const TightnessReport tr = tightness_diagnostic(models, ys, xs, ProbeGrid(joint.slice(0, 1)), opt);
    double viol = 0.0;
    for (const auto& e : tr.entries) viol = std::max(viol, e.lower_bound_violation + (e.witness_found ? 0.0 : kInf));
    rows.push_back(check_row(c.id(), 0, "tightness.certificate", ExtReal(viol), ExtReal(0.0), 1e-9, tr.reason));
  }
  weak_duality_rows(c, 0, psi, table_inf_phi(Ta), grid_tol({&joint, &yg}), rows);

  sweep(cfg,
        [&](int nu, Rows& r) {
          const GriddedFunction Fn = tabulate(build_composite(cubic_params(c, c.par("shift") / nu, 0.0), 1), joint);
          const AugmentationSpec an{AugmentationKind::Prox, th + ts / nu};
          if (c.wants(bound_id::kAugmentation))
            r.push_back(report_row(c.id(), nu, bound_augmentation(F, Fn, 1, a0, an, rho)));
          const ReducedTable Tn = reduce_joint(augment_table(Fn, 1, an), 1);
          const DualFunction psin = dual_numeric(Tn, yg);
          if (c.wants(bound_id::kDualB))
            r.push_back(report_row(c.id(), nu, bound_dual(Ta, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
          weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r);
        },
        rows);
}

// ------------------------------------------------------------------ affine dual

void run_dual_affine(const Ctx& c, SweepResult& out) {
  const ScenarioConfig& cfg = c.cfg;
  const double rho = c.rho();
  const double s1 = cfg.step_for(1), s2 = cfg.step_for(2);
  const Grid joint = Grid::cube(2, c.par("box"), s2);
  const Grid yg = Grid::cube(1, c.par("dual_y_radius"), s2);
  const std::vector<double> y{c.par("y")};
  const Field g0 = c.fn("g0");

  auto model = [&](double scale) {
    CompositeParams p;
    p.g0 = times(g0, scale);
    p.G = {[](std::span<const double> x) { return ExtReal(x[0]); }};
    p.h = make_field("ind_zero", 1);
    return build_composite(p, 1);
  };
  const RockafellianModel f0 = model(1.0);
  const GriddedFunction F = tabulate(f0, joint);
  const ReducedTable T = reduce_joint(F, 1);
  const DualFunction psi = dual_numeric(T, yg);

  Rows& rows = out.rows;
  phi_guard(c, 0, f0, joint.slice(1, 1), true, rows);
  if (c.wants("closed_form")) {
    const Grid prim = line(-2.0 * c.par("box"), 2.0 * c.par("box"), s1);
    const ConjugateTable gc = conjugate_table(grid_sample(g0, prim), line(-2.0, 2.0, s1));
    std::mt19937 rng(static_cast<unsigned>(c.par("seed")));
    std::uniform_real_distribution<double> dy(-1.0, 1.0);
    const std::vector<std::vector<double>> A{{1.0}};
    const std::vector<double> b{0.0};
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> yy{dy(rng)};
      const ExtReal a = dual_affine_closed(gc, A, b, yy);
      const ExtReal v = dual_value(T, yy).value;
      worst = std::max(worst, a == v ? 0.0 : std::fabs(xr_sub(a, v).value()));
    }
    rows.push_back(check_row(c.id(), 0, "closed_form.dual_affine", ExtReal(worst), ExtReal(c.par("closed_form_tol")),
                             0.0, "20 probes"));
    if (rows.back().status != "PASS") return;
  }
  weak_duality_rows(c, 0, psi, table_inf_phi(T), grid_tol({&joint, &yg}), rows, true);

  sweep(cfg,
        [&](int nu, Rows& r) {
          const GriddedFunction Fn = tabulate(model(1.0 + c.par("theta_shift") / nu), joint);
          const ReducedTable Tn = reduce_joint(Fn, 1);
          if (c.wants(bound_id::kTilted)) r.push_back(report_row(c.id(), nu, bound_tilted(F, Fn, 1, y, y, rho)));
          if (c.wants(bound_id::kLagrangian))
            r.push_back(report_row(c.id(), nu, bound_lagrangian(T, Tn, y, y, c.par("rho_lag"))));
          const DualFunction psin = dual_numeric(Tn, yg);
          if (c.wants(bound_id::kDualA))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::A)));
          if (c.wants(bound_id::kDualB))
            r.push_back(report_row(c.id(), nu, bound_dual(T, Tn, psi, psin, c.par("rho_dual"), DualMode::B)));
          weak_duality_rows(c, nu, psin, table_inf_phi(Tn), grid_tol({&joint, &yg}), r, true);
        },
        rows);
}

}  // namespace

// ------------------------------------------------------------------ public

double ScenarioConfig::step_for(std::size_t dim) const {
  if (dim <= 1) return grid_step_1d;
  if (dim == 2) return grid_step_2d;
  return 2.0 * grid_step_2d;
}

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> r = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& e : registry_entries()) v.push_back(e.info);
    return v;
  }();
  return r;
}

const ScenarioInfo* find_scenario(std::string_view id) {
  for (const auto& s : scenario_registry())
    if (s.id == id) return &s;
  return nullptr;
}

ScenarioConfig default_config(std::string_view id) {
  const Entry& e = entry_for(id);
  ScenarioConfig cfg;
  cfg.id = e.info.id;
  cfg.functions = e.functions;
  cfg.params = e.params;
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  const Entry& e = entry_for(cfg.id);
  if (cfg.nu_list.empty()) throw ConfigError("nu_list is empty");
  for (std::size_t k = 0; k < cfg.nu_list.size(); ++k) {
    if (cfg.nu_list[k] <= 0) throw ConfigError("nu_list entries must be positive");
    if (k > 0 && cfg.nu_list[k] <= cfg.nu_list[k - 1]) throw ConfigError("nu_list must be strictly increasing");
  }
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) throw ConfigError("rho must be positive");
  for (double s : {cfg.grid_step_1d, cfg.grid_step_2d})
    if (!(s > 0.0) || s > 1.0) throw ConfigError("grid steps must lie in (0, 1]");
  for (const auto& [slot, token] : cfg.functions) {
    if (!e.functions.count(slot)) throw ConfigError("unknown function slot '" + slot + "'");
    if (auto why = token_error(token, 1); !why.empty()) throw ConfigError(why);
  }
  for (const auto& [slot, _] : e.functions)
    if (!cfg.functions.count(slot)) throw ConfigError("missing function slot '" + slot + "'");
  for (const auto& [name, v] : cfg.params) {
    if (!e.params.count(name)) throw ConfigError("unknown parameter '" + name + "'");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + name + "' is not finite");
  }
  for (const auto& [name, _] : e.params)
    if (!cfg.params.count(name)) throw ConfigError("missing parameter '" + name + "'");
  for (const auto& ch : cfg.checks)
    if (std::find(e.info.checks.begin(), e.info.checks.end(), ch) == e.info.checks.end())
      throw ConfigError("scenario '" + cfg.id + "' has no check '" + ch + "'");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
}

ScenarioConfig parse_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw ConfigError("config needs a string field 'id'");
  ScenarioConfig cfg = default_config(j["id"].get<std::string>());
  static const std::set<std::string> known{"id",        "nu_list", "rho",    "grid_step_1d", "grid_step_2d",
                                           "functions", "params",  "checks", "format"};
  try {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!known.count(it.key())) throw ConfigError("unknown config field '" + it.key() + "'");
    if (j.contains("nu_list")) cfg.nu_list = j["nu_list"].get<std::vector<int>>();
    if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
    if (j.contains("grid_step_1d")) cfg.grid_step_1d = j["grid_step_1d"].get<double>();
    if (j.contains("grid_step_2d")) cfg.grid_step_2d = j["grid_step_2d"].get<double>();
    if (j.contains("functions"))
      for (auto it = j["functions"].begin(); it != j["functions"].end(); ++it)
        cfg.functions[it.key()] = it.value().get<std::string>();
    if (j.contains("params"))
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it) cfg.params[it.key()] = it.value().get<double>();
    if (j.contains("checks")) cfg.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("bad config field: ") + ex.what());
  }
  validate(cfg);
  return cfg;
}

int exit_status_of(const std::vector<ResultRow>& rows) {
  bool error = false;
  for (const auto& r : rows) {
    if (r.status == "FAIL") return 1;
    if (r.status == "ERROR") error = true;
  }
  return error ? 3 : 0;
}

SweepResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const Entry& e = entry_for(cfg.id);
  const Ctx c{cfg, e};
  SweepResult out;
  out.scenario = cfg.id;
  static const std::map<std::string, void (*)(const Ctx&, SweepResult&)> runners{
      {"cubic-nlp", run_cubic_nlp},
      {"composite-translate", run_composite_translate},
      {"composite-penalty", run_composite_penalty},
      {"constraint-composite", run_constraint_composite},
      {"ambiguity", run_ambiguity},
      {"ambiguity-prox", run_ambiguity},
      {"splitting", run_splitting},
      {"augmented", run_augmented},
      {"dual-affine", run_dual_affine}};
  runners.at(cfg.id)(c, out);
  out.exit_status = exit_status_of(out.rows);
  return out;
}

}  // namespace epikit
