// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epikit/lagrangian.hpp"
#include "oracles.hpp"

using namespace epikit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double cubic(double x) { return (x - 1) * (x - 1) * (x + 1); }

ExtReal ind_nonpos(std::span<const double> z) {
  for (double v : z)
    if (v > 0) return ExtReal::pos_inf();
  return 0.0;
}

CompositeParams cubic_params() {
  CompositeParams p;
  p.X = BoxSet{{-2.0}, {2.0}};
  p.g0 = [](std::span<const double> x) { return ExtReal(-x[0]); };
  p.G = {[](std::span<const double> x) { return ExtReal(cubic(x[0])); }};
  p.h = ind_nonpos;
  return p;
}

RockafellianModel ambiguity(double theta) {
  AmbiguityParams p;
  p.g0 = [](std::span<const double> x) { return ExtReal(0.1 * x[0]); };
  p.g = {[](std::span<const double> x) { return ExtReal(x[0] * x[0]); },
         [](std::span<const double> x) { return ExtReal((x[0] - 1) * (x[0] - 1)); }};
  p.p = {0.5, 0.5};
  p.theta = theta;
  return build_ambiguity(p, 1);
}

ProbeGrid uniform_probe(std::vector<std::pair<double, double>> box, double step) {
  std::vector<std::vector<double>> c;
  for (auto [lo, hi] : box) {
    Axis a = Axis::with_step(lo, hi, step);
    std::vector<double> v;
    for (std::size_t i = 0; i < a.n; ++i) v.push_back(a.at(i));
    c.push_back(v);
  }
  return ProbeGrid(c);
}

// Brute-force l(x, y): direct minimum over an explicit u list, no library code.
double brute_lagrangian(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<std::vector<double>>& us, const std::vector<double>& y) {
  double best = kInf;
  for (const auto& u : us) {
    double t = f(u);
    for (std::size_t i = 0; i < u.size(); ++i) t -= y[i] * u[i];
    best = std::min(best, t);
  }
  return best;
}

}  // namespace

TEST_CASE("numeric Lagrangian of the cubic composite") {
  auto f = build_composite(cubic_params(), 1);
  ProbeGrid up = uniform_probe({{-1.0, 4.0}}, 1e-3);
  std::vector<double> one{1.0};
  CHECK(lagrangian_numeric(f, one, std::vector<double>{0.7}, up).value() == doctest::Approx(-1.0));
  auto neg = lagrangian_numeric_detail(f, one, std::vector<double>{-0.5}, up);
  CHECK(neg.boundary);
  CHECK(neg.value.is_neg_inf());
  CHECK(neg.raw.is_finite());

  auto iz = augment(f, {AugmentationKind::IndicatorZero});
  for (double y : {-4.0, 0.0, 3.0}) {
    std::vector<double> x{-1.3};
    CHECK(lagrangian_numeric(iz, x, std::vector<double>{y}, up) == f.phi(x));
  }
  CHECK_THROWS(lagrangian_numeric(f, one, std::vector<double>{1.0}, ProbeGrid{}));
}

TEST_CASE("composite closed form") {
  auto p = cubic_params();
  auto f = build_composite(p, 1);
  auto hz = grid_sample(p.h, Grid({Axis::with_step(-5, 5, 0.01)}));
  auto hc = conjugate_table(hz, Grid({Axis::with_step(-2, 3, 0.01)}));
  CHECK(lagrangian_composite_closed(p, hc, std::vector<double>{1.0}, std::vector<double>{2.0}) == ExtReal(-1.0));
  CHECK(lagrangian_composite_closed(p, hc, std::vector<double>{0.5}, std::vector<double>{-0.5}).is_neg_inf());
  CHECK(lagrangian_composite_closed(p, hc, std::vector<double>{2.5}, std::vector<double>{-0.5}).is_pos_inf());
  CHECK_THROWS_AS(lagrangian_composite_closed(p, hc, std::vector<double>{0.0}, std::vector<double>{4.0}),
                  std::out_of_range);

  ProbeGrid up = uniform_probe({{-2.0, 4.0}}, 1e-3);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dx(-1.5, 1.5), dy(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    std::vector<double> x{dx(rng)}, y{dy(rng)};
    const double closed = lagrangian_composite_closed(p, hc, x, y).value();
    CHECK(closed == doctest::Approx(-x[0] + y[0] * cubic(x[0])).epsilon(1e-12));
    worst = std::max(worst, std::abs(lagrangian_numeric(f, x, y, up).value() - closed));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("ambiguity closed form") {
  SUBCASE("worked value") {
    AmbiguityParams p;
    p.g0 = [](auto) { return ExtReal(0.0); };
    p.g = {[](std::span<const double> x) { return ExtReal(x[0] * x[0]); },
           [](std::span<const double> x) { return ExtReal((x[0] - 1) * (x[0] - 1)); }};
    p.p = {0.5, 0.5};
    auto f = build_ambiguity(p, 1);
    CHECK(lagrangian_ambiguity_closed(f, std::vector<double>{0.0}, std::vector<double>{1.0, 1.0}).value() ==
          doctest::Approx(0.5));
  }
  SUBCASE("both branches against brute force") {
    std::vector<std::vector<double>> us;
    for (double a : oracle::nodes(-0.6, 0.1, 141))
      for (double b : oracle::nodes(-0.6, 0.1, 141)) us.push_back({a, b});
    ProbeGrid up = uniform_probe({{-0.6, 0.1}, {-0.6, 0.1}}, 0.005);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dx(-1.5, 2.0), dy(-0.5, 3.0);
    for (double theta : {0.0, 1.0, 4.0}) {
      auto f = ambiguity(theta);
      double worst = 0.0, worst_lib = 0.0;
      for (int k = 0; k < 30; ++k) {
        std::vector<double> x{dx(rng)}, y{dy(rng), dy(rng)};
        const double g1 = x[0] * x[0], g2 = (x[0] - 1) * (x[0] - 1);
        auto direct = [&](const std::vector<double>& u) {
          if (u[0] > 0 || u[1] > 0 || 0.5 + u[0] < 0 || 0.5 + u[1] < 0) return kInf;
          return 0.1 * x[0] + (0.5 + u[0]) * g1 + (0.5 + u[1]) * g2 + 0.5 * theta * (u[0] * u[0] + u[1] * u[1]);
        };
        const double closed = lagrangian_ambiguity_closed(f, x, y).value();
        worst = std::max(worst, std::abs(brute_lagrangian(direct, us, y) - closed));
        worst_lib = std::max(worst_lib, std::abs(lagrangian_numeric(f, x, y, up).value() - closed));
      }
      // Linear in u for theta = 0 (exact at the grid corners); quadratic otherwise.
      CHECK(worst <= 1e-2);
      CHECK(worst_lib <= 1e-2);
    }
  }
  SUBCASE("zero weight collapses every branch") {
    AmbiguityParams p;
    p.g0 = [](auto) { return ExtReal(0.0); };
    p.g = {[](std::span<const double> x) { return ExtReal(x[0]); }, [](auto) { return ExtReal(5.0); }};
    p.p = {1.0, 0.0};
    p.theta = 1.0;
    auto f = build_ambiguity(p, 1);
    for (double y2 : {-3.0, 0.0, 2.0, 10.0}) {
      // Second term vanishes; first term is x for x <= y1.
      CHECK(lagrangian_ambiguity_closed(f, std::vector<double>{0.2}, std::vector<double>{1.0, y2}).value() ==
            doctest::Approx(0.2));
    }
  }
}

TEST_CASE("splitting closed form") {
  const std::vector<double> c{-0.2, 0.2};
  SplittingParams sp;
  for (double ci : c) sp.g.push_back([ci](std::span<const double> z) { return ExtReal(0.5 * (z[0] - ci) * (z[0] - ci)); });
  sp.p = {0.4, 0.6};
  auto f = build_splitting(sp, 1);
  std::vector<ConjugateTable> conj;
  Grid zg({Axis::with_step(-3, 3, 0.01)});
  for (const auto& g : sp.g) conj.push_back(conjugate_table(grid_sample(g, zg), Grid({Axis::with_step(-2, 2, 0.01)})));

  SUBCASE("single block") {
    SplittingParams one;
    one.g = {[](std::span<const double> z) { return ExtReal(0.5 * z[0] * z[0]); }};
    one.p = {1.0};
    auto f1 = build_splitting(one, 1);
    std::vector<ConjugateTable> c1{conjugate_table(grid_sample(one.g[0], zg), Grid({Axis::with_step(-2, 2, 0.01)}))};
    CHECK(lagrangian_splitting_closed(f1, c1, std::vector<double>{0.0}, std::vector<double>{1.0}).value() ==
          doctest::Approx(-0.5).epsilon(1e-6));
  }
  SUBCASE("zero multipliers give the weighted infima") {
    CHECK(lagrangian_splitting_closed(f, conj, std::vector<double>{0.7}, std::vector<double>{0.0, 0.0}).value() ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("brute force") {
    ProbeGrid up = uniform_probe({{-0.8, 0.8}, {-0.8, 0.8}}, 0.004);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dx(-0.2, 0.2), dy(-0.1, 0.1);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x{dx(rng)}, y{dy(rng), dy(rng)};
      const double closed = lagrangian_splitting_closed(f, conj, x, y).value();
      // Independent value: g_i* (w) = c_i w + w^2 / 2.
      double expect = x[0] * (y[0] + y[1]);
      for (int i = 0; i < 2; ++i) {
        const double w = y[i] / sp.p[i];
        expect -= sp.p[i] * (c[i] * w + 0.5 * w * w);
      }
      CHECK(closed == doctest::Approx(expect).epsilon(1e-4));
      worst = std::max(worst, std::abs(lagrangian_numeric(f, x, y, up).value() - closed));
    }
    CHECK(worst <= 1e-3);
  }
  SUBCASE("zero weight rejected") {
    SplittingParams z = sp;
    z.p = {1.0, 0.0};
    CHECK_THROWS(lagrangian_splitting_closed(build_splitting(z, 1), conj, std::vector<double>{0.0},
                                             std::vector<double>{0.0, 0.0}));
  }
}

TEST_CASE("affine dual") {
  auto g0 = [](std::span<const double> x) { return ExtReal(0.5 * x[0] * x[0]); };
  auto conj = conjugate_table(grid_sample(g0, Grid({Axis::with_step(-3, 3, 0.01)})), Grid({Axis::with_step(-2, 2, 0.01)}));
  const std::vector<std::vector<double>> A{{1.0}};
  CHECK(dual_affine_closed(conj, A, std::vector<double>{0.0}, std::vector<double>{1.0}).value() ==
        doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(dual_affine_closed(conj, A, std::vector<double>{1.0}, std::vector<double>{0.0}).value() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(dual_affine_closed(conj, A, std::vector<double>{0.0}, std::vector<double>{2.5}), std::out_of_range);

  // psi from the joint table of f(u, x) = g0(x) + iota{x + u = 0}.
  CompositeParams p;
  p.g0 = g0;
  p.G = {[](std::span<const double> x) { return ExtReal(x[0]); }};
  p.h = [](std::span<const double> z) { return z[0] == 0.0 ? ExtReal(0.0) : ExtReal::pos_inf(); };
  auto f = build_composite(p, 1);
  Grid joint = Grid::cube(2, 1.0, 0.01);
  auto t = reduce_joint(tabulate(f, joint), 1);
  CHECK(table_inf_phi(t) == ExtReal(0.0));
  Grid yg({Axis::with_step(-0.9, 0.9, 0.05)});
  auto psi = dual_numeric(t, yg);
  std::vector<double> y(1);
  for (std::size_t k = 0; k < yg.size(); ++k) {
    yg.point(k, y);
    CHECK_FALSE(psi.boundary[k]);
    CHECK(psi.value(k).value() ==
          doctest::Approx(dual_affine_closed(conj, A, std::vector<double>{0.0}, y).value()).epsilon(1e-4));
  }
}

TEST_CASE("dual function of the cubic composite") {
  auto f = build_composite(cubic_params(), 1);
  Grid joint({Axis::with_step(-4, 4, 0.02), Axis::with_step(-2, 2, 0.01)});
  auto table = tabulate(f, joint);
  auto t = reduce_joint(table, 1);
  CHECK(table_inf_phi(t) == ExtReal(-1.0));
  auto psi0 = dual_value(t, std::vector<double>{0.0});
  CHECK(psi0.value == ExtReal(-2.0));
  CHECK_FALSE(psi0.boundary);

  Grid yg({Axis::with_step(0.0, 3.0, 0.05)});
  auto psi = dual_numeric(t, yg);
  auto wd = weak_duality_check(psi, table_inf_phi(t), 1e-9);
  CHECK(wd.passed);
  CHECK(wd.sup_psi <= ExtReal(-1.0));
  CHECK_FALSE(wd.degenerate);

  // Negative multipliers push the minimizer to the u-box boundary.
  auto neg = dual_value(t, std::vector<double>{-0.5});
  CHECK(neg.boundary);
  CHECK(neg.value.is_neg_inf());

  // psi <= l(x, y) for every x, and l(x, y) <= f(u, x) - <y, u> for every u.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dy(0.0, 3.0);
  std::vector<double> pt(2);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> y{dy(rng)};
    auto lt = lagrangian_table(t, y);
    const ExtReal ps = dual_value(t, y).value;
    for (std::size_t j = 0; j < lt.values.size(); ++j)
      if (!lt.boundary[j]) CHECK(ps <= lt.values[j]);
    for (std::size_t i = 0; i < table.size(); i += 97) {
      joint.point(i, pt);
      const std::size_t j = i % lt.values.size();
      if (!lt.boundary[j]) CHECK(lt.values[j] <= table[i] + ExtReal(-y[0] * pt[0]));
    }
  }
}

TEST_CASE("weak duality edge cases") {
  auto iz = augment(build_composite(cubic_params(), 1), {AugmentationKind::IndicatorZero});
  Grid joint({Axis::with_step(-1, 1, 0.05), Axis::with_step(-2, 2, 0.01)});
  auto t = reduce_joint(tabulate(iz, joint), 1);
  auto psi = dual_numeric(t, Grid({Axis::with_step(-5, 5, 0.5)}));
  for (std::size_t k = 0; k < psi.raw.size(); ++k) CHECK(psi.value(k) == ExtReal(-1.0));
  auto wd = weak_duality_check(psi, table_inf_phi(t), 1e-9);
  CHECK(wd.passed);
  CHECK(wd.gap == doctest::Approx(0.0));

  auto never = RockafellianModel(1, 1, Family::Custom, [](auto, auto) { return ExtReal::pos_inf(); });
  auto tn = reduce_joint(tabulate(never, Grid::cube(2, 1, 0.5)), 1);
  auto pn = dual_numeric(tn, Grid({Axis::with_step(-1, 1, 0.5)}));
  auto wn = weak_duality_check(pn, table_inf_phi(tn), 1e-9);
  CHECK(wn.passed);
  CHECK(wn.degenerate);
  for (char d : pn.domain()) CHECK(d == 1);
}
