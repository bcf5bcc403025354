// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epikit/funcgrid.hpp"
#include "oracles.hpp"

using namespace epikit;

namespace {

GriddedFunction sample1(double lo, double hi, double step, const std::function<double(double)>& f) {
  return grid_sample([&](std::span<const double> x) { return ExtReal(f(x[0])); },
                     Grid({Axis::with_step(lo, hi, step)}));
}

oracle::Sampled to_sampled(const GriddedFunction& g) {
  oracle::Sampled s;
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.grid().point(i, x);
    s.x.push_back(x);
    s.v.push_back(g[i].value());
  }
  return s;
}

GriddedFunction random_function(std::mt19937_64& rng, const Grid& grid, double p_inf) {
  std::uniform_real_distribution<double> u(-3, 3), coin(0, 1);
  std::vector<ExtReal> v(grid.size());
  for (auto& e : v) e = coin(rng) < p_inf ? ExtReal::pos_inf() : ExtReal(u(rng));
  return GriddedFunction(grid, std::move(v));
}

}  // namespace

TEST_CASE("sampling and interpolation") {
  Grid g({Axis{-1, 1, 5}, Axis{0, 2, 3}});
  auto f = grid_sample([](std::span<const double> x) { return ExtReal(2 * x[0] - x[1] + 1); }, g);
  CHECK(f.interpolate(std::vector<double>{0.3, 0.7}).value() == doctest::Approx(2 * 0.3 - 0.7 + 1));
  CHECK(f.interpolate(std::vector<double>{1.5, 0.0}).is_pos_inf());
  CHECK_THROWS_AS(grid_sample([](std::span<const double>) { return ExtReal(std::nan("")); }, g),
                  std::domain_error);
  std::vector<ExtReal> vals(g.size(), ExtReal(1.0));
  vals[g.size() - 1] = ExtReal::pos_inf();
  GriddedFunction h(g, vals);
  CHECK(h.interpolate(std::vector<double>{0.9, 1.9}).is_pos_inf());
  CHECK(h.interpolate(std::vector<double>{0.0, 0.0}) == ExtReal(1.0));
  CHECK_THROWS_AS(GriddedFunction(g, std::vector<ExtReal>(3)), std::invalid_argument);
}

TEST_CASE("grid nodes are mirror symmetric") {
  Axis a = Axis::with_step(-2.5, 2.5, 0.01);
  for (std::size_t i = 0; i < a.n; ++i) CHECK(a.at(i) == -a.at(a.n - 1 - i));
  CHECK(a.at(a.n / 2) == 0.0);
}

TEST_CASE("infimum, argmin and level sets") {
  auto g = sample1(-2, 2, 0.01, [](double x) { return (x - 0.5) * (x - 0.5); });
  auto r = infimum_argmin(g, 0.0);
  CHECK(r.inf.value() == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(r.points.size() == 1);
  CHECK(r.points.point(0)[0] == doctest::Approx(0.5));
  CHECK_FALSE(r.on_boundary);
  auto near = infimum_argmin(g, 0.01);
  CHECK(near.points.size() == 21);
  auto lin = sample1(-1, 1, 0.1, [](double x) { return -x; });
  CHECK(infimum_argmin(lin).on_boundary);
  CHECK(level_set(g, 0.25).size() == 101);
  CHECK_THROWS_AS(infimum_argmin(g, -1.0), std::invalid_argument);
}

TEST_CASE("epigraph clouds") {
  std::vector<ExtReal> v{ExtReal::pos_inf(), ExtReal(0.0), ExtReal::pos_inf()};
  GriddedFunction g(Grid({Axis{-1, 1, 3}}), v);
  auto c = epi_cloud(g, 0.0, 1.0, 0.5);
  REQUIRE(c.size() == 3);
  CHECK(c.point(0)[0] == 0.0);
  CHECK(c.point(0)[1] == 0.0);
  CHECK(c.point(1)[1] == 0.5);
  CHECK(c.point(2)[1] == 1.0);
  std::vector<ExtReal> w{ExtReal::neg_inf(), ExtReal(0.0), ExtReal::neg_inf()};
  auto h = epi_cloud(GriddedFunction(g.grid(), w), -1.0, 0.0, 0.5, Orientation::Hypo);
  REQUIRE(h.size() == 3);
  CHECK(h.point(0)[1] == 0.0);
  CHECK(h.point(2)[1] == -1.0);
  CHECK_THROWS_AS(epi_cloud(g, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("conjugates on grids") {
  const double step = 0.01;
  Grid dual({Axis::with_step(-2, 2, step)});

  SUBCASE("half square is self conjugate") {
    auto g = sample1(-4, 4, step, [](double x) { return 0.5 * x * x; });
    auto t = conjugate_table(g, dual);
    std::vector<double> y(1);
    for (std::size_t j = 1; j + 1 < dual.size(); ++j) {
      dual.point(j, y);
      CHECK(std::fabs(t.raw[j].value() - 0.5 * y[0] * y[0]) <= step * step);
      CHECK_FALSE(t.boundary[j]);
    }
  }
  SUBCASE("absolute value maps to the indicator of [-1, 1]") {
    auto g = sample1(-3, 3, step, [](double x) { return std::fabs(x); });
    auto t = conjugate_table(g, dual);
    std::vector<double> y(1);
    for (std::size_t j = 0; j < dual.size(); ++j) {
      dual.point(j, y);
      if (std::fabs(y[0]) <= 1.0 - 1e-9) CHECK(t.extended(j) == ExtReal(0.0));
      if (std::fabs(y[0]) >= 1.0 + 1e-9) CHECK(t.extended(j).is_pos_inf());
    }
  }
  SUBCASE("nonpositive-orthant indicator maps to the nonnegative one") {
    auto g = grid_sample([](std::span<const double> x) { return x[0] <= 0 ? ExtReal(0.0) : ExtReal::pos_inf(); },
                         Grid({Axis::with_step(-3, 3, step)}));
    auto t = conjugate_table(g, dual);
    std::vector<double> y(1);
    for (std::size_t j = 0; j < dual.size(); ++j) {
      dual.point(j, y);
      if (y[0] >= 0) CHECK(t.extended(j) == ExtReal(0.0));
      else CHECK(t.extended(j).is_pos_inf());
    }
  }
  SUBCASE("scaled hinge maps to the indicator of [0, theta]") {
    const double theta = 1.5;
    auto g = sample1(-3, 3, step, [&](double x) { return theta * std::max(0.0, x); });
    auto t = conjugate_table(g, dual);
    std::vector<double> y(1);
    for (std::size_t j = 0; j < dual.size(); ++j) {
      dual.point(j, y);
      if (y[0] >= -1e-12 && y[0] <= theta + 1e-12) CHECK(t.extended(j) == ExtReal(0.0));
      else CHECK(t.extended(j).is_pos_inf());
    }
  }
  SUBCASE("agrees with the direct double loop") {
    auto g = sample1(-2, 2, 0.05, [](double x) { return std::cos(3 * x) + x * x; });
    auto t = conjugate_table(g, dual);
    std::vector<double> xs, gv;
    std::vector<double> x(1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.grid().point(i, x);
      xs.push_back(x[0]);
      gv.push_back(g[i].value());
    }
    std::vector<double> y(1);
    for (std::size_t j = 0; j < dual.size(); j += 7) {
      dual.point(j, y);
      CHECK(t.raw[j].value() == doctest::Approx(oracle::conjugate(xs, gv, y[0])).epsilon(1e-14));
      CHECK(t.at(y).value() == doctest::Approx(t.extended(j).value()).epsilon(1e-14));
    }
  }
}

TEST_CASE("Fenchel-Young and biconjugate bounds (property)") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-1, 1);
  Grid primal({Axis::with_step(-2, 2, 0.02)});
  Grid dual({Axis::with_step(-4, 4, 0.02)});
  for (int t = 0; t < 20; ++t) {
    double a = coef(rng), b = coef(rng), c = coef(rng);
    auto g = grid_sample([&](std::span<const double> x) {
      return ExtReal(a * std::sin(2 * x[0]) + b * x[0] * x[0] + c * std::fabs(x[0]));
    }, primal);
    auto gs = conjugate(g, dual);
    auto gss = conjugate(gs, primal);
    std::vector<double> x(1), y(1);
    for (std::size_t i = 0; i < primal.size(); i += 5) {
      primal.point(i, x);
      CHECK(gss[i].value() <= g[i].value() + 1e-9);
      for (std::size_t j = 0; j < dual.size(); j += 9) {
        dual.point(j, y);
        CHECK(g[i].value() + gs[j].value() >= x[0] * y[0] - 1e-12);
      }
    }
  }
}

TEST_CASE("biconjugate recovers convex samples") {
  const double step = 0.01;
  Grid primal({Axis::with_step(-2, 2, step)});
  Grid dual({Axis::with_step(-3, 3, step)});
  const std::function<double(double)> fs[] = {[](double x) { return 0.5 * x * x; },
                                              [](double x) { return std::fabs(x); },
                                              [](double x) { return std::max(0.0, x); }};
  for (const auto& f : fs) {
    auto g = sample1(-2, 2, step, f);
    auto gss = conjugate(conjugate(g, dual), primal);
    std::vector<double> x(1);
    for (std::size_t i = 0; i < primal.size(); ++i) {
      primal.point(i, x);
      if (std::fabs(x[0]) > 1.5) continue;
      CHECK(std::fabs(gss[i].value() - g[i].value()) <= 2 * step);
    }
  }
}

TEST_CASE("Lipschitz modulus on a ball") {
  auto sq = sample1(-2, 2, 0.01, [](double x) { return x * x; });
  double k = lipschitz_modulus(sq, 1.0);
  CHECK(k <= 2.0 + 0.01 + 1e-9);
  CHECK(k >= 2.0 - 0.02);
  auto lin = sample1(-2, 2, 0.1, [](double x) { return 3 * x - 1; });
  CHECK(lipschitz_modulus(lin, 1.5) == doctest::Approx(3.0));
  std::vector<ExtReal> v(lin.size(), ExtReal(0.0));
  v[lin.size() / 2] = ExtReal::pos_inf();
  CHECK_THROWS_AS(lipschitz_modulus(GriddedFunction(lin.grid(), v), 1.0), std::domain_error);
}

TEST_CASE("vertical shift gives the shift as epigraph distance") {
  const double step = 0.05;
  auto g = sample1(-2, 2, step, [](double) { return 0.0; });
  auto h = sample1(-2, 2, step, [](double) { return 0.25; });
  NormSpec n = NormSpec::epigraph(1);
  double col = epi_distance(g, h, 1.0, n).value();
  CHECK(col == doctest::Approx(0.25));
  double ref = oracle::column_distance(to_sampled(g), to_sampled(h), 1.0, {{1, 2}});
  CHECK(ref == doctest::Approx(0.25));
  auto cg = epi_cloud(g, -2, 2, step), ch = epi_cloud(h, -2, 2, step);
  CHECK(std::fabs(truncated_hausdorff(cg, ch, 1.0, n).value() - 0.25) <= step);
}

TEST_CASE("column kernel agrees with the reference scan") {
  std::mt19937_64 rng(3);
  SUBCASE("1-D") {
    Grid grid({Axis::with_step(-2, 2, 0.1)});
    for (int t = 0; t < 40; ++t) {
      auto g = random_function(rng, grid, 0.3), h = random_function(rng, grid, 0.3);
      double a = epi_distance(g, h, 1.5, NormSpec::epigraph(1)).value();
      double b = oracle::column_distance(to_sampled(g), to_sampled(h), 1.5, {{1, 2}});
      CHECK(std::fabs(a - b) <= 1e-12);
    }
  }
  SUBCASE("2-D sup norm and L1 block, shared and different grids") {
    Grid grid({Axis::with_step(-1, 1, 0.1), Axis::with_step(-1.5, 1.5, 0.15)});
    Grid other({Axis::with_step(-1.2, 0.9, 0.07), Axis::with_step(-1, 1.4, 0.12)});
    NormSpec sup({{1, InnerNorm::L2}, {1, InnerNorm::L2}, {1, InnerNorm::Abs}});
    NormSpec l1({{2, InnerNorm::L1}, {1, InnerNorm::Abs}});
    for (int t = 0; t < 20; ++t) {
      auto g = random_function(rng, grid, 0.5), h = random_function(rng, grid, 0.5);
      auto k = random_function(rng, other, 0.4);
      CHECK(std::fabs(epi_distance(g, h, 1.2, sup).value() -
                      oracle::column_distance(to_sampled(g), to_sampled(h), 1.2, {{1, 2}, {1, 2}})) <= 1e-12);
      CHECK(std::fabs(epi_distance(g, h, 1.2, l1).value() -
                      oracle::column_distance(to_sampled(g), to_sampled(h), 1.2, {{2, 1}})) <= 1e-12);
      CHECK(std::fabs(epi_distance(g, k, 1.0, sup).value() -
                      oracle::column_distance(to_sampled(g), to_sampled(k), 1.0, {{1, 2}, {1, 2}})) <= 1e-12);
    }
  }
  SUBCASE("empty target epigraph") {
    Grid grid({Axis::with_step(-1, 1, 0.5)});
    GriddedFunction g(grid, std::vector<ExtReal>(grid.size(), ExtReal(0.0)));
    GriddedFunction none(grid, std::vector<ExtReal>(grid.size(), ExtReal::pos_inf()));
    CHECK(epi_distance(g, none, 1.0, NormSpec::epigraph(1)).is_pos_inf());
    CHECK(epi_distance(none, none, 1.0, NormSpec::epigraph(1)) == ExtReal(0.0));
  }
}

TEST_CASE("column and cloud distances agree within the vertical sampling step") {
  std::mt19937_64 rng(17);
  Grid grid({Axis::with_step(-2, 2, 0.05)});
  NormSpec n = NormSpec::epigraph(1);
  for (int t = 0; t < 25; ++t) {
    std::uniform_real_distribution<double> a(-1, 1), b(0, 0.5);
    double c0 = a(rng), c1 = a(rng), s = b(rng);
    auto g = sample1(-2, 2, 0.05, [&](double x) { return c0 * x * x + c1 * x; });
    auto h = sample1(-2, 2, 0.05, [&](double x) { return c0 * x * x + c1 * x + s * std::sin(3 * x); });
    const double astep = 0.01;
    double col = epi_distance(g, h, 1.0, n).value();
    double cl = truncated_hausdorff(epi_cloud(g, -3, 3, astep), epi_cloud(h, -3, 3, astep), 1.0, n).value();
    CHECK(std::fabs(col - cl) <= astep + 1e-12);
  }
}

TEST_CASE("hypograph distance mirrors the epigraph of the negation") {
  std::mt19937_64 rng(8);
  Grid grid({Axis::with_step(-1, 1, 0.1)});
  for (int t = 0; t < 10; ++t) {
    auto g = random_function(rng, grid, 0.0), h = random_function(rng, grid, 0.0);
    CHECK(epi_distance(g, h, 1.0, NormSpec::epigraph(1), Orientation::Hypo) ==
          epi_distance(g.negated(), h.negated(), 1.0, NormSpec::epigraph(1)));
  }
}

TEST_CASE("convergence profile and fitted rate") {
  std::vector<int> nus{1, 2, 4, 8, 16};
  auto g = sample1(-2, 2, 0.01, [](double x) { return x * x; });
  std::vector<GriddedFunction> seq;
  for (int nu : nus) seq.push_back(sample1(-2, 2, 0.01, [nu](double x) { return x * x + 1.0 / nu; }));
  auto p = epi_profile(nus, seq, g, 1.0, NormSpec::epigraph(1), {EpiMethod::Column});
  REQUIRE(p.entries.size() == 5);
  for (std::size_t k = 1; k < p.entries.size(); ++k)
    CHECK(p.entries[k].distance <= p.entries[k - 1].distance);
  REQUIRE(p.fitted_rate.has_value());
  CHECK(*p.fitted_rate == doctest::Approx(-1.0).epsilon(0.2));
  auto pc = epi_profile(nus, seq, g, 1.0, NormSpec::epigraph(1));
  for (std::size_t k = 0; k < p.entries.size(); ++k)
    CHECK(std::fabs(pc.entries[k].distance.value() - p.entries[k].distance.value()) <= 0.01 + 1e-12);
  std::vector<ProfileEntry> flat{{1, ExtReal(0.001)}, {2, ExtReal(0.001)}};
  CHECK_FALSE(fit_rate(flat, 0.02).has_value());
}
