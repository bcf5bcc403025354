// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "epikit/catalog.hpp"
#include "epikit/report.hpp"
#include "epikit/scenarios.hpp"

using namespace epikit;

namespace {

ScenarioConfig small(const std::string& id, std::vector<int> nus = {1, 4, 16}) {
  ScenarioConfig c = default_config(id);
  c.nu_list = std::move(nus);
  return c;
}

double at1(const std::string& token, double x) {
  const double v[1] = {x};
  return make_field(token, 1)(v).value();
}

void set_threads(const char* n) { ::setenv("EPIKIT_THREADS", n, 1); }

}  // namespace

// ------------------------------------------------------------------ catalog

TEST_CASE("catalog: values") {
  CHECK(at1("poly:1,-1,-1,1", 2.0) == doctest::Approx(3.0));  // (x-1)^2 (x+1)
  CHECK(at1("poly:1,-1,-1,1", -1.0) == doctest::Approx(0.0));
  CHECK(at1("const:2.5", -7.0) == 2.5);
  CHECK(at1("affine:-1,0", 3.0) == -3.0);
  CHECK(at1("sqnorm:0.5", 2.0) == 2.0);
  CHECK(at1("hinge:3", -1.0) == 0.0);
  CHECK(at1("hinge:3", 2.0) == 6.0);
  CHECK(at1("abs", -4.0) == 4.0);
  CHECK(std::isinf(at1("ind_nonpos", 0.1)));
  CHECK(at1("ind_nonpos", 0.0) == 0.0);
  CHECK(std::isinf(at1("ind_zero", 1e-9)));
  CHECK(at1("ind_box:-1,1", 1.0) == 0.0);
  CHECK(std::isinf(at1("ind_box:-1,1", 1.5)));
  const double v2[2] = {3.0, -4.0};
  CHECK(make_field("norm2", 2)(v2).value() == 5.0);
  CHECK(make_field("norm1", 2)(v2).value() == 7.0);
  CHECK(make_field("affine:1,2,3", 2)(v2).value() == 3.0 - 8.0 + 3.0);
}

TEST_CASE("catalog: rejected tokens") {
  for (const char* bad : {"poly", "poly:1,x", "const", "const:1,2", "affine:1", "hinge:-1", "ind_box:2,1",
                          "norm2:1", "cubic", "sqnorm:nan", "poly:1,,2"})
    CHECK_MESSAGE(!token_error(bad, 1).empty(), bad);
  CHECK(token_error("poly:1", 2).size() > 0);
  CHECK(token_error("affine:1,2,3", 2).empty());
  CHECK_THROWS_AS(make_field("nope", 1), CatalogError);
}

// ------------------------------------------------------------------ registry and config

TEST_CASE("registry: bound ids are covered exactly") {
  std::set<std::string> ids, covered;
  for (const auto& s : scenario_registry()) {
    CHECK(ids.insert(s.id).second);
    CHECK_FALSE(s.summary.empty());
    for (const auto& t : s.theorems) {
      covered.insert(t);
      CHECK(std::find(s.checks.begin(), s.checks.end(), t) != s.checks.end());
    }
  }
  const auto all = all_bound_ids();
  CHECK(covered == std::set<std::string>(all.begin(), all.end()));
  CHECK(find_scenario("cubic-nlp") != nullptr);
  CHECK(find_scenario("nope") == nullptr);
}

TEST_CASE("config: defaults validate and JSON overrides apply") {
  for (const auto& s : scenario_registry()) CHECK_NOTHROW(validate(default_config(s.id)));
  const auto cfg = parse_config(R"({"id": "cubic-nlp", "nu_list": [1, 3], "rho": 1.5,
      "grid_step_1d": 0.02, "params": {"shift": 2}, "functions": {"g0": "affine:-2,0"},
      "checks": ["epi_f"], "format": "json"})");
  CHECK(cfg.nu_list == std::vector<int>{1, 3});
  CHECK(cfg.rho == 1.5);
  CHECK(cfg.grid_step_1d == 0.02);
  CHECK(cfg.grid_step_2d == 0.05);
  CHECK(cfg.params.at("shift") == 2.0);
  CHECK(cfg.params.at("y") == 1.0);
  CHECK(cfg.functions.at("g0") == "affine:-2,0");
  CHECK(cfg.format == "json");
}

TEST_CASE("config: invalid inputs raise ConfigError") {
  for (const char* bad : {
           R"(not json)",
           R"([1, 2])",
           R"({"nu_list": [1]})",
           R"({"id": "nope"})",
           R"({"id": "cubic-nlp", "nu_list": []})",
           R"({"id": "cubic-nlp", "nu_list": [2, 1]})",
           R"({"id": "cubic-nlp", "nu_list": [0, 1]})",
           R"({"id": "cubic-nlp", "rho": -1})",
           R"({"id": "cubic-nlp", "grid_step_1d": 0})",
           R"({"id": "cubic-nlp", "grid_step_2d": 2})",
           R"({"id": "cubic-nlp", "params": {"bogus": 1}})",
           R"({"id": "cubic-nlp", "params": {"shift": "x"}})",
           R"({"id": "cubic-nlp", "functions": {"g1": "poly:"}})",
           R"({"id": "cubic-nlp", "functions": {"g9": "abs"}})",
           R"({"id": "cubic-nlp", "checks": ["splitting.b"]})",
           R"({"id": "cubic-nlp", "format": "xml"})",
           R"({"id": "cubic-nlp", "extra": 1})",
       })
    CHECK_THROWS_AS_MESSAGE(parse_config(bad), ConfigError, bad);
  CHECK_THROWS_AS(default_config("nope"), ConfigError);
}

TEST_CASE("config: weights leaving the simplex are rejected at run time") {
  auto c = small("ambiguity", {1});
  c.params["p_shift"] = 0.8;
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
  auto s = small("splitting", {1});
  s.params["p_shift"] = 0.5;
  CHECK_THROWS_AS(run_scenario(s), ConfigError);
}

// ------------------------------------------------------------------ runs

TEST_CASE("run: every scenario has no FAIL or ERROR on a short sweep") {
  for (const auto& s : scenario_registry()) {
    const SweepResult r = run_scenario(small(s.id));
    CAPTURE(s.id);
    CHECK(r.exit_status == 0);
    CHECK_FALSE(r.rows.empty());
    std::set<std::string> seen;
    for (const auto& row : r.rows) {
      CAPTURE(row.quantity);
      CAPTURE(row.nu);
      CHECK(row.scenario == s.id);
      CHECK((row.status == "PASS" || row.status == "INAPPLICABLE"));
      seen.insert(row.quantity);
      if (row.report) {
        // A PASS bound has admissible radii and nonnegative slack.
        if (row.status == "PASS") {
          CHECK(row.report->radii.admissible());
          CHECK(row.slack >= 0.0);
        } else {
          CHECK_FALSE(row.report->radii.admissible());
        }
      }
    }
    for (const auto& t : s.theorems) CHECK_MESSAGE(seen.count(t) == 1, t);
  }
}

TEST_CASE("run: rows are ordered by nu with scenario rows first") {
  const SweepResult r = run_scenario(small("dual-affine", {1, 2, 8}));
  int last = 0;
  for (const auto& row : r.rows) {
    CHECK(row.nu >= last);
    last = row.nu;
  }
  CHECK(r.rows.front().nu == 0);
  CHECK(r.rows.back().nu == 8);
}

TEST_CASE("run: output is byte-identical across runs and thread counts") {
  auto cfg = small("cubic-nlp", {1, 2, 4, 8});
  set_threads("1");
  const std::string a = to_csv(run_scenario(cfg));
  set_threads("3");
  const std::string b = to_csv(run_scenario(cfg));
  const std::string c = to_csv(run_scenario(cfg));
  ::unsetenv("EPIKIT_THREADS");
  CHECK(a == b);
  CHECK(b == c);
  auto amb = small("ambiguity", {1, 2, 4});
  set_threads("1");
  const std::string d = to_json(run_scenario(amb));
  set_threads("4");
  const std::string e = to_json(run_scenario(amb));
  ::unsetenv("EPIKIT_THREADS");
  CHECK(d == e);
}

TEST_CASE("run: halving the grid step never turns PASS into FAIL") {
  for (const char* id : {"cubic-nlp", "dual-affine", "composite-translate", "ambiguity-prox"}) {
    auto coarse = small(id, {1, 2, 8});
    auto fine = coarse;
    fine.grid_step_1d /= 2.0;
    fine.grid_step_2d /= 2.0;
    if (std::string(id) == "cubic-nlp") {
      coarse.checks = fine.checks = {"epi_f", "epi_phi", "approx_error.a.inf", "tilted_rockafellian.b",
                                     "composite_haus", "lagrangian_error", "dual_error.a", "dual_error.b"};
    }
    std::map<std::pair<int, std::string>, std::string> before;
    for (const auto& r : run_scenario(coarse).rows) before[{r.nu, r.quantity}] = r.status;
    const auto rows = run_scenario(fine).rows;
    CAPTURE(id);
    CHECK(rows.size() == before.size());
    for (const auto& r : rows) {
      CAPTURE(r.quantity);
      CAPTURE(r.nu);
      const auto it = before.find({r.nu, r.quantity});
      REQUIRE(it != before.end());
      if (it->second == "PASS") CHECK(r.status != "FAIL");
    }
  }
}

TEST_CASE("run: tolerances are active somewhere") {
  // Some bound row sits within ten tolerances of equality, so the sweep is
  // not vacuously loose.
  int tight = 0;
  for (const char* id : {"cubic-nlp", "ambiguity", "constraint-composite"}) {
    for (const auto& r : run_scenario(small(id)).rows)
      if (r.report && r.status == "PASS" && r.lhs.value() > r.rhs.value() - 10.0 * r.tol) ++tight;
  }
  CHECK(tight > 0);
}

TEST_CASE("run: checks filter the emitted quantities") {
  auto cfg = small("cubic-nlp", {2});
  cfg.checks = {"epi_f", "composite_haus"};
  const auto rows = run_scenario(cfg).rows;
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].quantity == "epi_f.distance");
  CHECK(rows[1].quantity == "composite_haus");
}

TEST_CASE("run: cubic sweep matches closed values") {
  const auto r = run_scenario(small("cubic-nlp", {1, 2, 4}));
  for (const auto& row : r.rows) {
    if (row.quantity == "inf_phi") CHECK(row.lhs.value() <= 0.01);
    // Shifting G by 1/nu moves f by exactly 1/nu along u on the table.
    if (row.quantity == "epi_f.distance") CHECK(row.lhs.value() == doctest::Approx(1.0 / row.nu).epsilon(1e-9));
    if (row.quantity == "inf_phi_nu.lower") CHECK(row.rhs.value() >= 1.0);
  }
  REQUIRE(r.profiles.size() == 2);
  CHECK(r.profiles[0].first == "epi_f");
  CHECK(r.profiles[0].second.entries.size() == 3);
  REQUIRE(r.profiles[0].second.fitted_rate.has_value());
  CHECK(*r.profiles[0].second.fitted_rate == doctest::Approx(-1.0).epsilon(0.01));
}

// ------------------------------------------------------------------ exit codes

TEST_CASE("exit codes: FAIL beats ERROR beats clean") {
  ResultRow pass, fail, err;
  pass.status = "PASS";
  fail.status = "FAIL";
  err.status = "ERROR";
  ResultRow inap;
  inap.status = "INAPPLICABLE";
  CHECK(exit_status_of({}) == 0);
  CHECK(exit_status_of({pass, inap}) == 0);
  CHECK(exit_status_of({pass, err}) == 3);
  CHECK(exit_status_of({err, fail}) == 1);
}

TEST_CASE("exit codes: failing closed-form validation aborts the scenario") {
  auto cfg = small("cubic-nlp");
  cfg.params["closed_form_tol"] = 0.0;
  const auto r = run_scenario(cfg);
  CHECK(r.exit_status == 1);
  REQUIRE_FALSE(r.rows.empty());
  CHECK(r.rows.back().quantity == "closed_form.lagrangian_composite");
  CHECK(r.rows.back().status == "FAIL");
}

TEST_CASE("exit codes: a dual with no finite value is a degeneracy") {
  // For y < 0 the cubic dual runs to the lower u-box face at every node.
  auto cfg = small("cubic-nlp", {1, 2});
  cfg.checks = {"weak_duality"};
  cfg.params["dual_y_lo"] = -0.5;
  cfg.params["dual_y_hi"] = -0.1;
  const auto r = run_scenario(cfg);
  CHECK(r.exit_status == 3);
  for (const auto& row : r.rows) CHECK(row.status == "ERROR");
}

TEST_CASE("exit codes: a probe box that cuts off the minimizer is a degeneracy") {
  // phi = (x^2 + (x - 1)^2) / 2 is minimized at 0.5, outside [1, 2].
  auto cfg = small("ambiguity", {1, 2});
  cfg.params["x_lo"] = 1.0;
  const auto r = run_scenario(cfg);
  CHECK(r.exit_status == 3);
  REQUIRE_FALSE(r.rows.empty());
  CHECK(r.rows.front().quantity == "phi.argmin_boundary");
  CHECK(r.rows.front().status == "ERROR");
}

// ------------------------------------------------------------------ report

TEST_CASE("report: empty result is header only") {
  SweepResult r;
  CHECK(to_csv(r) == csv_header() + "\n");
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["rows"].empty());
}

TEST_CASE("report: CSV and JSON agree") {
  const auto res = run_scenario(small("dual-affine", {1, 2}));
  const std::string csv = to_csv(res);
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == res.rows.size() + 1);
  const auto j = nlohmann::json::parse(to_json(res));
  REQUIRE(j["rows"].size() == res.rows.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(j["rows"][i]["quantity"] == res.rows[i].quantity);
    CHECK(j["rows"][i]["status"] == res.rows[i].status);
    if (res.rows[i].report) CHECK(j["rows"][i].contains("radii"));
  }
}

TEST_CASE("report: non-finite values are rendered as strings") {
  SweepResult r;
  r.scenario = "x";
  ResultRow row;
  row.scenario = "x";
  row.nu = 1;
  row.quantity = "q";
  row.lhs = ExtReal::pos_inf();
  row.rhs = ExtReal::pos_inf();
  row.slack = std::numeric_limits<double>::infinity();
  row.tol = 0.125;
  row.status = "PASS";
  r.rows.push_back(row);
  CHECK(to_csv(r) == csv_header() + "\nx,1,q,inf,inf,inf,0.125,PASS\n");
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["rows"][0]["lhs"] == "inf");
  CHECK(j["rows"][0]["tol"] == 0.125);
}

TEST_CASE("report: unwritable path throws") {
  SweepResult r;
  CHECK_THROWS(emit_results(r, "csv", "/nonexistent-dir/out.csv"));
  CHECK_THROWS(emit_results(r, "xml", "-"));
}
