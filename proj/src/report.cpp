// SPDX-License-Identifier: MIT
#include "epikit/report.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace epikit {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string num(ExtReal v) { return num(v.value()); }

nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

nlohmann::json jnum(ExtReal v) { return jnum(v.value()); }

nlohmann::json jopt(const std::optional<double>& v) { return v ? jnum(*v) : nlohmann::json(nullptr); }

}  // namespace

const std::string& csv_header() {
  static const std::string h = "scenario,nu,quantity,lhs,rhs,slack,tol,status";
  return h;
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : result.rows)
    os << r.scenario << ',' << r.nu << ',' << r.quantity << ',' << num(r.lhs) << ',' << num(r.rhs) << ','
       << num(r.slack) << ',' << num(r.tol) << ',' << r.status << '\n';
  return os.str();
}

std::string to_json(const SweepResult& result) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& r : result.rows) {
    json j{{"scenario", r.scenario}, {"nu", r.nu},         {"quantity", r.quantity}, {"lhs", jnum(r.lhs)},
           {"rhs", jnum(r.rhs)},     {"slack", jnum(r.slack)}, {"tol", jnum(r.tol)},  {"status", r.status}};
    if (!r.note.empty()) j["note"] = r.note;
    if (r.report) {
      const BoundReport& b = *r.report;
      json radii{{"rho", jnum(b.radii.rho)},
                 {"rho_bar", jopt(b.radii.rho_bar)},
                 {"rho_prime", jopt(b.radii.rho_prime)},
                 {"rho_hat", jopt(b.radii.rho_hat)},
                 {"rho_breve", jopt(b.radii.rho_breve)}};
      json conds = json::array();
      for (const auto& [name, ok] : b.radii.conditions) conds.push_back({{"condition", name}, {"holds", ok}});
      json ingr = json::object();
      for (const auto& [name, v] : b.ingredients) ingr[name] = jnum(v);
      j["radii"] = radii;
      j["conditions"] = conds;
      j["ingredients"] = ingr;
    }
    rows.push_back(std::move(j));
  }
  json profiles = json::object();
  for (const auto& [name, p] : result.profiles) {
    json entries = json::array();
    for (const auto& e : p.entries) entries.push_back({{"nu", e.nu}, {"distance", jnum(e.distance)}});
    profiles[name] = {{"rho", jnum(p.rho)}, {"tol", jnum(p.tol)}, {"entries", entries},
                      {"fitted_rate", jopt(p.fitted_rate)}};
  }
  json out{{"scenario", result.scenario}, {"exit_status", result.exit_status}, {"rows", rows}, {"profiles", profiles}};
  return out.dump(2) + "\n";
}

void emit_results(const SweepResult& result, const std::string& format, const std::string& path) {
  std::string text;
  if (format == "csv")
    text = to_csv(result);
  else if (format == "json")
    text = to_json(result);
  else
    throw std::invalid_argument("unknown output format '" + format + "'");
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace epikit
