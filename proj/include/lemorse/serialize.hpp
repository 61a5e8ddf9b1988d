#pragma once

// JSON and CSV writers. Output carries no timestamps or host data, so equal
// inputs give byte-identical files.

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lemorse/asymptotics.hpp"
#include "lemorse/error.hpp"
#include "lemorse/limit_problem.hpp"
#include "lemorse/radial_solver.hpp"
#include "lemorse/spectral_angular.hpp"
#include "lemorse/spectral_radial.hpp"

namespace lemorse::io {

using nlohmann::json;

/// Shortest round-trip decimal form.
inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json to_json(const ProblemSpec& s) {
  return {{"dim", s.dim}, {"exponent", s.exponent}, {"nodal_count", s.nodal_count}};
}

/// Sidecar for the profile CSV.
inline json to_json(const RadialSolution& sol) {
  return {{"spec", to_json(sol.spec)},
          {"nodal_radii", sol.nodal.nodal_radii},
          {"critical_radii", sol.nodal.critical_radii},
          {"extrema", sol.nodal.extrema},
          {"extrema_decreasing", sol.nodal.extrema_decreasing},
          {"log_scale", sol.log_scale},
          {"tolerances", {{"ivp", sol.ivp.tol}, {"rho0", sol.ivp.rho0}}}};
}

inline void write_profile_csv(std::ostream& os, const RadialSolution& sol) {
  os << "r,u,du\n";
  const auto& pr = sol.profile;
  for (std::size_t j = 0; j < pr.grid.size(); ++j)
    os << num(pr.grid[j]) << ',' << num(pr.values[j]) << ',' << num(pr.derivatives[j]) << '\n';
}

inline json to_json(const RadialSpectrum& sp) {
  return {{"n", sp.n()},
          {"log_n", sp.log_n},
          {"grid_size", sp.grid_size},
          {"eig_tol", sp.eig_tol},
          {"weighted", sp.weighted},
          {"weighted_error", sp.weighted_error},
          {"plain", sp.plain},
          {"plain_error", sp.plain_error},
          {"negative_counts",
           {{"weighted", sp.negative_count_weighted},
            {"plain", sp.negative_count_plain},
            {"sturm_weighted", sp.sturm_count_weighted},
            {"sturm_plain", sp.sturm_count_plain},
            {"oscillation", sp.oscillation_count}}},
          {"indeterminate_flags",
           {{"weighted", sp.weighted_indeterminate},
            {"plain", sp.plain_indeterminate},
            {"near_limit", sp.weighted_near_limit}}},
          {"limit_gap", {{"value", sp.limit_gap}, {"error", sp.limit_gap_error},
                         {"consistent", sp.limit_gap_consistent}}},
          {"eigenfunction_sign_changes", sp.eigenfunction_sign_changes}};
}

/// Eigenfunction i (0-based) as (r, value).
inline void write_eigenfunction_csv(std::ostream& os, const RadialSpectrum& sp, std::size_t i) {
  if (i >= sp.eigenfunctions.size())
    throw Error(ErrorKind::invalid_argument, "eigenfunction index out of range");
  os << "r,value\n";
  const auto& v = sp.eigenfunctions[i];
  for (std::size_t j = 0; j < v.size(); ++j) os << num(sp.radii[j]) << ',' << num(v[j]) << '\n';
}

inline json to_json(const Contribution& c) {
  return {{"i", c.i}, {"k", c.k}, {"value", c.value}, {"error", c.error},
          {"multiplicity", c.multiplicity}};
}

inline json to_json(const MorseReport& r) {
  json contrib = json::array(), indet = json::array();
  for (const auto& c : r.contributions) contrib.push_back(to_json(c));
  for (const auto& c : r.indeterminate) indet.push_back(to_json(c));
  std::vector<bool> neg(r.beta_plus_lambda1_negative.begin(), r.beta_plus_lambda1_negative.end());
  return {{"spec", to_json(r.spec)},
          {"n", std::exp(r.log_n)},
          {"log_n", r.log_n},
          {"grid_size", r.grid_size},
          {"morse_index", r.morse_index},
          {"formula_value", r.formula_value},
          {"radial_morse_index", r.radial_morse_index},
          {"lower_bound_value", r.lower_bound_value},
          {"contributions", contrib},
          {"indeterminate", indet},
          {"beta_plus_lambda1", r.beta_plus_lambda1},
          {"beta_plus_lambda1_negative", neg},
          {"min_margin_ratio", r.min_margin_ratio},
          {"match", r.match},
          {"radial_consistent", r.radial_consistent},
          {"lower_bound_consistent", r.lower_bound_consistent},
          {"counts_equal", r.counts_equal},
          {"oracle_consistent", r.oracle_consistent},
          {"only_low_modes", r.only_low_modes}};
}

inline const char* summary_csv_header() {
  return "N,m,p,n,grid,morse_index,formula_value,radial_index,match,threshold_flags\n";
}

inline std::string summary_csv_row(const MorseReport& r, const std::string& flags) {
  std::ostringstream os;
  os << r.spec.dim << ',' << r.spec.nodal_count << ',' << num(r.spec.exponent) << ','
     << num(std::exp(r.log_n)) << ',' << r.grid_size << ',' << r.morse_index << ','
     << r.formula_value << ',' << r.radial_morse_index << ',' << (r.match ? "true" : "false")
     << ',' << flags << '\n';
  return os.str();
}

/// Named columns of the diagnostics table, in output order.
inline std::vector<std::pair<std::string, std::vector<double>>> diagnostic_columns(
    const SweepDiagnostics& d) {
  std::vector<std::pair<std::string, std::vector<double>>> cols;
  auto add = [&](const std::string& name, auto get) {
    std::vector<double> v;
    for (const auto& r : d.rows) v.push_back(get(r));
    cols.emplace_back(name, std::move(v));
  };
  add("M0", [](const SweepRow& r) { return r.M0; });
  for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(d.nodal_count); ++j) {
    const std::string s = std::to_string(j + 1);
    add("A" + s, [j](const SweepRow& r) { return r.A[j]; });
    add("B" + s, [j](const SweepRow& r) { return r.B[j]; });
    add("C" + s, [j](const SweepRow& r) { return r.C[j]; });
    add("R" + s, [j](const SweepRow& r) { return r.R[j]; });
    add("M_ratio" + std::to_string(j), [j](const SweepRow& r) { return r.M_ratio[j]; });
  }
  for (std::size_t j = 0; j < static_cast<std::size_t>(d.nodal_count); ++j) {
    const std::string s = std::to_string(j);
    add("distance" + s, [j](const SweepRow& r) { return r.distance_c0[j]; });
    add("distance_d" + s, [j](const SweepRow& r) { return r.distance_c1[j]; });
    add("energy" + s, [j](const SweepRow& r) { return r.energies[j]; });
  }
  add("sup_pf", [](const SweepRow& r) { return r.sup_pf; });
  return cols;
}

inline void write_diagnostics_csv(std::ostream& os, const SweepDiagnostics& d) {
  const auto cols = diagnostic_columns(d);
  os << "p";
  for (const auto& [name, v] : cols) os << ',' << name;
  os << '\n';
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    os << num(d.rows[k].p);
    for (const auto& [name, v] : cols) os << ',' << num(v[k]);
    os << '\n';
  }
}

/// Two-column (p, value) data per diagnostic column.
inline std::map<std::string, std::string> diagnostics_plot_data(const SweepDiagnostics& d) {
  std::map<std::string, std::string> out;
  for (const auto& [name, v] : diagnostic_columns(d)) {
    std::ostringstream os;
    os << "# p " << name << '\n';
    for (std::size_t k = 0; k < d.rows.size(); ++k) os << num(d.rows[k].p) << ' ' << num(v[k]) << '\n';
    out[name] = os.str();
  }
  return out;
}

inline json to_json(const SweepDiagnostics& d) {
  json trends = json::object();
  for (const auto& t : d.trends) trends[t.column] = t.ok;
  json cols = json::object();
  for (const auto& [name, v] : diagnostic_columns(d)) cols[name] = v;
  std::vector<double> ps;
  for (const auto& r : d.rows) ps.push_back(r.p);
  return {{"dim", d.dim}, {"nodal_count", d.nodal_count}, {"p", ps}, {"columns", cols},
          {"trends", trends}, {"all_trends_ok", d.all_trends_ok()}};
}

inline json to_json(const LimitConstants& c) {
  return {{"dim", c.dim},
          {"sobolev_energy", c.sobolev_energy},
          {"sobolev_closed_form", c.sobolev_closed_form},
          {"potential_sup", c.potential_sup},
          {"potential_argmax", c.potential_argmax},
          {"potential_sup_numeric", c.potential_sup_numeric},
          {"potential_argmax_numeric", c.potential_argmax_numeric},
          {"beta_star", c.beta_star},
          {"rayleigh_eta_star", c.rayleigh_eta_star},
          {"rayleigh_error", c.rayleigh_error},
          {"bubble_residual", c.bubble_residual},
          {"eta_star_residual", c.eta_star_residual}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open " + path);
  f << content;
  if (!f) throw Error(ErrorKind::io, "write failed: " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lemorse::io
