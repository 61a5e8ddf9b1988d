// lemorse: command line front end for the nodal Lane-Emden Morse index library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lemorse.hpp"

using namespace lemorse;
using nlohmann::json;

namespace {

struct Common {
  int dim = 3;
  int m = 1;
  double p = 0.0;
  std::string n = "auto";
  std::size_t grid = 4096;
  double tol_ivp = 1e-10;
  double tol_eig = 1e-12;
  double margin = 0.0;
  std::string out;
  std::string format = "json";
};

void add_instance_flags(CLI::App* sc, Common& c, bool spectral) {
  sc->add_option("--dim", c.dim, "space dimension N >= 3")->capture_default_str();
  sc->add_option("--m", c.m, "number of nodal regions")->capture_default_str();
  sc->add_option("--p", c.p, "exponent, 1 < p < p_S")->required();
  sc->add_option("--tol-ivp", c.tol_ivp, "ODE tolerance")->capture_default_str();
  sc->add_option("--out", c.out, "output directory");
  sc->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  if (!spectral) return;
  sc->add_option("--n", c.n, "annulus size: auto, paper, or a number K >= 2")->capture_default_str();
  sc->add_option("--grid", c.grid, "FD intervals (Richardson uses grid and 2*grid)")
      ->capture_default_str();
  sc->add_option("--tol-eig", c.tol_eig, "bisection tolerance")->capture_default_str();
  sc->add_option("--margin", c.margin, "minimum sign margin")->capture_default_str();
}

void apply_n(SweepConfig& cfg, const std::string& n) {
  if (n == "auto") {
    cfg.annulus_mode = AnnulusMode::stabilized;
  } else if (n == "paper") {
    cfg.annulus_mode = AnnulusMode::paper_rule;
  } else {
    try {
      std::size_t pos = 0;
      cfg.explicit_n = std::stod(n, &pos);
      if (pos != n.size()) throw std::invalid_argument(n);
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "--n expects auto, paper or a number, got '" + n + "'");
    }
    cfg.annulus_mode = AnnulusMode::explicit_n;
  }
}

SweepConfig instance_config(const Common& c) {
  SweepConfig cfg = SweepConfig::defaults(c.dim);
  cfg.nodal_counts = {c.m};
  cfg.p_list = {c.p};
  cfg.grid_sizes = {c.grid, 2 * c.grid};
  cfg.ivp_tol = c.tol_ivp;
  cfg.eig_tol = c.tol_eig;
  cfg.margin = c.margin;
  cfg.workers = 1;
  apply_n(cfg, c.n);
  cfg.validate();
  return cfg;
}

void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  io::write_file((std::filesystem::path(out_dir) / name).string(), content);
  std::cerr << "wrote " << (std::filesystem::path(out_dir) / name).string() << "\n";
}

int cmd_solve(const Common& c) {
  SolveOptions so;
  so.ivp_tol = c.tol_ivp;
  const auto sol = solve_m_nodal(ProblemSpec::make(c.dim, c.p, c.m), so);
  const std::string tag = file_tag(sol.spec);
  if (c.format == "csv") {
    std::ostringstream os;
    io::write_profile_csv(os, sol);
    emit(c.out, tag + "_profile.csv", os.str());
    if (!c.out.empty()) emit(c.out, tag + "_profile.json", io::dump(io::to_json(sol)));
  } else {
    emit(c.out, tag + "_profile.json", io::dump(io::to_json(sol)));
  }
  return 0;
}

int cmd_spectrum(const Common& c) {
  const auto cfg = instance_config(c);
  SolveOptions so;
  so.ivp_tol = c.tol_ivp;
  const auto sol = solve_m_nodal(ProblemSpec::make(c.dim, c.p, c.m), so);
  SpectrumOptions spo;
  spo.grid_size = c.grid;
  spo.eig_tol = c.tol_eig;
  spo.margin = c.margin;
  spo.eigenfunctions = c.format == "csv";
  AnnulusSpec ann;
  if (cfg.annulus_mode == AnnulusMode::explicit_n) {
    ann = AnnulusSpec::from_n(cfg.explicit_n);
  } else {
    ChooseNOptions co;
    co.spectrum = spo;
    ann = choose_n(sol, cfg.annulus_mode, co).annulus;
  }
  const auto sp = radial_spectrum(sol, ann, spo);
  const std::string tag = file_tag(sol.spec);
  emit(c.out, tag + "_spectrum.json", io::dump(io::to_json(sp)));
  if (c.format == "csv") {
    for (std::size_t k = 0; k < sp.eigenfunctions.size(); ++k) {
      std::ostringstream os;
      io::write_eigenfunction_csv(os, sp, k);
      if (c.out.empty()) std::cout << "# phi_" << k + 1 << "\n";
      emit(c.out, tag + "_phi" + std::to_string(k + 1) + ".csv", os.str());
    }
  }
  return 0;
}

int cmd_morse(const Common& c) {
  const auto cfg = instance_config(c);
  const auto r = run_instance(ProblemSpec::make(c.dim, c.p, c.m), cfg);
  const std::string tag = file_tag(r.requested);
  if (c.format == "csv") {
    std::string s = io::summary_csv_header();
    if (r.report) s += io::summary_csv_row(*r.report, to_string(r.status));
    emit(c.out, tag + "_morse.csv", s);
  } else {
    emit(c.out, tag + "_morse.json", io::dump(to_json(r)));
  }
  if (!r.resolved()) {
    std::cerr << "instance " << to_string(r.status) << ": " << r.message << "\n";
    return 2;
  }
  return 0;
}

int cmd_limits(const std::vector<int>& dims, double quad_tol, const std::string& out) {
  json j = json::array();
  QuadratureOptions q;
  q.tol = quad_tol;
  for (int d : dims) j.push_back(io::to_json(limit_constants(d, q)));
  emit(out, "limits.json", io::dump(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse index of nodal radial Lane-Emden solutions"};
  app.require_subcommand(1);

  Common solve_c, spec_c, morse_c;
  auto* solve = app.add_subcommand("solve", "profile and nodal data of the m-nodal solution");
  add_instance_flags(solve, solve_c, false);
  auto* spectrum = app.add_subcommand("spectrum", "radial eigenvalues on the annulus");
  add_instance_flags(spectrum, spec_c, true);
  auto* morse = app.add_subcommand("morse", "Morse index report for one instance");
  add_instance_flags(morse, morse_c, true);

  auto* sweep = app.add_subcommand("sweep", "full verification sweep over m and p");
  std::string config_path, sweep_out, sweep_n = "auto", sweep_format = "json";
  int sweep_dim = 3;
  std::vector<int> sweep_m;
  std::vector<double> p_list;
  std::vector<std::size_t> sweep_grids;
  double s_tol_ivp = 0, s_tol_eig = 0, s_margin = -1;
  std::size_t workers = 0;
  sweep->add_option("--config", config_path, "JSON config mirroring SweepConfig");
  sweep->add_option("--dim", sweep_dim, "space dimension N >= 3");
  sweep->add_option("--m", sweep_m, "nodal counts (default 1 2 3)");
  sweep->add_option("--p-list", p_list, "increasing exponents below p_S");
  sweep->add_option("--n", sweep_n, "annulus size: auto, paper, or K");
  sweep->add_option("--grid", sweep_grids, "increasing FD grid sizes");
  sweep->add_option("--tol-ivp", s_tol_ivp, "ODE tolerance");
  sweep->add_option("--tol-eig", s_tol_eig, "bisection tolerance");
  sweep->add_option("--margin", s_margin, "minimum sign margin");
  sweep->add_option("--workers", workers, "worker threads (0: all cores)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--format", sweep_format, "json or csv for stdout")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* limits = app.add_subcommand("limits", "limit-problem constants and residuals");
  std::vector<int> limit_dims{3, 4, 5, 6};
  double quad_tol = 1e-13;
  std::string limits_out;
  limits->add_option("--dim", limit_dims, "dimensions")->capture_default_str();
  limits->add_option("--tol-quad", quad_tol, "quadrature tolerance")->capture_default_str();
  limits->add_option("--out", limits_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_c);
    if (*spectrum) return cmd_spectrum(spec_c);
    if (*morse) return cmd_morse(morse_c);
    if (*limits) return cmd_limits(limit_dims, quad_tol, limits_out);
    if (*sweep) {
      SweepConfig cfg = SweepConfig::defaults(sweep_dim);
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw Error(ErrorKind::io, "cannot read " + config_path);
        cfg = config_from_json(json::parse(f, nullptr, true, true));
      }
      if (sweep->count("--dim")) {
        cfg.dim = sweep_dim;
        if (!sweep->count("--p-list")) cfg.p_list = SweepConfig::default_p_list(sweep_dim);
      }
      if (!sweep_m.empty()) cfg.nodal_counts = sweep_m;
      if (sweep->count("--p-list")) cfg.p_list = p_list;
      if (sweep->count("--n")) apply_n(cfg, sweep_n);
      if (!sweep_grids.empty()) cfg.grid_sizes = sweep_grids;
      if (s_tol_ivp > 0) cfg.ivp_tol = s_tol_ivp;
      if (s_tol_eig > 0) cfg.eig_tol = s_tol_eig;
      if (s_margin >= 0) cfg.margin = s_margin;
      if (sweep->count("--workers")) cfg.workers = workers;
      cfg.validate();
      const auto r = run_sweep(cfg);
      if (!sweep_out.empty()) {
        write_sweep_outputs(r, sweep_out);
        std::cerr << "wrote " << sweep_out << "\n";
      }
      if (sweep_format == "csv")
        std::cout << summary_csv(r);
      else
        std::cout << io::dump(to_json(r));
      for (const auto& c : r.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      return r.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
