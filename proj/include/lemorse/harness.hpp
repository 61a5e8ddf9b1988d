#pragma once

// Sweep orchestration: per-instance pipeline with refinement on
// indeterminate signs, a worker pool over (m, p), sweep-level checks and
// artifact output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "lemorse/asymptotics.hpp"
#include "lemorse/error.hpp"
#include "lemorse/limit_problem.hpp"
#include "lemorse/oracle.hpp"
#include "lemorse/problem.hpp"
#include "lemorse/radial_solver.hpp"
#include "lemorse/serialize.hpp"
#include "lemorse/spectral_angular.hpp"
#include "lemorse/spectral_radial.hpp"

namespace lemorse {

struct SweepConfig {
  int dim = 3;
  std::vector<int> nodal_counts{1, 2, 3};
  std::vector<double> p_list;
  /// Richardson base grids tried in order when signs are indeterminate.
  std::vector<std::size_t> grid_sizes{4096, 8192};
  AnnulusMode annulus_mode = AnnulusMode::stabilized;
  /// Used when annulus_mode is explicit_n.
  double explicit_n = 0.0;
  double ivp_tol = 1e-10;
  double eig_tol = 1e-12;
  double margin = 0.0;
  double quad_tol = 1e-13;
  int max_n_refinements = 2;
  int max_p_advances = 1;
  std::size_t workers = 0;  // 0: hardware concurrency
  bool oracle_check = true;
  bool eigenfunctions = false;
  std::string out_dir;

  static std::vector<double> default_p_list(int dim) {
    const double ps = critical_exponent(dim);
    std::vector<double> v;
    for (double e : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) v.push_back(ps - e);
    return v;
  }

  static SweepConfig defaults(int dim = 3) {
    SweepConfig c;
    c.dim = dim;
    c.p_list = default_p_list(dim);
    return c;
  }

  void validate() const {
    auto bad = [](const std::string& w) { throw Error(ErrorKind::invalid_argument, w); };
    if (dim < 3) bad("dim must be >= 3");
    if (nodal_counts.empty()) bad("nodal_counts is empty");
    for (int m : nodal_counts)
      if (m < 1) bad("nodal counts must be >= 1");
    if (p_list.empty()) bad("p_list is empty");
    const double ps = critical_exponent(dim);
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      if (!(p_list[i] > 1.0 && p_list[i] < ps)) bad("p_list entries must lie in (1, p_S)");
      if (i > 0 && !(p_list[i] > p_list[i - 1])) bad("p_list must be strictly increasing");
    }
    if (grid_sizes.empty()) bad("grid_sizes is empty");
    for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
      if (grid_sizes[i] < 8) bad("grid sizes must be >= 8");
      if (i > 0 && !(grid_sizes[i] > grid_sizes[i - 1])) bad("grid_sizes must be increasing");
    }
    if (annulus_mode == AnnulusMode::explicit_n && !(explicit_n >= 2.0))
      bad("explicit annulus needs n >= 2");
    if (!(ivp_tol > 0.0 && eig_tol > 0.0 && quad_tol > 0.0)) bad("tolerances must be positive");
    if (margin < 0.0) bad("margin must be >= 0");
    if (max_n_refinements < 0 || max_p_advances < 0) bad("refinement budgets must be >= 0");
  }
};

inline nlohmann::json to_json(const SweepConfig& c) {
  return {{"dim", c.dim},
          {"nodal_counts", c.nodal_counts},
          {"p_list", c.p_list},
          {"grid_sizes", c.grid_sizes},
          {"annulus_mode", to_string(c.annulus_mode)},
          {"explicit_n", c.explicit_n},
          {"tolerances",
           {{"ivp", c.ivp_tol}, {"eigen", c.eig_tol}, {"margin", c.margin}, {"quadrature", c.quad_tol}}},
          {"max_n_refinements", c.max_n_refinements},
          {"max_p_advances", c.max_p_advances},
          {"oracle_check", c.oracle_check},
          {"eigenfunctions", c.eigenfunctions}};
}

inline AnnulusMode annulus_mode_from_string(const std::string& s) {
  if (s == "explicit_n") return AnnulusMode::explicit_n;
  if (s == "paper_rule") return AnnulusMode::paper_rule;
  if (s == "stabilized") return AnnulusMode::stabilized;
  throw Error(ErrorKind::invalid_argument, "unknown annulus mode '" + s + "'");
}

/// Missing keys take their defaults; p_list defaults only when absent.
inline SweepConfig config_from_json(const nlohmann::json& j) {
  try {
    SweepConfig c;
    c.dim = j.value("dim", 3);
    c.p_list = j.contains("p_list") ? j.at("p_list").get<std::vector<double>>()
                                    : SweepConfig::default_p_list(c.dim);
    if (j.contains("nodal_counts")) c.nodal_counts = j.at("nodal_counts").get<std::vector<int>>();
    if (j.contains("grid_sizes")) c.grid_sizes = j.at("grid_sizes").get<std::vector<std::size_t>>();
    if (j.contains("annulus_mode"))
      c.annulus_mode = annulus_mode_from_string(j.at("annulus_mode").get<std::string>());
    c.explicit_n = j.value("explicit_n", c.explicit_n);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.ivp_tol = t.value("ivp", c.ivp_tol);
      c.eig_tol = t.value("eigen", c.eig_tol);
      c.margin = t.value("margin", c.margin);
      c.quad_tol = t.value("quadrature", c.quad_tol);
    }
    c.max_n_refinements = j.value("max_n_refinements", c.max_n_refinements);
    c.max_p_advances = j.value("max_p_advances", c.max_p_advances);
    c.oracle_check = j.value("oracle_check", c.oracle_check);
    c.eigenfunctions = j.value("eigenfunctions", c.eigenfunctions);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("bad config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

enum class InstanceStatus { resolved, unresolved, failed };

inline const char* to_string(InstanceStatus s) {
  switch (s) {
    case InstanceStatus::resolved: return "resolved";
    case InstanceStatus::unresolved: return "unresolved";
    case InstanceStatus::failed: return "failed";
  }
  return "?";
}

struct RefinementStep {
  std::string stage;  // "grid", "n", "p"
  double p = 0.0;
  double log_n = 0.0;
  std::size_t grid = 0;
  std::string outcome;
};

struct InstanceResult {
  ProblemSpec requested;
  /// Where the reported numbers come from; differs from `requested` only
  /// after a p advance.
  ProblemSpec evaluated;
  InstanceStatus status = InstanceStatus::failed;
  std::string message;
  std::vector<RefinementStep> trail;
  std::vector<std::tuple<double, int, int>> n_trajectory;
  std::shared_ptr<const RadialSolution> base_solution;
  std::shared_ptr<const RadialSolution> solution;
  std::optional<RadialSpectrum> spectrum;
  std::optional<MorseReport> report;
  std::optional<OracleCheck> oracle_weighted, oracle_plain;

  bool resolved() const { return status == InstanceStatus::resolved; }
  bool matched() const { return resolved() && report && report->match; }
  bool p_advanced() const { return evaluated.exponent != requested.exponent; }
};

namespace detail {

inline std::string contributions_text(const std::vector<Contribution>& cs) {
  std::string s;
  for (const auto& c : cs) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(i=%d,k=%d,%.3g+-%.2g)", s.empty() ? "" : " ", c.i, c.k,
                  c.value, c.error);
    s += buf;
  }
  return s;
}

}  // namespace detail

/// solve -> choose n -> spectrum -> combine. Indeterminate signs refine the
/// grid, then n, then move p halfway to p_S; an exhausted budget leaves the
/// instance unresolved. Never throws for numerical trouble.
inline InstanceResult run_instance(const ProblemSpec& requested, const SweepConfig& cfg) {
  InstanceResult res;
  res.requested = requested;
  res.evaluated = requested;
  const double ps = requested.critical();
  double p = requested.exponent;
  try {
    for (int adv = 0; adv <= cfg.max_p_advances; ++adv) {
      if (adv > 0) {
        p += 0.5 * (ps - p);
        res.trail.push_back({"p", p, 0.0, 0, "advanced toward p_S"});
      }
      const auto spec = ProblemSpec::make(requested.dim, p, requested.nodal_count);
      res.evaluated = spec;
      SolveOptions so;
      so.ivp_tol = cfg.ivp_tol;
      auto sol = std::make_shared<const RadialSolution>(solve_m_nodal(spec, so));
      if (adv == 0) res.base_solution = sol;
      res.solution = sol;

      SpectrumOptions spo;
      spo.grid_size = cfg.grid_sizes.front();
      spo.eig_tol = cfg.eig_tol;
      spo.margin = cfg.margin;
      spo.eigenfunctions = cfg.eigenfunctions;

      AnnulusSpec ann;
      if (cfg.annulus_mode == AnnulusMode::explicit_n) {
        ann = AnnulusSpec::from_n(cfg.explicit_n);
      } else {
        ChooseNOptions co;
        co.spectrum = spo;
        try {
          auto ch = choose_n(*sol, cfg.annulus_mode, co);
          ann = ch.annulus;
          res.n_trajectory = ch.trajectory;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::not_converged) throw;
          res.trail.push_back({"n", p, 0.0, spo.grid_size, e.what()});
          continue;
        }
      }

      for (int nref = 0; nref <= cfg.max_n_refinements; ++nref) {
        if (nref > 0) ann.log_n += std::log(2.0);
        std::vector<std::size_t> grids = cfg.grid_sizes;
        if (nref > 0) grids = {cfg.grid_sizes.back()};
        for (std::size_t g : grids) {
          spo.grid_size = g;
          auto sp = radial_spectrum(*sol, ann, spo);
          const char* stage = nref > 0 && g == grids.front() ? "n" : "grid";
          try {
            auto rep = morse_report(*sol, sp, angular_for(sp), cfg.margin);
            if (!rep.indeterminate.empty()) {
              res.trail.push_back({stage, p, ann.log_n, g,
                                   "indeterminate: " + detail::contributions_text(rep.indeterminate)});
              continue;
            }
            res.trail.push_back({stage, p, ann.log_n, g, "resolved"});
            if (cfg.oracle_check) {
              const std::size_t K = sp.weighted.size();
              res.oracle_weighted = oracle_compare(liouville_transform(*sol, ann, g).matrix(), K,
                                                   1e-10, cfg.eig_tol);
              res.oracle_plain = oracle_compare(plain_pencil(*sol, ann, g), K, 1e-10, cfg.eig_tol);
            }
            res.spectrum = std::move(sp);
            res.report = std::move(rep);
            res.status = InstanceStatus::resolved;
            return res;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::indeterminate_sign) throw;
            res.trail.push_back({stage, p, ann.log_n, g, e.what()});
          }
        }
      }
    }
    res.status = InstanceStatus::unresolved;
    res.message = "refinement budget exhausted";
  } catch (const Error& e) {
    res.status = InstanceStatus::failed;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.status = InstanceStatus::failed;
    res.message = e.what();
  }
  return res;
}

inline nlohmann::json to_json(const InstanceResult& r) {
  nlohmann::json trail = nlohmann::json::array();
  for (const auto& s : r.trail)
    trail.push_back({{"stage", s.stage}, {"p", s.p}, {"log_n", s.log_n}, {"grid", s.grid},
                     {"outcome", s.outcome}});
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& [l, a, b] : r.n_trajectory)
    traj.push_back({{"log_n", l}, {"plain", a}, {"weighted", b}});
  nlohmann::json j = {{"requested", io::to_json(r.requested)},
                      {"evaluated", io::to_json(r.evaluated)},
                      {"status", to_string(r.status)},
                      {"message", r.message},
                      {"trail", trail},
                      {"n_trajectory", traj}};
  if (r.solution) j["solution"] = io::to_json(*r.solution);
  if (r.spectrum) j["spectrum"] = io::to_json(*r.spectrum);
  if (r.report) j["report"] = io::to_json(*r.report);
  auto oj = [](const OracleCheck& o) {
    return nlohmann::json{{"compared", o.compared}, {"max_difference", o.max_difference},
                          {"tolerance", o.tolerance}, {"pass", o.pass}};
  };
  if (r.oracle_weighted) j["oracle"]["weighted"] = oj(*r.oracle_weighted);
  if (r.oracle_plain) j["oracle"]["plain"] = oj(*r.oracle_plain);
  return j;
}

// ---------------------------------------------------------------------------

struct AcceptanceCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SweepResult {
  SweepConfig config;
  /// Ordered by (m, p) as listed in the config.
  std::vector<InstanceResult> instances;
  /// Per m: the first p from which every later p matches.
  std::map<int, std::optional<double>> thresholds;
  LimitConstants limits;
  std::map<int, SweepDiagnostics> diagnostics;
  std::vector<AcceptanceCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }

  const InstanceResult& at(int m, std::size_t p_index) const {
    const auto it = std::find(config.nodal_counts.begin(), config.nodal_counts.end(), m);
    if (it == config.nodal_counts.end()) throw Error(ErrorKind::invalid_argument, "m not in sweep");
    const auto mi = static_cast<std::size_t>(it - config.nodal_counts.begin());
    return instances.at(mi * config.p_list.size() + p_index);
  }

  /// "threshold", "locked", "unresolved", "failed", "p_advanced", joined by '|'.
  std::string threshold_flags(const InstanceResult& r) const {
    std::vector<std::string> f;
    const auto th = thresholds.count(r.requested.nodal_count) ? thresholds.at(r.requested.nodal_count)
                                                              : std::nullopt;
    if (th && r.requested.exponent >= *th) f.push_back(r.requested.exponent == *th ? "threshold" : "locked");
    if (r.status == InstanceStatus::unresolved) f.push_back("unresolved");
    if (r.status == InstanceStatus::failed) f.push_back("failed");
    if (r.p_advanced()) f.push_back("p_advanced");
    std::string s;
    for (const auto& x : f) s += (s.empty() ? "" : "|") + x;
    return s.empty() ? "none" : s;
  }
};

namespace detail {

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

inline std::string instance_label(const ProblemSpec& s) {
  return "N=" + std::to_string(s.dim) + " m=" + std::to_string(s.nodal_count) + " p=" +
         fmt("%.4g", s.exponent);
}

inline void sweep_checks(SweepResult& out) {
  const auto& cfg = out.config;
  const int N = cfg.dim;
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  std::string lb, rad, cnt, orc, win;
  for (const auto& r : out.instances) {
    if (!r.resolved()) continue;
    const auto& rep = *r.report;
    const auto& sp = *r.spectrum;
    const auto lab = instance_label(r.evaluated);
    if (rep.morse_index < rep.formula_value) lb += " " + lab;
    if (!rep.radial_consistent) rad += " " + lab;
    if (!rep.counts_equal || !rep.oracle_consistent) cnt += " " + lab;
    if ((r.oracle_weighted && !r.oracle_weighted->pass) || (r.oracle_plain && !r.oracle_plain->pass))
      orc += " " + lab;
    const std::size_t m = static_cast<std::size_t>(r.evaluated.nodal_count);
    const bool inside = sp.weighted[m - 1] < 0.0 && sp.gap_to_limit(m - 1).first > 0.0 &&
                        sp.weighted.size() > m && sp.weighted[m] >= 0.0;
    if (!inside) win += " " + lab;
  }
  add("lower_bound", lb.empty(), lb.empty() ? "no silent violations" : "below m+N(m-1):" + lb);
  add("radial_index", rad.empty(), rad.empty() ? "m_rad = m on all resolved" : "mismatch:" + rad);
  add("count_equality", cnt.empty(),
      cnt.empty() ? "plain = weighted, bisection = oscillation" : "differs:" + cnt);
  if (cfg.oracle_check)
    add("dense_oracle", orc.empty(), orc.empty() ? "bisection matches QL to 1e-10" : "differs:" + orc);
  add("eigenvalue_window", win.empty(),
      win.empty() ? "beta_m in (-(N-1), 0), beta_{m+1} >= 0" : "outside:" + win);

  const std::size_t P = cfg.p_list.size();
  const double pot = 0.25 * N * (N + 2.0);
  const double sob = out.limits.sobolev_energy;
  for (int m : cfg.nodal_counts) {
    const std::string ms = "m=" + std::to_string(m);
    const auto& tight = out.at(m, P - 1);
    add("match_at_tightest " + ms, tight.matched(),
        tight.matched() ? "index " + std::to_string(tight.report->morse_index)
                        : std::string(to_string(tight.status)) + " " + tight.message);

    if (m >= 2 && P >= 3) {
      bool ok = true;
      std::string vals;
      double prev = 0.0;
      for (std::size_t k = P - 3; k < P; ++k) {
        const auto& r = out.at(m, k);
        if (!r.resolved()) {
          ok = false;
          vals += " unresolved";
          continue;
        }
        const double g = std::abs(r.spectrum->gap_to_limit(0).first);
        if (k > P - 3 && !(g < prev)) ok = false;
        prev = g;
        vals += " " + fmt("%.3g", g);
      }
      add("beta1_to_limit " + ms, ok, "|beta_1 + N - 1| over last three:" + vals);
    }

    const auto it = out.diagnostics.find(m);
    if (it == out.diagnostics.end()) {
      add("scaling_trends " + ms, false, "diagnostics unavailable");
      continue;
    }
    const auto& d = it->second;
    std::string bad, info;
    for (const auto& t : d.trends) {
      const bool gated = t.column.rfind("distance", 0) != 0 || t.column == "distance0";
      if (!t.ok) (gated ? bad : info) += " " + t.column;
    }
    add("scaling_trends " + ms, bad.empty(),
        (bad.empty() ? std::string("all gated trends hold") : "violated:" + bad) +
            (info.empty() ? "" : "; not monotone (i >= 1 distance, reported only):" + info));

    const auto& last = d.rows.back();
    bool pf_ok = last.sup_pf <= pot * 1.05;
    if (d.rows.size() >= 3) {
      const std::size_t R = d.rows.size();
      for (std::size_t k = R - 2; k < R; ++k)
        if (!(std::abs(d.rows[k].sup_pf - pot) < std::abs(d.rows[k - 1].sup_pf - pot))) pf_ok = false;
    }
    add("potential_bound " + ms, pf_ok,
        "sup p f = " + fmt("%.5g", last.sup_pf) + " vs N(N+2)/4 = " + fmt("%.5g", pot));

    double worst = 0.0;
    for (double e : last.energies) worst = std::max(worst, std::abs(e / sob - 1.0));
    add("energy_near_sobolev " + ms, worst <= 0.05,
        "max region deviation from S^{N/2} = " + fmt("%.2f", 100.0 * worst) + "%");
  }
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult out;
  out.config = cfg;
  std::vector<ProblemSpec> tasks;
  for (int m : cfg.nodal_counts)
    for (double p : cfg.p_list) tasks.push_back(ProblemSpec::make(cfg.dim, p, m));
  out.instances.resize(tasks.size());

  std::size_t nw = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  nw = std::min(nw, tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) out.instances[i] = run_instance(tasks[i], cfg);
  };
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  const std::size_t P = cfg.p_list.size();
  for (int m : cfg.nodal_counts) {
    std::optional<double> th;
    for (std::size_t k = P; k-- > 0;) {
      if (!out.at(m, k).matched()) break;
      th = cfg.p_list[k];
    }
    out.thresholds[m] = th;
  }

  QuadratureOptions q;
  q.tol = cfg.quad_tol;
  out.limits = limit_constants(cfg.dim, q);

  for (int m : cfg.nodal_counts) {
    std::vector<const RadialSolution*> sols;
    for (std::size_t k = 0; k < P; ++k)
      if (const auto& s = out.at(m, k).base_solution) sols.push_back(s.get());
    if (sols.size() != P || P < 3) continue;
    out.diagnostics[m] = sweep_diagnostics(sols);
  }
  detail::sweep_checks(out);
  return out;
}

// ---------------------------------------------------------------------------

inline std::string file_tag(const ProblemSpec& s) {
  return "N" + std::to_string(s.dim) + "_m" + std::to_string(s.nodal_count) + "_p" +
         detail::fmt("%.6g", s.exponent);
}

inline nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json inst = nlohmann::json::array();
  for (const auto& i : r.instances) {
    nlohmann::json j = {{"spec", io::to_json(i.requested)}, {"status", to_string(i.status)},
                        {"threshold_flags", r.threshold_flags(i)}};
    if (i.report) {
      j["morse_index"] = i.report->morse_index;
      j["formula_value"] = i.report->formula_value;
      j["match"] = i.report->match;
    }
    inst.push_back(j);
  }
  nlohmann::json th = nlohmann::json::object();
  for (const auto& [m, v] : r.thresholds) th[std::to_string(m)] = v ? nlohmann::json(*v) : nlohmann::json();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [m, d] : r.diagnostics) diag[std::to_string(m)] = io::to_json(d);
  return {{"config", to_json(r.config)}, {"instances", inst}, {"thresholds", th},
          {"limits", io::to_json(r.limits)}, {"diagnostics", diag}, {"checks", checks},
          {"ok", r.ok()}};
}

inline std::string summary_csv(const SweepResult& r) {
  std::string s = io::summary_csv_header();
  for (const auto& i : r.instances) {
    if (i.report) {
      s += io::summary_csv_row(*i.report, r.threshold_flags(i));
    } else {
      std::ostringstream os;
      os << i.requested.dim << ',' << i.requested.nodal_count << ',' << io::num(i.requested.exponent)
         << ",,,,"<< i.requested.morse_formula() << ",,false," << r.threshold_flags(i) << '\n';
      s += os.str();
    }
  }
  return s;
}

/// Writes config.json, sweep.json, summary.csv, limits.json, per-instance
/// JSON and profiles, diagnostics CSV and plot data under `dir`.
inline void write_sweep_outputs(const SweepResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "instances");
  fs::create_directories(root / "plot");
  io::write_file((root / "config.json").string(), io::dump(to_json(r.config)));
  io::write_file((root / "sweep.json").string(), io::dump(to_json(r)));
  io::write_file((root / "summary.csv").string(), summary_csv(r));
  io::write_file((root / "limits.json").string(), io::dump(io::to_json(r.limits)));
  for (const auto& i : r.instances) {
    const auto tag = file_tag(i.requested);
    io::write_file((root / "instances" / (tag + ".json")).string(), io::dump(to_json(i)));
    if (i.solution) {
      std::ostringstream os;
      io::write_profile_csv(os, *i.solution);
      io::write_file((root / "instances" / (tag + "_profile.csv")).string(), os.str());
    }
    if (i.spectrum && !i.spectrum->eigenfunctions.empty()) {
      for (std::size_t k = 0; k < i.spectrum->eigenfunctions.size(); ++k) {
        std::ostringstream os;
        io::write_eigenfunction_csv(os, *i.spectrum, k);
        io::write_file((root / "instances" / (tag + "_phi" + std::to_string(k + 1) + ".csv")).string(),
                       os.str());
      }
    }
  }
  for (const auto& [m, d] : r.diagnostics) {
    const std::string ms = "m" + std::to_string(m);
    std::ostringstream os;
    io::write_diagnostics_csv(os, d);
    io::write_file((root / ("diagnostics_" + ms + ".csv")).string(), os.str());
    for (const auto& [name, data] : io::diagnostics_plot_data(d))
      io::write_file((root / "plot" / (ms + "_" + name + ".dat")).string(), data);
  }
}

}  // namespace lemorse
