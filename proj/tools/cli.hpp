// Copyright 2026 The rcar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate / estimate / test / density / study.
// Exit codes: 0 success, 1 domain or estimation error, 2 bad usage.

#ifndef RCAR_TOOLS_CLI_HPP_
#define RCAR_TOOLS_CLI_HPP_

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcar/rcar.hpp"

namespace rcar::cli {

namespace detail {

// Runs `body` with an output stream: stdout for "-", else the named file.
inline void with_output(const std::string& path, std::ostream& fallback,
                        const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  body(f);
  if (!f) throw IoError("write failed for " + path);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  return f;
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-coefficient AR(1) panels: simulation, estimation and tests", "rcar"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a panel and write it as CSV");
  std::size_t sim_N = 250, sim_n = 817, burnin_cap = 100000;
  std::string sim_coeff = "sqrt-beta:2,1.4", sim_innov = "normal", sim_out = "-", sim_meta;
  double sim_b = 0.0, burnin_eps = 1e-9;
  std::uint64_t sim_seed = 1;
  sim->add_option("--N", sim_N, "Number of series")->check(CLI::PositiveNumber);
  sim->add_option("--n", sim_n, "Observations per series")->check(CLI::PositiveNumber);
  sim->add_option("--coeff", sim_coeff,
                  "Coefficient law: beta:A,B | sqrt-beta:A,B | point:A0 | uniform:LO,HI");
  sim->add_option("--shock-b", sim_b, "Common-shock weight b in [0,1]");
  sim->add_option("--innov", sim_innov, "Innovations: normal | student-t:DF");
  sim->add_option("--seed", sim_seed, "Seed");
  sim->add_option("--burnin-eps", burnin_eps, "Burn-in tolerance");
  sim->add_option("--burnin-cap", burnin_cap, "Maximum burn-in length");
  sim->add_option("--out", sim_out, "Panel CSV path ('-' for stdout)");
  sim->add_option("--meta", sim_meta, "Sidecar metadata path (default: <out>.meta)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Lag-1 autocorrelation of each series");
  std::string est_panel, est_out = "-", est_kind = "centered";
  est->add_option("--panel", est_panel, "Panel CSV")->required();
  est->add_option("--estimator", est_kind, "centered | zero_mean (series mean known to be 0)")
      ->check(CLI::IsMember({"centered", "zero_mean"}));
  est->add_option("--out", est_out, "Coefficient CSV path ('-' for stdout)");

  // test
  auto* tst = app.add_subcommand("test", "Goodness-of-fit test on estimated coefficients");
  std::string tst_coeffs, tst_null = "sqrt-beta", tst_method = "t1", tst_out = "-",
                          tst_boot = "coefficient";
  double tst_alpha = 2.0, tst_beta = 1.4, tst_a0 = 0.0;
  std::optional<double> tst_lo, tst_hi;
  double tst_level = 0.05, tst_b = 0.0;
  std::optional<double> tst_kappa;
  std::size_t tst_mc = 1000, tst_n = 0;
  std::uint64_t tst_seed = 1;
  tst->add_option("--coeffs", tst_coeffs, "Coefficient CSV (series,a_hat)")->required();
  tst->add_option("--null", tst_null, "Null law: beta | sqrt-beta | uniform | point")
      ->check(CLI::IsMember({"beta", "sqrt-beta", "uniform", "point"}));
  tst->add_option("--method", tst_method, "t1 (simple KS) | t1-composite | t2 (parametric)")
      ->check(CLI::IsMember({"t1", "t1-composite", "t2"}));
  tst->add_option("--alpha", tst_alpha, "Beta shape alpha of the null");
  tst->add_option("--beta", tst_beta, "Beta shape beta of the null");
  tst->add_option("--a0", tst_a0, "Point-mass location");
  tst->add_option("--lo", tst_lo, "Uniform lower end");
  tst->add_option("--hi", tst_hi, "Uniform upper end");
  tst->add_option("--level", tst_level, "Significance level");
  tst->add_option("--mc-reps", tst_mc, "Monte Carlo replications (t1-composite)");
  tst->add_option("--seed", tst_seed, "Seed for Monte Carlo replications");
  tst->add_option("--bootstrap", tst_boot, "coefficient | full-panel (t1-composite)")
      ->check(CLI::IsMember({"coefficient", "full-panel"}));
  tst->add_option("--shock-b", tst_b, "Common-shock weight for full-panel replications");
  tst->add_option("--n", tst_n, "Series length (default kappa, full-panel replications)");
  tst->add_option("--kappa", tst_kappa, "Truncation for t2 (default 1/(2 sqrt(n)) or 0.01)");
  tst->add_option("--out", tst_out, "Result CSV path ('-' for stdout)");

  // density
  auto* den = app.add_subcommand("density", "Kernel density estimate of the coefficient law");
  std::string den_coeffs, den_kernel = "epanechnikov", den_out = "-";
  std::optional<double> den_h;
  double den_c = 1.0, den_from = -1.0, den_to = 1.0;
  std::size_t den_points = 201;
  den->add_option("--coeffs", den_coeffs, "Coefficient CSV (series,a_hat)")->required();
  den->add_option("--kernel", den_kernel, "epanechnikov | triangular | quartic")
      ->check(CLI::IsMember({"epanechnikov", "triangular", "quartic"}));
  den->add_option("--bandwidth", den_h, "Bandwidth h (overrides --bw-const)");
  den->add_option("--bw-const", den_c, "c in h = c N^(-1/5)");
  den->add_option("--from", den_from, "Grid start");
  den->add_option("--to", den_to, "Grid end");
  den->add_option("--points", den_points, "Grid size")->check(CLI::Range(2, 10000000));
  den->add_option("--out", den_out, "Curve CSV path ('-' for stdout)");

  // study
  auto* stu = app.add_subcommand("study", "Run the T1/T2 simulation study");
  std::string stu_config, stu_out_dir;
  bool stu_full = false, stu_serial = false;
  std::optional<unsigned> stu_workers;
  stu->add_option("--config", stu_config, "Study config file")->required();
  stu->add_flag("--full", stu_full, "5000 replications over the full design");
  stu->add_option("--workers", stu_workers, "Worker threads (default RCAR_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  stu->add_flag("--serial", stu_serial, "Single worker");
  stu->add_option("--out-dir", stu_out_dir, "Override out_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sim) {
      PanelConfig cfg;
      cfg.N = sim_N;
      cfg.n = sim_n;
      cfg.coeff = parse_coeff_dist(sim_coeff);
      cfg.shock_b = sim_b;
      cfg.innov = parse_innov_dist(sim_innov);
      cfg.burnin_eps = burnin_eps;
      cfg.burnin_cap = burnin_cap;
      cfg.seed = sim_seed;
      const Panel panel = simulate_panel(cfg);
      for (const auto& w : panel.warnings) err << "warning: " << w << '\n';
      detail::with_output(sim_out, out, [&](std::ostream& o) { write_panel_csv(o, panel); });
      std::string meta = sim_meta;
      if (meta.empty() && sim_out != "-" && !sim_out.empty()) meta = sim_out + ".meta";
      if (!meta.empty()) {
        detail::with_output(meta, out,
                            [&](std::ostream& o) { write_panel_metadata(o, panel); });
      }
    } else if (*est) {
      auto in = detail::open_input(est_panel);
      const Panel panel = read_panel_csv(in);
      const Ecdf e = estimate_coeffs(panel, parse_autocorr_estimator(est_kind));
      detail::with_output(est_out, out, [&](std::ostream& o) { write_coeffs_csv(o, e); });
    } else if (*tst) {
      auto in = detail::open_input(tst_coeffs);
      const Ecdf e = read_coeffs_csv(in);
      GofResult result;
      if (tst_null == "beta" || tst_null == "sqrt-beta") require_unit_support(e);
      if (tst_method == "t1") {
        CoeffDist g0;
        if (tst_null == "beta") g0 = BetaOn01{{tst_alpha, tst_beta}};
        else if (tst_null == "sqrt-beta") g0 = SqrtBeta{{tst_alpha, tst_beta}};
        else if (tst_null == "point") g0 = PointMass{tst_a0};
        else if (tst_lo && tst_hi) g0 = UniformCoeff{*tst_lo, *tst_hi};
        else throw ConfigError("--null uniform needs --lo and --hi");
        result = t1_simple(e, SimpleNull{g0}, tst_level);
      } else if (tst_method == "t1-composite") {
        if (tst_null != "beta") throw ConfigError("t1-composite tests the Beta family (--null beta)");
        CompositeOptions opts;
        opts.mc_reps = tst_mc;
        opts.bootstrap = tst_boot == "full-panel" ? BootstrapKind::FullPanel
                                                  : BootstrapKind::Coefficient;
        opts.panel_n = tst_n;
        opts.shock_b = tst_b;
        opts.workers = default_workers();
        result = t1_composite(e, tst_level, opts, tst_seed);
      } else {
        if (tst_null != "sqrt-beta") throw ConfigError("t2 tests the sqrt-Beta law (--null sqrt-beta)");
        const double kappa = tst_kappa ? *tst_kappa : default_kappa(tst_n);
        result = t2_parametric(e, {tst_alpha, tst_beta}, kappa, tst_level);
      }
      detail::with_output(tst_out, out, [&](std::ostream& o) {
        o << kGofCsvHeader << '\n' << to_csv_row(result) << '\n';
      });
    } else if (*den) {
      auto in = detail::open_input(den_coeffs);
      const Ecdf e = read_coeffs_csv(in);
      const KernelSpec kernel = KernelSpec::parse(den_kernel);
      const double h = den_h ? *den_h : bandwidth_rule(e.size(), den_c);
      if (!(den_to > den_from)) throw ConfigError("--to must exceed --from");
      std::vector<double> grid(den_points);
      for (std::size_t k = 0; k < den_points; ++k) {
        grid[k] = den_from + (den_to - den_from) * static_cast<double>(k) /
                                 static_cast<double>(den_points - 1);
      }
      detail::with_output(den_out, out,
                          [&](std::ostream& o) { write_kde_csv(o, e, kernel, h, grid); });
    } else if (*stu) {
      auto in = detail::open_input(stu_config);
      StudyConfig cfg = parse_study_config(in);
      if (stu_full) apply_full_preset(cfg);
      if (!stu_out_dir.empty()) cfg.out_dir = stu_out_dir;
      unsigned workers = stu_serial ? 1u : (stu_workers ? *stu_workers : default_workers());
      const StudyResult result = run_study(cfg, workers);
      write_study_artifacts(cfg, result);
      write_summary_csv(out, result.summary);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rcar::cli

#endif  // RCAR_TOOLS_CLI_HPP_
