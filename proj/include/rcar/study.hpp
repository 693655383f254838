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

// Simulation study harness: for each alternative and replication, simulate
// a sqrt-Beta RCAR(1) panel, estimate the coefficients and compute the p-values
// of the nonparametric T1 test and the parametric T2 test against the same
// null theta0. Produces per-replication rows, rejection-rate summaries and
// p-value ECDF curves.
//
// Config file format (key = value, '#' starts a comment; alt and level may
// repeat):
//
//   reps    = 500
//   N       = 250
//   n       = 817
//   alpha0  = 2
//   beta0   = 1.4
//   alt     = 2,1.2        # alpha,beta of an alternative
//   shock_b = 0
//   kappa   = auto         # or a number in (0, 0.5); auto = 1/(2 sqrt(n))
//   mc_reps = 1000
//   level   = 0.05
//   seed    = 1
//   out_dir = study_out
//   estimator = centered   # optional: centered | zero_mean

#ifndef RCAR_STUDY_HPP_
#define RCAR_STUDY_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rcar/distributions.hpp"
#include "rcar/errors.hpp"
#include "rcar/estimators.hpp"
#include "rcar/gof.hpp"
#include "rcar/panel.hpp"
#include "rcar/random.hpp"
#include "rcar/text.hpp"

namespace rcar {

struct StudyConfig {
  std::size_t reps = 500;
  std::size_t N = 250;
  std::size_t n = 817;
  BetaParams theta0{2.0, 1.4};
  std::vector<BetaParams> alternatives;
  double shock_b = 0.0;
  std::optional<double> kappa;  // empty: default_kappa(n)
  std::size_t mc_reps = 1000;
  std::vector<double> levels{0.05, 0.10};
  std::uint64_t seed = 1;
  std::string out_dir = "study_out";
  AutocorrEstimator estimator = AutocorrEstimator::Centered;

  double effective_kappa() const { return kappa ? *kappa : default_kappa(n); }
};

// Default alternatives: theta = (2, beta), beta in {1.2, ..., 1.6}.
inline std::vector<BetaParams> design_alternatives() {
  return {{2.0, 1.2}, {2.0, 1.3}, {2.0, 1.4}, {2.0, 1.5}, {2.0, 1.6}};
}

// 5000 replications of the full design.
inline void apply_full_preset(StudyConfig& cfg) {
  cfg.reps = 5000;
  cfg.alternatives = design_alternatives();
}

inline void validate(const StudyConfig& cfg) {
  if (cfg.reps == 0) throw ConfigError("reps must be positive");
  if (cfg.N == 0) throw ConfigError("N must be positive");
  if (cfg.n < 3) throw ConfigError("n must be at least 3");
  validate(cfg.theta0, /*above_one=*/true);
  if (cfg.alternatives.empty()) throw ConfigError("at least one alternative is required");
  for (const auto& a : cfg.alternatives) validate(a, /*above_one=*/true);
  if (!(cfg.shock_b >= 0.0 && cfg.shock_b <= 1.0)) {
    throw ConfigError("shock_b must lie in [0, 1]");
  }
  if (cfg.kappa && !(*cfg.kappa > 0.0 && *cfg.kappa < 0.5)) {
    throw ConfigError("kappa must lie in (0, 0.5)");
  }
  if (cfg.mc_reps == 0) throw ConfigError("mc_reps must be positive");
  if (cfg.levels.empty()) throw ConfigError("at least one level is required");
  for (double l : cfg.levels) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError("levels must lie in (0, 1)");
  }
  if (!std::is_sorted(cfg.levels.begin(), cfg.levels.end())) {
    throw ConfigError("levels must be sorted ascending");
  }
}

inline StudyConfig parse_study_config(std::istream& in) {
  StudyConfig cfg;
  bool levels_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("study config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    try {
      if (key == "reps") cfg.reps = parse_int<std::size_t>(value);
      else if (key == "N") cfg.N = parse_int<std::size_t>(value);
      else if (key == "n") cfg.n = parse_int<std::size_t>(value);
      else if (key == "alpha0") cfg.theta0.alpha = parse_real(value);
      else if (key == "beta0") cfg.theta0.beta = parse_real(value);
      else if (key == "alt") {
        const auto ab = parse_real_list(value);
        if (ab.size() != 2) throw ConfigError("alt takes 'alpha,beta'");
        cfg.alternatives.push_back({ab[0], ab[1]});
      } else if (key == "shock_b") cfg.shock_b = parse_real(value);
      else if (key == "kappa") {
        if (value == "auto") cfg.kappa.reset();
        else cfg.kappa = parse_real(value);
      } else if (key == "mc_reps") cfg.mc_reps = parse_int<std::size_t>(value);
      else if (key == "level") {
        if (!levels_seen) cfg.levels.clear();
        levels_seen = true;
        cfg.levels.push_back(parse_real(value));
      } else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(value);
      else if (key == "out_dir") cfg.out_dir = std::string(value);
      else if (key == "estimator") cfg.estimator = parse_autocorr_estimator(value);
      else throw ConfigError("unknown key '" + std::string(key) + "'");
    } catch (const IoError& err) {
      throw ConfigError("study config line " + std::to_string(lineno) + ": " + err.what());
    } catch (const ConfigError& err) {
      throw ConfigError("study config line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  std::sort(cfg.levels.begin(), cfg.levels.end());
  cfg.levels.erase(std::unique(cfg.levels.begin(), cfg.levels.end()), cfg.levels.end());
  return cfg;
}

struct StudyRow {
  double beta_alt = 0.0;
  std::size_t alt_index = 0;
  std::size_t rep = 0;
  std::optional<double> t1, p1, t2, p2;
  std::string error;  // first failure message, empty when both tests ran

  bool ok() const { return t1.has_value() && t2.has_value(); }
};

struct SummaryRow {
  double beta_alt = 0.0;
  double level = 0.0;
  double rate_t1 = 0.0;
  double rate_t2 = 0.0;
  std::size_t reps_ok = 0;
  std::size_t reps_failed = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;  // (alternative, rep) order
  std::vector<SummaryRow> summary;
};

// Worker count: RCAR_WORKERS if set to a positive integer, else the
// hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("RCAR_WORKERS")) {
    try {
      const auto w = parse_int<unsigned>(env);
      if (w > 0) return w;
    } catch (const IoError&) {
    }
    throw ConfigError("RCAR_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Stream key of replication `rep` of alternative `alt`.
inline std::uint64_t study_cell_seed(std::uint64_t seed, std::size_t alt, std::size_t rep) {
  return derive_stream({seed, alt, rep});
}

inline StudyRow run_study_cell(const StudyConfig& cfg, std::size_t alt, std::size_t rep) {
  StudyRow row;
  row.alt_index = alt;
  row.rep = rep;
  row.beta_alt = cfg.alternatives[alt].beta;
  const double level = cfg.levels.front();
  auto note = [&](const std::string& what) {
    if (row.error.empty()) row.error = what;
  };
  try {
    PanelConfig pc;
    pc.N = cfg.N;
    pc.n = cfg.n;
    pc.coeff = SqrtBeta{cfg.alternatives[alt]};
    pc.shock_b = cfg.shock_b;
    pc.seed = study_cell_seed(cfg.seed, alt, rep);
    const Ecdf e = estimate_coeffs(simulate_panel(pc), cfg.estimator);
    try {
      const GofResult r1 = t1_simple(e, SimpleNull{SqrtBeta{cfg.theta0}}, level);
      row.t1 = r1.statistic;
      row.p1 = r1.p_value;
    } catch (const Error& err) {
      note(std::string("T1: ") + err.what());
    }
    try {
      const GofResult r2 = t2_parametric(e, cfg.theta0, cfg.effective_kappa(), level);
      row.t2 = r2.statistic;
      row.p2 = r2.p_value;
    } catch (const Error& err) {
      note(std::string("T2: ") + err.what());
    }
  } catch (const Error& err) {
    note(err.what());
  }
  return row;
}

inline std::vector<SummaryRow> summarize(const StudyConfig& cfg,
                                         const std::vector<StudyRow>& rows) {
  std::vector<SummaryRow> out;
  for (std::size_t a = 0; a < cfg.alternatives.size(); ++a) {
    for (double level : cfg.levels) {
      SummaryRow s;
      s.beta_alt = cfg.alternatives[a].beta;
      s.level = level;
      std::size_t n1 = 0, n2 = 0, r1 = 0, r2 = 0;
      for (const auto& row : rows) {
        if (row.alt_index != a) continue;
        if (row.ok()) ++s.reps_ok; else ++s.reps_failed;
        if (row.p1) {
          ++n1;
          if (*row.p1 < level) ++r1;
        }
        if (row.p2) {
          ++n2;
          if (*row.p2 < level) ++r2;
        }
      }
      s.rate_t1 = n1 ? static_cast<double>(r1) / static_cast<double>(n1) : 0.0;
      s.rate_t2 = n2 ? static_cast<double>(r2) / static_cast<double>(n2) : 0.0;
      out.push_back(s);
    }
  }
  return out;
}

// Runs every (alternative, rep) cell on `workers` threads; results are
// merged in cell order, so the output does not depend on the worker count.
inline StudyResult run_study(const StudyConfig& cfg, unsigned workers = 1) {
  validate(cfg);
  const std::size_t cells = cfg.alternatives.size() * cfg.reps;
  std::vector<StudyRow> rows(cells);
  auto run = [&](std::size_t k) {
    rows[k] = run_study_cell(cfg, k / cfg.reps, k % cfg.reps);
  };
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, cells));
  if (workers == 1) {
    for (std::size_t k = 0; k < cells; ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells; k = next++) run(k);
      });
    }
  }
  StudyResult result;
  result.summary = summarize(cfg, rows);
  result.rows = std::move(rows);
  return result;
}

enum class Statistic { T1, T2 };

// Step points (p, height) of the empirical CDF of the selected p-values;
// tied p-values share the upper height. Failed rows are skipped.
inline std::vector<std::pair<double, double>> pvalue_ecdf(const std::vector<StudyRow>& rows,
                                                          Statistic which) {
  std::vector<double> p;
  for (const auto& r : rows) {
    const auto& v = which == Statistic::T1 ? r.p1 : r.p2;
    if (v) p.push_back(*v);
  }
  if (p.empty()) throw DomainError("pvalue_ecdf: no p-values");
  std::sort(p.begin(), p.end());
  std::vector<std::pair<double, double>> curve;
  const double total = static_cast<double>(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k + 1 < p.size() && p[k + 1] == p[k]) continue;
    curve.emplace_back(p[k], static_cast<double>(k + 1) / total);
  }
  return curve;
}

namespace detail {
inline std::string optional_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}
}  // namespace detail

inline void write_rows_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "beta_alt,rep,t1,p1,t2,p2\n";
  for (const auto& r : rows) {
    out << format_real(r.beta_alt) << ',' << r.rep << ',' << detail::optional_real(r.t1)
        << ',' << detail::optional_real(r.p1) << ',' << detail::optional_real(r.t2) << ','
        << detail::optional_real(r.p2) << '\n';
  }
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "beta_alt,level,size_or_power_t1,size_or_power_t2,reps_ok,reps_failed\n";
  for (const auto& s : rows) {
    out << format_real(s.beta_alt) << ',' << format_real(s.level) << ','
        << format_real(s.rate_t1) << ',' << format_real(s.rate_t2) << ',' << s.reps_ok
        << ',' << s.reps_failed << '\n';
  }
}

// "beta_alt,statistic,p,ecdf": one curve per alternative and statistic.
inline void write_pvalue_ecdf_csv(std::ostream& out, const StudyConfig& cfg,
                                  const std::vector<StudyRow>& rows) {
  out << "beta_alt,statistic,p,ecdf\n";
  for (std::size_t a = 0; a < cfg.alternatives.size(); ++a) {
    std::vector<StudyRow> cell;
    for (const auto& r : rows) {
      if (r.alt_index == a) cell.push_back(r);
    }
    for (Statistic which : {Statistic::T1, Statistic::T2}) {
      std::vector<std::pair<double, double>> curve;
      try {
        curve = pvalue_ecdf(cell, which);
      } catch (const DomainError&) {
        continue;
      }
      const char* label = which == Statistic::T1 ? "T1" : "T2";
      for (const auto& [p, h] : curve) {
        out << format_real(cfg.alternatives[a].beta) << ',' << label << ','
            << format_real(p) << ',' << format_real(h) << '\n';
      }
    }
  }
}

// Writes rows.csv, summary.csv and pvalue_ecdf.csv into cfg.out_dir.
inline void write_study_artifacts(const StudyConfig& cfg, const StudyResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("rows.csv");
    write_rows_csv(f, result.rows);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(f, result.summary);
  }
  {
    auto f = open("pvalue_ecdf.csv");
    write_pvalue_ecdf_csv(f, cfg, result.rows);
  }
}

}  // namespace rcar

#endif  // RCAR_STUDY_HPP_
