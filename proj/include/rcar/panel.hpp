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

// Simulation of panels of random-coefficient AR(1) series
//
//   X_i(t) = a_i X_i(t-1) + b eta(t) + sqrt(1 - b^2) xi_i(t),
//
// with a_i drawn i.i.d. from a coefficient law, a common shock stream eta
// and idiosyncratic streams xi_i.

#ifndef RCAR_PANEL_HPP_
#define RCAR_PANEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rcar/distributions.hpp"
#include "rcar/errors.hpp"
#include "rcar/random.hpp"
#include "rcar/text.hpp"

namespace rcar {

struct PanelConfig {
  std::size_t N = 1;  // number of series
  std::size_t n = 1;  // observations per series
  CoeffDist coeff = PointMass{0.0};
  double shock_b = 0.0;  // weight of the common shock; c = sqrt(1 - b^2)
  InnovDist innov = StandardNormal{};
  double burnin_eps = 1e-9;
  std::size_t burnin_cap = 100000;
  std::uint64_t seed = 0;
};

inline void validate(const PanelConfig& cfg) {
  if (cfg.N == 0 || cfg.n == 0) throw ConfigError("panel needs N >= 1 and n >= 1");
  if (!(cfg.shock_b >= 0.0 && cfg.shock_b <= 1.0)) {
    throw ConfigError("shock_b must lie in [0, 1]");
  }
  if (!(cfg.burnin_eps > 0.0 && cfg.burnin_eps < 1.0)) {
    throw ConfigError("burnin_eps must lie in (0, 1)");
  }
  if (cfg.burnin_cap == 0) throw ConfigError("burnin_cap must be positive");
  validate(cfg.coeff);
  validate(cfg.innov);
}

// N x n observations, stored row-major (row i is series i).
struct Panel {
  std::size_t N = 0;
  std::size_t n = 0;
  std::vector<double> data;
  // True coefficients; empty for panels read from disk.
  std::vector<double> coeffs;
  PanelConfig config;
  std::vector<std::string> warnings;

  std::span<const double> series(std::size_t i) const {
    return {data.data() + i * n, n};
  }
  double at(std::size_t i, std::size_t t) const { return data[i * n + t]; }
};

// Steps from X = 0 until the initial condition's weight |a|^M drops below
// eps, capped.
inline std::size_t burnin_length(double a, double eps, std::size_t cap) {
  const double abs_a = std::fabs(a);
  if (abs_a == 0.0) return 0;
  const double steps = std::ceil(std::log(eps) / std::log(abs_a));
  if (!(steps < static_cast<double>(cap))) return cap;
  return static_cast<std::size_t>(std::max(0.0, steps));
}

// Simulates a panel. Series i draws its coefficient and idiosyncratic noise
// from the stream (seed, series tag, i); the common shocks come from
// (seed, common tag). Each series starts from X = 0 at time -M_i, where M_i
// is its own burn-in length; the common shock at time t is the same value
// for every series. Output is bit-identical for a given config whatever
// the worker count.
inline Panel simulate_panel(const PanelConfig& cfg, unsigned workers = 1) {
  validate(cfg);
  const std::size_t N = cfg.N;
  const std::size_t n = cfg.n;
  const double b = cfg.shock_b;
  const double c = std::sqrt(1.0 - b * b);

  Panel panel;
  panel.N = N;
  panel.n = n;
  panel.config = cfg;
  panel.coeffs.resize(N);
  panel.data.resize(N * n);

  std::vector<Rng> streams;
  streams.reserve(N);
  std::vector<std::size_t> burnin(N);
  std::size_t max_burnin = 0;
  const double weight_tol = std::sqrt(cfg.burnin_eps);
  for (std::size_t i = 0; i < N; ++i) {
    streams.emplace_back(derive_stream({cfg.seed, kSeriesStreamTag, i}));
    const double a = sample_coeff(cfg.coeff, streams[i]);
    panel.coeffs[i] = a;
    burnin[i] = burnin_length(a, cfg.burnin_eps, cfg.burnin_cap);
    max_burnin = std::max(max_burnin, burnin[i]);
    if (burnin[i] == cfg.burnin_cap &&
        std::pow(std::fabs(a), static_cast<double>(burnin[i])) > weight_tol) {
      panel.warnings.push_back(
          "burn-in cap reached for series " + std::to_string(i + 1) +
          " (a=" + format_real(a) + ")");
    }
  }

  // eta(t) for t = -max_burnin + 1 .. n at index t + max_burnin - 1.
  std::vector<double> common;
  if (b > 0.0) {
    Rng rng(derive_stream({cfg.seed, kCommonStreamTag}));
    common.resize(max_burnin + n);
    for (double& v : common) v = sample_innovation(cfg.innov, rng);
  }

  auto run_series = [&](std::size_t i) {
    Rng& rng = streams[i];
    const double a = panel.coeffs[i];
    const std::size_t m = burnin[i];
    double* out = panel.data.data() + i * n;
    double x = 0.0;
    // Offset into `common` of time -m + 1.
    const std::size_t base = max_burnin - m;
    for (std::size_t k = 0; k < m + n; ++k) {
      double shock = 0.0;
      if (b > 0.0) shock += b * common[base + k];
      if (c > 0.0) shock += c * sample_innovation(cfg.innov, rng);
      x = a * x + shock;
      if (k >= m) out[k - m] = x;
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(N)));
  if (workers == 1) {
    for (std::size_t i = 0; i < N; ++i) run_series(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < N; i += workers) run_series(i);
      });
    }
  }
  return panel;
}

// CSV: header "t,x_1,...,x_N", then one row per time index t = 1..n.
inline void write_panel_csv(std::ostream& out, const Panel& panel) {
  out << "t";
  for (std::size_t i = 1; i <= panel.N; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t t = 0; t < panel.n; ++t) {
    out << (t + 1);
    for (std::size_t i = 0; i < panel.N; ++i) {
      out << ',' << format_real(panel.at(i, t));
    }
    out << '\n';
  }
}

inline Panel read_panel_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) throw IoError("panel CSV is empty");
  const auto header = split(line, ',');
  if (header.size() < 2 || trim(header[0]) != "t") {
    throw IoError("panel CSV header must be 't,x_1,...,x_N'");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (trim(header[i]) != "x_" + std::to_string(i)) {
      throw IoError("panel CSV header column " + std::to_string(i + 1) +
                    " must be x_" + std::to_string(i));
    }
  }
  const std::size_t N = header.size() - 1;
  std::vector<std::vector<double>> rows;
  while (read_line(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != N + 1) {
      throw IoError("panel CSV row " + std::to_string(rows.size() + 1) +
                    " has " + std::to_string(fields.size()) + " fields");
    }
    std::vector<double> row(N);
    for (std::size_t i = 0; i < N; ++i) {
      row[i] = parse_real(fields[i + 1]);
      if (!std::isfinite(row[i])) throw IoError("panel CSV holds a non-finite value");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("panel CSV has no observations");
  Panel panel;
  panel.N = N;
  panel.n = rows.size();
  panel.config.N = N;
  panel.config.n = rows.size();
  panel.data.resize(N * panel.n);
  for (std::size_t t = 0; t < panel.n; ++t) {
    for (std::size_t i = 0; i < N; ++i) panel.data[i * panel.n + t] = rows[t][i];
  }
  return panel;
}

// Sidecar metadata: plain key=value lines.
inline void write_panel_metadata(std::ostream& out, const Panel& panel) {
  const PanelConfig& c = panel.config;
  out << "N=" << c.N << '\n'
      << "n=" << c.n << '\n'
      << "coeff=" << to_string(c.coeff) << '\n'
      << "shock_b=" << format_real(c.shock_b) << '\n'
      << "innov=" << to_string(c.innov) << '\n'
      << "burnin_eps=" << format_real(c.burnin_eps) << '\n'
      << "burnin_cap=" << c.burnin_cap << '\n'
      << "seed=" << c.seed << '\n';
  for (const auto& w : panel.warnings) out << "warning=" << w << '\n';
}

inline PanelConfig read_panel_metadata(std::istream& in) {
  PanelConfig c;
  std::string line;
  while (read_line(in, line)) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw IoError("metadata line without '='");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key == "N") c.N = parse_int<std::size_t>(value);
    else if (key == "n") c.n = parse_int<std::size_t>(value);
    else if (key == "coeff") c.coeff = parse_coeff_dist(value);
    else if (key == "shock_b") c.shock_b = parse_real(value);
    else if (key == "innov") c.innov = parse_innov_dist(value);
    else if (key == "burnin_eps") c.burnin_eps = parse_real(value);
    else if (key == "burnin_cap") c.burnin_cap = parse_int<std::size_t>(value);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(value);
    else if (key == "warning") continue;
    else throw IoError("unknown metadata key '" + std::string(key) + "'");
  }
  validate(c);
  return c;
}

}  // namespace rcar

#endif  // RCAR_PANEL_HPP_
