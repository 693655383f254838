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

#include "rcar/panel.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"

namespace {

using namespace rcar;

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double autocov(std::span<const double> x, std::size_t lag) {
  const double m = mean_of(x);
  double s = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t) s += (x[t] - m) * (x[t + lag] - m);
  return s / static_cast<double>(x.size());
}

PanelConfig point_mass_config(double a0, std::size_t N, std::size_t n, double b = 0.0) {
  PanelConfig cfg;
  cfg.N = N;
  cfg.n = n;
  cfg.coeff = PointMass{a0};
  cfg.shock_b = b;
  cfg.seed = 2024;
  return cfg;
}

TEST(SimulatePanelTest, ZeroCoefficientReproducesInnovationStream) {
  const Panel p = simulate_panel(point_mass_config(0.0, 2, 1000));
  for (std::size_t i = 0; i < 2; ++i) {
    Rng rng(derive_stream({2024, kSeriesStreamTag, i}));
    for (std::size_t t = 0; t < 1000; ++t) ASSERT_EQ(p.at(i, t), rng.normal());
  }
}

TEST(SimulatePanelTest, ZeroCoefficientHasNoAutocovariance) {
  const Panel p = simulate_panel(point_mass_config(0.0, 1, 100000));
  EXPECT_NEAR(autocov(p.series(0), 1), 0.0, 0.02);
}

TEST(SimulatePanelTest, PointMassMatchesStationaryMoments) {
  const Panel p = simulate_panel(point_mass_config(0.5, 1, 100000));
  const double var = autocov(p.series(0), 0);
  EXPECT_NEAR(var, 1.0 / (1.0 - 0.25), 0.05);
  EXPECT_NEAR(autocov(p.series(0), 1) / var, 0.5, 0.02);
}

TEST(SimulatePanelTest, BitIdenticalForSameConfigAndAnyWorkerCount) {
  PanelConfig cfg;
  cfg.N = 40;
  cfg.n = 300;
  cfg.coeff = SqrtBeta{{2.0, 1.4}};
  cfg.shock_b = 0.6;
  cfg.seed = 99;
  const Panel a = simulate_panel(cfg);
  const Panel b = simulate_panel(cfg);
  const Panel c = simulate_panel(cfg, 4);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.data, c.data);
  EXPECT_EQ(a.coeffs, c.coeffs);
  cfg.seed = 100;
  EXPECT_NE(simulate_panel(cfg).data, a.data);
}

TEST(SimulatePanelTest, IndependentSeriesAreUncorrelated) {
  const Panel p = simulate_panel(point_mass_config(0.5, 2, 100000, 0.0));
  const auto x = p.series(0);
  const auto y = p.series(1);
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sxy += (x[t] - mx) * (y[t] - my);
    sxx += (x[t] - mx) * (x[t] - mx);
    syy += (y[t] - my) * (y[t] - my);
  }
  EXPECT_NEAR(sxy / std::sqrt(sxx * syy), 0.0, 0.02);
}

TEST(SimulatePanelTest, FullCommonShockGivesIdenticalSeries) {
  const Panel p = simulate_panel(point_mass_config(0.5, 3, 5000, 1.0));
  for (std::size_t t = 0; t < p.n; ++t) {
    ASSERT_EQ(p.at(0, t), p.at(1, t));
    ASSERT_EQ(p.at(0, t), p.at(2, t));
  }
}

TEST(SimulatePanelTest, CommonShockIsAlignedAcrossDifferentCoefficients) {
  // With b = 1 series differ only through a_i, so X_i(t) - a_i X_i(t-1) is
  // the same eta(t) for every series.
  PanelConfig cfg;
  cfg.N = 5;
  cfg.n = 400;
  cfg.coeff = UniformCoeff{-0.9, 0.95};
  cfg.shock_b = 1.0;
  cfg.seed = 5;
  const Panel p = simulate_panel(cfg);
  for (std::size_t t = 1; t < p.n; ++t) {
    const double eta0 = p.at(0, t) - p.coeffs[0] * p.at(0, t - 1);
    for (std::size_t i = 1; i < p.N; ++i) {
      ASSERT_NEAR(p.at(i, t) - p.coeffs[i] * p.at(i, t - 1), eta0, 1e-12);
    }
  }
}

TEST(SimulatePanelTest, StationaryFromTheFirstObservation) {
  const Panel p = simulate_panel(point_mass_config(0.9, 1, 400000));
  const auto x = p.series(0);
  const std::size_t half = x.size() / 2;
  auto second_moment = [](std::span<const double> s) {
    double acc = 0.0;
    for (double v : s) acc += v * v;
    return acc / static_cast<double>(s.size());
  };
  const double v1 = second_moment(x.subspan(0, half));
  const double v2 = second_moment(x.subspan(half));
  EXPECT_LT(std::fabs(v1 - v2) / v2, 0.05);
}

// Cross-sectional mean of X_i(t)^2 against the integral of 1/(1-x^2) dG,
// within three Monte Carlo standard errors.
TEST(SimulatePanelTest, VarianceMatchesTheoreticalAutocovariance) {
  const std::vector<CoeffDist> laws = {PointMass{0.5}, BetaOn01{{2.0, 3.0}},
                                       SqrtBeta{{2.0, 3.0}}, UniformCoeff{-0.5, 0.7}};
  for (const auto& law : laws) {
    PanelConfig cfg;
    cfg.N = 4000;
    cfg.n = 100;
    cfg.coeff = law;
    cfg.seed = 17;
    const Panel p = simulate_panel(cfg);
    std::vector<double> per_series(p.N);
    for (std::size_t i = 0; i < p.N; ++i) {
      double acc = 0.0;
      for (double v : p.series(i)) acc += v * v;
      per_series[i] = acc / static_cast<double>(p.n);
    }
    const double m = mean_of(per_series);
    double ss = 0.0;
    for (double v : per_series) ss += (v - m) * (v - m);
    const double se = std::sqrt(ss / (p.N - 1) / p.N);
    const double expected = theoretical_autocov(law, 0);
    EXPECT_NEAR(m, expected, 3.0 * se) << to_string(law);
  }
}

TEST(SimulatePanelTest, CoefficientsStayInsideUnitInterval) {
  PanelConfig cfg;
  cfg.N = 2000;
  cfg.n = 5;
  cfg.coeff = SqrtBeta{{2.0, 1.1}};
  const Panel p = simulate_panel(cfg);
  for (double a : p.coeffs) {
    ASSERT_GT(a, -1.0);
    ASSERT_LT(a, 1.0);
  }
  for (double v : p.data) ASSERT_TRUE(std::isfinite(v));
}

TEST(SimulatePanelTest, BurnInCapRecordsWarningInsteadOfFailing) {
  PanelConfig cfg = point_mass_config(0.9, 2, 10);
  cfg.burnin_cap = 10;
  const Panel p = simulate_panel(cfg);
  EXPECT_EQ(p.warnings.size(), 2u);
  cfg.burnin_cap = 100000;
  EXPECT_TRUE(simulate_panel(cfg).warnings.empty());
}

TEST(BurninLengthTest, GeometricRule) {
  EXPECT_EQ(burnin_length(0.0, 1e-9, 100), 0u);
  EXPECT_EQ(burnin_length(0.5, 1e-9, 100000), 30u);  // 2^-30 < 1e-9 < 2^-29
  EXPECT_EQ(burnin_length(-0.5, 1e-9, 100000), 30u);
  EXPECT_EQ(burnin_length(0.999999, 1e-9, 1000), 1000u);
}

TEST(SimulatePanelTest, RejectsInvalidConfig) {
  PanelConfig cfg;
  cfg.N = 0;
  EXPECT_THROW(simulate_panel(cfg), ConfigError);
  cfg.N = 2;
  cfg.shock_b = 1.5;
  EXPECT_THROW(simulate_panel(cfg), ConfigError);
  cfg.shock_b = 0.0;
  cfg.coeff = SqrtBeta{{2.0, 0.5}};
  EXPECT_THROW(simulate_panel(cfg), DomainError);
}

TEST(PanelCsvTest, RoundTripsExactly) {
  PanelConfig cfg;
  cfg.N = 7;
  cfg.n = 50;
  cfg.coeff = BetaOn01{{2.0, 2.0}};
  cfg.innov = StudentT{6.0};
  cfg.shock_b = 0.3;
  cfg.seed = 8;
  const Panel p = simulate_panel(cfg);
  std::stringstream csv;
  write_panel_csv(csv, p);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,x_1,x_2,x_3,x_4,x_5,x_6,x_7");
  const Panel q = read_panel_csv(csv);
  EXPECT_EQ(q.N, p.N);
  EXPECT_EQ(q.n, p.n);
  EXPECT_EQ(q.data, p.data);

  std::stringstream meta;
  write_panel_metadata(meta, p);
  const PanelConfig back = read_panel_metadata(meta);
  EXPECT_EQ(simulate_panel(back).data, p.data);
}

TEST(PanelCsvTest, RejectsMalformedInput) {
  std::stringstream bad_header("s,x_1\n1,0.5\n");
  EXPECT_THROW(read_panel_csv(bad_header), IoError);
  std::stringstream ragged("t,x_1,x_2\n1,0.5\n");
  EXPECT_THROW(read_panel_csv(ragged), IoError);
  std::stringstream junk("t,x_1\n1,abc\n");
  EXPECT_THROW(read_panel_csv(junk), IoError);
}

}  // namespace
