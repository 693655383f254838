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

// Goodness-of-fit tests for the law of the autoregressive coefficient:
//
//   T1 simple     sqrt(N) sup |G_hat - G0| against a fixed law G0, with
//                 Kolmogorov p-values;
//   T1 composite  the same statistic against the method-of-moments Beta fit,
//                 with Monte Carlo critical values;
//   T2            N (theta_hat - theta0)' A(theta0) (theta_hat - theta0) for
//                 the sqrt-Beta family, theta_hat the truncated-coefficient
//                 MLE and A the Fisher information, with chi-square(2)
//                 p-values.

#ifndef RCAR_GOF_HPP_
#define RCAR_GOF_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rcar/distributions.hpp"
#include "rcar/errors.hpp"
#include "rcar/estimators.hpp"
#include "rcar/panel.hpp"
#include "rcar/random.hpp"
#include "rcar/special_fn.hpp"
#include "rcar/text.hpp"

namespace rcar {

// H0: G = G0.
struct SimpleNull {
  CoeffDist g0;
};
// H0: G is some Beta(alpha, beta) on (0, 1).
struct CompositeBetaNull {};
// H0: a has the sqrt-Beta law with parameters theta0 (parametric test).
struct CompositeSqrtBetaNull {
  BetaParams theta0;
};

using NullSpec = std::variant<SimpleNull, CompositeBetaNull, CompositeSqrtBetaNull>;

enum class GofMethod { T1Simple, T1Composite, T2Parametric };

inline std::string to_string(GofMethod m) {
  switch (m) {
    case GofMethod::T1Simple: return "T1_simple";
    case GofMethod::T1Composite: return "T1_composite";
    case GofMethod::T2Parametric: return "T2_parametric";
  }
  return {};
}

struct GofResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  double level = 0.05;
  GofMethod method = GofMethod::T1Simple;
  std::optional<BetaParams> fitted_theta;
  std::optional<std::size_t> mc_reps;

  bool reject() const { return statistic > critical_value; }
};

inline constexpr const char* kGofCsvHeader =
    "method,statistic,p_value,critical_value,level,alpha_hat,beta_hat,mc_reps";

inline std::string to_csv_row(const GofResult& r) {
  std::string row = to_string(r.method) + "," + format_real(r.statistic) + "," +
                    format_real(r.p_value) + "," + format_real(r.critical_value) +
                    "," + format_real(r.level) + ",";
  if (r.fitted_theta) {
    row += format_real(r.fitted_theta->alpha) + "," + format_real(r.fitted_theta->beta);
  } else {
    row += ",";
  }
  row += ",";
  if (r.mc_reps) row += std::to_string(*r.mc_reps);
  return row;
}

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("test level must lie in (0, 1)");
  }
}

// sup_x |G_hat(x) - F(x)| (without the sqrt(N) factor), evaluated at the
// jumps of G_hat. Tied points are merged into one jump.
template <class Cdf>
double ks_sup_distance(const Ecdf& e, Cdf&& cdf) {
  const auto pts = e.points();
  const std::size_t N = pts.size();
  if (N == 0) throw DomainError("ks_sup_distance of an empty sample");
  const double inv_n = 1.0 / static_cast<double>(N);
  double sup = 0.0;
  std::size_t k = 0;
  while (k < N) {
    std::size_t j = k;
    while (j + 1 < N && pts[j + 1] == pts[k]) ++j;
    const double f = cdf(pts[k]);
    const double below = static_cast<double>(k) * inv_n;
    const double above = static_cast<double>(j + 1) * inv_n;
    sup = std::max({sup, std::fabs(above - f), std::fabs(below - f)});
    k = j + 1;
  }
  return sup;
}

inline GofResult t1_simple(const Ecdf& e, const SimpleNull& null, double level) {
  check_level(level);
  validate(null.g0);
  GofResult r;
  r.method = GofMethod::T1Simple;
  r.level = level;
  r.statistic = std::sqrt(static_cast<double>(e.size())) *
                ks_sup_distance(e, [&](double x) { return coeff_cdf(null.g0, x); });
  r.p_value = 1.0 - kolmogorov_cdf(r.statistic);
  r.critical_value = kolmogorov_quantile(level);
  return r;
}

// Every point strictly inside (0, 1), the support of the Beta families.
inline void require_unit_support(const Ecdf& e) {
  if (e.empty()) throw SupportError("empty sample");
  const auto pts = e.points();
  if (!(pts.front() > 0.0 && pts.back() < 1.0)) {
    throw SupportError("coefficient estimates must lie in (0, 1); range is [" +
                       format_real(pts.front()) + ", " + format_real(pts.back()) +
                       "]");
  }
}

enum class BootstrapKind {
  Coefficient,  // redraw the N coefficients from the fitted Beta law
  FullPanel,    // simulate and re-estimate a whole panel per replication
};

struct CompositeOptions {
  std::size_t mc_reps = 1000;
  BootstrapKind bootstrap = BootstrapKind::Coefficient;
  // Full-panel replications only.
  std::size_t panel_n = 0;
  double shock_b = 0.0;
  AutocorrEstimator estimator = AutocorrEstimator::Centered;
  unsigned workers = 1;
};

// Upper `level` empirical quantile of sorted replicated statistics: order
// statistic ceil((1 - level) R).
inline double composite_critical_value(const std::vector<double>& sorted, double level) {
  const double R = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - level) * R - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

namespace detail {

inline double beta_ks_statistic(const Ecdf& e, const BetaParams& theta) {
  return std::sqrt(static_cast<double>(e.size())) *
         ks_sup_distance(e, [&](double x) {
           if (x <= 0.0) return 0.0;
           if (x >= 1.0) return 1.0;
           return beta_cdf(x, theta);
         });
}

}  // namespace detail

// Composite KS test of H0: G is Beta. The statistic compares G_hat with the
// method-of-moments fit; its null law is approximated by `mc_reps`
// replications, each refitting on a fresh sample of size N from the fitted
// law. Replication r uses the stream (stream_key, replication tag, r).
//
// critical value = order statistic ceil((1 - level) R) of the replicated
// statistics; p-value = fraction of replicated statistics >= observed.
inline GofResult t1_composite(const Ecdf& e, double level, const CompositeOptions& opts,
                              std::uint64_t stream_key) {
  check_level(level);
  if (opts.mc_reps < 100) throw ConfigError("t1_composite needs mc_reps >= 100");
  if (opts.bootstrap == BootstrapKind::FullPanel && opts.panel_n < 3) {
    throw ConfigError("full-panel bootstrap needs the series length (n >= 3)");
  }
  require_unit_support(e);
  const BetaParams theta = beta_mom(sample_moments(e, 2));
  validate(theta);

  const std::size_t N = e.size();
  const std::size_t R = opts.mc_reps;
  std::vector<double> stats(R);

  auto replicate = [&](std::size_t r) {
    const std::uint64_t key = derive_stream({stream_key, kReplicationStreamTag, r});
    try {
      Ecdf star;
      if (opts.bootstrap == BootstrapKind::Coefficient) {
        Rng rng(key);
        std::vector<double> draw(N);
        for (double& v : draw) v = rng.beta(theta);
        star = Ecdf(std::move(draw));
      } else {
        PanelConfig cfg;
        cfg.N = N;
        cfg.n = opts.panel_n;
        cfg.coeff = BetaOn01{theta};
        cfg.shock_b = opts.shock_b;
        cfg.seed = key;
        star = estimate_coeffs(simulate_panel(cfg), opts.estimator);
      }
      const BetaParams theta_star = beta_mom(sample_moments(star, 2));
      stats[r] = detail::beta_ks_statistic(star, theta_star);
    } catch (const Error&) {
      // A replication that cannot be refitted counts as an exceedance.
      stats[r] = INFINITY;
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(R)));
  if (workers == 1) {
    for (std::size_t r = 0; r < R; ++r) replicate(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < R; r += workers) replicate(r);
      });
    }
  }

  GofResult res;
  res.method = GofMethod::T1Composite;
  res.level = level;
  res.fitted_theta = theta;
  res.mc_reps = R;
  res.statistic = detail::beta_ks_statistic(e, theta);
  const auto exceed = std::count_if(stats.begin(), stats.end(),
                                    [&](double s) { return s >= res.statistic; });
  res.p_value = static_cast<double>(exceed) / static_cast<double>(R);
  std::sort(stats.begin(), stats.end());
  res.critical_value = composite_critical_value(stats, level);
  return res;
}

// Fisher information of Beta(alpha, beta) per observation:
//   [ psi1(a) - psi1(a+b)     -psi1(a+b)        ]
//   [ -psi1(a+b)              psi1(b) - psi1(a+b) ]
struct FisherMatrix {
  double aa = 0.0;
  double ab = 0.0;
  double bb = 0.0;

  double quad_form(double da, double db) const {
    return aa * da * da + 2.0 * ab * da * db + bb * db * db;
  }
  double det() const { return aa * bb - ab * ab; }
};

inline FisherMatrix fisher_matrix(const BetaParams& theta) {
  validate(theta);
  const double tab = trigamma(theta.alpha + theta.beta);
  return {trigamma(theta.alpha) - tab, -tab, trigamma(theta.beta) - tab};
}

// Truncation used when the series length is known: 1 / (2 sqrt(n)).
inline double default_kappa(std::size_t n) {
  return n > 0 ? 0.5 / std::sqrt(static_cast<double>(n)) : 0.01;
}

inline constexpr double kMleLowerBound = 1.0 + 1e-6;
inline constexpr double kMleUpperBound = 100.0;

// Maximum likelihood fit of the sqrt-Beta law to coefficient estimates
// truncated to [kappa, 1 - kappa]. With u = a^2 the sqrt-Beta likelihood
// equals a Beta(alpha, beta) likelihood in u up to a factor free of the
// parameters, so the fit solves the Beta score equations
//   psi(alpha) - psi(alpha + beta) = mean ln u,
//   psi(beta)  - psi(alpha + beta) = mean ln(1 - u)
// by projected Newton with backtracking on the box [1 + 1e-6, 100]^2.
// Ending on the upper face of the box, or not converging within 200
// iterations, raises EstimationError with the last iterate.
inline BetaParams beran_mle(const Ecdf& e, double kappa) {
  if (e.size() < 10) throw DomainError("beran_mle needs at least 10 estimates");
  if (!(kappa > 0.0 && kappa < 0.5)) {
    throw DomainError("truncation kappa must lie in (0, 0.5)");
  }
  const double N = static_cast<double>(e.size());
  CompensatedSum sl, sl1;
  CompensatedSum m1, m2;
  for (double a : e.points()) {
    const double c = std::clamp(a, kappa, 1.0 - kappa);
    const double u = c * c;
    sl.add(std::log(u));
    sl1.add(std::log1p(-u));
    m1.add(u);
    m2.add(u * u);
  }
  const double s1 = sl.value() / N;
  const double s2 = sl1.value() / N;

  auto loglik = [&](double al, double be) {
    return (al - 1.0) * s1 + (be - 1.0) * s2 - log_beta_fn(al, be);
  };
  auto project = [](double v) { return std::clamp(v, kMleLowerBound, kMleUpperBound); };

  double al = 2.0, be = 2.0;
  try {
    const BetaParams start = beta_mom(m1.value() / N, m2.value() / N);
    al = project(start.alpha);
    be = project(start.beta);
  } catch (const MomentDomain&) {
  }

  constexpr int kMaxIter = 200;
  // Converged once the Newton decrement g' A^{-1} g is this small; below
  // kQuadratic the full Newton step is taken without a line search, since
  // log-likelihood differences there are at rounding level.
  constexpr double kDecrementTol = 1e-20;
  constexpr double kQuadratic = 1e-12;
  auto finish = [&]() -> BetaParams {
    if (al >= kMleUpperBound || be >= kMleUpperBound) {
      throw EstimationError("beran_mle: estimate on the upper boundary of the box", al, be);
    }
    return {al, be};
  };
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double dab = digamma(al + be);
    const double ga = s1 - digamma(al) + dab;
    const double gb = s2 - digamma(be) + dab;
    const FisherMatrix A = fisher_matrix({al, be});

    const bool fix_a = (al <= kMleLowerBound && ga <= 0.0) || (al >= kMleUpperBound && ga >= 0.0);
    const bool fix_b = (be <= kMleLowerBound && gb <= 0.0) || (be >= kMleUpperBound && gb >= 0.0);
    if (fix_a && fix_b) return finish();

    // Newton direction A^{-1} g on the free coordinates.
    double da = 0.0, db = 0.0;
    if (!fix_a && !fix_b) {
      const double det = A.det();
      da = (A.bb * ga - A.ab * gb) / det;
      db = (A.aa * gb - A.ab * ga) / det;
    } else if (!fix_a) {
      da = ga / A.aa;
    } else {
      db = gb / A.bb;
    }
    const double decrement = ga * da + gb * db;
    if (decrement < kDecrementTol) return finish();

    double na = project(al + da);
    double nb = project(be + db);
    if (decrement >= kQuadratic) {
      const double base = loglik(al, be);
      double step = 1.0;
      int k = 0;
      while (loglik(na, nb) < base) {
        if (++k > 60) throw EstimationError("beran_mle: line search failed", al, be);
        step *= 0.5;
        na = project(al + step * da);
        nb = project(be + step * db);
      }
    }
    if (na == al && nb == be) return finish();
    al = na;
    be = nb;
  }
  throw EstimationError("beran_mle: no convergence after 200 iterations", al, be);
}

inline GofResult t2_parametric(const Ecdf& e, const BetaParams& theta0, double kappa,
                               double level) {
  check_level(level);
  validate(theta0, /*above_one=*/true);
  const BetaParams hat = beran_mle(e, kappa);
  const FisherMatrix A = fisher_matrix(theta0);
  GofResult r;
  r.method = GofMethod::T2Parametric;
  r.level = level;
  r.fitted_theta = hat;
  r.statistic = static_cast<double>(e.size()) *
                A.quad_form(hat.alpha - theta0.alpha, hat.beta - theta0.beta);
  r.statistic = std::max(r.statistic, 0.0);
  r.p_value = chi2_2_sf(r.statistic);
  r.critical_value = chi2_2_quantile(level);
  return r;
}

}  // namespace rcar

#endif  // RCAR_GOF_HPP_
