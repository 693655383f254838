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

// Special functions used by the estimators and tests: log-gamma, the
// regularized incomplete Beta function, digamma/trigamma, the Kolmogorov
// distribution and the chi-square(2) survival function.
//
// Everything here is a pure function of its arguments.

#ifndef RCAR_SPECIAL_FN_HPP_
#define RCAR_SPECIAL_FN_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rcar/errors.hpp"

namespace rcar {

// Shape parameters (alpha, beta) of a Beta law.
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const BetaParams&) const = default;
};

// Throws DomainError unless both shapes are finite and positive. With
// `above_one`, both shapes must exceed 1 (required by the sqrt-Beta law and
// the parametric test).
inline void validate(const BetaParams& p, bool above_one = false) {
  const bool finite = std::isfinite(p.alpha) && std::isfinite(p.beta);
  if (!finite || p.alpha <= 0.0 || p.beta <= 0.0) {
    throw DomainError("Beta shapes must be finite and positive (alpha=" +
                      std::to_string(p.alpha) +
                      ", beta=" + std::to_string(p.beta) + ")");
  }
  if (above_one && (p.alpha <= 1.0 || p.beta <= 1.0)) {
    throw DomainError("Beta shapes must exceed 1 (alpha=" +
                      std::to_string(p.alpha) +
                      ", beta=" + std::to_string(p.beta) + ")");
  }
}

namespace detail {

inline constexpr int kMaxIterations = 10000;

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficient set).
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double log_gamma_lanczos(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double sum = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
    sum += kLanczosCoef[k] / (z + static_cast<double>(k));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(sum);
}

}  // namespace detail

// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           detail::log_gamma_lanczos(1.0 - x);
  }
  return detail::log_gamma_lanczos(x);
}

inline double log_beta_fn(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
inline double incomplete_beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete Beta function I_x(alpha, beta), i.e. the CDF of
// Beta(alpha, beta) at x.
inline double beta_cdf(double x, const BetaParams& p) {
  validate(p);
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_cdf: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = p.alpha;
  const double b = p.beta;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::incomplete_beta_cf(a, b, x) / a;
  }
  return 1.0 - front * detail::incomplete_beta_cf(b, a, 1.0 - x) / b;
}

// Beta(alpha, beta) density.
inline double beta_pdf(double x, const BetaParams& p) {
  validate(p);
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0 || x == 1.0) {
    const double e = x == 0.0 ? p.alpha : p.beta;
    if (e < 1.0) return INFINITY;
    if (e > 1.0) return 0.0;
    return std::exp(-log_beta_fn(p.alpha, p.beta));
  }
  return std::exp((p.alpha - 1.0) * std::log(x) +
                  (p.beta - 1.0) * std::log1p(-x) -
                  log_beta_fn(p.alpha, p.beta));
}

// Digamma psi(x) = d ln Gamma / dx, x > 0. Upward recurrence to x >= 10,
// then the asymptotic expansion.
inline double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("digamma: argument must be positive and finite");
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 -
                                                      inv2 / 12.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

// Trigamma psi_1(x) = d^2 ln Gamma / dx^2, x > 0. Same scheme as digamma.
inline double trigamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("trigamma: argument must be positive and finite");
  }
  double acc = 0.0;
  while (x < 6.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum_k B_2k / x^(2k+1)
  const double tail =
      inv * inv2 *
      (1.0 / 6.0 -
       inv2 * (1.0 / 30.0 -
               inv2 * (1.0 / 42.0 -
                       inv2 * (1.0 / 30.0 -
                               inv2 * (5.0 / 66.0 -
                                       inv2 * (691.0 / 2730.0 -
                                               inv2 * 7.0 / 6.0))))));
  return acc + inv + 0.5 * inv2 + tail;
}

// Kolmogorov distribution CDF
//   K(y) = 1 - 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 y^2).
// For small y the alternating series is replaced by the equivalent
// Jacobi-theta form sqrt(2 pi)/y sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 y^2)),
// which converges in a handful of terms there.
inline double kolmogorov_cdf(double y, int max_terms = detail::kMaxIterations) {
  if (std::isnan(y)) throw DomainError("kolmogorov_cdf: NaN argument");
  if (y <= 0.0) return 0.0;
  constexpr double kTermTol = 1e-14;
  constexpr double kSwitch = 0.3;
  if (y < kSwitch) {
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * y * y);
    double sum = 0.0;
    for (int k = 1; k <= max_terms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      sum += term;
      if (term < kTermTol * sum || term == 0.0) {
        return std::sqrt(2.0 * std::numbers::pi) / y * sum;
      }
    }
    throw ConvergenceError("kolmogorov_cdf: theta series did not converge");
  }
  double sum = 0.0;
  for (int k = 1; k <= max_terms; ++k) {
    const double kk = static_cast<double>(k);
    const double term = std::exp(-2.0 * kk * kk * y * y);
    sum += (k % 2 == 1) ? term : -term;
    if (term < kTermTol) {
      const double v = 1.0 - 2.0 * sum;
      return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
  }
  throw ConvergenceError("kolmogorov_cdf: series did not converge");
}

// Upper `level` quantile of the Kolmogorov law, i.e. c with
// K(c) = 1 - level. Bisection on [0.2, 3] to 1e-8.
inline double kolmogorov_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("kolmogorov_quantile: level must lie in (0, 1)");
  }
  const double target = 1.0 - level;
  double lo = 0.2;
  double hi = 3.0;
  if (kolmogorov_cdf(lo) >= target) return lo;
  if (kolmogorov_cdf(hi) <= target) return hi;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Survival function of the chi-square law with 2 degrees of freedom.
inline double chi2_2_sf(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("chi2_2_sf: argument must be nonnegative");
  }
  return std::exp(-0.5 * x);
}

// Upper `level` quantile of chi-square(2): 2 ln(1/level).
inline double chi2_2_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("chi2_2_quantile: level must lie in (0, 1)");
  }
  return -2.0 * std::log(level);
}

}  // namespace rcar

#endif  // RCAR_SPECIAL_FN_HPP_
