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

// Independent reference computations used by the tests. None of these share
// code paths with the library routines they check.

#ifndef RCAR_TESTS_ORACLES_HPP_
#define RCAR_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace rcar::oracle {

// ln Gamma by upward recurrence to x >= 40 and the Stirling series.
inline double log_gamma(double x) {
  double shift = 0.0;
  while (x < 40.0) {
    shift -= std::log(x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
  return shift + (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

// I_x(a, b) by the power series
//   x^a (1-x)^b / (a B(a,b)) * sum_k B(a+1, k+1) / B(a+b, k+1) x^k,
// using the reflection I_x(a,b) = 1 - I_{1-x}(b,a) for x > 1/2.
inline double beta_cdf(double x, double a, double b, int max_terms = 200000) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > 0.5) return 1.0 - beta_cdf(1.0 - x, b, a, max_terms);
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    term *= (a + b + k) / (a + 1.0 + k) * x;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta) / a * sum;
}

// psi_1(x) = sum_{k>=0} 1/(x+k)^2: K terms plus the Euler-Maclaurin tail.
inline double trigamma(double x, long terms = 200000) {
  double sum = 0.0;
  for (long k = terms - 1; k >= 0; --k) {
    const double v = x + static_cast<double>(k);
    sum += 1.0 / (v * v);
  }
  const double z = x + static_cast<double>(terms);
  return sum + 1.0 / z + 0.5 / (z * z) + 1.0 / (6.0 * z * z * z);
}

// Kolmogorov CDF with `budget` times as many terms as needed for the
// library's 1e-14 cutoff: the alternating series 1 - 2 sum (-1)^(k-1)
// exp(-2 k^2 y^2) for y >= 0.15, the theta form below.
inline double kolmogorov_cdf(double y, int budget = 2) {
  if (y <= 0.0) return 0.0;
  const double cutoff = std::log(1e14);
  if (y < 0.15) {
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * y * y);
    const int terms = budget * (static_cast<int>(std::sqrt(cutoff / c)) + 2);
    long double sum = 0.0L;
    for (int k = terms; k >= 1; --k) {
      const long double odd = 2.0L * k - 1.0L;
      sum += std::exp(-odd * odd * c);
    }
    return static_cast<double>(std::sqrt(2.0L * std::numbers::pi) / y * sum);
  }
  const int terms = budget * (static_cast<int>(std::sqrt(cutoff / (2.0 * y * y))) + 2);
  long double sum = 0.0L;
  for (int k = terms; k >= 1; --k) {
    const long double t = std::exp(-2.0L * k * k * static_cast<long double>(y) * y);
    sum += (k % 2 == 1) ? t : -t;
  }
  return static_cast<double>(1.0L - 2.0L * sum);
}

// Composite Simpson rule with `intervals` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double s = f(lo) + f(hi);
  for (int k = 1; k < intervals; ++k) s += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Composite trapezoid rule on `nodes` equally spaced points.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                        int nodes) {
  const double h = (hi - lo) / (nodes - 1);
  double s = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < nodes - 1; ++k) s += f(lo + k * h);
  return s * h;
}

// Raw moments of Beta(a, b).
inline double beta_mean(double a, double b) { return a / (a + b); }
inline double beta_second_moment(double a, double b) {
  return a * (a + 1.0) / ((a + b) * (a + b + 1.0));
}

// Centered lag-1 autocorrelation, textbook two-pass form.
inline double lag1_autocorr(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t + 1 < x.size()) num += (x[t] - mean) * (x[t + 1] - mean);
  }
  return num / den;
}

// One-sample KS distance from Uniform(0, 1) (for p-value uniformity checks).
inline double ks_uniform_distance(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max({d, (i + 1) / n - p[i], p[i] - i / n});
  }
  return d;
}

}  // namespace rcar::oracle

#endif  // RCAR_TESTS_ORACLES_HPP_
