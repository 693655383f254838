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

#ifndef RCAR_QUADRATURE_HPP_
#define RCAR_QUADRATURE_HPP_

#include <cmath>
#include <numbers>

#include "rcar/errors.hpp"

namespace rcar {

// Signed integrand value stored as sign * exp(log_abs), so that integrable
// endpoint singularities times vanishing quadrature weights never overflow.
struct LogValue {
  double log_abs = -INFINITY;
  double sign = 1.0;
};

// Tanh-sinh (double exponential) quadrature of a function on (0, 1).
//
// `log_f(s, log_s, log_1ms)` returns the integrand at s as a LogValue; the
// logs of s and 1 - s are supplied exactly so that the integrand can be
// evaluated arbitrarily close to either endpoint. The step is halved until
// two successive estimates agree to `rel_tol`; IntegrabilityError if that
// has not happened after `max_level` halvings.
template <class F>
double tanh_sinh_unit(F&& log_f, double rel_tol = 1e-10, int max_level = 12) {
  constexpr double kTMax = 10.0;

  // log(1 + exp(z)) without overflow.
  auto softplus = [](double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  };
  auto term = [&](double t) {
    // s = 1 / (1 + exp(-pi sinh t))
    const double z = std::numbers::pi * std::sinh(t);
    const double log_s = -softplus(-z);
    const double log_1ms = -softplus(z);
    const double s = std::exp(log_s);
    const LogValue v = log_f(s, log_s, log_1ms);
    // ds/dt = pi cosh t * s (1 - s)
    const double log_w = std::log(std::numbers::pi * std::cosh(t)) + log_s + log_1ms;
    return v.sign * std::exp(v.log_abs + log_w);
  };

  double step = 0.5;
  double sum = term(0.0);
  for (int k = 1; k * step <= kTMax; ++k) {
    sum += term(k * step) + term(-k * step);
  }
  double estimate = sum * step;
  for (int level = 1; level <= max_level; ++level) {
    // Add the midpoints of the previous grid.
    double mids = 0.0;
    const double half = 0.5 * step;
    for (int k = 1; (2 * k - 1) * half <= kTMax; ++k) {
      const double t = (2 * k - 1) * half;
      mids += term(t) + term(-t);
    }
    sum += mids;
    step *= 0.5;
    const double next = sum * step;
    if (!std::isfinite(next)) break;
    if (std::fabs(next - estimate) <= rel_tol * std::fabs(next)) return next;
    estimate = next;
  }
  throw IntegrabilityError("tanh-sinh quadrature did not converge");
}

}  // namespace rcar

#endif  // RCAR_QUADRATURE_HPP_
