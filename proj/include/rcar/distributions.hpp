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

// Laws of the random autoregressive coefficient and of the innovations.

#ifndef RCAR_DISTRIBUTIONS_HPP_
#define RCAR_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "rcar/errors.hpp"
#include "rcar/quadrature.hpp"
#include "rcar/random.hpp"
#include "rcar/special_fn.hpp"
#include "rcar/text.hpp"

namespace rcar {

// a ~ Beta(alpha, beta) on (0, 1).
struct BetaOn01 {
  BetaParams params;
};

// a = sqrt(U), U ~ Beta(alpha, beta); density
//   g(x) = 2 / B(alpha, beta) x^(2 alpha - 1) (1 - x^2)^(beta - 1), 0 < x < 1.
// Requires alpha, beta > 1.
struct SqrtBeta {
  BetaParams params;
};

struct PointMass {
  double a0 = 0.0;
};

// Uniform on (lo, hi), -1 < lo < hi < 1.
struct UniformCoeff {
  double lo = 0.0;
  double hi = 0.5;
};

using CoeffDist = std::variant<BetaOn01, SqrtBeta, PointMass, UniformCoeff>;

struct StandardNormal {};

// Student t rescaled to unit variance; df > 4.
struct StudentT {
  double df = 5.0;
};

using InnovDist = std::variant<StandardNormal, StudentT>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline void validate(const CoeffDist& dist) {
  std::visit(
      Overloaded{
          [](const BetaOn01& d) { validate(d.params); },
          [](const SqrtBeta& d) { validate(d.params, /*above_one=*/true); },
          [](const PointMass& d) {
            if (!(d.a0 > -1.0 && d.a0 < 1.0)) {
              throw DomainError("point mass must lie strictly inside (-1, 1)");
            }
          },
          [](const UniformCoeff& d) {
            if (!(d.lo > -1.0 && d.lo < d.hi && d.hi < 1.0)) {
              throw DomainError("uniform coefficient law needs -1 < lo < hi < 1");
            }
          }},
      dist);
}

inline void validate(const InnovDist& dist) {
  if (const auto* t = std::get_if<StudentT>(&dist)) {
    if (!(t->df > 4.0) || !std::isfinite(t->df)) {
      throw DomainError("Student-t innovations need df > 4");
    }
  }
}

inline double sample_coeff(const CoeffDist& dist, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const BetaOn01& d) { return rng.beta(d.params); },
          [&](const SqrtBeta& d) { return std::sqrt(rng.beta(d.params)); },
          [&](const PointMass& d) { return d.a0; },
          [&](const UniformCoeff& d) {
            return d.lo + (d.hi - d.lo) * rng.uniform();
          }},
      dist);
}

inline double sample_innovation(const InnovDist& dist, Rng& rng) {
  if (const auto* t = std::get_if<StudentT>(&dist)) {
    return rng.student_t_unit(t->df);
  }
  return rng.normal();
}

// G(x) = P(a <= x).
inline double coeff_cdf(const CoeffDist& dist, double x) {
  return std::visit(
      Overloaded{
          [&](const BetaOn01& d) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return beta_cdf(x, d.params);
          },
          [&](const SqrtBeta& d) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return beta_cdf(x * x, d.params);
          },
          [&](const PointMass& d) { return x < d.a0 ? 0.0 : 1.0; },
          [&](const UniformCoeff& d) {
            return std::clamp((x - d.lo) / (d.hi - d.lo), 0.0, 1.0);
          }},
      dist);
}

// Autocovariance of the stationary RCAR(1) process with unit innovation
// variance,
//   gamma(lag) = integral x^lag / (1 - x^2) dG(x),
// by tanh-sinh quadrature (relative error well under 1e-6). Beta-type laws
// need beta > 1 for the integral to exist.
inline double theoretical_autocov(const CoeffDist& dist, unsigned lag) {
  validate(dist);
  const double L = static_cast<double>(lag);
  constexpr double kRelTol = 1e-9;
  auto need_beta_above_one = [](const BetaParams& p) {
    if (!(p.beta > 1.0)) {
      throw IntegrabilityError(
          "autocovariance integral diverges at x = 1 unless beta > 1");
    }
  };
  return std::visit(
      Overloaded{
          [&](const PointMass& d) {
            return std::pow(d.a0, L) / (1.0 - d.a0 * d.a0);
          },
          [&](const BetaOn01& d) {
            need_beta_above_one(d.params);
            const double a = d.params.alpha;
            const double b = d.params.beta;
            const double lb = log_beta_fn(a, b);
            // x^(L + a - 1) (1 - x)^(b - 2) / (1 + x) / B(a, b)
            return tanh_sinh_unit(
                [&](double s, double log_s, double log_1ms) {
                  return LogValue{(L + a - 1.0) * log_s +
                                      (b - 2.0) * log_1ms - std::log1p(s) - lb,
                                  1.0};
                },
                kRelTol);
          },
          [&](const SqrtBeta& d) {
            need_beta_above_one(d.params);
            const double a = d.params.alpha;
            const double b = d.params.beta;
            const double lb = log_beta_fn(a, b);
            // Substituting u = x^2: u^(L/2 + a - 1) (1 - u)^(b - 2) / B(a, b)
            return tanh_sinh_unit(
                [&](double, double log_u, double log_1mu) {
                  return LogValue{(0.5 * L + a - 1.0) * log_u +
                                      (b - 2.0) * log_1mu - lb,
                                  1.0};
                },
                kRelTol);
          },
          [&](const UniformCoeff& d) {
            const double width = d.hi - d.lo;
            return tanh_sinh_unit(
                [&](double s, double, double) {
                  const double x = d.lo + width * s;
                  const double v = std::pow(x, L) / (1.0 - x * x);
                  return LogValue{std::log(std::fabs(v)), v < 0.0 ? -1.0 : 1.0};
                },
                kRelTol);
          }},
      dist);
}

// Text forms: "beta:A,B", "sqrt-beta:A,B", "point:A0", "uniform:LO,HI".
inline std::string to_string(const CoeffDist& dist) {
  return std::visit(
      Overloaded{
          [](const BetaOn01& d) {
            return "beta:" + format_real(d.params.alpha) + "," +
                   format_real(d.params.beta);
          },
          [](const SqrtBeta& d) {
            return "sqrt-beta:" + format_real(d.params.alpha) + "," +
                   format_real(d.params.beta);
          },
          [](const PointMass& d) { return "point:" + format_real(d.a0); },
          [](const UniformCoeff& d) {
            return "uniform:" + format_real(d.lo) + "," + format_real(d.hi);
          }},
      dist);
}

inline CoeffDist parse_coeff_dist(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("coefficient law '" + std::string(text) +
                      "' is missing ':' (e.g. sqrt-beta:2,1.4)");
  }
  const std::string_view kind = trim(text.substr(0, colon));
  const std::vector<double> args = parse_real_list(text.substr(colon + 1));
  auto want = [&](std::size_t k) {
    if (args.size() != k) {
      throw ConfigError("coefficient law '" + std::string(kind) + "' takes " +
                        std::to_string(k) + " argument(s)");
    }
  };
  CoeffDist dist;
  if (kind == "beta") {
    want(2);
    dist = BetaOn01{{args[0], args[1]}};
  } else if (kind == "sqrt-beta") {
    want(2);
    dist = SqrtBeta{{args[0], args[1]}};
  } else if (kind == "point") {
    want(1);
    dist = PointMass{args[0]};
  } else if (kind == "uniform") {
    want(2);
    dist = UniformCoeff{args[0], args[1]};
  } else {
    throw ConfigError("unknown coefficient law '" + std::string(kind) + "'");
  }
  validate(dist);
  return dist;
}

// "normal" or "student-t:DF".
inline std::string to_string(const InnovDist& dist) {
  if (const auto* t = std::get_if<StudentT>(&dist)) {
    return "student-t:" + format_real(t->df);
  }
  return "normal";
}

inline InnovDist parse_innov_dist(std::string_view text) {
  text = trim(text);
  if (text == "normal") return StandardNormal{};
  constexpr std::string_view kPrefix = "student-t:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    InnovDist dist = StudentT{parse_real(text.substr(kPrefix.size()))};
    validate(dist);
    return dist;
  }
  throw ConfigError("unknown innovation law '" + std::string(text) + "'");
}

}  // namespace rcar

#endif  // RCAR_DISTRIBUTIONS_HPP_
