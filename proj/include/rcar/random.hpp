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

// Random streams. Every stream is a std::mt19937_64 whose seed is derived
// from a tuple of integers by splitmix64 mixing, so any part of a
// simulation can be regenerated independently of execution order.
//
// The variate generators below are written out rather than taken from
// <random> so that results are identical across standard libraries.

#ifndef RCAR_RANDOM_HPP_
#define RCAR_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "rcar/errors.hpp"
#include "rcar/special_fn.hpp"

namespace rcar {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a sequence of words into one 64-bit stream key:
//   k_0 = mix64(w_0), k_j = mix64(k_{j-1} ^ w_j).
constexpr std::uint64_t derive_stream(
    std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t k = 0;
  bool first = true;
  for (std::uint64_t w : words) {
    k = first ? mix64(w) : mix64(k ^ w);
    first = false;
  }
  return k;
}

// Tags that keep sibling streams apart.
inline constexpr std::uint64_t kSeriesStreamTag = 0x5345524945530001ULL;
inline constexpr std::uint64_t kCommonStreamTag = 0x434f4d4d4f4e0002ULL;
inline constexpr std::uint64_t kReplicationStreamTag = 0x5245504c49430003ULL;

class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(key) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits.
  double uniform() {
    std::uint64_t bits;
    do {
      bits = engine_() >> 11;
    } while (bits == 0);
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia's polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Gamma(shape, 1), Marsaglia-Tsang; shapes below one are boosted.
  double gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
      throw DomainError("gamma variate: shape must be positive");
    }
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(const BetaParams& p) {
    const double x = gamma(p.alpha);
    const double y = gamma(p.beta);
    return x / (x + y);
  }

  // Student t with `df` degrees of freedom, rescaled to unit variance
  // (df > 2).
  double student_t_unit(double df) {
    const double z = normal();
    const double chi2 = 2.0 * gamma(0.5 * df);
    return z / std::sqrt(chi2 / df) * std::sqrt((df - 2.0) / df);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rcar

#endif  // RCAR_RANDOM_HPP_
