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

// Estimation from panel data: the lag-1 sample autocorrelation of each
// series, the empirical CDF of those estimates, moment estimators, the Beta
// method of moments and kernel density estimation.

#ifndef RCAR_ESTIMATORS_HPP_
#define RCAR_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rcar/errors.hpp"
#include "rcar/panel.hpp"
#include "rcar/special_fn.hpp"
#include "rcar/text.hpp"

namespace rcar {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Centered lag-1 sample autocorrelation
//   sum_{t<n} (X_t - m)(X_{t+1} - m) / sum_t (X_t - m)^2.
// Requires n >= 3; throws DegenerateSeries for a constant series.
inline double lag1_autocorr(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw DomainError("lag1_autocorr needs at least 3 observations");
  CompensatedSum total;
  for (double v : x) total.add(v);
  const double mean = total.value() / static_cast<double>(n);
  CompensatedSum num;
  CompensatedSum den;
  double prev = x[0] - mean;
  den.add(prev * prev);
  for (std::size_t t = 1; t < n; ++t) {
    const double cur = x[t] - mean;
    num.add(prev * cur);
    den.add(cur * cur);
    prev = cur;
  }
  const double d = den.value();
  if (!(d >= 1e-300)) throw DegenerateSeries();
  return std::clamp(num.value() / d, -1.0, 1.0);
}

// Variant for series whose mean is known to be zero: the same ratio with
// raw instead of centered values,
//   sum_{t<n} X_t X_{t+1} / sum_t X_t^2.
inline double lag1_autocorr_zero_mean(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw DomainError("lag1_autocorr needs at least 3 observations");
  CompensatedSum num;
  CompensatedSum den;
  den.add(x[0] * x[0]);
  for (std::size_t t = 1; t < n; ++t) {
    num.add(x[t - 1] * x[t]);
    den.add(x[t] * x[t]);
  }
  const double d = den.value();
  if (!(d >= 1e-300)) throw DegenerateSeries();
  return std::clamp(num.value() / d, -1.0, 1.0);
}

enum class AutocorrEstimator {
  Centered,  // lag1_autocorr
  ZeroMean,  // lag1_autocorr_zero_mean
};

inline std::string to_string(AutocorrEstimator e) {
  return e == AutocorrEstimator::Centered ? "centered" : "zero_mean";
}

inline AutocorrEstimator parse_autocorr_estimator(std::string_view name) {
  if (name == "centered") return AutocorrEstimator::Centered;
  if (name == "zero_mean") return AutocorrEstimator::ZeroMean;
  throw ConfigError("unknown estimator '" + std::string(name) +
                    "' (centered | zero_mean)");
}

// Empirical distribution function of a sample in [-1, 1]. Points are kept
// sorted; each remembers the (0-based) series it came from.
class Ecdf {
 public:
  Ecdf() = default;

  // Values in series order; series k gets index k.
  explicit Ecdf(std::vector<double> values) {
    std::vector<std::size_t> ids(values.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    init(std::move(values), std::move(ids));
  }

  Ecdf(std::vector<double> values, std::vector<std::size_t> series_ids) {
    if (values.size() != series_ids.size()) {
      throw DomainError("Ecdf: values and series ids differ in length");
    }
    init(std::move(values), std::move(series_ids));
  }

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const std::size_t> series_ids() const noexcept { return ids_; }

  // Fraction of points <= x (right-continuous).
  double operator()(double x) const {
    if (points_.empty()) return 0.0;
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    return static_cast<double>(it - points_.begin()) /
           static_cast<double>(points_.size());
  }

 private:
  void init(std::vector<double> values, std::vector<std::size_t> ids) {
    for (double v : values) {
      if (!(v >= -1.0 && v <= 1.0)) {
        throw DomainError("Ecdf points must lie in [-1, 1], got " +
                          format_real(v));
      }
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return values[l] < values[r];
    });
    points_.resize(values.size());
    ids_.resize(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      points_[k] = values[order[k]];
      ids_[k] = ids[order[k]];
    }
  }

  std::vector<double> points_;
  std::vector<std::size_t> ids_;
};

inline double ecdf_eval(const Ecdf& e, double x) { return e(x); }

// Lag-1 autocorrelation of every series of a panel, as an Ecdf. A constant
// series raises DegenerateSeries carrying its (0-based) index.
inline Ecdf estimate_coeffs(const Panel& panel,
                            AutocorrEstimator estimator = AutocorrEstimator::Centered,
                            unsigned workers = 1) {
  std::vector<double> est(panel.N);
  std::vector<char> bad(panel.N, 0);
  auto run = [&](std::size_t i) {
    try {
      est[i] = estimator == AutocorrEstimator::Centered
                   ? lag1_autocorr(panel.series(i))
                   : lag1_autocorr_zero_mean(panel.series(i));
    } catch (const DegenerateSeries&) {
      bad[i] = 1;
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(panel.N)));
  if (workers == 1) {
    for (std::size_t i = 0; i < panel.N; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < panel.N; i += workers) run(i);
      });
    }
  }
  for (std::size_t i = 0; i < panel.N; ++i) {
    if (bad[i]) throw DegenerateSeries(i);
  }
  return Ecdf(std::move(est));
}

// mu[u - 1] = (1/N) sum_i a_i^u, u = 1..m.
struct MomentVector {
  std::vector<double> mu;
};

inline MomentVector sample_moments(const Ecdf& e, std::size_t m = 2) {
  if (m == 0) throw DomainError("sample_moments needs m >= 1");
  if (e.empty()) throw DomainError("sample_moments of an empty sample");
  std::vector<CompensatedSum> sums(m);
  for (double a : e.points()) {
    double p = 1.0;
    for (std::size_t u = 0; u < m; ++u) {
      p *= a;
      sums[u].add(p);
    }
  }
  MomentVector out;
  out.mu.reserve(m);
  for (const auto& s : sums) out.mu.push_back(s.value() / static_cast<double>(e.size()));
  return out;
}

// Beta parameters matching the first two raw moments:
//   alpha = mu1 (mu1 - mu2) / (mu2 - mu1^2),
//   beta  = (1 - mu1)(mu1 - mu2) / (mu2 - mu1^2).
inline BetaParams beta_mom(double mu1, double mu2) {
  const double var = mu2 - mu1 * mu1;
  if (!(var > 0.0)) {
    throw MomentDomain("beta_mom: mu2 - mu1^2 > 0 fails (variance " +
                       format_real(var) + ")");
  }
  if (!(mu2 > 0.0)) throw MomentDomain("beta_mom: mu2 > 0 fails");
  if (!(mu1 > mu2)) throw MomentDomain("beta_mom: mu1 > mu2 fails");
  const double common = (mu1 - mu2) / var;
  return {mu1 * common, (1.0 - mu1) * common};
}

inline BetaParams beta_mom(const MomentVector& m) {
  if (m.mu.size() < 2) throw DomainError("beta_mom needs two moments");
  return beta_mom(m.mu[0], m.mu[1]);
}

// Kernels supported on [-1, 1].
enum class KernelKind { Epanechnikov, Triangular, Quartic };

struct KernelSpec {
  KernelKind kind = KernelKind::Epanechnikov;

  double operator()(double y) const {
    const double ay = std::fabs(y);
    if (ay > 1.0) return 0.0;
    switch (kind) {
      case KernelKind::Epanechnikov:
        return 0.75 * (1.0 - y * y);
      case KernelKind::Triangular:
        return 1.0 - ay;
      case KernelKind::Quartic: {
        const double q = 1.0 - y * y;
        return 0.9375 * q * q;
      }
    }
    return 0.0;
  }

  // ||K||_2^2 = integral K^2.
  double l2_norm_sq() const {
    switch (kind) {
      case KernelKind::Epanechnikov: return 3.0 / 5.0;
      case KernelKind::Triangular: return 2.0 / 3.0;
      case KernelKind::Quartic: return 5.0 / 7.0;
    }
    return 0.0;
  }

  // mu_2(K) = integral y^2 K(y) dy.
  double second_moment() const {
    switch (kind) {
      case KernelKind::Epanechnikov: return 1.0 / 5.0;
      case KernelKind::Triangular: return 1.0 / 6.0;
      case KernelKind::Quartic: return 1.0 / 7.0;
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case KernelKind::Epanechnikov: return "epanechnikov";
      case KernelKind::Triangular: return "triangular";
      case KernelKind::Quartic: return "quartic";
    }
    return {};
  }

  static KernelSpec parse(std::string_view name) {
    if (name == "epanechnikov") return {KernelKind::Epanechnikov};
    if (name == "triangular") return {KernelKind::Triangular};
    if (name == "quartic") return {KernelKind::Quartic};
    throw ConfigError("unknown kernel '" + std::string(name) + "'");
  }
};

// g_hat(x) = 1/(N h) sum_i K((x - a_i) / h). No boundary correction is
// applied, so the estimate is biased within h of +-1.
inline double kde_eval(const Ecdf& e, const KernelSpec& kernel, double h, double x) {
  if (!(h > 0.0)) throw DomainError("kde bandwidth must be positive");
  if (e.empty()) throw DomainError("kde of an empty sample");
  const auto pts = e.points();
  // Only points within h of x contribute.
  const auto lo = std::lower_bound(pts.begin(), pts.end(), x - h);
  const auto hi = std::upper_bound(pts.begin(), pts.end(), x + h);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) sum += kernel((x - *it) / h);
  return sum / (static_cast<double>(pts.size()) * h);
}

// h = c N^(-1/5).
inline double bandwidth_rule(std::size_t N, double c) {
  if (N == 0) throw DomainError("bandwidth_rule needs N >= 1");
  if (!(c > 0.0)) throw DomainError("bandwidth constant must be positive");
  return c * std::pow(static_cast<double>(N), -0.2);
}

// CSV "series,a_hat" with 1-based series numbers, in series order.
inline void write_coeffs_csv(std::ostream& out, const Ecdf& e) {
  std::vector<std::pair<std::size_t, double>> rows;
  rows.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    rows.emplace_back(e.series_ids()[k], e.points()[k]);
  }
  std::sort(rows.begin(), rows.end());
  out << "series,a_hat\n";
  for (const auto& [id, a] : rows) out << (id + 1) << ',' << format_real(a) << '\n';
}

inline Ecdf read_coeffs_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line) || trim(line) != "series,a_hat") {
    throw IoError("coefficient CSV header must be 'series,a_hat'");
  }
  std::vector<double> values;
  std::vector<std::size_t> ids;
  while (read_line(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw IoError("coefficient CSV row needs 2 fields");
    const auto id = parse_int<std::size_t>(fields[0]);
    if (id == 0) throw IoError("series numbers start at 1");
    ids.push_back(id - 1);
    values.push_back(parse_real(fields[1]));
  }
  if (values.empty()) throw IoError("coefficient CSV has no rows");
  return Ecdf(std::move(values), std::move(ids));
}

// CSV "x,g_hat" on the given grid.
inline void write_kde_csv(std::ostream& out, const Ecdf& e, const KernelSpec& kernel,
                          double h, std::span<const double> grid) {
  out << "x,g_hat\n";
  for (double x : grid) {
    out << format_real(x) << ',' << format_real(kde_eval(e, kernel, h, x)) << '\n';
  }
}

}  // namespace rcar

#endif  // RCAR_ESTIMATORS_HPP_
