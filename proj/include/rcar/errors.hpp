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

#ifndef RCAR_ERRORS_HPP_
#define RCAR_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcar {

// Base of every error raised by the library. The CLI maps these to exit
// code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series, continued fraction or iteration hit its cap before converging.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Improper integral that does not settle near an endpoint.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

// Constant (zero variance) series handed to the autocorrelation estimator.
class DegenerateSeries : public Error {
 public:
  explicit DegenerateSeries(std::size_t series_index)
      : Error("degenerate (constant) series at index " +
              std::to_string(series_index)),
        index_(series_index) {}
  DegenerateSeries() : Error("degenerate (constant) series"), index_(npos) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Sample moments that no Beta law can have.
class MomentDomain : public Error {
 public:
  using Error::Error;
};

// Data outside the support of the hypothesised family.
class SupportError : public Error {
 public:
  using Error::Error;
};

// Maximum likelihood fit failed; carries the last iterate.
class EstimationError : public Error {
 public:
  EstimationError(const std::string& what, double alpha, double beta)
      : Error(what), alpha_(alpha), beta_(beta) {}

  double last_alpha() const noexcept { return alpha_; }
  double last_beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
};

// Invalid configuration values (study settings, replication counts, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcar

#endif  // RCAR_ERRORS_HPP_
