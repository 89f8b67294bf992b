// Copyright 2026 The eeopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eeopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kLn2 = 0.69314718055994530942;

/// Outcome of a solver run. Hard precondition violations throw instead.
enum class SolveStatus {
  kOptimal,       ///< converged to the requested tolerance
  kInfeasible,    ///< feasible set proven empty (or no feasible start found)
  kIterationCap,  ///< iteration/box budget exhausted; best-so-far returned
};

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kIterationCap:
      return "iteration_cap";
  }
  return "unknown";
}

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent dimensions or out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical routine hit a singular or non-definite system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A solver could not proceed (invalid start, broken inner solver).
class SolverError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace eeopt
