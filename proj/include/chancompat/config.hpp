// Copyright 2026 The chancompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace chancompat {

/// Numerical slack used throughout the library. Exact cones need explicit
/// tolerances in floating point; every default lives here.
struct Tolerances {
  /// Hermiticity check at construction, max-entry deviation.
  double construction = 1e-12;
  /// PSD, trace and effect-range checks on states, effects and channels.
  double psd = 1e-9;
  /// Relative duality-gap target of the interior point solver.
  double solver_gap = 1e-7;
  /// Relative primal/dual residual target of the interior point solver.
  double solver_feasibility = 1e-9;
  /// Half-width of the Marginal band around slack 0.
  double feasibility_eps = 1e-7;
  /// Rank-revealing threshold when pruning constraint rows.
  double rank = 1e-10;
  /// Residual allowed when re-validating a witness outside the solver.
  double witness_residual = 1e-6;
  /// Negative eigenvalue allowed when re-validating a witness.
  double witness_psd = 1e-8;
};

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chancompat
