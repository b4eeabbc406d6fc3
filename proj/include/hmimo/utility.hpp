// Copyright 2026 The hmimo Authors.
//
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

// Network utilities U(r) = sum_k w_k u(r_k) of long-term average rates.

#include <string>

#include "hmimo/linalg.hpp"

namespace hmimo {

enum class UtilityKind { alpha_fair, pfs, sum_rate };

struct UtilityFunction {
  UtilityKind kind = UtilityKind::pfs;
  double alpha = 1.0;
  double epsilon = 1e-4;
  RVector weights;
  // Bound on the curvature of U over r >= 0.
  double lipschitz_hint = 1.0;
};

// Equal weights 1/K.
UtilityFunction make_utility(UtilityKind kind, int num_users, double alpha = 1.0, double epsilon = 1e-4);

UtilityKind parse_utility_kind(const std::string& name);
std::string utility_kind_name(UtilityKind kind);

struct UtilityEval {
  double value = 0.0;
  RVector grad;
};

// Throws ParameterError on negative rates or a weight/rate size mismatch.
UtilityEval utility_value_grad(const UtilityFunction& u, const RVector& rbar);
double utility_value(const UtilityFunction& u, const RVector& rbar);

}  // namespace hmimo
