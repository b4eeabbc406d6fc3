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

// Per-BS water-filling p_k = (mu_k M xi_k / lambda - 1)^+ with lambda set so
// that (1/M) sum p_k / xi_k = P_c.

#include <vector>

#include "hmimo/linalg.hpp"

namespace hmimo {

struct WaterfillResult {
  RVector power;        // same order as the inputs
  double lambda = 0.0;  // 0 when no user is active
  int active = 0;
};

// Users with xi <= kXiFloor or mu <= 0 get zero power and are left out of the constraint.
WaterfillResult waterfill(const RVector& mu, const RVector& xi, double M, double pc);

// (1/M) sum_{p_k > 0} p_k / xi_k.
double waterfill_power(const RVector& power, const RVector& xi, double M);

}  // namespace hmimo
