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

// Deterministic equivalents of per-user rate and per-BS power.
//
// For the users S_n of BS n with projected correlations Theta~_i, the
// effective gains xi solve
//   xi_i = (1/M) Tr(Theta~_i T),  T = ((1/M) sum_j Theta~_j / (nu + xi_j) + I)^{-1}.
// The simplified equivalents are r_k = log(1 + p_k) and
// P_n = (1/M) sum p_i / xi_i. The full equivalents keep the O(nu) terms.

#include <vector>

#include "hmimo/precoder.hpp"

namespace hmimo {

struct FixedPointOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

// Gains below this are treated as zero: the user contributes nothing and
// must carry zero power.
inline constexpr double kXiFloor = 1e-12;

struct XiSolution {
  RVector xi;
  CMatrix T;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

// (I - U U^H) Theta (I - U U^H), Hermitian by construction.
CMatrix projected_correlation(const CMatrix& theta, const CMatrix& nullspace_basis);

// Fixed-point iteration from xi = 1. Throws ConvergenceError after max_iter.
XiSolution solve_xi_fixed_point(const std::vector<CMatrix>& projected, double nu,
                                const FixedPointOptions& opts = {});

struct DEResult {
  RVector xi;               // per user, 0 outside S
  RVector rate;             // per user, log(1 + p_k) inside S
  RVector power;            // per BS
  std::vector<int> iterations;  // per BS
  std::vector<double> residual; // per BS
};

// Projected correlations of S_n against the nullspace of S_bar_n.
std::vector<CMatrix> projected_correlations(const CorrelationSet& corr, const TopologyGraph& graph,
                                            const UserSet& served, const UserSet& blocked, int bs);

DEResult de_rate_power(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph,
                       double nu, const FixedPointOptions& opts = {});

struct FullDEResult {
  RVector rate_hat;   // per user
  RVector power_hat;  // per BS
  RVector xi;         // per user
  RVector e;          // per user: entry of e for the user's BS block
  RVector upsilon;    // per user
  std::vector<RMatrix> J;      // per BS, |S_n| x |S_n|
  std::vector<RMatrix> e_k;    // per BS, column i holds e_i (entries over S_n)
};

// Condition number guard for (I - J).
inline constexpr double kMaxCondition = 1e12;

FullDEResult full_de(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph,
                     double nu, const FixedPointOptions& opts = {});

}  // namespace hmimo
