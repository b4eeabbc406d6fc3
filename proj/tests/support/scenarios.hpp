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

// Scenario builders shared by the unit tests and the acceptance suite.

#include <cstdint>

#include "hmimo/corrmat.hpp"
#include "hmimo/layout.hpp"
#include "hmimo/rng.hpp"

namespace hmimo::testing {

// One BS, one user, Theta = gain * I.
inline CorrelationSet isotropic_single_user(int M, double gain = 1.0) {
  CorrelationSet c(1, 1, M);
  c.set(0, 0, CorrelationMatrix(gain * CMatrix::Identity(M, M), M));
  return c;
}

// Two BSs with `per_bs` users each and rank-`rank` correlations. The last user of
// every cell sees the other BS at `edge_gain` (an edge at theta = 10 dB); the rest
// see it at `weak_gain`.
inline CorrelationSet two_cell_scenario(int M, int rank, int per_bs, std::uint64_t seed, double edge_gain = 0.3,
                                        double weak_gain = 0.01) {
  const int K = 2 * per_bs;
  CorrelationSet c(2, K, M);
  for (int k = 0; k < K; ++k) {
    const int home = k / per_bs;
    const bool edge = k % per_bs == per_bs - 1;
    for (int n = 0; n < 2; ++n) {
      const double gain = n == home ? 1.0 : (edge ? edge_gain : weak_gain);
      const auto s = derive_seed(seed, static_cast<std::uint64_t>(k * 2 + n));
      c.set(k, n, random_clustered_correlation(M, rank, gain, s));
    }
    c.set_serving_hint(k, home);
  }
  return c;
}

// Single BS with K users of rank `rank` and unit gain.
inline CorrelationSet single_cell_scenario(int M, int rank, int K, std::uint64_t seed) {
  CorrelationSet c(1, K, M);
  for (int k = 0; k < K; ++k) {
    c.set(k, 0, random_clustered_correlation(M, rank, 1.0, derive_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return c;
}

// Default desk geometry: N = 2, K = 6, M = 16, rank 4.
inline CorrelationSet desk_scenario(std::uint64_t seed) { return generate_layout(LayoutSpec{}, seed).corr; }

}  // namespace hmimo::testing
