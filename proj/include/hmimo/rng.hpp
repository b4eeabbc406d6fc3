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

#include <cstdint>
#include <random>

#include "hmimo/linalg.hpp"

namespace hmimo {

using Rng = std::mt19937_64;

// Stream tags for the seed split scheme. A run's master seed is mixed with a
// tag to give each purpose an independent stream.
enum class SeedStream : std::uint64_t {
  geometry = 1,
  correlation = 2,
  monte_carlo = 3,
  ffr = 4,
  comp = 5,
};

// SplitMix64 finalizer of (seed, stream). Pure and platform independent.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

// Vector of i.i.d. circularly-symmetric complex Gaussians with the given
// per-entry variance (real and imaginary parts each carry half).
CVector complex_gaussian(Rng& rng, Eigen::Index n, double variance);
CMatrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance);

}  // namespace hmimo
