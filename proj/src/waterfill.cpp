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

#include "hmimo/waterfill.hpp"

#include <cmath>

#include "hmimo/det_equiv.hpp"
#include "hmimo/error.hpp"

namespace hmimo {

namespace {

bool eligible(double mu, double xi) { return mu > 0.0 && xi > kXiFloor; }

RVector powers_at(const RVector& mu, const RVector& xi, double M, double lambda) {
  RVector p = RVector::Zero(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (eligible(mu(i), xi(i))) p(i) = std::max(0.0, mu(i) * M * xi(i) / lambda - 1.0);
  }
  return p;
}

}  // namespace

double waterfill_power(const RVector& power, const RVector& xi, double M) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < power.size(); ++i) {
    if (power(i) > 0.0) s += power(i) / xi(i);
  }
  return s / M;
}

WaterfillResult waterfill(const RVector& mu, const RVector& xi, double M, double pc) {
  if (mu.size() != xi.size()) throw ParameterError("waterfill: mu and xi differ in size");
  if (!(pc > 0.0)) throw ParameterError("waterfill: P_c must be positive");
  if (!(M > 0.0)) throw ParameterError("waterfill: M must be positive");
  WaterfillResult out;
  out.power = RVector::Zero(mu.size());
  double hi = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (xi(i) < 0.0) throw ParameterError("waterfill: negative xi");
    if (eligible(mu(i), xi(i))) hi = std::max(hi, mu(i) * M * xi(i));
  }
  if (hi == 0.0) return out;

  // Total power is decreasing in lambda and zero at hi.
  double lo = hi;
  while (waterfill_power(powers_at(mu, xi, M, lo), xi, M) < pc) lo *= 0.5;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (waterfill_power(powers_at(mu, xi, M, mid), xi, M) >= pc) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double lambda = lo;

  // Closed form on the active set removes the bisection residual.
  double smu = 0.0;
  double sinv = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (eligible(mu(i), xi(i)) && mu(i) * M * xi(i) > lambda) {
      smu += mu(i);
      sinv += 1.0 / xi(i);
    }
  }
  const double exact = smu / (pc + sinv / M);
  bool consistent = true;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!eligible(mu(i), xi(i))) continue;
    const bool was = mu(i) * M * xi(i) > lambda;
    const bool now = mu(i) * M * xi(i) > exact;
    if (was != now) consistent = false;
  }
  if (consistent) lambda = exact;

  out.lambda = lambda;
  out.power = powers_at(mu, xi, M, lambda);
  for (Eigen::Index i = 0; i < mu.size(); ++i) out.active += out.power(i) > 0.0 ? 1 : 0;
  return out;
}

}  // namespace hmimo
