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

#include "hmimo/utility.hpp"

#include <algorithm>
#include <cmath>

#include "hmimo/error.hpp"

namespace hmimo {

namespace {

void check_params(const UtilityFunction& u) {
  if (u.kind == UtilityKind::alpha_fair && !(u.alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (u.kind != UtilityKind::sum_rate && !(u.epsilon >= 0.0)) throw ParameterError("epsilon must be non-negative");
}

// u(r) and u'(r) for one user.
std::pair<double, double> scalar_utility(const UtilityFunction& u, double r) {
  switch (u.kind) {
    case UtilityKind::sum_rate:
      return {r, 1.0};
    case UtilityKind::pfs:
      return {std::log(r + u.epsilon), 1.0 / (r + u.epsilon)};
    case UtilityKind::alpha_fair: {
      const double x = r + u.epsilon;
      if (u.alpha == 1.0) return {std::log(x), 1.0 / x};
      return {std::pow(x, 1.0 - u.alpha) / (1.0 - u.alpha), std::pow(x, -u.alpha)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

UtilityFunction make_utility(UtilityKind kind, int num_users, double alpha, double epsilon) {
  if (num_users < 1) throw ParameterError("utility needs at least one user");
  UtilityFunction u;
  u.kind = kind;
  u.alpha = kind == UtilityKind::pfs ? 1.0 : alpha;
  u.epsilon = kind == UtilityKind::sum_rate ? 0.0 : epsilon;
  u.weights = RVector::Constant(num_users, 1.0 / num_users);
  check_params(u);
  const double wmax = u.weights.maxCoeff();
  if (kind == UtilityKind::sum_rate) {
    u.lipschitz_hint = wmax;
  } else if (u.epsilon > 0.0) {
    u.lipschitz_hint = wmax * u.alpha * std::pow(u.epsilon, -u.alpha - 1.0);
  } else {
    u.lipschitz_hint = INFINITY;
  }
  return u;
}

UtilityKind parse_utility_kind(const std::string& name) {
  if (name == "pfs") return UtilityKind::pfs;
  if (name == "alpha_fair") return UtilityKind::alpha_fair;
  if (name == "sum_rate") return UtilityKind::sum_rate;
  throw ParameterError("unknown utility kind '" + name + "' (expected pfs, alpha_fair or sum_rate)");
}

std::string utility_kind_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::pfs: return "pfs";
    case UtilityKind::alpha_fair: return "alpha_fair";
    case UtilityKind::sum_rate: return "sum_rate";
  }
  return "unknown";
}

UtilityEval utility_value_grad(const UtilityFunction& u, const RVector& rbar) {
  check_params(u);
  if (rbar.size() != u.weights.size()) throw ParameterError("rate vector and weights differ in size");
  UtilityEval out;
  out.grad.resize(rbar.size());
  for (Eigen::Index k = 0; k < rbar.size(); ++k) {
    if (!(rbar(k) >= 0.0)) throw ParameterError("negative average rate for user " + std::to_string(k));
    const auto [v, d] = scalar_utility(u, rbar(k));
    out.value += u.weights(k) * v;
    out.grad(k) = u.weights(k) * d;
  }
  return out;
}

double utility_value(const UtilityFunction& u, const RVector& rbar) { return utility_value_grad(u, rbar).value; }

}  // namespace hmimo
