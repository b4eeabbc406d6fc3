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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmimo/error.hpp"
#include "hmimo/scheduler.hpp"

namespace hmimo {

namespace {

// Euclidean projection onto {q >= 0, sum q = 1}.
RVector project_simplex(const RVector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += s[static_cast<std::size_t>(i)];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (s[static_cast<std::size_t>(i)] - t > 0.0) tau = t;
  }
  RVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::max(0.0, v(i) - tau);
  return out;
}

RMatrix stack_rates(const std::vector<RVector>& rates) {
  const Eigen::Index K = rates.front().size();
  RMatrix r(K, static_cast<Eigen::Index>(rates.size()));
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (rates[j].size() != K) throw ParameterError("rate vectors differ in length");
    r.col(static_cast<Eigen::Index>(j)) = rates[j];
  }
  return r;
}

std::vector<double> to_std(const RVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

QResult procedure_q(const std::vector<RVector>& rates, const UtilityFunction& u, const QOptions& opts,
                    const std::vector<double>& start) {
  if (rates.empty()) throw ParameterError("procedure Q needs at least one control");
  const RMatrix R = stack_rates(rates);
  const auto J = R.cols();
  QResult out;
  if (J == 1) {
    out.q = {1.0};
    out.utility = utility_value(u, R.col(0));
    out.converged = true;
    return out;
  }

  RVector q;
  if (start.empty()) {
    q = RVector::Constant(J, 1.0 / static_cast<double>(J));
  } else {
    if (static_cast<Eigen::Index>(start.size()) != J) throw ParameterError("procedure Q start has wrong length");
    q = project_simplex(Eigen::Map<const RVector>(start.data(), J));
  }

  auto eval = [&](const RVector& x) { return utility_value_grad(u, R * x); };
  UtilityEval cur = eval(q);
  RVector g = R.transpose() * cur.grad;
  double step = 1.0;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    out.grad_map_norm = (q - project_simplex(q + g)).norm();
    if (out.grad_map_norm <= opts.grad_tol) {
      out.converged = true;
      break;
    }
    step *= 2.0;
    bool moved = false;
    while (step > 1e-30) {
      const RVector cand = project_simplex(q + step * g);
      const RVector d = cand - q;
      const UtilityEval next = eval(cand);
      if (next.value >= cur.value + g.dot(d) - d.squaredNorm() / (2.0 * step) && next.value >= cur.value) {
        moved = d.squaredNorm() > 0.0;
        q = cand;
        cur = next;
        g = R.transpose() * cur.grad;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no representable ascent step remains
  }
  out.iterations = it;

  // Snap negligible weights unless that costs utility.
  RVector snapped = q;
  for (Eigen::Index j = 0; j < J; ++j) {
    if (snapped(j) < opts.snap) snapped(j) = 0.0;
  }
  snapped /= snapped.sum();
  const double snapped_value = utility_value(u, R * snapped);
  if (snapped_value >= cur.value - 1e-12) {
    q = snapped;
    cur.value = snapped_value;
  }
  out.q = to_std(q);
  out.utility = cur.value;
  return out;
}

std::vector<double> reduce_support(const std::vector<RVector>& rates, std::vector<double> q) {
  if (rates.empty()) return q;
  const RMatrix R = stack_rates(rates);
  const Eigen::Index K = R.rows();
  for (;;) {
    std::vector<Eigen::Index> support;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] > 0.0) support.push_back(static_cast<Eigen::Index>(j));
    }
    const auto s = static_cast<Eigen::Index>(support.size());
    if (s <= K) return q;
    RMatrix ra(K, s);
    for (Eigen::Index i = 0; i < s; ++i) ra.col(i) = R.col(support[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<RMatrix> svd(ra, Eigen::ComputeFullV);
    RVector d = svd.matrixV().col(s - 1);
    if (d.sum() > 0.0) d = -d;
    // Step along the null direction until a weight hits zero.
    double t = INFINITY;
    Eigen::Index hit = -1;
    for (Eigen::Index i = 0; i < s; ++i) {
      if (d(i) < 0.0) {
        const double ti = q[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] / -d(i);
        if (ti < t) {
          t = ti;
          hit = i;
        }
      }
    }
    if (hit < 0) return q;
    double total = 0.0;
    for (Eigen::Index i = 0; i < s; ++i) {
      auto& qi = q[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])];
      qi = i == hit ? 0.0 : std::max(0.0, qi + t * d(i));
      total += qi;
    }
    if (!(total > 0.0)) throw NumericalError("support reduction collapsed the policy", 0.0);
    for (double& x : q) x /= total;
  }
}

}  // namespace hmimo
