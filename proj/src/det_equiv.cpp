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

#include "hmimo/det_equiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmimo/error.hpp"

namespace hmimo {

CMatrix projected_correlation(const CMatrix& theta, const CMatrix& nullspace_basis) {
  if (nullspace_basis.cols() == 0) return theta;
  const Eigen::Index M = theta.rows();
  const CMatrix proj = CMatrix::Identity(M, M) - nullspace_basis * nullspace_basis.adjoint();
  return hermitize(proj * theta * proj);
}

XiSolution solve_xi_fixed_point(const std::vector<CMatrix>& projected, double nu, const FixedPointOptions& opts) {
  if (!(nu > 0.0)) throw ParameterError("nu must be positive");
  if (!(opts.tol > 0.0)) throw ParameterError("fixed-point tolerance must be positive");
  XiSolution out;
  const auto s = static_cast<Eigen::Index>(projected.size());
  if (s == 0) {
    out.xi = RVector(0);
    return out;
  }
  const Eigen::Index M = projected.front().rows();
  const double inv_m = 1.0 / static_cast<double>(M);
  RVector xi = RVector::Ones(s);
  CMatrix a(M, M);
  for (int it = 1; it <= opts.max_iter; ++it) {
    a.setIdentity();
    for (Eigen::Index j = 0; j < s; ++j) a += (inv_m / (nu + xi(j))) * projected[static_cast<std::size_t>(j)];
    out.T = hpd_inverse(a);
    RVector next(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      next(i) = std::max(0.0, inv_m * trace_product_hermitian(projected[static_cast<std::size_t>(i)], out.T));
    }
    const double residual = (next - xi).cwiseAbs().maxCoeff();
    out.residual_history.push_back(residual);
    xi = next;
    if (residual <= opts.tol) {
      out.xi = xi;
      out.iterations = it;
      out.residual = residual;
      return out;
    }
  }
  const double last = out.residual_history.back();
  std::ostringstream msg;
  msg << "xi fixed point did not converge in " << opts.max_iter << " iterations (residual " << last << ")";
  throw ConvergenceError(msg.str(), opts.max_iter, last);
}

std::vector<CMatrix> projected_correlations(const CorrelationSet& corr, const TopologyGraph&,
                                            const UserSet& served, const UserSet& blocked, int bs) {
  const CMatrix u = interference_nullspace_basis(corr, blocked, bs);
  std::vector<CMatrix> out;
  out.reserve(served.size());
  for (int k : served) out.push_back(projected_correlation(corr.at(k, bs).entries(), u));
  return out;
}

namespace {

struct BsFixedPoint {
  UserSet served;
  std::vector<CMatrix> projected;
  XiSolution solution;
};

std::vector<BsFixedPoint> solve_all(const CompositeControl& control, const CorrelationSet& corr,
                                    const TopologyGraph& graph, double nu, const FixedPointOptions& opts) {
  const auto sbar = scheduled_neighbors(graph, control.all_selected());
  std::vector<BsFixedPoint> out(static_cast<std::size_t>(graph.num_bs()));
  for (int n = 0; n < graph.num_bs(); ++n) {
    auto& bs = out[static_cast<std::size_t>(n)];
    bs.served = control.selected.at(static_cast<std::size_t>(n));
    bs.projected = projected_correlations(corr, graph, bs.served, sbar[static_cast<std::size_t>(n)], n);
    try {
      bs.solution = solve_xi_fixed_point(bs.projected, nu, opts);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("BS " + std::to_string(n) + ": " + e.what(), e.iterations(), e.residual());
    }
  }
  return out;
}

}  // namespace

DEResult de_rate_power(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph,
                       double nu, const FixedPointOptions& opts) {
  const int K = graph.num_users();
  const int N = graph.num_bs();
  const double M = corr.dim();
  DEResult out;
  out.xi = RVector::Zero(K);
  out.rate = RVector::Zero(K);
  out.power = RVector::Zero(N);
  const auto blocks = solve_all(control, corr, graph, nu, opts);
  for (int n = 0; n < N; ++n) {
    const auto& b = blocks[static_cast<std::size_t>(n)];
    out.iterations.push_back(b.solution.iterations);
    out.residual.push_back(b.solution.residual);
    double pw = 0.0;
    for (std::size_t i = 0; i < b.served.size(); ++i) {
      const int k = b.served[i];
      const double xi = b.solution.xi(static_cast<Eigen::Index>(i));
      const double p = control.power(k);
      out.xi(k) = xi;
      out.rate(k) = std::log1p(p);
      if (xi > kXiFloor) {
        pw += p / xi;
      } else if (p > 0.0) {
        throw ValidationError("user " + std::to_string(k) + " has zero effective gain but power " +
                              std::to_string(p));
      }
    }
    out.power(n) = pw / M;
  }
  return out;
}

FullDEResult full_de(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph,
                     double nu, const FixedPointOptions& opts) {
  const int K = graph.num_users();
  const int N = graph.num_bs();
  const double M = corr.dim();
  FullDEResult out;
  out.rate_hat = RVector::Zero(K);
  out.power_hat = RVector::Zero(N);
  out.xi = RVector::Zero(K);
  out.e = RVector::Zero(K);
  out.upsilon = RVector::Zero(K);
  const auto blocks = solve_all(control, corr, graph, nu, opts);
  const double nu2 = nu * nu;

  for (int n = 0; n < N; ++n) {
    const auto& b = blocks[static_cast<std::size_t>(n)];
    const auto s = static_cast<Eigen::Index>(b.served.size());
    if (s == 0) {
      out.J.emplace_back(0, 0);
      out.e_k.emplace_back(0, 0);
      continue;
    }
    const CMatrix& T = b.solution.T;
    const RVector& xi = b.solution.xi;

    // X_i = Theta~_i T; tr(Theta~_i T Theta~_j T) = Re tr((X_i^H)^H X_j).
    std::vector<CMatrix> x;
    std::vector<CMatrix> xh;
    x.reserve(static_cast<std::size_t>(s));
    for (const auto& th : b.projected) {
      x.push_back(th * T);
      xh.push_back(x.back().adjoint());
    }
    RMatrix cross(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = i; j < s; ++j) {
        const double t = trace_product_hermitian(xh[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
        cross(i, j) = t;
        cross(j, i) = t;
      }
    }
    const CMatrix t2 = T * T;
    RMatrix J(s, s);
    RVector u(s);
    RMatrix uk(s, s);  // column k holds u_k
    for (Eigen::Index i = 0; i < s; ++i) {
      u(i) = trace_product_hermitian(b.projected[static_cast<std::size_t>(i)], t2) / (nu2 * M);
      for (Eigen::Index j = 0; j < s; ++j) {
        J(i, j) = (cross(i, j) / M) / (M * (nu + xi(j)) * (nu + xi(j)));
        uk(i, j) = cross(i, j) / (nu2 * M);
      }
    }
    const RMatrix ij = RMatrix::Identity(s, s) - J;
    Eigen::JacobiSVD<RMatrix> svd(ij);
    const auto& sv = svd.singularValues();
    const double cond = sv(s - 1) > 0.0 ? sv(0) / sv(s - 1) : INFINITY;
    if (!(cond <= kMaxCondition)) {
      std::ostringstream msg;
      msg << "BS " << n << ": (I - J) is singular (condition " << cond << ")";
      throw NumericalError(msg.str(), cond);
    }
    Eigen::PartialPivLU<RMatrix> lu(ij);
    const RVector e = lu.solve(u);
    const RMatrix ek = lu.solve(uk);  // column i holds e_i

    double pw = 0.0;
    for (Eigen::Index a = 0; a < s; ++a) {
      const int k = b.served[static_cast<std::size_t>(a)];
      double ups = 0.0;
      for (Eigen::Index i = 0; i < s; ++i) {
        if (i == a) continue;
        const double pi = control.power(b.served[static_cast<std::size_t>(i)]);
        // e_{ik}: entry k of e_i
        ups += nu2 * pi * ek(a, i) / ((nu + xi(i)) * (nu + xi(i)));
      }
      ups /= M;
      const double p = control.power(k);
      const double xk = xi(a);
      out.xi(k) = xk;
      out.e(k) = e(a);
      out.upsilon(k) = ups;
      out.rate_hat(k) = std::log1p(p * xk * xk / (nu2 * ups + (nu + xk) * (nu + xk)));
      pw += p * nu2 * e(a) / ((nu + xk) * (nu + xk));
    }
    out.power_hat(n) = pw / M;
    out.J.push_back(J);
    out.e_k.push_back(ek);
  }
  return out;
}

}  // namespace hmimo
