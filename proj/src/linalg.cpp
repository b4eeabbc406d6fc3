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

#include "hmimo/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hmimo/error.hpp"
#include "hmimo/kernels.hpp"

namespace hmimo {

CMatrix orth_psd(const CMatrix& a, double reference) {
  const Eigen::Index m = a.rows();
  if (m == 0) return CMatrix(0, 0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  const RVector& lambda = es.eigenvalues();  // ascending
  const double ref = reference > 0.0 ? reference : lambda(m - 1);
  if (!(ref > 0.0)) return CMatrix(m, 0);
  const double cut = kRankTol * ref;
  Eigen::Index first = m;
  while (first > 0 && lambda(first - 1) > cut) --first;
  // Largest eigenvalue first.
  return es.eigenvectors().rightCols(m - first).rowwise().reverse();
}

CMatrix psd_sqrt(const CMatrix& a) {
  const Eigen::Index m = a.rows();
  if (m == 0) return CMatrix(0, 0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  RVector lambda = es.eigenvalues();
  const double cut = kRankTol * std::max(lambda(m - 1), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    lambda(i) = lambda(i) > cut ? std::sqrt(lambda(i)) : 0.0;
  }
  const CMatrix& v = es.eigenvectors();
  return v * lambda.asDiagonal() * v.adjoint();
}

int numerical_rank(const CMatrix& a) {
  if (a.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  const RVector& lambda = es.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  if (!(top > 0.0)) return 0;
  return static_cast<int>((lambda.array() > kRankTol * top).count());
}

double spectral_norm_hermitian(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix hermitize(const CMatrix& a) { return (a + a.adjoint()) * 0.5; }

double trace_product_hermitian(const CMatrix& a, const CMatrix& b) {
  return kernels::inner_re(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

CMatrix hpd_inverse(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("matrix is not Hermitian positive definite", INFINITY);
  }
  return llt.solve(CMatrix::Identity(a.rows(), a.cols()));
}

}  // namespace hmimo
