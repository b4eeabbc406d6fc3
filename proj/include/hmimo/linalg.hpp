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

#include <Eigen/Dense>
#include <complex>

namespace hmimo {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Eigenvalues at or below kRankTol * reference are treated as zero by every
// orth / nullspace / square-root computation.
inline constexpr double kRankTol = 1e-9;

// Orthonormal basis (M x r) of the range of a Hermitian PSD matrix. An
// eigenvalue counts toward the range when it exceeds kRankTol * reference;
// reference <= 0 means "use the largest eigenvalue of a".
CMatrix orth_psd(const CMatrix& a, double reference = -1.0);

// Hermitian PSD square root via eigendecomposition. Eigenvalues below the
// numerical-rank threshold are clamped to zero.
CMatrix psd_sqrt(const CMatrix& a);

// Count of eigenvalues above kRankTol * largest eigenvalue.
int numerical_rank(const CMatrix& a);

// Largest eigenvalue of a Hermitian matrix.
double spectral_norm_hermitian(const CMatrix& a);

// (a + a^H) / 2.
CMatrix hermitize(const CMatrix& a);

// Re Tr(a^H b) for equal shapes (Tr(a b) when a is Hermitian), through the SIMD kernel layer.
double trace_product_hermitian(const CMatrix& a, const CMatrix& b);

// Inverse of a Hermitian positive definite matrix via LLT.
CMatrix hpd_inverse(const CMatrix& a);

}  // namespace hmimo
