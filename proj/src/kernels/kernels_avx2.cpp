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

// Compiled with -mavx2 -mfma; only called after a CPUID check.

#include <immintrin.h>

#include "hmimo/kernels.hpp"

namespace hmimo::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Sum of even lanes minus sum of odd lanes.
inline double halt(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_sub_sd(lo, sh));
}

// Plain dot product of two double arrays of length m.
double ddot(const double* x, const double* y, std::size_t m) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= m; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < m; ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

double inner_re(const cd* a, const cd* b, std::size_t n) {
  return ddot(reinterpret_cast<const double*>(a), reinterpret_cast<const double*>(b), 2 * n);
}

double squared_norm(const cd* a, std::size_t n) {
  const auto* x = reinterpret_cast<const double*>(a);
  return ddot(x, x, 2 * n);
}

cd dot(const cd* a, const cd* b, std::size_t n) {
  const auto* x = reinterpret_cast<const double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  __m256d re0 = _mm256_setzero_pd();
  __m256d re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd();
  __m256d im1 = _mm256_setzero_pd();
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    __m256d xa = _mm256_loadu_pd(x + i);
    __m256d ya = _mm256_loadu_pd(y + i);
    __m256d xb = _mm256_loadu_pd(x + i + 4);
    __m256d yb = _mm256_loadu_pd(y + i + 4);
    re0 = _mm256_fmadd_pd(xa, ya, re0);
    re1 = _mm256_fmadd_pd(xb, yb, re1);
    // [re, im] -> [im, re] within each complex
    im0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), im0);
    im1 = _mm256_fmadd_pd(xb, _mm256_permute_pd(yb, 0x5), im1);
  }
  for (; i + 4 <= m; i += 4) {
    __m256d xa = _mm256_loadu_pd(x + i);
    __m256d ya = _mm256_loadu_pd(y + i);
    re0 = _mm256_fmadd_pd(xa, ya, re0);
    im0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), im0);
  }
  double re = hsum(_mm256_add_pd(re0, re1));
  double im = halt(_mm256_add_pd(im0, im1));
  for (std::size_t k = i / 2; k < n; ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

}  // namespace hmimo::kernels::avx2
