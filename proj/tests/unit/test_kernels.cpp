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

#include <doctest.h>

#include <random>
#include <vector>

#include "hmimo/error.hpp"
#include "hmimo/kernels.hpp"

using namespace hmimo::kernels;

namespace {

std::vector<cd> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cd> v(n);
  for (auto& x : v) x = cd(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match the textbook formulas") {
  const std::vector<cd> a{{1, 2}, {3, -1}};
  const std::vector<cd> b{{0, 1}, {2, 2}};
  // conj(1+2i)(i) + conj(3-i)(2+2i) = (2+i) + (4+8i)
  CHECK(scalar::dot(a.data(), b.data(), 2) == cd(6, 9));
  CHECK(scalar::inner_re(a.data(), b.data(), 2) == 6.0);
  CHECK(scalar::squared_norm(a.data(), 2) == 15.0);
  CHECK(scalar::dot(a.data(), b.data(), 0) == cd(0, 0));
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence check skipped");
    return;
  }
  std::mt19937_64 rng(11);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const double scale = 1.0 + static_cast<double>(n);
    const cd ds = scalar::dot(a.data(), b.data(), n);
    const cd dv = avx2::dot(a.data(), b.data(), n);
    CHECK(std::abs(ds - dv) <= 1e-12 * scale);
    CHECK(std::abs(scalar::inner_re(a.data(), b.data(), n) - avx2::inner_re(a.data(), b.data(), n)) <=
          1e-12 * scale);
    CHECK(std::abs(scalar::squared_norm(a.data(), n) - avx2::squared_norm(a.data(), n)) <= 1e-12 * scale);
  }
}

TEST_CASE("dispatch can be switched and reports names") {
  const Isa before = active_isa();
  set_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
  const std::vector<cd> a{{1, 1}, {2, 0}, {0, 3}};
  CHECK(squared_norm(a.data(), 3) == doctest::Approx(15.0));
  if (isa_supported(Isa::avx2)) {
    set_isa(Isa::avx2);
    CHECK(active_isa() == Isa::avx2);
    CHECK(squared_norm(a.data(), 3) == doctest::Approx(15.0));
  } else {
    CHECK_THROWS_AS(set_isa(Isa::avx2), hmimo::ParameterError);
  }
  set_isa(before);
}
