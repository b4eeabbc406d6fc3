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

#include <atomic>
#include <cstdlib>
#include <string>

#include "hmimo/error.hpp"
#include "hmimo/kernels.hpp"

namespace hmimo::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(HMIMO_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("HMIMO_FORCE_SCALAR"); env != nullptr && std::string(env) != "0") {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

#if !defined(HMIMO_HAVE_AVX2_TU)
// Fallbacks so the symbols exist on non-x86 builds; never selected.
namespace avx2 {
double inner_re(const cd* a, const cd* b, std::size_t n) { return scalar::inner_re(a, b, n); }
cd dot(const cd* a, const cd* b, std::size_t n) { return scalar::dot(a, b, n); }
double squared_norm(const cd* a, std::size_t n) { return scalar::squared_norm(a, n); }
}  // namespace avx2
#endif

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_supported(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ParameterError("kernel ISA " + std::string(isa_name(isa)) + " not supported on this CPU");
  }
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double inner_re(const cd* a, const cd* b, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::inner_re(a, b, n) : scalar::inner_re(a, b, n);
}

cd dot(const cd* a, const cd* b, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

double squared_norm(const cd* a, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::squared_norm(a, n) : scalar::squared_norm(a, n);
}

}  // namespace hmimo::kernels
