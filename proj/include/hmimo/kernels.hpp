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

// Inner-loop kernels over contiguous complex<double> arrays.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at startup from CPUID and can
// be pinned with set_isa() or the HMIMO_FORCE_SCALAR environment variable.
// The two variants differ only in summation order.

#include <complex>
#include <cstddef>
#include <string_view>

namespace hmimo::kernels {

using cd = std::complex<double>;

enum class Isa { scalar, avx2 };

// Re(sum conj(a[i]) * b[i]). For Hermitian A, B this is Tr(A B).
double inner_re(const cd* a, const cd* b, std::size_t n);

// sum conj(a[i]) * b[i].
cd dot(const cd* a, const cd* b, std::size_t n);

// sum |a[i]|^2.
double squared_norm(const cd* a, std::size_t n);

Isa active_isa();
bool isa_supported(Isa isa);
// Throws ParameterError if the ISA is not supported on this CPU.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double inner_re(const cd* a, const cd* b, std::size_t n);
cd dot(const cd* a, const cd* b, std::size_t n);
double squared_norm(const cd* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
double inner_re(const cd* a, const cd* b, std::size_t n);
cd dot(const cd* a, const cd* b, std::size_t n);
double squared_norm(const cd* a, std::size_t n);
}  // namespace avx2

}  // namespace hmimo::kernels
