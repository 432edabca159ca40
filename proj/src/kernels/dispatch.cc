// Copyright 2026 The ctrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <cstring>

#include "ctrace/kernels.h"

namespace ctrace::kernels {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool Avx2Supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported;
#else
  return false;
#endif
}

Isa ActiveIsa() {
  static const Isa isa = [] {
    const char* force = std::getenv("CTRACE_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "1") == 0) return Isa::kScalar;
    return Avx2Supported() ? Isa::kAvx2 : Isa::kScalar;
  }();
  return isa;
}

void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out) {
#if defined(CTRACE_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) return avx2::UpperBoundBatch(r0, nu, out);
#endif
  scalar::UpperBoundBatch(r0, nu, out);
}

void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high) {
#if defined(CTRACE_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    return avx2::TracedBracketBatch(nu, pi0, p, low, high);
  }
#endif
  scalar::TracedBracketBatch(nu, pi0, p, low, high);
}

void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out) {
#if defined(CTRACE_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    return avx2::OverlapMask(start, end, q_begin, q_end, out);
  }
#endif
  scalar::OverlapMask(start, end, q_begin, q_end, out);
}

}  // namespace ctrace::kernels
