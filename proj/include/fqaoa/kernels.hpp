// Copyright 2026 The fqaoa-sim Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace fqaoa::kernels {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  cplx m00, m01, m10, m11;
};

/// Amplitude count above which the parallel kernels fork threads.
inline constexpr std::int64_t kParallelThreshold = std::int64_t{1} << 13;

/// Block length of every reduction; sums are accumulated per block and the
/// block partials added in index order, so results are identical for any
/// thread count and between the serial and parallel variants.
inline constexpr std::int64_t kReductionBlock = 4096;

// Two implementations with one contract: `serial` is the reference used by
// tests, `parallel` is what StateVector dispatches to. Every kernel is
// bitwise-identical between the two.
#define FQAOA_KERNEL_DECLS                                                                    \
  void apply_1q(std::span<cplx> psi, int q, const Mat2& m);                                 \
  void apply_diag_1q(std::span<cplx> psi, int q, cplx d0, cplx d1);                         \
  void apply_x(std::span<cplx> psi, int q);                                                 \
  void apply_cnot(std::span<cplx> psi, int control, int target);                            \
  /* psi_i *= popcount(i & mask) even ? even : odd */                                       \
  void apply_parity_phase(std::span<cplx> psi, std::uint64_t mask, cplx even, cplx odd);    \
  /* Acts on span{|1_a 0_b>, |0_a 1_b>} in that order; |00>, |11> untouched. */            \
  void apply_pair_rotation(std::span<cplx> psi, int a, int b, const Mat2& m);               \
  /* apply_pair_rotation with the real matrix [[c, -s], [s, c]] */                          \
  void apply_real_pair_rotation(std::span<cplx> psi, int a, int b, double c, double s);     \
  /* psi_i *= exp(-i * scale * energy_i) */                                                 \
  void apply_phase_diagonal(std::span<cplx> psi, std::span<const double> energy, double scale); \
  double norm_squared(std::span<const cplx> psi);                                           \
  double expectation_diagonal(std::span<const cplx> psi, std::span<const double> diag);     \
  /* out[w] = probability mass on Hamming weight w; out.size() == n + 1 */                  \
  void weight_distribution(std::span<const cplx> psi, std::span<double> out);

namespace serial {
FQAOA_KERNEL_DECLS
}  // namespace serial

namespace parallel {
FQAOA_KERNEL_DECLS
}  // namespace parallel

#undef FQAOA_KERNEL_DECLS

}  // namespace fqaoa::kernels
