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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fqaoa/kernels.hpp"

using namespace fqaoa::kernels;

namespace {

constexpr int kQubits = 15;  // above the parallel threshold

std::vector<cplx> random_state(std::uint64_t seed, int n = kQubits) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(std::size_t{1} << n);
  for (auto& a : v) a = {nd(rng), nd(rng)};
  return v;
}

void expect_bitwise_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].real(), b[i].real()) << i;
    ASSERT_EQ(a[i].imag(), b[i].imag()) << i;
  }
}

const Mat2 kMat{{0.6, 0.1}, {-0.3, 0.7}, {0.2, -0.5}, {0.8, 0.05}};

}  // namespace

TEST(Kernels, SerialAndParallelAgreeBitwise) {
  const auto base = random_state(1);
  std::vector<double> energy(base.size());
  for (std::size_t i = 0; i < energy.size(); ++i) energy[i] = std::sin(0.37 * static_cast<double>(i));

  auto s = base, p = base;
  for (int q : {0, 7, 14}) {
    serial::apply_1q(s, q, kMat);
    parallel::apply_1q(p, q, kMat);
    serial::apply_diag_1q(s, q, {0.3, 0.4}, {0.0, -1.0});
    parallel::apply_diag_1q(p, q, {0.3, 0.4}, {0.0, -1.0});
    serial::apply_x(s, q);
    parallel::apply_x(p, q);
  }
  serial::apply_cnot(s, 3, 11);
  parallel::apply_cnot(p, 3, 11);
  serial::apply_parity_phase(s, 0b1010011, {0.0, 1.0}, {1.0, 0.0});
  parallel::apply_parity_phase(p, 0b1010011, {0.0, 1.0}, {1.0, 0.0});
  serial::apply_pair_rotation(s, 2, 13, kMat);
  parallel::apply_pair_rotation(p, 2, 13, kMat);
  serial::apply_real_pair_rotation(s, 9, 1, 0.8, 0.6);
  parallel::apply_real_pair_rotation(p, 9, 1, 0.8, 0.6);
  serial::apply_phase_diagonal(s, energy, 0.7);
  parallel::apply_phase_diagonal(p, energy, 0.7);
  expect_bitwise_equal(s, p);

  EXPECT_EQ(serial::norm_squared(s), parallel::norm_squared(p));
  EXPECT_EQ(serial::expectation_diagonal(s, energy), parallel::expectation_diagonal(p, energy));
  std::vector<double> ws(kQubits + 1), wp(kQubits + 1);
  serial::weight_distribution(s, ws);
  parallel::weight_distribution(p, wp);
  EXPECT_EQ(ws, wp);
}

TEST(Kernels, PairRotationLeavesEqualBitsAlone) {
  auto v = random_state(2, 4);
  const auto before = v;
  serial::apply_pair_rotation(v, 1, 3, kMat);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool a = (i >> 1) & 1, b = (i >> 3) & 1;
    if (a == b) EXPECT_EQ(v[i], before[i]);
  }
  // |1_a 0_b> is the first basis vector of the block.
  const std::size_t i10 = 0b0010, i01 = 0b1000;
  EXPECT_NEAR(std::abs(v[i10] - (kMat.m00 * before[i10] + kMat.m01 * before[i01])), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[i01] - (kMat.m10 * before[i10] + kMat.m11 * before[i01])), 0.0, 1e-15);
}

TEST(Kernels, RealPairRotationMatchesGeneralForm) {
  auto a = random_state(3, 6), b = a;
  const double c = std::cos(0.4), s = std::sin(0.4);
  serial::apply_real_pair_rotation(a, 5, 2, c, s);
  serial::apply_pair_rotation(b, 5, 2, Mat2{c, -s, s, c});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-15);
}

TEST(Kernels, ReductionsIndependentOfThreadCount) {
  const auto v = random_state(4);
  std::vector<double> diag(v.size(), 1.0);
  const double ref = parallel::norm_squared(v);
#ifdef _OPENMP
  EXPECT_EQ(ref, serial::norm_squared(v));
#endif
  EXPECT_EQ(parallel::expectation_diagonal(v, diag), ref);
}
