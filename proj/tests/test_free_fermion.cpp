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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fqaoa/driver.hpp"
#include "fqaoa/error.hpp"
#include "fqaoa/free_fermion.hpp"
#include "oracles.hpp"

using namespace fqaoa;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : v) {
    a = {nd(rng), nd(rng)};
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(n, std::move(v));
}

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd h(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) h(a, b) = h(b, a) = nd(rng);
  return h;
}

oracle::CVec to_vec(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

}  // namespace

TEST(QuadraticExponential, IdentityAtZero) {
  const auto base = random_state(5, 1);
  auto s = base;
  apply_quadratic_exponential(s, random_symmetric(5, 2), 0.0);
  EXPECT_LE(oracle::max_abs_diff(to_vec(s), to_vec(base)), 1e-12);
}

TEST(QuadraticExponential, MatchesTaylorSeries) {
  for (int n : {3, 6, 8}) {
    const auto h = random_symmetric(n, 10 + n);
    const auto base = random_state(n, 20 + n);
    auto s = base;
    apply_quadratic_exponential(s, h, 0.45);
    const auto expect = oracle::taylor_exponential(h, to_vec(base), 0.45);
    EXPECT_LE(oracle::max_abs_diff(to_vec(s), expect), 1e-10) << n;
  }
}

TEST(QuadraticExponential, SingleAdjacentEdgeIsXYPair) {
  const double t = 0.8, beta = 0.6;
  const auto model = build_custom(5, {{3, 4, t}});
  const auto base = random_state(5, 3);
  auto a = base, b = base;
  apply_quadratic_exponential(a, model.matrix(), beta);
  b.apply_xy_pair(2, 3, beta * t);
  EXPECT_LE(oracle::max_abs_diff(to_vec(a), to_vec(b)), 1e-9);
}

TEST(QuadraticExponential, GroundStateOnlyAcquiresPhase) {
  const auto model = build_cyclic(4, 2, 4, 1.0);
  const auto basis = ground_orbitals(model, 4);
  const auto phi = slater_state(basis);
  auto s = phi;
  const double beta = 0.37;
  apply_quadratic_exponential(s, model.matrix(), beta);
  const cplx ph = std::exp(cplx(0.0, -beta * basis.E0));
  double dev = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) dev = std::max(dev, std::abs(s[i] - ph * phi[i]));
  EXPECT_LE(dev, 1e-9);
}

TEST(QuadraticExponential, ConservesParticleNumber) {
  auto s = StateVector::basis_state(7, 0b0010110);
  apply_quadratic_exponential(s, random_symmetric(7, 4), 1.3);
  const auto w = weight_distribution(s);
  EXPECT_NEAR(w[3], 1.0, 1e-12);
}

TEST(QuadraticExponential, RejectsAsymmetric) {
  StateVector s(3);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  h(0, 1) = 1.0;
  EXPECT_THROW(apply_quadratic_exponential(s, h, 0.1), InputError);
}

TEST(OrbitalRotation, FactorsOrthogonalMatrices) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_symmetric(6, 5));
  const Eigen::MatrixXd V = qr.householderQ();
  const auto r = decompose_orbital_rotation(V);
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(6, 6);
  for (const auto& g : r.rotations) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(6, 6);
    G(g.mode, g.mode) = g.c;
    G(g.mode + 1, g.mode) = g.s;
    G(g.mode, g.mode + 1) = -g.s;
    G(g.mode + 1, g.mode + 1) = g.c;
    prod = prod * G;
  }
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(6);
  for (int m : r.flipped_modes) signs(m) = -1.0;
  EXPECT_LE((prod * signs.asDiagonal().toDenseMatrix() - V).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(decompose_orbital_rotation(Eigen::MatrixXd::Constant(3, 3, 1.0)), InputError);
}

TEST(OrbitalRotation, InverseUndoesRotation) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_symmetric(5, 6));
  const auto r = decompose_orbital_rotation(qr.householderQ());
  const auto base = random_state(5, 7);
  auto s = base;
  apply_orbital_rotation(s, r);
  apply_orbital_rotation_inverse(s, r);
  EXPECT_LE(oracle::max_abs_diff(to_vec(s), to_vec(base)), 1e-12);
}

TEST(OrbitalRotation, MapsSingleParticleStates) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_symmetric(4, 8));
  const Eigen::MatrixXd V = qr.householderQ();
  const auto r = decompose_orbital_rotation(V);
  for (int j = 0; j < 4; ++j) {
    auto s = StateVector::basis_state(4, Bits{1} << j);
    apply_orbital_rotation(s, r);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[Bits{1} << i] - V(i, j)), 0.0, 1e-12);
  }
}
