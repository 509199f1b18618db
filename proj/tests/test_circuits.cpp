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

#include <bit>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fqaoa/circuits.hpp"
#include "fqaoa/error.hpp"
#include "fqaoa/free_fermion.hpp"
#include "oracles.hpp"

using namespace fqaoa;

namespace {

PortfolioInstance seeded(int N, int D, int K, std::uint64_t seed = 42) {
  GeneratorSpec g;
  g.seed = seed;
  g.N = N;
  g.D = D;
  g.K = K;
  return generate_instance(g);
}

oracle::CVec to_vec(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

StateVector random_sector_state(int n, int M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(std::size_t{1} << n);
  double norm = 0.0;
  for (Bits x = 0; x < v.size(); ++x)
    if (std::popcount(x) == M) {
      v[x] = {nd(rng), nd(rng)};
      norm += std::norm(v[x]);
    }
  for (auto& a : v) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(n, std::move(v));
}

Circuit segment_of(const Circuit& c, Segment seg) {
  Circuit out(c.num_qubits());
  for (const auto& g : c.gates())
    if (g.segment == seg) out.add(g);
  return out;
}

// Single-particle matrix of one cyclic mixer segment, from the bond pattern.
Eigen::MatrixXd segment_matrix(int n, int M, double t, Segment seg) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  if (seg == Segment::MixerBC) {
    const double amp = t * ((M - 1) % 2 ? -1.0 : 1.0);
    h(0, n - 1) -= amp;
    h(n - 1, 0) -= amp;
    return h;
  }
  const int first = seg == Segment::MixerI ? 1 : 2;
  for (int i = first; i + 1 <= n; i += 2) {
    h(i - 1, i) -= t;
    h(i, i - 1) -= t;
  }
  return h;
}

}  // namespace

TEST(Expand, CompositeLengths) {
  EXPECT_EQ(expand({GateName::XYPAIR, 0, 1, 0.3}).size(), 8U);
  EXPECT_EQ(expand({GateName::GIVENS, 0, 1, 0.3}).size(), 10U);
  EXPECT_EQ(expand({GateName::Rz, 2, -1, 0.3}).size(), 1U);
  Circuit c(3);
  c.add({GateName::GIVENS, 0, 1, 0.2});
  c.add({GateName::XYPAIR, 1, 2, 0.1});
  EXPECT_EQ(c.count(), (GateCount{8 + 6, 2 + 2}));
  EXPECT_THROW(c.add({GateName::CNOT, 1, 1}), InputError);
  EXPECT_THROW(c.add({GateName::X, 3}), InputError);
}

TEST(Givens, ExpansionMatchesMatrix) {
  for (double th : {0.0, 0.3, -1.2, 2.5}) {
    const Mat2 m = givens_gate_matrix(th);
    for (Bits in : {Bits{0b01}, Bits{0b10}, Bits{0b00}, Bits{0b11}}) {
      Circuit c(2);
      c.add({GateName::GIVENS, 0, 1, th});
      auto a = StateVector::basis_state(2, in), b = a;
      apply_circuit(c, a, Execution::Primitive);
      apply_circuit(c, b, Execution::Fused);
      EXPECT_LE(oracle::max_abs_diff(to_vec(a), to_vec(b)), 1e-14);
      if (in == 0b01) {  // |1_0 0_1>
        EXPECT_NEAR(std::abs(a[0b01] - m.m00), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(a[0b10] - m.m10), 0.0, 1e-14);
      } else if (in == 0b10) {
        EXPECT_NEAR(std::abs(a[0b01] - m.m01), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(a[0b10] - m.m11), 0.0, 1e-14);
      } else {
        EXPECT_NEAR(std::abs(a[in] - 1.0), 0.0, 1e-14);
      }
    }
  }
}

TEST(Init, SingleParticleOnFirstSite) {
  OrbitalBasis b;
  b.M = 1;
  b.n_sites = 4;
  b.orbitals = Eigen::MatrixXd::Zero(1, 4);
  b.orbitals(0, 0) = 1.0;
  const auto c = build_init_circuit(b);
  int x_gates = 0;
  for (const auto& g : c.gates()) {
    if (g.name == GateName::X) ++x_gates;
    else EXPECT_NEAR(std::sin(g.angle), 0.0, 1e-15);
  }
  EXPECT_EQ(x_gates, 1);
  StateVector s(4);
  apply_circuit(c, s);
  EXPECT_NEAR(std::abs(s[0b0001]), 1.0, 1e-14);
}

TEST(Init, PaperSizeGateCount) {
  const auto model = build_cyclic(8, 2, 4, 1.0);
  const auto c = build_init_circuit(ground_orbitals(model, 4));
  EXPECT_EQ(c.count(), (GateCount{388, 96}));
  EXPECT_EQ(c.count(), init_count_formula(8, 2, 4));
}

TEST(Init, RandomOrbitalsMatchDeterminants) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd A(4, 4);
    for (int i = 0; i < 16; ++i) A(i / 4, i % 4) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    OrbitalBasis b;
    b.M = 2;
    b.n_sites = 4;
    b.orbitals = Eigen::MatrixXd(qr.householderQ()).leftCols(2).transpose();
    StateVector s(4);
    apply_circuit(build_init_circuit(b), s);
    double sign = 0.0;
    for (Bits x = 0; x < 16; ++x) {
      if (std::popcount(x) != 2) {
        EXPECT_NEAR(std::abs(s[x]), 0.0, 1e-12);
        continue;
      }
      std::vector<int> cols;
      for (int i = 0; i < 4; ++i)
        if ((x >> i) & 1) cols.push_back(i);
      const double det = oracle::leibniz_det(b.orbitals, cols);
      if (sign == 0.0 && std::abs(det) > 1e-3) sign = s[x].real() / det > 0 ? 1.0 : -1.0;
      if (sign != 0.0) EXPECT_NEAR(std::abs(s[x] - sign * det), 0.0, 1e-8);
    }
  }
}

TEST(Init, RejectsNonOrthonormalRows) {
  OrbitalBasis b;
  b.M = 2;
  b.n_sites = 3;
  b.orbitals = Eigen::MatrixXd::Constant(2, 3, 0.5);
  EXPECT_THROW(build_init_circuit(b), ValidationError);
}

TEST(Init, EigenstateChecksBothDrivers) {
  for (const auto& model : {build_cyclic(8, 2, 4, 1.0), build_ladder(8, 2, 1.0, 1.0), build_cyclic(3, 2, 3, 1.0)}) {
    const auto r = check_init_state(model, model.kind == DriverKind::Cyclic ? model.particles : 4);
    EXPECT_TRUE(r.passes()) << r.energy << " " << r.E0 << " " << r.variance << " " << r.slater_deviation;
  }
}

TEST(Phase, IdentityAtZero) {
  const auto in = seeded(3, 2, 1);
  const auto c = build_phase_circuit(in, 0.0);
  for (const auto& g : c.gates()) EXPECT_EQ(g.angle, 0.0);
}

TEST(Phase, PaperSizeCounts) {
  const auto c = build_phase_circuit(seeded(8, 2, 4), 0.4);
  EXPECT_EQ(c.count(), (GateCount{136, 240}));
  EXPECT_EQ(c.count(), phase_count_formula(8, 2));
}

TEST(Phase, RelativePhasesFollowCost) {
  const auto in = seeded(3, 2, 1, 9);
  const double gamma = 0.83;
  const auto c = build_phase_circuit(in, gamma);
  auto vac = StateVector::basis_state(6, 0);
  apply_circuit(c, vac);
  const double c0 = cost(in, Bits{0});
  for (Bits b = 1; b < 64; ++b) {
    auto s = StateVector::basis_state(6, b);
    apply_circuit(c, s);
    const cplx rel = s[b] / vac[0];
    EXPECT_NEAR(std::abs(rel - std::exp(cplx(0.0, -gamma * (cost(in, b) - c0)))), 0.0, 1e-9);
  }
}

TEST(Phase, IsingFormReproducesCost) {
  const auto in = seeded(4, 2, 2, 4);
  const auto f = ising_form(in);
  for (Bits b = 0; b < 256; ++b) {
    double e = f.constant;
    auto z = [&](int a) { return ((b >> a) & 1) ? -1.0 : 1.0; };
    for (int a = 0; a < 8; ++a) {
      e += f.field(a) * z(a);
      for (int c = a + 1; c < 8; ++c) e += f.coupling(a, c) * z(a) * z(c);
    }
    EXPECT_NEAR(e, cost(in, b), 1e-14);
  }
}

TEST(MixerCyclic, IdentityAtZeroAndCounts) {
  const auto model = build_cyclic(8, 2, 4, 0.7);
  const auto c = build_mixer_cyclic(model, 0.0);
  EXPECT_EQ(c.count(), (GateCount{96, 32}));
  EXPECT_EQ(c.count(), mixer_count_formula(8, 2, DriverKind::Cyclic));
  const auto base = random_sector_state(16, 4, 1);
  auto s = base;
  apply_circuit(c, s, Execution::Fused);
  EXPECT_LE(oracle::max_abs_diff(to_vec(s), to_vec(base)), 1e-14);
  EXPECT_THROW(build_mixer_cyclic(build_ladder(4, 2, 1, 1), 0.1), InputError);
}

TEST(MixerCyclic, SegmentsAreExactExponentials) {
  const double t = 0.7, beta = 0.9;
  for (int n = 2; n <= 8; ++n)
    for (int M = 1; M < n; ++M) {
      const auto model = build_cyclic(n, 1, M, t);
      const auto mixer = build_mixer_cyclic(model, beta);
      for (Segment seg : {Segment::MixerI, Segment::MixerII, Segment::MixerBC}) {
        const Eigen::MatrixXd h = segment_matrix(n, M, t, seg);
        EXPECT_LE((cyclic_segment_model(model, seg).matrix() - h).cwiseAbs().maxCoeff(), 0.0);
        const auto base = random_sector_state(n, M, 100 * n + M);
        auto circuit_out = base, exact = base;
        apply_circuit(segment_of(mixer, seg), circuit_out);
        apply_quadratic_exponential(exact, h, beta);
        EXPECT_LE(oracle::phase_aligned_diff(to_vec(exact), to_vec(circuit_out)), 1e-9)
            << "n=" << n << " M=" << M << " " << to_string(seg);
      }
    }
}

TEST(MixerCyclic, SixSitesAgainstTaylorOracle) {
  const double t = 1.1, beta = 0.45;
  const auto model = build_cyclic(3, 2, 2, t);
  const auto mixer = build_mixer_cyclic(model, beta);
  auto psi = random_sector_state(6, 2, 3);
  auto expect = to_vec(psi);
  for (Segment seg : {Segment::MixerI, Segment::MixerII, Segment::MixerBC})
    expect = oracle::taylor_exponential(segment_matrix(6, 2, t, seg), expect, beta);
  apply_circuit(mixer, psi);
  EXPECT_LE(oracle::phase_aligned_diff(expect, to_vec(psi)), 1e-9);
}

TEST(Ansatz, ZeroAnglesGiveInitialState) {
  const auto in = seeded(4, 2, 2);
  for (DriverKind kind : {DriverKind::Cyclic, DriverKind::Ladder}) {
    const auto plan = build_ansatz(in, kind, AnsatzParams{1, {0.0}, {0.0}, 0.0});
    const auto s = run_plan(plan);
    const auto phi = slater_state(plan.driver.basis);
    EXPECT_LE(oracle::phase_aligned_diff(to_vec(phi), to_vec(s)), 1e-10);
  }
}

TEST(Ansatz, ReportedTotals) {
  const auto in = seeded(8, 2, 4);
  for (int p = 1; p <= 3; ++p) {
    AnsatzParams params{p, std::vector<double>(p, 0.1), std::vector<double>(p, 0.2), 0.0};
    EXPECT_EQ(build_ansatz(in, DriverKind::Cyclic, params).reported_counts, (GateCount{388 + 232 * p, 96 + 272 * p}));
    EXPECT_EQ(build_ansatz(in, DriverKind::Ladder, params).reported_counts, (GateCount{388 + 504 * p, 96 + 512 * p}));
  }
  EXPECT_THROW(build_ansatz(in, DriverKind::Cyclic, AnsatzParams{2, {0.1}, {0.1}, 0.0}), InputError);
}

TEST(Ansatz, FusedEqualsPrimitiveAndConservesWeight) {
  const auto in = seeded(4, 2, 2, 5);
  for (DriverKind kind : {DriverKind::Cyclic, DriverKind::Ladder}) {
    const auto plan = build_ansatz(in, kind, AnsatzParams{2, {0.3, 0.7}, {0.6, 0.2}, 0.0});
    const auto a = run_plan(plan, Execution::Primitive);
    const auto b = run_plan(plan, Execution::Fused);
    EXPECT_LE(oracle::max_abs_diff(to_vec(a), to_vec(b)), 1e-12);
    EXPECT_LE(1.0 - weight_distribution(a)[2], 1e-10);
  }
}

TEST(Counts, LadderMixerPerLayer) {
  EXPECT_EQ(mixer_count_formula(8, 2, DriverKind::Ladder), (GateCount{368, 272}));
}

TEST(Counts, InitSinglesIdentity) {
  for (int N = 1; N <= 10; ++N)
    for (int D = 1; D <= 4; ++D) {
      if ((N * D) % 2) continue;
      for (int K = 0; K < N * D / 2; ++K) {
        const long n = N * D, M = n / 2 - K;
        const auto f = init_count_formula(N, D, K);
        EXPECT_EQ(f.single_qubit, 8 * M * (n - M) + M);
        EXPECT_EQ(f.two_qubit, 2 * M * (n - M));
      }
    }
}

TEST(Counts, ZeroLayersIsInitOnly) {
  const auto r = count_formulas(8, 2, 4, 0, DriverKind::Cyclic);
  EXPECT_EQ(r.total_formula, (GateCount{388, 96}));
  EXPECT_TRUE(r.match);
}

TEST(Counts, CensusMatchesClosedForms) {
  for (int N = 1; N <= 10; ++N)
    for (int D = 1; N * D <= 12; ++D) {
      if ((N * D) % 2) continue;
      for (int K = 1; K < N * D / 2; ++K) {
        const auto r = count_formulas(N, D, K, 2, DriverKind::Cyclic);
        EXPECT_TRUE(r.match) << N << " " << D << " " << K;
        EXPECT_EQ(r.total_census, r.total_formula);
      }
    }
}

TEST(Circuit, JsonListsPrimitives) {
  Circuit c(2);
  c.add({GateName::XYPAIR, 0, 1, 0.5, Segment::MixerI});
  const auto j = c.to_json();
  EXPECT_NE(j.find("\"CNOT\""), std::string::npos);
  EXPECT_EQ(j.find("XYPAIR"), std::string::npos);
}
