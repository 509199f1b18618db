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

#include "fqaoa/error.hpp"
#include "fqaoa/schedule.hpp"

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

}  // namespace

TEST(Qaa, ClosedForms) {
  const auto p1 = qaa_schedule(1, 2.0);
  EXPECT_EQ(p1.gamma, std::vector<double>{1.0});
  EXPECT_EQ(p1.beta, std::vector<double>{1.0});
  const auto p2 = qaa_schedule(2, 4.0);
  EXPECT_EQ(p2.gamma, (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(p2.beta, (std::vector<double>{3.0, 1.0}));
  for (int p = 1; p <= 6; ++p) {
    const auto s = qaa_schedule(p, 1.7);
    for (int j = 0; j < p; ++j) EXPECT_NEAR(s.gamma[j] + s.beta[j], 1.7, 1e-15);
  }
  EXPECT_DOUBLE_EQ(delta_t_from_wdt(10.0, 0.5), 20.0);
  EXPECT_DOUBLE_EQ(delta_t_from_wdt(10.0, 0.0), 10.0);
  EXPECT_THROW(validate_params(AnsatzParams{0, {}, {}, 0.0}), InputError);
  EXPECT_THROW(validate_params(AnsatzParams{2, {0.1, 0.2}, {0.1}, 0.0}), InputError);
}

TEST(Energy, ZeroAnglesIsInitialExpectation) {
  const auto in = seeded(4, 2, 2);
  const double e = energy(in, DriverKind::Cyclic, AnsatzParams{1, {0.0}, {0.0}, 0.0});
  const auto phi = slater_state(make_driver(in, DriverKind::Cyclic, brute_force_spectrum(in, 2).W).basis);
  double expect = 0.0;
  for (Bits b = 0; b < phi.dim(); ++b) expect += std::norm(phi[b]) * cost(in, b);
  EXPECT_NEAR(e, expect, 1e-13);
}

TEST(Energy, VariationalBound) {
  const auto in = seeded(4, 2, 2, 8);
  const double emin = brute_force_spectrum(in, 2).E_min;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-3, 3);
  for (int k = 0; k < 20; ++k) {
    AnsatzParams p{2, {ud(rng), ud(rng)}, {ud(rng), ud(rng)}, 0.0};
    EXPECT_GE(energy(in, DriverKind::Ladder, p), emin - 1e-12);
    EXPECT_GE(energy(in, DriverKind::Cyclic, p), emin - 1e-12);
  }
}

TEST(Energy, FlatInstanceIsZero) {
  PortfolioInstance in{4, 2, 2, 0.0, Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4)};
  EXPECT_NEAR(energy(in, DriverKind::Cyclic, AnsatzParams{1, {0.3}, {1.2}, 0.0}), 0.0, 1e-15);
}

TEST(Gradient, CentralMatchesFivePoint) {
  const auto in = seeded(4, 2, 2);
  const SectorAnsatz sa(in, DriverKind::Cyclic, brute_force_spectrum(in, 2).W);
  const Objective f = [&](std::span<const double> x) {
    return sa.energy(x.subspan(0, 2), x.subspan(2, 2));
  };
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(-2, 2);
  for (int k = 0; k < 5; ++k) {
    const std::vector<double> x{ud(rng), ud(rng), ud(rng), ud(rng)};
    const auto g2 = fd_gradient(f, x, 1e-5);
    const auto g5 = fd_gradient_5pt(f, x, 1e-5);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(g2[i], g5[i], 1e-6);
  }
}

TEST(Bfgs, StationaryStartReturnsImmediately) {
  const Objective f = [](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + (x[1] + 2) * (x[1] + 2); };
  const auto r = bfgs_minimize(f, {1.0, -2.0}, OptimizeOptions{});
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.x, (std::vector<double>{1.0, -2.0}));
  EXPECT_TRUE(r.converged);
}

TEST(Bfgs, MinimizesRosenbrock) {
  const Objective f = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  OptimizeOptions o;
  o.trace = true;
  const auto r = bfgs_minimize(f, {-1.2, 1.0}, o);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 2e-3);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i].energy, r.trace[i - 1].energy);
}

TEST(Bfgs, RejectsNonFiniteObjective) {
  const Objective f = [](std::span<const double>) { return std::nan(""); };
  EXPECT_THROW(bfgs_minimize(f, {0.0}, OptimizeOptions{}), NumericalError);
}

TEST(Optimize, ImprovesOnQaaStart) {
  const auto in = seeded(8, 2, 4);
  const auto W = brute_force_spectrum(in, 4).W;
  const SectorAnsatz sa(in, DriverKind::Cyclic, W);
  const auto start = qaa_schedule(1, delta_t_from_wdt(10.0, W));
  const auto r = optimize(sa, start, OptimizeOptions{});
  EXPECT_LT(r.optimal_energy, r.initial_energy);
  EXPECT_NEAR(r.initial_energy, energy(sa, start), 1e-15);
  EXPECT_NEAR(r.optimal_energy, energy(sa, r.optimal), 1e-15);
  EXPECT_NE(r.to_json().find("\"optimal\""), std::string::npos);
}

TEST(DepthSweep, NestedStartsGiveMonotoneEnergies) {
  const auto in = seeded(4, 2, 2, 2);
  const auto W = brute_force_spectrum(in, 2).W;
  const SectorAnsatz sa(in, DriverKind::Ladder, W);
  const auto sweep = depth_sweep(sa, 3, delta_t_from_wdt(10.0, W), OptimizeOptions{});
  ASSERT_EQ(sweep.size(), 3U);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    EXPECT_EQ(sweep[i].p, static_cast<int>(i) + 1);
    EXPECT_LE(sweep[i].optimized.optimal_energy, sweep[i].fixed_energy + 1e-12);
    if (i) EXPECT_LE(sweep[i].optimized.optimal_energy, sweep[i - 1].optimized.optimal_energy + 1e-12);
  }
}
