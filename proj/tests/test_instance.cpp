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
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "fqaoa/error.hpp"
#include "fqaoa/instance.hpp"
#include "oracles.hpp"

using namespace fqaoa;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fqaoa_test_" + name);
}

PortfolioInstance seeded(int N, int D, int K, std::uint64_t seed = 42) {
  GeneratorSpec g;
  g.seed = seed;
  g.N = N;
  g.D = D;
  g.K = K;
  return generate_instance(g);
}

double oracle_cost(const PortfolioInstance& in, Bits x) {
  return oracle::literal_cost(in.N, in.D, in.K, in.lambda, in.sigma, in.mu, x);
}

}  // namespace

TEST(Bitstrings, SiteOneIsLeftmost) {
  EXPECT_EQ(to_bitstring(0b0101, 4), "1010");
  EXPECT_EQ(parse_bitstring("1010"), Bits{0b0101});
  EXPECT_THROW(parse_bitstring("10a1"), InputError);
  EXPECT_EQ(site_index(3, 2, 8), 11);
  EXPECT_EQ(asset_of_site(11, 8), 3);
}

TEST(Cost, VanishesWithoutRiskOrReturn) {
  PortfolioInstance in{2, 2, 1, 0.0, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)};
  for (Bits x = 0; x < 16; ++x) EXPECT_EQ(cost(in, x), 0.0);
}

TEST(Cost, HalfFilledRowCancels) {
  PortfolioInstance in{1, 2, 1, 1.0, Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Zero(1)};
  EXPECT_NEAR(cost(in, "10"), 0.0, 1e-15);
}

TEST(Cost, MatchesLiteralQuadrupleSum) {
  const auto in = seeded(4, 2, 2);
  EXPECT_NEAR(cost(in, "10100101"), oracle_cost(in, parse_bitstring("10100101")), 1e-14);
  for (Bits x = 0; x < 256; ++x) EXPECT_NEAR(cost(in, x), oracle_cost(in, x), 1e-14) << x;
}

TEST(Cost, TableMatchesPointwise) {
  const auto in = seeded(3, 2, 1);
  const auto table = cost_table(in);
  ASSERT_EQ(table.size(), 64U);
  for (Bits x = 0; x < 64; ++x) EXPECT_DOUBLE_EQ(table[x], cost(in, x));
}

TEST(Cost, SymmetricUnderLevelExchange) {
  const auto in = seeded(4, 2, 2, 3);
  for (Bits x = 0; x < 256; ++x) {
    const Bits swapped = ((x & 0x0F) << 4) | (x >> 4);
    EXPECT_NEAR(cost(in, x), cost(in, swapped), 1e-14);
  }
}

TEST(Cost, RejectsBitsBeyondRegister) {
  const auto in = seeded(2, 2, 1);
  EXPECT_THROW(cost(in, Bits{1} << 4), InputError);
  EXPECT_THROW(cost(in, "101"), InputError);
}

TEST(Cost, ReturnOnlyCostIsAffineInAssetSums) {
  auto in = seeded(3, 2, 1);
  in.lambda = 0.0;
  for (Bits x = 0; x < 64; ++x) {
    double expect = 0.0;
    for (int l = 0; l < 3; ++l) expect += in.mu(l) * (((x >> l) & 1) + ((x >> (l + 3)) & 1) - 1.0) / in.K;
    EXPECT_NEAR(cost(in, x), expect, 1e-15);
  }
}

TEST(Spectrum, FlatInstanceHasZeroSpread) {
  PortfolioInstance in{4, 2, 2, 0.0, Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4)};
  const auto s = brute_force_spectrum(in, 2);
  EXPECT_EQ(s.W, 0.0);
  EXPECT_EQ(s.num_states, 28U);
  EXPECT_EQ(s.ground_bitstrings.size(), 28U);
}

TEST(Spectrum, SeededEnumerationMatchesStreamingPass) {
  const auto in = seeded(8, 2, 4);
  const auto s = brute_force_spectrum(in, 4);
  EXPECT_EQ(s.num_states, 1820U);
  double sum = 0.0, lo = 1e300, hi = -1e300;
  for (const Bits x : oracle::weight_states(16, 4)) {
    const double e = oracle_cost(in, x);
    sum += e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  EXPECT_NEAR(s.uniform_mean, sum / 1820.0, 1e-13);
  EXPECT_NEAR(s.E_min, lo, 1e-14);
  EXPECT_NEAR(s.E_max, hi, 1e-14);
  EXPECT_NEAR(s.W, hi - lo, 1e-14);
  ASSERT_FALSE(s.ground_bitstrings.empty());
  for (Bits g : s.ground_bitstrings) {
    EXPECT_EQ(std::popcount(g), 4);
    EXPECT_NEAR(cost(in, g), lo, 1e-14);
  }
}

TEST(InstanceJson, MinimalFileIsValid) {
  const auto in = parse_instance_json(R"({"N":1,"D":2,"K":1,"lambda":0.5,"sigma":[[1.0]],"mu":[0.0]})");
  EXPECT_EQ(in.N, 1);
  EXPECT_EQ(in.particles(), 0);
  EXPECT_DOUBLE_EQ(in.sigma(0, 0), 1.0);
}

TEST(InstanceJson, RejectsAsymmetricSigma) {
  try {
    parse_instance_json(R"({"N":2,"D":1,"K":1,"lambda":0.5,"sigma":[[1,2],[3,1]],"mu":[0,0]})");
    FAIL() << "accepted an asymmetric sigma";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "sigma");
  }
}

TEST(InstanceJson, RejectsBadFields) {
  EXPECT_THROW(parse_instance_json(R"({"N":2,"D":1,"K":1,"lambda":1.5,"sigma":[[1,0],[0,1]],"mu":[0,0]})"),
               ValidationError);
  EXPECT_THROW(parse_instance_json(R"({"N":2,"D":1,"K":1,"lambda":0.5,"sigma":[[1,0],[0,1]],"mu":[0]})"),
               ValidationError);
  EXPECT_THROW(parse_instance_json(R"({"N":2,"D":1)"), InputError);
  EXPECT_THROW(parse_instance_json(R"({"N":2,"D":1,"K":0,"lambda":0.5,"sigma":[[1,0],[0,1]],"mu":[0,0]})"),
               ValidationError);
}

TEST(InstanceJson, SaveLoadRoundTrip) {
  const auto in = seeded(8, 2, 4);
  const auto path = temp_path("roundtrip.json");
  save_instance(in, path);
  const auto back = load_instance(path);
  EXPECT_EQ(back.N, in.N);
  EXPECT_EQ(back.D, in.D);
  EXPECT_EQ(back.K, in.K);
  EXPECT_EQ(back.lambda, in.lambda);
  EXPECT_EQ(back.sigma, in.sigma);
  EXPECT_EQ(back.mu, in.mu);
  EXPECT_EQ(instance_hash(back), instance_hash(in));
  std::filesystem::remove(path);
}

TEST(Generator, DeterministicInSeed) {
  EXPECT_EQ(instance_hash(seeded(8, 2, 4, 42)), instance_hash(seeded(8, 2, 4, 42)));
  EXPECT_NE(instance_hash(seeded(8, 2, 4, 42)), instance_hash(seeded(8, 2, 4, 43)));
}

TEST(Generator, ZeroCorrelationGivesDiagonalSigma) {
  GeneratorSpec g;
  g.correlation = 0.0;
  const auto in = generate_instance(g);
  for (int a = 0; a < in.N; ++a)
    for (int b = 0; b < in.N; ++b)
      if (a != b) EXPECT_EQ(in.sigma(a, b), 0.0);
}

TEST(Generator, SigmaIsPositiveSemidefinite) {
  const auto in = seeded(8, 2, 4, 7);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(in.sigma);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  EXPECT_EQ(in.sigma, in.sigma.transpose());
  EXPECT_TRUE(in.mu.allFinite());
}

namespace {
std::filesystem::path write_csv(const std::string& name, const std::vector<std::vector<double>>& rows) {
  const auto path = temp_path(name);
  std::ofstream f(path);
  for (std::size_t j = 0; j < rows.front().size(); ++j) f << (j ? "," : "") << "A" << j;
  f << "\n";
  f.precision(17);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) f << (j ? "," : "") << r[j];
    f << "\n";
  }
  return path;
}
}  // namespace

TEST(Returns, IdenticalRowsGiveZeroCovariance) {
  const auto path = write_csv("same.csv", {{0.1, 0.2}, {0.1, 0.2}});
  const auto in = instance_from_returns(path, 0.5, 2, 1);
  EXPECT_TRUE(in.sigma.isZero(0.0));
  EXPECT_NEAR(in.mu(1), 0.2, 1e-15);
}

TEST(Returns, HandComputedPair) {
  const auto path = write_csv("pair.csv", {{1, -1}, {-1, 1}});
  const auto in = instance_from_returns(path, 0.5, 2, 1);
  Eigen::Matrix2d expect;
  expect << 2, -2, -2, 2;
  EXPECT_TRUE(in.sigma.isApprox(expect, 1e-15));
  EXPECT_TRUE(in.mu.isZero(1e-15));
}

TEST(Returns, MatchesTwoPassCovariance) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.001, 0.02);
  std::vector<std::vector<double>> rows(100, std::vector<double>(5));
  for (auto& r : rows)
    for (auto& v : r) v = nd(rng);
  const auto path = write_csv("seeded.csv", rows);
  const auto in = instance_from_returns(path, 0.9, 2, 1);
  const auto expect = oracle::two_pass_covariance(rows);
  EXPECT_LE((in.sigma - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Returns, RejectsShortOrRaggedFiles) {
  EXPECT_THROW(instance_from_returns(write_csv("one.csv", {{0.1, 0.2}}), 0.5, 2, 1), InputError);
  const auto path = temp_path("ragged.csv");
  std::ofstream(path) << "A,B\n0.1,0.2\n0.3\n";
  EXPECT_THROW(instance_from_returns(path, 0.5, 2, 1), InputError);
  EXPECT_THROW(instance_from_returns(temp_path("missing.csv"), 0.5, 2, 1), InputError);
}

TEST(Returns, BundledSample) {
  const auto in = instance_from_returns(std::filesystem::path(FQAOA_DATA_DIR) / "sample_returns.csv", 0.9, 2, 4);
  EXPECT_EQ(in.N, 8);
  EXPECT_NO_THROW(validate(in));
  EXPECT_GT(brute_force_spectrum(in, in.particles()).W, 0.0);
}
