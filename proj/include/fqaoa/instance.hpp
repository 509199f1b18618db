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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fqaoa {

/// Occupation bitstring. Bit i holds site i+1 (site 1 is least significant);
/// a set bit means the site carries a fermion, x_{l,d} = 1.
using Bits = std::uint64_t;

/// 1-based sequential site number of asset l, level d: l + N(d-1).
constexpr int site_index(int l, int d, int n_assets) { return l + n_assets * (d - 1); }

/// Asset (1-based) that owns a 1-based site.
constexpr int asset_of_site(int site, int n_assets) { return (site - 1) % n_assets + 1; }

/// Renders the low `n` bits site-1-first, e.g. 0b0101 with n=4 -> "1010".
std::string to_bitstring(Bits bits, int n);
/// Inverse of to_bitstring; throws InputError on characters other than 0/1.
Bits parse_bitstring(std::string_view text);

/// Constrained portfolio problem. The diagonal cost Hamiltonian is
///   (lambda/K^2) sum_{l,l'} sigma_{l,l'} s_l s_l' + ((1-lambda)/K) sum_l mu_l s_l,
/// with s_l = sum_d (x_{l,d} - 1/2). The particle count M = ND/2 - K is derived.
struct PortfolioInstance {
  int N = 0;
  int D = 0;
  int K = 0;
  double lambda = 0.0;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd mu;

  int num_sites() const { return N * D; }
  int particles() const { return N * D / 2 - K; }
};

/// Throws ValidationError naming the first offending field.
void validate(const PortfolioInstance& instance);

/// Diagonal cost of a basis state. Throws InputError if `bits` has set bits
/// beyond site ND.
double cost(const PortfolioInstance& instance, Bits bits);
/// Same, for a site-1-first bitstring whose length must equal ND.
double cost(const PortfolioInstance& instance, std::string_view bitstring);

/// Cost of every index in [0, 2^ND). Throws CapacityError above kMaxDenseSites.
std::vector<double> cost_table(const PortfolioInstance& instance);

inline constexpr int kMaxDenseSites = 26;
inline constexpr int kMaxEnumerationSites = 24;

struct ConstrainedSpectrum {
  int M = 0;
  std::uint64_t num_states = 0;
  double E_min = 0.0;
  double E_max = 0.0;
  double W = 0.0;
  double uniform_mean = 0.0;
  double uniform_std = 0.0;
  std::vector<Bits> ground_bitstrings;
};

/// Exact enumeration of all weight-M bitstrings. Chunked so that the result
/// does not depend on the number of worker threads.
ConstrainedSpectrum brute_force_spectrum(const PortfolioInstance& instance, int M);

struct GeneratorSpec {
  std::uint64_t seed = 42;
  int N = 8;
  int D = 2;
  int K = 4;
  double lambda = 0.9;
  double volatility_scale = 0.2;
  double correlation = 0.3;
};

/// Seeded one-factor covariance model: sigma = F F^T, F = [market | idiosyncratic].
PortfolioInstance generate_instance(const GeneratorSpec& spec);

/// mu = column means, sigma = sample covariance with 1/(T-1) normalization.
PortfolioInstance instance_from_returns(const std::filesystem::path& csv_path, double lambda,
                                        int D, int K);

PortfolioInstance load_instance(const std::filesystem::path& path);
void save_instance(const PortfolioInstance& instance, const std::filesystem::path& path);

/// JSON text in the instance schema; `parse_instance_json` validates it.
std::string instance_to_json(const PortfolioInstance& instance, int indent = 2);
PortfolioInstance parse_instance_json(std::string_view text);

/// FNV-1a over the compact JSON form, as 16 hex digits.
std::string instance_hash(const PortfolioInstance& instance);

}  // namespace fqaoa
