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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fqaoa/circuits.hpp"
#include "fqaoa/instance.hpp"
#include "fqaoa/statevector.hpp"
#include "fqaoa/trajectory.hpp"

namespace fqaoa {

inline constexpr int kHistogramBins = 10;

struct PostSelection {
  Counts kept;
  std::uint64_t total = 0;
  std::uint64_t retained = 0;
  double retained_fraction = 0.0;  // 0 for empty input
};

/// Keeps bitstrings of Hamming weight M.
PostSelection post_select(const Counts& counts, int M);
/// Probability mass on Hamming weight M.
double retained_mass(const StateVector& state, int M);

/// Bin of x = (E - E_min) / W: 10 equal bins on [0, 1]. A value on a bin
/// edge belongs to the lower bin, x = 0 to the first; values outside are
/// clamped.
int energy_bin(double x);

/// Probabilities over bins (lo, hi] in units of (E - E_min) / W.
struct EnergyHistogram {
  double E_min = 0.0;
  double W = 0.0;
  bool degenerate = false;  // W = 0: one bin holding everything
  std::vector<double> lo, hi, probability;

  double lowest_bin() const { return probability.empty() ? 0.0 : probability.front(); }
  /// Columns bin_lo, bin_hi, probability.
  std::string to_csv() const;
};

/// Mean and standard deviation of (E - E_min) / W.
struct EnergyStats {
  double mean = 0.0;
  double std = 0.0;
};

/// Exact mode: the weight-M part of the state, renormalized. Returns the
/// all-zero histogram when that part is empty.
EnergyHistogram energy_histogram(const StateVector& state, const PortfolioInstance& instance,
                                 const ConstrainedSpectrum& spectrum);
/// Sampled mode. Throws InputError if a bitstring violates the constraint.
EnergyHistogram energy_histogram(const Counts& counts, const PortfolioInstance& instance,
                                 const ConstrainedSpectrum& spectrum);

EnergyStats energy_stats(const StateVector& state, const PortfolioInstance& instance,
                         const ConstrainedSpectrum& spectrum);
EnergyStats energy_stats(const Counts& counts, const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum);

struct RandomBaseline {
  EnergyStats delta_E_over_W;  // uniform over the constrained states
  EnergyHistogram histogram;
  std::vector<double> P_M;  // unconstrained uniform sampling: C(n, M) / 2^n
};
RandomBaseline random_baseline(const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum);

/// Point estimate with a standard error.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// sum(num) / sum(den) with the cluster-robust (linearized) standard error
/// over independent clusters (num_i, den_i).
Estimate ratio_estimate(std::span<const double> num, std::span<const double> den);
/// (a - b) / sqrt(se_a^2 + se_b^2); +-inf for a certain nonzero difference.
double z_score(const Estimate& a, const Estimate& b);
/// One-sided 95% critical value.
inline constexpr double kZ95 = 1.6448536269514722;

/// Everything a single run reports.
struct RunReport {
  std::string instance_hash;
  DriverKind kind = DriverKind::Cyclic;
  int N = 0, D = 0, K = 0, M = 0;
  std::string mode = "fixed";
  AnsatzParams params;
  double W = 0.0;
  double E_min = 0.0;
  double t = 0.0;
  double fixed_energy = 0.0;
  std::optional<double> optimized_energy;
  std::optional<std::string> optimization_json;
  std::uint64_t seed = 0;
  NoiseModel noise;
  std::uint64_t trajectories = 0;
  std::uint64_t shots = 0;

  /// <H_p> of the final (trajectory-averaged) state.
  double energy = 0.0;
  EnergyHistogram histogram;
  std::vector<double> P_M;
  Estimate target_P_M;
  Estimate lowest_bin;
  EnergyStats delta_E_over_W;
  bool post_selected = false;
  double retained_fraction = 0.0;
  GateCount gate_counts;

  std::string to_json() const;
  std::string histogram_csv() const { return histogram.to_csv(); }
  /// Columns M, probability.
  std::string pm_csv() const;
};

/// Fills the distribution fields of `report` from an exact noiseless state
/// (shots = 0) or from `shots` samples of it.
void analyze_state(RunReport& report, const StateVector& state, const PortfolioInstance& instance,
                   const ConstrainedSpectrum& spectrum, std::uint64_t shots, std::uint64_t seed);

/// Fills the distribution fields from `trajectories` noisy runs of `program`.
/// Shots are dealt round-robin over trajectories; shots = 0 averages the
/// exact trajectory distributions instead. Always post-selected.
void analyze_trajectories(RunReport& report, const NoisyProgram& program, const NoiseModel& noise,
                          std::uint64_t trajectories, const PortfolioInstance& instance,
                          const ConstrainedSpectrum& spectrum, std::uint64_t shots);

struct ComparisonRow {
  std::string metric;
  std::vector<double> values;  // one per report
  std::optional<double> difference;  // first - second, two reports only
  std::optional<double> z;
  std::optional<bool> ordering_holds;
};

struct Comparison {
  std::vector<std::string> labels;
  std::vector<ComparisonRow> rows;
  /// For two noisy reports: P_M(first) > P_M(second) at one-sided 95%.
  std::optional<bool> pm_ordering;
  /// For two noisy reports: lowest-bin(first) not significantly below second.
  std::optional<bool> lowest_bin_ordering;

  std::string to_csv() const;
};

/// Throws InputError when the reports disagree on instance hash or M.
Comparison compare_runs(std::span<const RunReport> reports);

}  // namespace fqaoa
