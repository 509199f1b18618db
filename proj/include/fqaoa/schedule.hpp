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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fqaoa/circuits.hpp"
#include "fqaoa/instance.hpp"
#include "fqaoa/sector.hpp"

namespace fqaoa {

/// gamma_j = (2j-1) dt / 2p, beta_j = (1 - (2j-1)/2p) dt for j = 1..p.
AnsatzParams qaa_schedule(int p, double delta_t);

/// Absolute time unit from the dimensionless product W * delta_t.
/// A flat landscape (W = 0) falls back to delta_t = wdt.
double delta_t_from_wdt(double wdt, double W);

/// Throws InputError unless p >= 1 and gamma, beta both have p entries.
void validate_params(const AnsatzParams& params);

/// E_p(gamma, beta) with t = W / W_hop and W from the brute-forced spectrum.
double energy(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params);
double energy(const SectorAnsatz& ansatz, const AnsatzParams& params);

struct OptimizeOptions {
  int max_iter = 500;
  double tol = 1e-8;
  double fd_step = 1e-5;  // relative: h_i = fd_step * max(1, |x_i|)
  bool trace = false;
};

struct TraceEntry {
  int iteration = 0;
  double energy = 0.0;
  std::vector<double> x;
};

/// Objective over x = (gamma_1..gamma_p, beta_1..beta_p).
using Objective = std::function<double(std::span<const double>)>;

/// Central differences with h_i = rel_step * max(1, |x_i|).
std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double rel_step);
/// Five-point stencil with the same step rule.
std::vector<double> fd_gradient_5pt(const Objective& f, std::span<const double> x, double rel_step);

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

/// BFGS with backtracking (Armijo) line search and finite-difference
/// gradients. Stops when the gradient infinity-norm or the energy decrease
/// of an iteration falls below tol. Throws NumericalError if f is not finite.
MinimizeResult bfgs_minimize(const Objective& f, std::vector<double> x0, const OptimizeOptions& options);

struct OptimizationResult {
  AnsatzParams initial;
  AnsatzParams optimal;
  double initial_energy = 0.0;
  double optimal_energy = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;

  std::string to_json() const;
};

OptimizationResult optimize(const SectorAnsatz& ansatz, const AnsatzParams& params0, const OptimizeOptions& options);
OptimizationResult optimize(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params0,
                            const OptimizeOptions& options);

struct DepthResult {
  int p = 0;
  AnsatzParams fixed;
  double fixed_energy = 0.0;
  OptimizationResult optimized;
  std::string start;  // "qaa" or "nested"
};

/// For p = 1..p_max: optimize from the QAA schedule and, for p > 1, from the
/// previous optimum extended by a zero layer; keeps the lower optimum.
std::vector<DepthResult> depth_sweep(const SectorAnsatz& ansatz, int p_max, double delta_t,
                                     const OptimizeOptions& options);

}  // namespace fqaoa
