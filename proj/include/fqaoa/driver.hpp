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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fqaoa/statevector.hpp"

namespace fqaoa {

enum class DriverKind { Cyclic, Ladder, Custom };

/// "cyc", "lad", "custom".
std::string to_string(DriverKind kind);
DriverKind parse_driver_kind(std::string_view text);

/// One hopping term -amplitude (c_a^dag c_b + c_b^dag c_a) between 1-based sites.
struct HoppingEdge {
  int a = 0;
  int b = 0;
  double amplitude = 0.0;
};

/// Tight-binding driver over n_sites = ND sites.
struct HoppingModel {
  DriverKind kind = DriverKind::Cyclic;
  int N = 0;
  int D = 0;
  int n_sites = 0;
  std::vector<HoppingEdge> edges;
  double t = 0.0;       // cyclic
  double t_par = 0.0;   // ladder legs
  double t_perp = 0.0;  // ladder rungs
  int boundary_sign = 1;
  int particles = 0;    // M the cyclic boundary sign was chosen for

  /// Single-particle matrix: h(a-1, b-1) accumulates -amplitude, symmetric.
  Eigen::MatrixXd matrix() const;
};

/// Chain i -> i+1 over sequential sites plus the boundary edge (ND, 1) with
/// amplitude t (-1)^(M-1); exactly ND edges.
HoppingModel build_cyclic(int N, int D, int M, double t);

/// Periodic legs (l,d)-(l+1,d) with t_par, rungs (l,d)-(l,d+1) with t_perp.
HoppingModel build_ladder(int N, int D, double t_par, double t_perp);

/// Arbitrary edge list, used for user-supplied graphs.
HoppingModel build_custom(int n_sites, std::vector<HoppingEdge> edges);

/// Reads {"n_sites": int, "edges": [[a, b, amplitude], ...]} (1-based sites).
HoppingModel load_custom_model(const std::string& path);

/// -2t cos(2 pi q / ND).
double dispersion_cyclic(double q, double t, int n_sites);
/// -2 t_par cos(2 pi k / N) - 2 t_perp cos(pi m / (D + 1)).
double dispersion_ladder(int k, int m, double t_par, double t_perp, int N, int D);

/// All single-particle energies from the closed-form dispersion (ascending).
/// Cyclic uses q = k + delta with delta = -1/2 for even M, 0 for odd M.
Eigen::VectorXd analytic_spectrum(const HoppingModel& model);

/// Occupied orbitals of the driver's ground state.
struct OrbitalBasis {
  int M = 0;
  int n_sites = 0;
  Eigen::MatrixXd orbitals;  // M x n; row r over sites 1..n
  Eigen::VectorXd energies;  // epsilon of each row
  double E0 = 0.0;
  bool degenerate = false;
  std::vector<std::string> labels;  // "q=1/2", "(k,m)=(8,2)", ...
};

/// Cyclic: closed-form sin/cos orbitals with the even/odd-M occupation rule.
/// Ladder: closed-form orbitals, lowest energies with ties broken by (m, k);
/// (N, D, M) = (8, 2, 4) at t_par = t_perp uses the symmetric occupation
/// {(8,2), (1,1), (7,1), (8,1)}. Custom: numeric eigenvectors.
OrbitalBasis ground_orbitals(const HoppingModel& model, int M);

/// Spread of the M-particle total energy: sum of the M largest single-particle
/// energies minus the sum of the M smallest.
double hopping_scale(const HoppingModel& model, int M);

/// Slater determinant prod_r (sum_i orbitals(r, i) c_i^dag) |vac>; the
/// amplitude of an occupied set T is det(orbitals[:, T]).
StateVector slater_state(const OrbitalBasis& basis);

struct ConditionReport {
  bool condition_I = false;
  bool condition_II = false;
  bool condition_III = false;
  bool degenerate = false;
  double E0 = 0.0;
  /// max |[H_d, C]| entry; negative when n_sites > kCommutatorCheckSites.
  double commutator_max = -1.0;
  double eigen_residual = 0.0;
  double weight_leakage = 0.0;
  std::vector<std::string> notes;

  bool all_pass() const { return condition_I && condition_II && condition_III; }
  /// {"condition_I", "condition_II", "condition_III", "degenerate", "E0"}.
  std::string to_json() const;
};

inline constexpr int kCommutatorCheckSites = 8;

ConditionReport verify_conditions(const HoppingModel& model, int M);

}  // namespace fqaoa
