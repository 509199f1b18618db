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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fqaoa/instance.hpp"
#include "fqaoa/kernels.hpp"

namespace fqaoa {

using cplx = std::complex<double>;
using kernels::Mat2;

/// Dense 2^n statevector. Amplitude index bit i holds qubit i, which is
/// site i+1 of the occupation basis. Gates dispatch to the OpenMP kernels.
class StateVector {
 public:
  /// The vacuum |0...0>.
  explicit StateVector(int n_qubits);
  static StateVector basis_state(int n_qubits, Bits bits);
  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }
  cplx operator[](Bits index) const { return amp_[static_cast<std::size_t>(index)]; }

  void apply_x(int q);
  void apply_y(int q);
  void apply_z(int q);
  void apply_h(int q);
  void apply_s(int q);
  void apply_sdg(int q);
  void apply_rx(int q, double theta);
  void apply_ry(int q, double theta);
  void apply_rz(int q, double theta);
  void apply_cnot(int control, int target);
  void apply_1q(int q, const Mat2& m);
  /// exp(-i theta Z_a Z_b / 2), equal to CNOT(a,b) Rz_b(theta) CNOT(a,b).
  void apply_zz(int a, int b, double theta);

  /// exp[i theta (X_a X_b + Y_a Y_b) / 2], fused. Equal to the Rx/CNOT/Rz
  /// expansion of the same gate.
  void apply_xy_pair(int a, int b, double theta);
  /// Rotation inside span{|1_a 0_b>, |0_a 1_b>}; other components untouched.
  void apply_pair_rotation(int a, int b, const Mat2& m);
  /// psi_i *= exp(-i scale energy_i); `energy` must have dim() entries.
  void apply_phase_diagonal(std::span<const double> energy, double scale);

  double norm() const;

 private:
  void check_qubit(int q) const;
  void check_pair(int a, int b) const;

  int n_;
  std::vector<cplx> amp_;
};

/// Basis index -> shot count.
using Counts = std::map<Bits, std::uint64_t>;

/// i.i.d. draws from |amplitude|^2 (renormalized). Deterministic in `seed`.
Counts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

double expectation_diagonal(const StateVector& state, std::span<const double> diagonal);

/// P_w for w = 0..n.
std::vector<double> weight_distribution(const StateVector& state);

/// Applies the (non-unitary) operator sum_{a,b} h(a,b) c_a^dag c_b under the
/// Jordan-Wigner ordering of the site index. `h` must be n x n.
StateVector apply_hopping_operator(const StateVector& state, const Eigen::MatrixXd& h);

/// {"bitstring": count} with bitstrings printed site-1-first.
std::string counts_to_json(const Counts& counts, int n_qubits);

}  // namespace fqaoa
