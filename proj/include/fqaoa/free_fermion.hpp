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

#include <vector>

#include <Eigen/Dense>

#include "fqaoa/statevector.hpp"

namespace fqaoa {

/// Real rotation of adjacent modes (mode, mode+1):
///   c_mode^dag   -> c c_mode^dag + s c_{mode+1}^dag
///   c_{mode+1}^dag -> -s c_mode^dag + c c_{mode+1}^dag
struct ModeRotation {
  int mode = 0;
  double c = 1.0;
  double s = 0.0;
};

/// Real orthogonal single-particle transform V factored as
/// V = G_1 G_2 ... G_L diag(signs), each G an adjacent-mode rotation.
struct OrbitalRotation {
  int n_modes = 0;
  std::vector<ModeRotation> rotations;  // G_1 ... G_L
  std::vector<int> flipped_modes;       // modes where diag(signs) is -1
};

/// Factors an orthogonal matrix; throws InputError if V is not orthogonal
/// within 1e-10.
OrbitalRotation decompose_orbital_rotation(const Eigen::MatrixXd& V);

/// Applies the many-body operator R(V) with R c_j^dag R^dag = sum_i V_ij c_i^dag.
void apply_orbital_rotation(StateVector& state, const OrbitalRotation& rotation);
/// Applies R(V)^dag = R(V^T).
void apply_orbital_rotation_inverse(StateVector& state, const OrbitalRotation& rotation);

/// Pair-rotation matrix that realizes one ModeRotation on span{|10>, |01>}.
Mat2 mode_rotation_matrix(const ModeRotation& g);

/// exp(-i beta sum_{ab} h_ab c_a^dag c_b) for a fixed real symmetric h.
/// h = V diag(eps) V^T is diagonalized once; each application is
/// R(V) exp(-i beta sum_k eps_k n_k) R(V)^dag. Exact, no Trotter error.
class QuadraticPropagator {
 public:
  explicit QuadraticPropagator(const Eigen::MatrixXd& h);

  void apply(StateVector& state, double beta) const;

  int num_modes() const { return rotation_.n_modes; }
  const Eigen::VectorXd& mode_energies() const { return energies_; }
  const OrbitalRotation& rotation() const { return rotation_; }

 private:
  Eigen::VectorXd energies_;
  OrbitalRotation rotation_;
};

/// One-shot form of QuadraticPropagator. Throws InputError for asymmetric h.
void apply_quadratic_exponential(StateVector& state, const Eigen::MatrixXd& h, double beta);

}  // namespace fqaoa
