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

#include "fqaoa/free_fermion.hpp"

#include <cmath>

#include "fqaoa/error.hpp"

namespace fqaoa {

OrbitalRotation decompose_orbital_rotation(const Eigen::MatrixXd& V) {
  const int n = static_cast<int>(V.rows());
  if (V.cols() != n) throw InputError("orbital rotation must be square");
  if (((V.transpose() * V) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InputError("orbital rotation is not orthogonal");
  }
  OrbitalRotation out;
  out.n_modes = n;
  // Left-multiply by G^T to clear the sub-diagonal bottom-up, column by column;
  // what remains is an orthogonal upper-triangular matrix, i.e. diag(+-1).
  Eigen::MatrixXd A = V;
  for (int col = 0; col + 1 < n; ++col) {
    for (int row = n - 1; row > col; --row) {
      const double a = A(row - 1, col);
      const double b = A(row, col);
      const double r = std::hypot(a, b);
      if (r == 0.0 || b == 0.0) continue;
      const double c = a / r, s = b / r;
      for (int k = 0; k < n; ++k) {
        const double top = A(row - 1, k), bottom = A(row, k);
        A(row - 1, k) = c * top + s * bottom;
        A(row, k) = -s * top + c * bottom;
      }
      out.rotations.push_back({row - 1, c, s});
    }
  }
  for (int k = 0; k < n; ++k) {
    if (A(k, k) < 0.0) out.flipped_modes.push_back(k);
  }
  return out;
}

Mat2 mode_rotation_matrix(const ModeRotation& g) { return {g.c, -g.s, g.s, g.c}; }

void apply_orbital_rotation(StateVector& state, const OrbitalRotation& rotation) {
  if (state.num_qubits() != rotation.n_modes) throw InputError("orbital rotation size mismatch");
  for (int k : rotation.flipped_modes) state.apply_z(k);
  for (auto it = rotation.rotations.rbegin(); it != rotation.rotations.rend(); ++it) {
    state.apply_pair_rotation(it->mode, it->mode + 1, mode_rotation_matrix(*it));
  }
}

void apply_orbital_rotation_inverse(StateVector& state, const OrbitalRotation& rotation) {
  if (state.num_qubits() != rotation.n_modes) throw InputError("orbital rotation size mismatch");
  for (const auto& g : rotation.rotations) {
    state.apply_pair_rotation(g.mode, g.mode + 1, mode_rotation_matrix({g.mode, g.c, -g.s}));
  }
  for (int k : rotation.flipped_modes) state.apply_z(k);
}

QuadraticPropagator::QuadraticPropagator(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw InputError("hopping matrix must be square");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw InputError("hopping matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed on hopping matrix");
  energies_ = eig.eigenvalues();
  rotation_ = decompose_orbital_rotation(eig.eigenvectors());
}

void QuadraticPropagator::apply(StateVector& state, double beta) const {
  apply_orbital_rotation_inverse(state, rotation_);
  for (int k = 0; k < rotation_.n_modes; ++k) {
    state.apply_1q(k, {1.0, 0.0, 0.0, std::polar(1.0, -beta * energies_(k))});
  }
  apply_orbital_rotation(state, rotation_);
}

void apply_quadratic_exponential(StateVector& state, const Eigen::MatrixXd& h, double beta) {
  QuadraticPropagator(h).apply(state, beta);
}

}  // namespace fqaoa
