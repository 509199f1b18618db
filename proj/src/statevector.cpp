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

#include "fqaoa/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fqaoa/error.hpp"
#include "fqaoa/rng.hpp"
#include "json.hpp"

namespace fqaoa {

namespace kp = kernels::parallel;

namespace {

constexpr cplx kI{0.0, 1.0};

Mat2 rx_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -kI * s, -kI * s, c};
}

Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -s, s, c};
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) throw InputError("statevector needs at least one qubit");
  if (n_qubits > kMaxDenseSites) {
    throw CapacityError("statevector limited to " + std::to_string(kMaxDenseSites) + " qubits, got " +
                        std::to_string(n_qubits));
  }
  amp_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amp_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, Bits bits) {
  StateVector s(n_qubits);
  if (n_qubits < 64 && (bits >> n_qubits) != 0) throw InputError("basis index out of range");
  s.amp_[0] = 0.0;
  s.amp_[static_cast<std::size_t>(bits)] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cplx> amplitudes) {
  StateVector s(n_qubits);
  if (amplitudes.size() != s.amp_.size()) throw InputError("amplitude vector has wrong length");
  s.amp_ = std::move(amplitudes);
  return s;
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= n_) {
    throw InputError("qubit index " + std::to_string(q) + " out of range [0, " + std::to_string(n_) + ")");
  }
}

void StateVector::check_pair(int a, int b) const {
  check_qubit(a);
  check_qubit(b);
  if (a == b) throw InputError("two-qubit gate needs distinct qubits");
}

void StateVector::apply_x(int q) {
  check_qubit(q);
  kp::apply_x(amp_, q);
}

void StateVector::apply_y(int q) {
  check_qubit(q);
  kp::apply_1q(amp_, q, {0.0, -kI, kI, 0.0});
}

void StateVector::apply_z(int q) {
  check_qubit(q);
  kp::apply_diag_1q(amp_, q, 1.0, -1.0);
}

void StateVector::apply_h(int q) {
  check_qubit(q);
  const double r = std::numbers::sqrt2 / 2;
  kp::apply_1q(amp_, q, {r, r, r, -r});
}

void StateVector::apply_s(int q) {
  check_qubit(q);
  kp::apply_diag_1q(amp_, q, 1.0, kI);
}

void StateVector::apply_sdg(int q) {
  check_qubit(q);
  kp::apply_diag_1q(amp_, q, 1.0, -kI);
}

void StateVector::apply_rx(int q, double theta) {
  check_qubit(q);
  kp::apply_1q(amp_, q, rx_matrix(theta));
}

void StateVector::apply_ry(int q, double theta) {
  check_qubit(q);
  kp::apply_1q(amp_, q, ry_matrix(theta));
}

void StateVector::apply_rz(int q, double theta) {
  check_qubit(q);
  kp::apply_diag_1q(amp_, q, std::polar(1.0, -theta / 2), std::polar(1.0, theta / 2));
}

void StateVector::apply_zz(int a, int b, double theta) {
  check_pair(a, b);
  const std::uint64_t mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  kp::apply_parity_phase(amp_, mask, std::polar(1.0, -theta / 2), std::polar(1.0, theta / 2));
}

void StateVector::apply_cnot(int control, int target) {
  check_pair(control, target);
  kp::apply_cnot(amp_, control, target);
}

void StateVector::apply_1q(int q, const Mat2& m) {
  check_qubit(q);
  if (m.m01 == 0.0 && m.m10 == 0.0) {
    kp::apply_diag_1q(amp_, q, m.m00, m.m11);
  } else {
    kp::apply_1q(amp_, q, m);
  }
}

void StateVector::apply_xy_pair(int a, int b, double theta) {
  check_pair(a, b);
  const double c = std::cos(theta), s = std::sin(theta);
  kp::apply_pair_rotation(amp_, a, b, {c, kI * s, kI * s, c});
}

void StateVector::apply_pair_rotation(int a, int b, const Mat2& m) {
  check_pair(a, b);
  if (m.m00.imag() == 0.0 && m.m10.imag() == 0.0 && m.m00 == m.m11 && m.m01 == -m.m10) {
    kp::apply_real_pair_rotation(amp_, a, b, m.m00.real(), m.m10.real());
  } else {
    kp::apply_pair_rotation(amp_, a, b, m);
  }
}

void StateVector::apply_phase_diagonal(std::span<const double> energy, double scale) {
  if (energy.size() != amp_.size()) throw InputError("diagonal has wrong length");
  kp::apply_phase_diagonal(amp_, energy, scale);
}

double StateVector::norm() const { return std::sqrt(kp::norm_squared(amp_)); }

Counts sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
  const auto amps = state.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  Counts counts;
  if (!(acc > 0.0)) throw NumericalError("cannot sample from a zero state");
  Rng rng(derive_seed(seed, kShotStream, 0));
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    // First entry whose cumulative mass exceeds u; zero-mass entries are never hit.
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) it = std::lower_bound(cdf.begin(), cdf.end(), acc);
    ++counts[static_cast<Bits>(it - cdf.begin())];
  }
  return counts;
}

double expectation_diagonal(const StateVector& state, std::span<const double> diagonal) {
  if (diagonal.size() != state.dim()) throw InputError("diagonal has wrong length");
  return kp::expectation_diagonal(state.amplitudes(), diagonal);
}

std::vector<double> weight_distribution(const StateVector& state) {
  std::vector<double> out(static_cast<std::size_t>(state.num_qubits()) + 1);
  kp::weight_distribution(state.amplitudes(), out);
  return out;
}

StateVector apply_hopping_operator(const StateVector& state, const Eigen::MatrixXd& h) {
  const int n = state.num_qubits();
  if (h.rows() != n || h.cols() != n) throw InputError("hopping matrix must be n x n");
  struct Term {
    int a, b;
    double value;
    std::uint64_t between;
  };
  std::vector<Term> terms;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (h(a, b) == 0.0) continue;
      const int lo = std::min(a, b), hi = std::max(a, b);
      const std::uint64_t between =
          hi - lo > 1 ? ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{1} << (lo + 1)) - 1) : 0;
      terms.push_back({a, b, h(a, b), between});
    }
  }
  StateVector out(n);
  auto dst = out.amplitudes();
  const auto src = state.amplitudes();
  const std::int64_t dim = static_cast<std::int64_t>(src.size());
  // Gather form: out_j = sum_{a,b} h_ab <j| c_a^dag c_b |i>, parallel-safe over j.
#pragma omp parallel for schedule(static) if (dim >= kernels::kParallelThreshold)
  for (std::int64_t jj = 0; jj < dim; ++jj) {
    const auto j = static_cast<std::uint64_t>(jj);
    cplx acc = 0.0;
    for (const auto& t : terms) {
      if (!((j >> t.a) & 1U)) continue;
      if (t.a == t.b) {
        acc += t.value * src[j];
        continue;
      }
      if ((j >> t.b) & 1U) continue;
      const std::uint64_t i = (j ^ (std::uint64_t{1} << t.a)) | (std::uint64_t{1} << t.b);
      const double sign = (std::popcount(i & t.between) & 1) ? -1.0 : 1.0;
      acc += t.value * sign * src[i];
    }
    dst[j] = acc;
  }
  return out;
}

std::string counts_to_json(const Counts& counts, int n_qubits) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [bits, count] : counts) j[to_bitstring(bits, n_qubits)] = count;
  return j.dump();
}

}  // namespace fqaoa
