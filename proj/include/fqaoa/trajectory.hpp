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
#include <functional>
#include <memory>
#include <vector>

#include "fqaoa/circuits.hpp"
#include "fqaoa/statevector.hpp"

namespace fqaoa {

/// Stochastic Pauli noise: after every single-qubit gate a uniformly random
/// X, Y or Z with probability p1; after every two-qubit gate a uniformly
/// random non-identity two-qubit Pauli with probability p2.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless 0 <= p1, p2 <= 1.
  void validate() const;
  bool noiseless() const { return p1 == 0.0 && p2 == 0.0; }
};

/// Pauli codes: 0 I, 1 X, 2 Y, 3 Z. A two-qubit code c in 1..15 puts
/// c / 4 on q0 and c % 4 on q1.
void apply_pauli(StateVector& state, int q, int code);
void apply_pauli2(StateVector& state, int q0, int q1, int code);

/// Reference trajectory: the primitive expansion of `circuit` applied to the
/// vacuum gate by gate. Every gate consumes one uniform draw from the
/// trajectory stream, plus one more for the Pauli when an error fires.
StateVector run_noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, std::uint64_t index);

/// Seed of trajectory `index`.
std::uint64_t trajectory_seed(const NoiseModel& noise, std::uint64_t index);

/// An ansatz plan compiled for repeated noisy execution. Noiseless states are
/// checkpointed along the plan; a trajectory restarts from the last checkpoint
/// before its first error, and error-free gates run fused. Draw order matches
/// run_noisy_trajectory on the concatenated primitive expansion, followed by
/// the ladder mixer events of each exact step in plan order.
class NoisyProgram {
 public:
  explicit NoisyProgram(const AnsatzPlan& plan, std::size_t checkpoint_budget_bytes = std::size_t{256} << 20);
  ~NoisyProgram();
  NoisyProgram(NoisyProgram&&) noexcept;
  NoisyProgram& operator=(NoisyProgram&&) noexcept;

  int num_qubits() const;
  /// Noise slots per trajectory (single-qubit, two-qubit).
  GateCount slot_counts() const;
  const StateVector& noiseless_state() const;

  StateVector run_trajectory(const NoiseModel& noise, std::uint64_t index) const;

  /// Runs trajectories 0..count-1 in parallel and hands each final state to
  /// `visit(state, index)`. Visits for distinct indices may run concurrently.
  void for_each_trajectory(const NoiseModel& noise, std::uint64_t count,
                           const std::function<void(const StateVector&, std::uint64_t)>& visit) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fqaoa
