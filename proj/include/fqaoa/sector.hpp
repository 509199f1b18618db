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

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fqaoa/circuits.hpp"
#include "fqaoa/instance.hpp"
#include "fqaoa/statevector.hpp"

namespace fqaoa {

/// All n-bit strings of Hamming weight M in ascending order.
class SectorBasis {
 public:
  SectorBasis(int n, int M);

  int num_qubits() const { return n_; }
  int weight() const { return M_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Bits>& states() const { return states_; }
  /// Position of `x` in states(), or -1 when x has the wrong weight.
  std::int64_t index_of(Bits x) const;

  /// Index pairs (i, j) with bit a set and bit b clear in states()[i], and
  /// states()[j] the same string with bits a and b exchanged.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> exchange_pairs(int a, int b) const;

 private:
  int n_;
  int M_;
  std::vector<Bits> states_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

/// The FQAOA ansatz restricted to the weight-M sector. Produces the same
/// amplitudes as run_plan on the full register for the same parameters.
class SectorAnsatz {
 public:
  SectorAnsatz(const PortfolioInstance& instance, DriverKind kind, double W);
  SectorAnsatz(const SectorAnsatz&) = delete;
  SectorAnsatz& operator=(const SectorAnsatz&) = delete;
  SectorAnsatz(SectorAnsatz&&) = default;
  SectorAnsatz& operator=(SectorAnsatz&&) = default;

  const SectorBasis& basis() const { return basis_; }
  const DriverSetup& driver() const { return driver_; }
  /// Cost of each sector state.
  const std::vector<double>& costs() const { return cost_; }
  const std::vector<cplx>& initial_state() const { return init_; }

  std::vector<cplx> state(std::span<const double> gamma, std::span<const double> beta) const;
  double energy(std::span<const double> gamma, std::span<const double> beta) const;
  double expectation(const std::vector<cplx>& psi) const;

  StateVector embed(const std::vector<cplx>& psi) const;

 private:
  using PairList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  struct Rotation {
    const PairList* pairs;
    double c, s;
  };

  const PairList& pairs(int a, int b);
  void apply_phase(std::vector<cplx>& psi, double gamma) const;
  void apply_mixer(std::vector<cplx>& psi, double beta) const;

  DriverKind kind_;
  SectorBasis basis_;
  DriverSetup driver_;
  double constant_ = 0.0;
  std::vector<double> cost_;
  std::vector<cplx> init_;
  std::map<std::pair<int, int>, PairList> pair_cache_;
  std::vector<const PairList*> xy_pairs_;  // cyclic mixer, in gate order
  std::vector<Rotation> rotations_;        // ladder mode rotations
  std::vector<double> mode_energy_sum_;    // ladder: sum of occupied mode energies
};

}  // namespace fqaoa
