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

#include "fqaoa/sector.hpp"

#include <bit>
#include <cmath>

#include "fqaoa/error.hpp"
#include "fqaoa/free_fermion.hpp"

namespace fqaoa {

SectorBasis::SectorBasis(int n, int M) : n_(n), M_(M) {
  if (n < 1 || n > 30) throw CapacityError("sector register must have 1..30 qubits");
  if (M < 0 || M > n) throw InputError("sector weight must lie in [0, n]");
  binom_.assign(static_cast<std::size_t>(n) + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(M) + 2, 0));
  for (int i = 0; i <= n; ++i) {
    binom_[i][0] = 1;
    for (int k = 1; k <= std::min(i, M + 1); ++k) binom_[i][k] = binom_[i - 1][k - 1] + (k <= i - 1 ? binom_[i - 1][k] : 0);
  }
  states_.reserve(binom_[n][M]);
  if (M == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks weight-M strings in ascending order.
  Bits x = (Bits{1} << M) - 1;
  const Bits end = Bits{1} << n;
  while (x < end) {
    states_.push_back(x);
    const Bits c = x & (~x + 1);
    const Bits r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
}

std::int64_t SectorBasis::index_of(Bits x) const {
  if (std::popcount(x) != M_ || (x >> n_) != 0) return -1;
  std::uint64_t rank = 0;
  int k = 1;
  while (x != 0) {
    const int pos = std::countr_zero(x);
    rank += binom_[pos][k];
    ++k;
    x &= x - 1;
  }
  return static_cast<std::int64_t>(rank);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SectorBasis::exchange_pairs(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) throw InputError("exchange pair out of range");
  const Bits amask = Bits{1} << a, bmask = Bits{1} << b;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const Bits x = states_[i];
    if ((x & amask) && !(x & bmask)) {
      out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(index_of(x ^ amask ^ bmask)));
    }
  }
  return out;
}

const SectorAnsatz::PairList& SectorAnsatz::pairs(int a, int b) {
  auto it = pair_cache_.find({a, b});
  if (it == pair_cache_.end()) it = pair_cache_.emplace(std::make_pair(a, b), basis_.exchange_pairs(a, b)).first;
  return it->second;
}

SectorAnsatz::SectorAnsatz(const PortfolioInstance& instance, DriverKind kind, double W)
    : kind_(kind), basis_(instance.num_sites(), instance.particles()), driver_(make_driver(instance, kind, W)) {
  constant_ = ising_form(instance).constant;
  const auto& states = basis_.states();
  cost_.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) cost_[i] = cost(instance, states[i]);

  // Initial state from the same Givens network the circuit uses.
  const Circuit init = build_init_circuit(driver_.basis);
  Bits start = 0;
  std::vector<Rotation> givens;
  for (const auto& g : init.gates()) {
    if (g.name == GateName::X) {
      start ^= Bits{1} << g.q0;
    } else {
      // [[cos, sin], [-sin, cos]] on (|1_a 0_b>, |0_a 1_b>).
      givens.push_back({&pairs(g.q0, g.q1), std::cos(g.angle), -std::sin(g.angle)});
    }
  }
  init_.assign(states.size(), 0.0);
  init_[static_cast<std::size_t>(basis_.index_of(start))] = 1.0;
  for (const auto& r : givens) {
    for (const auto& [i, j] : *r.pairs) {
      const cplx v10 = init_[i], v01 = init_[j];
      init_[i] = r.c * v10 - r.s * v01;
      init_[j] = r.s * v10 + r.c * v01;
    }
  }

  if (kind == DriverKind::Cyclic) {
    const Circuit mixer = build_mixer_cyclic(driver_.model, 1.0);
    for (const auto& g : mixer.gates()) xy_pairs_.push_back(&pairs(g.q0, g.q1));
  } else {
    const QuadraticPropagator prop(driver_.model.matrix());
    // The diagonal sign flips of the orbital rotation commute with the mode
    // phases and cancel between R and R^dag.
    for (const auto& g : prop.rotation().rotations) rotations_.push_back({&pairs(g.mode, g.mode + 1), g.c, g.s});
    mode_energy_sum_.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      double e = 0.0;
      for (Bits x = states[i]; x != 0; x &= x - 1) e += prop.mode_energies()(std::countr_zero(x));
      mode_energy_sum_[i] = e;
    }
  }
}

void SectorAnsatz::apply_phase(std::vector<cplx>& psi, double gamma) const {
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -gamma * (cost_[i] - constant_));
}

void SectorAnsatz::apply_mixer(std::vector<cplx>& psi, double beta) const {
  if (kind_ == DriverKind::Cyclic) {
    const double theta = beta * driver_.t;
    const cplx c = std::cos(theta), is = cplx(0.0, std::sin(theta));
    for (const PairList* list : xy_pairs_) {
      for (const auto& [i, j] : *list) {
        const cplx v10 = psi[i], v01 = psi[j];
        psi[i] = c * v10 + is * v01;
        psi[j] = is * v10 + c * v01;
      }
    }
    return;
  }
  for (const auto& r : rotations_) {
    for (const auto& [i, j] : *r.pairs) {
      const cplx v10 = psi[i], v01 = psi[j];
      psi[i] = r.c * v10 + r.s * v01;
      psi[j] = -r.s * v10 + r.c * v01;
    }
  }
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -beta * mode_energy_sum_[i]);
  for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) {
    for (const auto& [i, j] : *it->pairs) {
      const cplx v10 = psi[i], v01 = psi[j];
      psi[i] = it->c * v10 - it->s * v01;
      psi[j] = it->s * v10 + it->c * v01;
    }
  }
}

std::vector<cplx> SectorAnsatz::state(std::span<const double> gamma, std::span<const double> beta) const {
  if (gamma.size() != beta.size()) throw InputError("gamma and beta must have equal length");
  std::vector<cplx> psi = init_;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    apply_phase(psi, gamma[j]);
    apply_mixer(psi, beta[j]);
  }
  return psi;
}

double SectorAnsatz::expectation(const std::vector<cplx>& psi) const {
  double e = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) e += std::norm(psi[i]) * cost_[i];
  return e;
}

double SectorAnsatz::energy(std::span<const double> gamma, std::span<const double> beta) const {
  return expectation(state(gamma, beta));
}

StateVector SectorAnsatz::embed(const std::vector<cplx>& psi) const {
  if (psi.size() != basis_.size()) throw InputError("sector state has wrong length");
  std::vector<cplx> full(std::size_t{1} << basis_.num_qubits(), 0.0);
  for (std::size_t i = 0; i < psi.size(); ++i) full[static_cast<std::size_t>(basis_.states()[i])] = psi[i];
  return StateVector::from_amplitudes(basis_.num_qubits(), std::move(full));
}

}  // namespace fqaoa
