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

#include "fqaoa/trajectory.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <variant>

#include <bit>

#include "fqaoa/error.hpp"
#include "fqaoa/rng.hpp"

namespace fqaoa {

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ValidationError("noise.p1", "must lie in [0, 1]");
  if (!(p2 >= 0.0 && p2 <= 1.0)) throw ValidationError("noise.p2", "must lie in [0, 1]");
}

void apply_pauli(StateVector& state, int q, int code) {
  switch (code) {
    case 0: break;
    case 1: state.apply_x(q); break;
    case 2: state.apply_y(q); break;
    case 3: state.apply_z(q); break;
    default: throw InputError("Pauli code must be in 0..3");
  }
}

void apply_pauli2(StateVector& state, int q0, int q1, int code) {
  if (code < 0 || code > 15) throw InputError("two-qubit Pauli code must be in 0..15");
  apply_pauli(state, q0, code / 4);
  apply_pauli(state, q1, code % 4);
}

std::uint64_t trajectory_seed(const NoiseModel& noise, std::uint64_t index) {
  return derive_seed(noise.seed, kTrajectoryStream, index);
}

namespace {

// Pauli drawn after a gate; q1 < 0 for single-qubit events.
struct Event {
  int q0 = 0;
  int q1 = -1;
  int code = 0;
};

std::optional<Event> draw_gate_event(Rng& rng, const Gate& g, const NoiseModel& noise) {
  const bool two = g.is_two_qubit();
  const double u = uniform01(rng);
  if (u >= (two ? noise.p2 : noise.p1)) return std::nullopt;
  if (two) return Event{g.q0, g.q1, static_cast<int>(uniform_index(rng, 15)) + 1};
  return Event{g.q0, -1, static_cast<int>(uniform_index(rng, 3)) + 1};
}

void apply_event(StateVector& state, const Event& e) {
  if (e.q1 < 0) {
    apply_pauli(state, e.q0, e.code);
  } else {
    apply_pauli2(state, e.q0, e.q1, e.code);
  }
}

void apply_fused(const Gate& g, StateVector& state) {
  switch (g.name) {
    case GateName::XYPAIR: state.apply_xy_pair(g.q0, g.q1, g.angle); break;
    case GateName::GIVENS: state.apply_pair_rotation(g.q0, g.q1, givens_gate_matrix(g.angle)); break;
    default: apply_gate(g, state);
  }
}

bool is_zz_block(const std::vector<Gate>& gates, std::size_t i) {
  if (i + 2 >= gates.size()) return false;
  const Gate &a = gates[i], &b = gates[i + 1], &c = gates[i + 2];
  return a.name == GateName::CNOT && c.name == GateName::CNOT && b.name == GateName::Rz && a.q0 == c.q0 &&
         a.q1 == c.q1 && b.q0 == a.q1;
}

}  // namespace

StateVector run_noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, std::uint64_t index) {
  noise.validate();
  Rng rng(trajectory_seed(noise, index));
  StateVector state(circuit.num_qubits());
  for (const auto& top : circuit.gates()) {
    for (const auto& g : expand(top)) {
      apply_gate(g, state);
      if (auto e = draw_gate_event(rng, g, noise)) apply_event(state, *e);
    }
  }
  return state;
}

namespace {

// One fused operation together with the primitives it stands for.
struct ZZ {
  int a, b;
  double theta;
};

struct Unit {
  std::variant<Gate, ZZ, const ExactMixer*> fused;
  std::vector<Gate> primitives;  // empty for exact mixer units
};

// A run of units that can be applied as one diagonal when error-free.
struct DiagonalBlock {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
  std::vector<double> phase;
};

struct UnitEvents {
  std::size_t unit = 0;
  std::size_t after = 0;  // primitive index; ignored for exact mixer units
  Event event;
};

}  // namespace

struct NoisyProgram::Impl {
  int n = 0;
  std::vector<Unit> units;
  std::vector<DiagonalBlock> blocks;
  std::vector<std::ptrdiff_t> block_at;  // unit -> block starting there, or -1
  GateCount slots;
  std::size_t stride = 1;
  std::vector<StateVector> checkpoints;  // state before unit k * stride
  std::optional<StateVector> final_state;

  void apply_unit(std::size_t u, StateVector& state) const {
    const Unit& unit = units[u];
    if (const auto* g = std::get_if<Gate>(&unit.fused)) {
      apply_fused(*g, state);
    } else if (const auto* zz = std::get_if<ZZ>(&unit.fused)) {
      state.apply_zz(zz->a, zz->b, zz->theta);
    } else {
      const ExactMixer* mixer = std::get<const ExactMixer*>(unit.fused);
      mixer->propagator->apply(state, mixer->beta);
    }
  }

  std::vector<UnitEvents> draw(const NoiseModel& noise, std::uint64_t index) const {
    Rng rng(trajectory_seed(noise, index));
    std::vector<UnitEvents> events;
    for (std::size_t u = 0; u < units.size(); ++u) {
      for (std::size_t k = 0; k < units[u].primitives.size(); ++k) {
        if (auto e = draw_gate_event(rng, units[u].primitives[k], noise)) events.push_back({u, k, *e});
      }
    }
    for (std::size_t u = 0; u < units.size(); ++u) {
      const auto* slot = std::get_if<const ExactMixer*>(&units[u].fused);
      if (slot == nullptr) continue;
      const ExactMixer& mixer = **slot;
      const auto n_pairs = static_cast<std::uint64_t>(mixer.noise_pairs.size());
      for (long s = 0; s < mixer.noise_events.single_qubit; ++s) {
        if (uniform01(rng) >= noise.p1) continue;
        const auto& pr = mixer.noise_pairs[uniform_index(rng, n_pairs)];
        const int q = uniform_index(rng, 2) == 0 ? pr.first : pr.second;
        events.push_back({u, 0, {q, -1, static_cast<int>(uniform_index(rng, 3)) + 1}});
      }
      for (long s = 0; s < mixer.noise_events.two_qubit; ++s) {
        if (uniform01(rng) >= noise.p2) continue;
        const auto& pr = mixer.noise_pairs[uniform_index(rng, n_pairs)];
        events.push_back({u, 0, {pr.first, pr.second, static_cast<int>(uniform_index(rng, 15)) + 1}});
      }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const UnitEvents& a, const UnitEvents& b) { return a.unit < b.unit; });
    return events;
  }

  StateVector run(const std::vector<UnitEvents>& events) const {
    const std::size_t first_error = events.empty() ? units.size() : events.front().unit;
    if (first_error == units.size()) return *final_state;
    const std::size_t start = first_error / stride;
    StateVector state = checkpoints[start];
    auto ev = events.begin();
    std::size_t u = start * stride;
    while (u < units.size()) {
      if (block_at[u] >= 0) {
        const DiagonalBlock& block = blocks[static_cast<std::size_t>(block_at[u])];
        if ((ev == events.end() || ev->unit >= block.last) && !block.phase.empty()) {
          state.apply_phase_diagonal(block.phase, 1.0);
          u = block.last;
          continue;
        }
      }
      if (ev == events.end() || ev->unit != u) {
        apply_unit(u, state);
      } else if (std::holds_alternative<const ExactMixer*>(units[u].fused)) {
        apply_unit(u, state);
        for (; ev != events.end() && ev->unit == u; ++ev) apply_event(state, ev->event);
      } else {
        const auto& prims = units[u].primitives;
        for (std::size_t k = 0; k < prims.size(); ++k) {
          apply_gate(prims[k], state);
          for (; ev != events.end() && ev->unit == u && ev->after == k; ++ev) apply_event(state, ev->event);
        }
      }
      ++u;
    }
    return state;
  }
};

NoisyProgram::NoisyProgram(const AnsatzPlan& plan, std::size_t checkpoint_budget_bytes)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.n = plan.n_qubits;
  const std::size_t dim = std::size_t{1} << m.n;
  for (const auto& step : plan.steps) {
    if (const auto* mixer = std::get_if<ExactMixer>(&step.op)) {
      m.units.push_back({mixer, {}});
      m.slots += mixer->noise_events;
      continue;
    }
    const auto& gates = std::get<Circuit>(step.op).gates();
    const std::size_t block_first = m.units.size();
    bool diagonal = true;
    for (std::size_t i = 0; i < gates.size();) {
      if (is_zz_block(gates, i)) {
        m.units.push_back({ZZ{gates[i].q0, gates[i].q1, gates[i + 1].angle}, {gates[i], gates[i + 1], gates[i + 2]}});
        i += 3;
      } else {
        diagonal = diagonal && gates[i].name == GateName::Rz;
        m.units.push_back({gates[i], expand(gates[i])});
        ++i;
      }
    }
    for (std::size_t u = block_first; u < m.units.size(); ++u) {
      for (const auto& g : m.units[u].primitives) (g.is_two_qubit() ? m.slots.two_qubit : m.slots.single_qubit)++;
    }
    // A diagonal segment collapses to one phase pass when error-free.
    const std::size_t terms = m.units.size() - block_first;
    if (diagonal && terms > 1 && static_cast<double>(dim) * static_cast<double>(terms) <= 0x1.0p28) {
      DiagonalBlock block{block_first, m.units.size(), std::vector<double>(dim, 0.0)};
      for (std::size_t u = block_first; u < m.units.size(); ++u) {
        std::uint64_t mask;
        double half;
        if (const auto* zz = std::get_if<ZZ>(&m.units[u].fused)) {
          mask = (std::uint64_t{1} << zz->a) | (std::uint64_t{1} << zz->b);
          half = zz->theta / 2;
        } else {
          const Gate& g = std::get<Gate>(m.units[u].fused);
          mask = std::uint64_t{1} << g.q0;
          half = g.angle / 2;
        }
        for (std::size_t i = 0; i < dim; ++i) block.phase[i] += (std::popcount(i & mask) & 1) ? -half : half;
      }
      m.blocks.push_back(std::move(block));
    }
  }
  m.block_at.assign(m.units.size() + 1, -1);
  for (std::size_t b = 0; b < m.blocks.size(); ++b) m.block_at[m.blocks[b].first] = static_cast<std::ptrdiff_t>(b);

  const std::size_t state_bytes = dim * sizeof(cplx);
  const std::size_t max_states = std::max<std::size_t>(1, checkpoint_budget_bytes / state_bytes);
  m.stride = std::max<std::size_t>(1, (m.units.size() + max_states - 1) / max_states);
  StateVector state(m.n);
  for (std::size_t u = 0; u < m.units.size(); ++u) {
    if (u % m.stride == 0) m.checkpoints.push_back(state);
    m.apply_unit(u, state);
  }
  if (m.units.size() % m.stride == 0) m.checkpoints.push_back(state);
  m.final_state = std::move(state);
}

NoisyProgram::~NoisyProgram() = default;
NoisyProgram::NoisyProgram(NoisyProgram&&) noexcept = default;
NoisyProgram& NoisyProgram::operator=(NoisyProgram&&) noexcept = default;

int NoisyProgram::num_qubits() const { return impl_->n; }
GateCount NoisyProgram::slot_counts() const { return impl_->slots; }
const StateVector& NoisyProgram::noiseless_state() const { return *impl_->final_state; }

StateVector NoisyProgram::run_trajectory(const NoiseModel& noise, std::uint64_t index) const {
  noise.validate();
  return impl_->run(impl_->draw(noise, index));
}

void NoisyProgram::for_each_trajectory(const NoiseModel& noise, std::uint64_t count,
                                       const std::function<void(const StateVector&, std::uint64_t)>& visit) const {
  noise.validate();
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      const StateVector state = run_trajectory(noise, static_cast<std::uint64_t>(t));
      visit(state, static_cast<std::uint64_t>(t));
    } catch (...) {
#pragma omp critical(fqaoa_trajectory_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fqaoa
