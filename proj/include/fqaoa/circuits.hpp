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

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fqaoa/driver.hpp"
#include "fqaoa/free_fermion.hpp"
#include "fqaoa/instance.hpp"
#include "fqaoa/statevector.hpp"

namespace fqaoa {

enum class GateName { X, H, S, Sdg, Rx, Ry, Rz, CNOT, GIVENS, XYPAIR };
enum class Segment { Init, Phase, MixerI, MixerII, MixerBC, MixerExact };

std::string to_string(GateName name);
std::string to_string(Segment segment);

/// Operands are 0-based qubits (qubit = site - 1). CNOT: q0 control, q1 target.
/// GIVENS and XYPAIR are composites expanded before counting or noisy runs.
struct Gate {
  GateName name = GateName::X;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;
  Segment segment = Segment::Init;

  bool is_two_qubit() const;
  bool is_composite() const { return name == GateName::GIVENS || name == GateName::XYPAIR; }
};

struct GateCount {
  long single_qubit = 0;
  long two_qubit = 0;

  GateCount& operator+=(const GateCount& o) {
    single_qubit += o.single_qubit;
    two_qubit += o.two_qubit;
    return *this;
  }
  friend GateCount operator+(GateCount a, const GateCount& b) { return a += b; }
  friend GateCount operator*(long k, const GateCount& c) { return {k * c.single_qubit, k * c.two_qubit}; }
  friend bool operator==(const GateCount&, const GateCount&) = default;
};

/// Primitive sequence of a composite gate (a primitive expands to itself).
///   XYPAIR(a,b,th): Rx_a(-pi/2) Rx_b(pi/2) CNOT(a,b) Rx_a(-th) Rz_b(th) CNOT(a,b) Rx_a(pi/2) Rx_b(-pi/2)
///   GIVENS(i,j,th): S_i S_j H_j CNOT(j,i) Ry_i(th) Ry_j(th) CNOT(j,i) H_j Sdg_i Sdg_j
std::vector<Gate> expand(const Gate& gate);

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int num_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Throws InputError on out-of-range or repeated operands.
  void add(const Gate& gate);
  void append(const Circuit& other);

  Circuit expanded() const;
  /// Census of the primitive expansion.
  GateCount count() const;
  GateCount count(Segment segment) const;

  /// JSON list of {"gate", "qubits", "angle"} over the primitive expansion.
  std::string to_json() const;

 private:
  int n_;
  std::vector<Gate> gates_;
};

enum class Execution {
  Primitive,  // every composite applied gate by gate
  Fused,      // composites applied as one two-qubit kernel
};

void apply_gate(const Gate& gate, StateVector& state);
void apply_circuit(const Circuit& circuit, StateVector& state, Execution mode = Execution::Primitive);

/// Appendix-style Givens gate on span{|1_i 0_j>, |0_i 1_j>}:
/// [[cos(th), sin(th)], [-sin(th), cos(th)]].
Mat2 givens_gate_matrix(double theta);

/// X on qubits 0..M-1, then M(n-M) GIVENS gates on adjacent qubits. The
/// prepared amplitude of an occupied set T is det(orbitals[:, T]) up to one
/// global sign. Throws ValidationError unless the rows are orthonormal.
Circuit build_init_circuit(const OrbitalBasis& basis);

/// Properties of the circuit-prepared initial state of a driver.
struct InitStateCheck {
  double energy = 0.0;        // <H_d>
  double E0 = 0.0;            // sum of the occupied orbital energies
  double variance = 0.0;      // <H_d^2> - <H_d>^2
  double leakage = 0.0;       // mass off weight M
  double slater_deviation = 0.0;  // max |amp - det| after fixing the global sign
  GateCount gates;

  bool passes(double tol = 1e-8) const {
    return std::abs(energy - E0) <= tol && variance <= tol && leakage <= 1e-10 && slater_deviation <= tol;
  }
};
InitStateCheck check_init_state(const HoppingModel& model, int M);

/// H_p = constant + sum_a field_a Z_a + sum_{a<b} coupling_ab Z_a Z_b.
struct IsingForm {
  double constant = 0.0;
  Eigen::VectorXd field;
  Eigen::MatrixXd coupling;  // strictly upper triangular
};
IsingForm ising_form(const PortfolioInstance& instance);

/// exp(-i gamma H_p) without its global phase: one Rz per site and one
/// CNOT-Rz-CNOT block per unordered site pair.
Circuit build_phase_circuit(const PortfolioInstance& instance, double gamma);

/// U_BC U_II U_I: XY pairs on odd bonds, then even bonds, then the boundary
/// pair (1, ND). Throws InputError for a non-cyclic model.
Circuit build_mixer_cyclic(const HoppingModel& model, double beta);

/// Hopping model holding only the bonds of one cyclic mixer segment.
HoppingModel cyclic_segment_model(const HoppingModel& model, Segment segment);

struct AnsatzParams {
  int p = 1;
  std::vector<double> gamma;
  std::vector<double> beta;
  double delta_t = 0.0;
};

/// Driver with the hopping integral fixed to t = W / W_hop.
struct DriverSetup {
  HoppingModel model;
  OrbitalBasis basis;
  double W = 0.0;
  double W_hop = 0.0;
  double t = 0.0;
};
DriverSetup make_driver(const PortfolioInstance& instance, DriverKind kind, double W);

/// Ladder mixer applied as an exact free-fermion exponential; the noise
/// model places `noise_events` on uniformly chosen `noise_pairs`.
struct ExactMixer {
  std::shared_ptr<const QuadraticPropagator> propagator;
  double beta = 0.0;
  std::vector<std::pair<int, int>> noise_pairs;
  GateCount noise_events;
};

struct PlanStep {
  std::variant<Circuit, ExactMixer> op;
};

struct AnsatzPlan {
  int n_qubits = 0;
  int M = 0;
  DriverKind kind = DriverKind::Cyclic;
  DriverSetup driver;
  std::vector<PlanStep> steps;
  /// Census of gate-compiled steps plus closed-form ladder mixer counts.
  GateCount reported_counts;
};

/// init, then p x (phase(gamma_j), mixer(beta_j)). Throws InputError when
/// gamma/beta lengths differ from p or p < 1.
AnsatzPlan build_ansatz(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params,
                        double W);
AnsatzPlan build_ansatz(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params);

StateVector run_plan(const AnsatzPlan& plan, Execution mode = Execution::Primitive);

// Closed-form gate counts.
GateCount init_count_formula(int N, int D, int K);
GateCount phase_count_formula(int N, int D);
GateCount mixer_count_formula(int N, int D, DriverKind kind);

struct GateCountRow {
  std::string op;
  GateCount formula;
  GateCount census;
  bool has_census = false;
};

struct GateCountReport {
  int N = 0, D = 0, K = 0, p = 0;
  DriverKind kind = DriverKind::Cyclic;
  std::vector<GateCountRow> rows;  // U_init, U_p, U_m (per layer)
  GateCount total_formula;
  GateCount total_census;
  bool match = false;

  std::string to_json() const;
};

/// Closed forms for the requested (N, D, K, p, kind); built-circuit census
/// for every gate-compiled row. `match` is true iff every census equals its
/// closed form (the ladder mixer row has no census).
GateCountReport count_formulas(int N, int D, int K, int p, DriverKind kind);

}  // namespace fqaoa
