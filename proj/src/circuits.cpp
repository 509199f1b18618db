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

#include "fqaoa/circuits.hpp"

#include <cmath>
#include <numbers>

#include "fqaoa/error.hpp"
#include "json.hpp"

namespace fqaoa {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

}  // namespace

std::string to_string(GateName name) {
  switch (name) {
    case GateName::X: return "X";
    case GateName::H: return "H";
    case GateName::S: return "S";
    case GateName::Sdg: return "Sdg";
    case GateName::Rx: return "Rx";
    case GateName::Ry: return "Ry";
    case GateName::Rz: return "Rz";
    case GateName::CNOT: return "CNOT";
    case GateName::GIVENS: return "GIVENS";
    case GateName::XYPAIR: return "XYPAIR";
  }
  return "?";
}

std::string to_string(Segment segment) {
  switch (segment) {
    case Segment::Init: return "init";
    case Segment::Phase: return "phase";
    case Segment::MixerI: return "mixer_I";
    case Segment::MixerII: return "mixer_II";
    case Segment::MixerBC: return "mixer_BC";
    case Segment::MixerExact: return "mixer_exact";
  }
  return "?";
}

bool Gate::is_two_qubit() const {
  return name == GateName::CNOT || name == GateName::GIVENS || name == GateName::XYPAIR;
}

std::vector<Gate> expand(const Gate& g) {
  const Segment seg = g.segment;
  switch (g.name) {
    case GateName::XYPAIR: {
      const int a = g.q0, b = g.q1;
      const double th = g.angle;
      return {
          {GateName::Rx, a, -1, -kHalfPi, seg}, {GateName::Rx, b, -1, kHalfPi, seg},
          {GateName::CNOT, a, b, 0.0, seg},     {GateName::Rx, a, -1, -th, seg},
          {GateName::Rz, b, -1, th, seg},       {GateName::CNOT, a, b, 0.0, seg},
          {GateName::Rx, a, -1, kHalfPi, seg},  {GateName::Rx, b, -1, -kHalfPi, seg},
      };
    }
    case GateName::GIVENS: {
      const int i = g.q0, j = g.q1;
      const double th = g.angle;
      return {
          {GateName::S, i, -1, 0.0, seg},   {GateName::S, j, -1, 0.0, seg},
          {GateName::H, j, -1, 0.0, seg},   {GateName::CNOT, j, i, 0.0, seg},
          {GateName::Ry, i, -1, th, seg},   {GateName::Ry, j, -1, th, seg},
          {GateName::CNOT, j, i, 0.0, seg}, {GateName::H, j, -1, 0.0, seg},
          {GateName::Sdg, i, -1, 0.0, seg}, {GateName::Sdg, j, -1, 0.0, seg},
      };
    }
    default:
      return {g};
  }
}

Circuit::Circuit(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) throw InputError("circuit needs at least one qubit");
}

void Circuit::add(const Gate& gate) {
  const auto in_range = [this](int q) { return q >= 0 && q < n_; };
  if (!in_range(gate.q0)) throw InputError("gate operand " + std::to_string(gate.q0) + " out of range");
  if (gate.is_two_qubit()) {
    if (!in_range(gate.q1)) throw InputError("gate operand " + std::to_string(gate.q1) + " out of range");
    if (gate.q0 == gate.q1) throw InputError(to_string(gate.name) + " needs distinct operands");
  }
  gates_.push_back(gate);
}

void Circuit::append(const Circuit& other) {
  if (other.n_ != n_) throw InputError("cannot append circuits of different width");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

Circuit Circuit::expanded() const {
  Circuit out(n_);
  for (const auto& g : gates_) {
    for (const auto& p : expand(g)) out.gates_.push_back(p);
  }
  return out;
}

GateCount Circuit::count() const {
  GateCount c;
  for (const auto& g : gates_) {
    for (const auto& p : expand(g)) (p.is_two_qubit() ? c.two_qubit : c.single_qubit)++;
  }
  return c;
}

GateCount Circuit::count(Segment segment) const {
  GateCount c;
  for (const auto& g : gates_) {
    if (g.segment != segment) continue;
    for (const auto& p : expand(g)) (p.is_two_qubit() ? c.two_qubit : c.single_qubit)++;
  }
  return c;
}

std::string Circuit::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& g : expanded().gates_) {
    nlohmann::ordered_json item;
    item["gate"] = to_string(g.name);
    item["qubits"] = g.is_two_qubit() ? nlohmann::ordered_json::array({g.q0, g.q1})
                                      : nlohmann::ordered_json::array({g.q0});
    item["angle"] = g.angle;
    item["segment"] = to_string(g.segment);
    arr.push_back(std::move(item));
  }
  return arr.dump();
}

Mat2 givens_gate_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c, s, -s, c};
}

void apply_gate(const Gate& g, StateVector& state) {
  switch (g.name) {
    case GateName::X: state.apply_x(g.q0); break;
    case GateName::H: state.apply_h(g.q0); break;
    case GateName::S: state.apply_s(g.q0); break;
    case GateName::Sdg: state.apply_sdg(g.q0); break;
    case GateName::Rx: state.apply_rx(g.q0, g.angle); break;
    case GateName::Ry: state.apply_ry(g.q0, g.angle); break;
    case GateName::Rz: state.apply_rz(g.q0, g.angle); break;
    case GateName::CNOT: state.apply_cnot(g.q0, g.q1); break;
    case GateName::GIVENS:
    case GateName::XYPAIR:
      for (const auto& p : expand(g)) apply_gate(p, state);
      break;
  }
}

void apply_circuit(const Circuit& circuit, StateVector& state, Execution mode) {
  if (circuit.num_qubits() != state.num_qubits()) throw InputError("circuit and state widths differ");
  for (const auto& g : circuit.gates()) {
    if (mode == Execution::Fused && g.name == GateName::XYPAIR) {
      state.apply_xy_pair(g.q0, g.q1, g.angle);
    } else if (mode == Execution::Fused && g.name == GateName::GIVENS) {
      state.apply_pair_rotation(g.q0, g.q1, givens_gate_matrix(g.angle));
    } else {
      apply_gate(g, state);
    }
  }
}

Circuit build_init_circuit(const OrbitalBasis& basis) {
  const int M = static_cast<int>(basis.orbitals.rows());
  const int n = static_cast<int>(basis.orbitals.cols());
  if (n < 1 || M > n) throw ValidationError("orbitals", "need M <= n and n >= 1");
  Eigen::MatrixXd Q = basis.orbitals;
  const double ortho = (Q * Q.transpose() - Eigen::MatrixXd::Identity(M, M)).cwiseAbs().maxCoeff();
  if (M > 0 && !(ortho <= 1e-10)) {
    throw ValidationError("orbitals", "rows are not orthonormal (deviation " + std::to_string(ortho) + ")");
  }

  // Row rotations (free: they only change the global sign) bring Q to the
  // staircase form Q(i, j) = 0 for j > n - M + i.
  for (int k = n - 1; k > n - M; --k) {
    for (int l = 0; l < k - (n - M); ++l) {
      const double a = Q(l, k), b = Q(l + 1, k);
      const double r = std::hypot(a, b);
      if (r == 0.0) continue;
      const double c = b / r, s = a / r;
      const Eigen::RowVectorXd top = Q.row(l), bottom = Q.row(l + 1);
      Q.row(l) = c * top - s * bottom;
      Q.row(l + 1) = s * top + c * bottom;
    }
  }

  // Column rotations on adjacent modes, row by row from the right, reduce
  // Q to [diag(+-1) | 0]; exactly n - M per row.
  std::vector<ModeRotation> eliminations;
  eliminations.reserve(static_cast<std::size_t>(M) * static_cast<std::size_t>(n - M));
  for (int i = 0; i < M; ++i) {
    for (int j = n - M + i; j > i; --j) {
      const double a = Q(i, j - 1), b = Q(i, j);
      const double r = std::hypot(a, b);
      const double c = r == 0.0 ? 1.0 : a / r;
      const double s = r == 0.0 ? 0.0 : b / r;
      const Eigen::VectorXd left = Q.col(j - 1), right = Q.col(j);
      Q.col(j - 1) = c * left + s * right;
      Q.col(j) = -s * left + c * right;
      eliminations.push_back({j - 1, c, s});
    }
  }

  Circuit circuit(n);
  for (int q = 0; q < M; ++q) circuit.add({GateName::X, q, -1, 0.0, Segment::Init});
  for (auto it = eliminations.rbegin(); it != eliminations.rend(); ++it) {
    circuit.add({GateName::GIVENS, it->mode, it->mode + 1, -std::atan2(it->s, it->c), Segment::Init});
  }
  return circuit;
}

InitStateCheck check_init_state(const HoppingModel& model, int M) {
  const OrbitalBasis basis = ground_orbitals(model, M);
  const Circuit circuit = build_init_circuit(basis);
  StateVector state(model.n_sites);
  apply_circuit(circuit, state);
  InitStateCheck out;
  out.gates = circuit.count();
  out.E0 = basis.E0;
  const Eigen::MatrixXd h = model.matrix();
  const StateVector hpsi = apply_hopping_operator(state, h);
  cplx e = 0.0;
  double e2 = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    e += std::conj(state.amplitudes()[i]) * hpsi.amplitudes()[i];
    e2 += std::norm(hpsi.amplitudes()[i]);
  }
  out.energy = e.real();
  out.variance = std::max(0.0, e2 - out.energy * out.energy);
  out.leakage = 1.0 - weight_distribution(state)[static_cast<std::size_t>(M)];
  out.leakage = std::max(0.0, out.leakage);
  const StateVector ref = slater_state(basis);
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    plus = std::max(plus, std::abs(state.amplitudes()[i] - ref.amplitudes()[i]));
    minus = std::max(minus, std::abs(state.amplitudes()[i] + ref.amplitudes()[i]));
  }
  out.slater_deviation = std::min(plus, minus);
  return out;
}

IsingForm ising_form(const PortfolioInstance& instance) {
  const int N = instance.N, n = instance.num_sites();
  const double K = instance.K;
  const double risk = instance.lambda / (K * K);
  const double ret = (1.0 - instance.lambda) / K;
  IsingForm form;
  form.field = Eigen::VectorXd::Zero(n);
  form.coupling = Eigen::MatrixXd::Zero(n, n);
  // n - 1/2 = -Z/2: Z_a Z_b carries sigma/4 from each ordered pair.
  for (int a = 0; a < n; ++a) {
    const int la = a % N;
    form.constant += risk * instance.sigma(la, la) / 4.0;
    form.field(a) = -ret * instance.mu(la) / 2.0;
    for (int b = a + 1; b < n; ++b) form.coupling(a, b) = risk * instance.sigma(la, b % N) / 2.0;
  }
  return form;
}

namespace {

Circuit phase_circuit(const IsingForm& form, int n, double gamma) {
  Circuit circuit(n);
  for (int a = 0; a < n; ++a) circuit.add({GateName::Rz, a, -1, 2.0 * gamma * form.field(a), Segment::Phase});
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      circuit.add({GateName::CNOT, a, b, 0.0, Segment::Phase});
      circuit.add({GateName::Rz, b, -1, 2.0 * gamma * form.coupling(a, b), Segment::Phase});
      circuit.add({GateName::CNOT, a, b, 0.0, Segment::Phase});
    }
  }
  return circuit;
}

}  // namespace

Circuit build_phase_circuit(const PortfolioInstance& instance, double gamma) {
  validate(instance);
  return phase_circuit(ising_form(instance), instance.num_sites(), gamma);
}

Circuit build_mixer_cyclic(const HoppingModel& model, double beta) {
  if (model.kind != DriverKind::Cyclic) throw InputError("cyclic mixer needs a cyclic driver model");
  const int n = model.n_sites;
  const double theta = beta * model.t;
  Circuit circuit(n);
  // Bond (i, i+1) in 1-based sites is qubit pair (i-1, i).
  for (int i = 1; i < n; i += 2) circuit.add({GateName::XYPAIR, i - 1, i, theta, Segment::MixerI});
  for (int i = 2; i < n; i += 2) circuit.add({GateName::XYPAIR, i - 1, i, theta, Segment::MixerII});
  // The Jordan-Wigner string between sites 1 and ND equals (-1)^(M-1) in the
  // weight-M sector and cancels the boundary sign, so the angle is beta t.
  circuit.add({GateName::XYPAIR, 0, n - 1, theta, Segment::MixerBC});
  return circuit;
}

HoppingModel cyclic_segment_model(const HoppingModel& model, Segment segment) {
  if (model.kind != DriverKind::Cyclic) throw InputError("segment split needs a cyclic model");
  HoppingModel out = model;
  out.edges.clear();
  const int n = model.n_sites;
  for (const auto& e : model.edges) {
    const bool boundary = e.a == n && e.b == 1;
    const bool odd = !boundary && e.a % 2 == 1;
    if ((segment == Segment::MixerBC && boundary) || (segment == Segment::MixerI && odd) ||
        (segment == Segment::MixerII && !boundary && !odd)) {
      out.edges.push_back(e);
    }
  }
  return out;
}

DriverSetup make_driver(const PortfolioInstance& instance, DriverKind kind, double W) {
  validate(instance);
  const int N = instance.N, D = instance.D, M = instance.particles();
  if (M < 1) throw ValidationError("K", "the ansatz needs at least one particle (K < N*D/2)");
  DriverSetup setup;
  setup.W = W;
  HoppingModel unit;
  if (kind == DriverKind::Cyclic) {
    unit = build_cyclic(N, D, M, 1.0);
  } else if (kind == DriverKind::Ladder) {
    unit = build_ladder(N, D, 1.0, 1.0);
  } else {
    throw InputError("ansatz driver must be cyc or lad");
  }
  setup.W_hop = hopping_scale(unit, M);
  // A flat cost landscape (W = 0) leaves t free; keep unit hopping.
  setup.t = (W > 0.0 && setup.W_hop > 0.0) ? W / setup.W_hop : 1.0;
  setup.model = kind == DriverKind::Cyclic ? build_cyclic(N, D, M, setup.t)
                                           : build_ladder(N, D, setup.t, setup.t);
  setup.basis = ground_orbitals(setup.model, M);
  return setup;
}

AnsatzPlan build_ansatz(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params,
                        double W) {
  if (params.p < 1) throw InputError("ansatz depth p must be >= 1");
  if (static_cast<int>(params.gamma.size()) != params.p || static_cast<int>(params.beta.size()) != params.p) {
    throw InputError("gamma and beta must each have p entries");
  }
  AnsatzPlan plan;
  plan.kind = kind;
  plan.M = instance.particles();
  plan.n_qubits = instance.num_sites();
  plan.driver = make_driver(instance, kind, W);

  Circuit init = build_init_circuit(plan.driver.basis);
  plan.reported_counts = init.count();
  plan.steps.push_back({std::move(init)});

  std::shared_ptr<const QuadraticPropagator> propagator;
  std::vector<std::pair<int, int>> ladder_pairs;
  if (kind == DriverKind::Ladder) {
    propagator = std::make_shared<QuadraticPropagator>(plan.driver.model.matrix());
    for (const auto& e : plan.driver.model.edges) ladder_pairs.emplace_back(e.a - 1, e.b - 1);
  }
  const IsingForm form = ising_form(instance);
  for (int j = 0; j < params.p; ++j) {
    Circuit phase = phase_circuit(form, plan.n_qubits, params.gamma[static_cast<std::size_t>(j)]);
    plan.reported_counts += phase.count();
    plan.steps.push_back({std::move(phase)});
    const double beta = params.beta[static_cast<std::size_t>(j)];
    if (kind == DriverKind::Cyclic) {
      Circuit mixer = build_mixer_cyclic(plan.driver.model, beta);
      plan.reported_counts += mixer.count();
      plan.steps.push_back({std::move(mixer)});
    } else {
      ExactMixer mixer{propagator, beta, ladder_pairs, mixer_count_formula(instance.N, instance.D, kind)};
      plan.reported_counts += mixer.noise_events;
      plan.steps.push_back({std::move(mixer)});
    }
  }
  return plan;
}

AnsatzPlan build_ansatz(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params) {
  const ConstrainedSpectrum spectrum = brute_force_spectrum(instance, instance.particles());
  return build_ansatz(instance, kind, params, spectrum.W);
}

StateVector run_plan(const AnsatzPlan& plan, Execution mode) {
  StateVector state(plan.n_qubits);
  for (const auto& step : plan.steps) {
    if (const auto* circuit = std::get_if<Circuit>(&step.op)) {
      apply_circuit(*circuit, state, mode);
    } else {
      const auto& mixer = std::get<ExactMixer>(step.op);
      mixer.propagator->apply(state, mixer.beta);
    }
  }
  return state;
}

GateCount init_count_formula(int N, int D, int K) {
  const long nd = static_cast<long>(N) * D;
  return {(4 * nd + 8 * K + 1) * (nd - 2 * K) / 2, (nd * nd - 4L * K * K) / 2};
}

GateCount phase_count_formula(int N, int D) {
  const long nd = static_cast<long>(N) * D;
  return {nd * (nd + 1) / 2, nd * (nd - 1)};
}

GateCount mixer_count_formula(int N, int D, DriverKind kind) {
  const long n = N, d = D;
  if (kind == DriverKind::Cyclic) return {6 * n * d, 2 * n * d};
  if (kind == DriverKind::Ladder) return {2 * n * n * d + 10 * n * d - 6 * n, 2 * n * n * d + 2 * n * d - 2 * n};
  throw InputError("no gate-count formula for custom drivers");
}

GateCountReport count_formulas(int N, int D, int K, int p, DriverKind kind) {
  const int n = N * D;
  if (N < 1 || D < 1 || n % 2 != 0 || n < 2) throw InputError("gate counts need N, D >= 1 and N*D even");
  const int M = n / 2 - K;
  if (K < 0 || M < 1) throw InputError("gate counts need 0 <= K < N*D/2");
  if (p < 0) throw InputError("p must be >= 0");
  if (kind == DriverKind::Custom) throw InputError("no gate-count formula for custom drivers");

  GateCountReport report;
  report.N = N;
  report.D = D;
  report.K = K;
  report.p = p;
  report.kind = kind;

  const HoppingModel cyc = build_cyclic(N, D, M, 1.0);
  GateCountRow init{"U_init", init_count_formula(N, D, K), build_init_circuit(ground_orbitals(cyc, M)).count(), true};
  IsingForm zero;
  zero.field = Eigen::VectorXd::Zero(n);
  zero.coupling = Eigen::MatrixXd::Zero(n, n);
  GateCountRow phase{"U_p", phase_count_formula(N, D), phase_circuit(zero, n, 0.0).count(), true};
  GateCountRow mixer{kind == DriverKind::Cyclic ? "U_m^cyc" : "U_m^lad", mixer_count_formula(N, D, kind), {}, false};
  if (kind == DriverKind::Cyclic) {
    mixer.census = build_mixer_cyclic(cyc, 0.0).count();
    mixer.has_census = true;
  }
  report.total_formula = init.formula + static_cast<long>(p) * (phase.formula + mixer.formula);
  report.total_census = init.census +
                        static_cast<long>(p) * (phase.census + (mixer.has_census ? mixer.census : mixer.formula));
  report.match = init.census == init.formula && phase.census == phase.formula &&
                 (!mixer.has_census || mixer.census == mixer.formula);
  report.rows = {init, phase, mixer};
  return report;
}

std::string GateCountReport::to_json() const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["D"] = D;
  j["K"] = K;
  j["p"] = p;
  j["driver"] = to_string(kind);
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["operator"] = r.op;
    row["single_qubit"] = r.formula.single_qubit;
    row["two_qubit"] = r.formula.two_qubit;
    if (r.has_census) {
      row["census_single_qubit"] = r.census.single_qubit;
      row["census_two_qubit"] = r.census.two_qubit;
    }
    rows_json.push_back(std::move(row));
  }
  j["rows"] = std::move(rows_json);
  j["total"] = {{"single_qubit", total_formula.single_qubit}, {"two_qubit", total_formula.two_qubit}};
  j["total_census"] = {{"single_qubit", total_census.single_qubit}, {"two_qubit", total_census.two_qubit}};
  j["match"] = match;
  return j.dump(2);
}

}  // namespace fqaoa
