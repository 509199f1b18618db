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

#include "fqaoa/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "fqaoa/error.hpp"
#include "json.hpp"

namespace fqaoa {

AnsatzParams qaa_schedule(int p, double delta_t) {
  if (p < 1) throw InputError("p must be >= 1");
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw InputError("delta_t must be positive");
  AnsatzParams params;
  params.p = p;
  params.delta_t = delta_t;
  for (int j = 1; j <= p; ++j) {
    const double frac = (2.0 * j - 1.0) / (2.0 * p);
    params.gamma.push_back(frac * delta_t);
    params.beta.push_back((1.0 - frac) * delta_t);
  }
  return params;
}

double delta_t_from_wdt(double wdt, double W) {
  if (!(wdt > 0.0)) throw InputError("W*delta_t must be positive");
  if (W <= 0.0) {
    spdlog::warn("W = 0: using delta_t = {}", wdt);
    return wdt;
  }
  return wdt / W;
}

void validate_params(const AnsatzParams& params) {
  if (params.p < 1) throw InputError("p must be >= 1");
  if (static_cast<int>(params.gamma.size()) != params.p || static_cast<int>(params.beta.size()) != params.p) {
    throw InputError("gamma and beta must each have p entries");
  }
}

double energy(const SectorAnsatz& ansatz, const AnsatzParams& params) {
  validate_params(params);
  return ansatz.energy(params.gamma, params.beta);
}

double energy(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params) {
  validate_params(params);
  const ConstrainedSpectrum spectrum = brute_force_spectrum(instance, instance.particles());
  return energy(SectorAnsatz(instance, kind, spectrum.W), params);
}

namespace {

double step_for(double x, double rel) { return rel * std::max(1.0, std::abs(x)); }

double checked(double v) {
  if (!std::isfinite(v)) throw NumericalError("objective returned a non-finite value");
  return v;
}

}  // namespace

std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double rel_step) {
  std::vector<double> xs(x.begin(), x.end()), g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = step_for(x[i], rel_step);
    xs[i] = x[i] + h;
    const double fp = checked(f(xs));
    xs[i] = x[i] - h;
    const double fm = checked(f(xs));
    xs[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::vector<double> fd_gradient_5pt(const Objective& f, std::span<const double> x, double rel_step) {
  std::vector<double> xs(x.begin(), x.end()), g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = step_for(x[i], rel_step);
    double v[4];
    const double offsets[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int k = 0; k < 4; ++k) {
      xs[i] = x[i] + offsets[k] * h;
      v[k] = checked(f(xs));
    }
    xs[i] = x[i];
    g[i] = (v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * h);
  }
  return g;
}

MinimizeResult bfgs_minimize(const Objective& f, std::vector<double> x0, const OptimizeOptions& options) {
  if (x0.empty()) throw InputError("cannot minimize over zero parameters");
  const auto n = static_cast<Eigen::Index>(x0.size());
  MinimizeResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return checked(f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))));
  };
  auto grad = [&](const Eigen::VectorXd& x) {
    result.evaluations += 2 * n;
    const auto g = fd_gradient(f, std::span<const double>(x.data(), static_cast<std::size_t>(n)), options.fd_step);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(g.data(), n));
  };
  auto record = [&](int it, double fx, const Eigen::VectorXd& x) {
    if (options.trace) result.trace.push_back({it, fx, std::vector<double>(x.data(), x.data() + x.size())});
  };

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  double fx = eval(x);
  Eigen::VectorXd g = grad(x);
  record(0, fx, x);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  result.converged = g.lpNorm<Eigen::Infinity>() < options.tol;

  for (int it = 1; it <= options.max_iter && !result.converged; ++it) {
    Eigen::VectorXd d = -H * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      H.setIdentity();
      scaled = false;
      d = -g;
      slope = g.dot(d);
    }
    // Before curvature information exists, cap the first trial step.
    double alpha = 1.0;
    if (!scaled) alpha = 0.1 * std::max(1.0, x.lpNorm<Eigen::Infinity>()) / d.lpNorm<Eigen::Infinity>();

    Eigen::VectorXd x_new;
    double f_new = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      x_new = x + alpha * d;
      f_new = eval(x_new);
      if (f_new <= fx + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    result.iterations = it;
    if (!accepted) {
      spdlog::debug("line search made no progress at iteration {}", it);
      break;
    }
    const Eigen::VectorXd g_new = grad(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double decrease = fx - f_new;
    x = x_new;
    fx = f_new;
    g = g_new;
    record(it, fx, x);
    if (g.lpNorm<Eigen::Infinity>() < options.tol || decrease < options.tol) {
      result.converged = true;
      break;
    }
    const double ys = y.dot(s);
    if (ys > 1e-300) {
      if (!scaled) {
        H *= ys / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
  }
  result.x.assign(x.data(), x.data() + n);
  result.f = fx;
  return result;
}

namespace {

std::vector<double> pack(const AnsatzParams& p) {
  std::vector<double> x = p.gamma;
  x.insert(x.end(), p.beta.begin(), p.beta.end());
  return x;
}

AnsatzParams unpack(std::span<const double> x, int p, double delta_t) {
  AnsatzParams out;
  out.p = p;
  out.delta_t = delta_t;
  out.gamma.assign(x.begin(), x.begin() + p);
  out.beta.assign(x.begin() + p, x.end());
  return out;
}

nlohmann::ordered_json params_json(const AnsatzParams& p, double e) {
  return {{"gamma", p.gamma}, {"beta", p.beta}, {"energy", e}};
}

}  // namespace

OptimizationResult optimize(const SectorAnsatz& ansatz, const AnsatzParams& params0, const OptimizeOptions& options) {
  validate_params(params0);
  const int p = params0.p;
  const Objective f = [&](std::span<const double> x) {
    return ansatz.energy(x.subspan(0, static_cast<std::size_t>(p)), x.subspan(static_cast<std::size_t>(p)));
  };
  OptimizationResult out;
  out.initial = params0;
  out.initial_energy = energy(ansatz, params0);
  const MinimizeResult r = bfgs_minimize(f, pack(params0), options);
  out.optimal = unpack(r.x, p, params0.delta_t);
  out.optimal_energy = r.f;
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  out.trace = r.trace;
  spdlog::info("optimize p={}: {:.10g} -> {:.10g} in {} iterations ({} evaluations){}", p, out.initial_energy,
               out.optimal_energy, out.iterations, out.evaluations, out.converged ? "" : ", not converged");
  return out;
}

OptimizationResult optimize(const PortfolioInstance& instance, DriverKind kind, const AnsatzParams& params0,
                            const OptimizeOptions& options) {
  const ConstrainedSpectrum spectrum = brute_force_spectrum(instance, instance.particles());
  return optimize(SectorAnsatz(instance, kind, spectrum.W), params0, options);
}

std::string OptimizationResult::to_json() const {
  nlohmann::ordered_json j;
  j["initial"] = params_json(initial, initial_energy);
  j["optimal"] = params_json(optimal, optimal_energy);
  j["iterations"] = iterations;
  j["evaluations"] = evaluations;
  j["converged"] = converged;
  if (!trace.empty()) {
    nlohmann::ordered_json t = nlohmann::ordered_json::array();
    for (const auto& e : trace) t.push_back({{"iteration", e.iteration}, {"energy", e.energy}, {"x", e.x}});
    j["trace"] = std::move(t);
  }
  return j.dump();
}

std::vector<DepthResult> depth_sweep(const SectorAnsatz& ansatz, int p_max, double delta_t,
                                     const OptimizeOptions& options) {
  if (p_max < 1) throw InputError("p_max must be >= 1");
  std::vector<DepthResult> out;
  for (int p = 1; p <= p_max; ++p) {
    DepthResult row;
    row.p = p;
    row.fixed = qaa_schedule(p, delta_t);
    row.fixed_energy = energy(ansatz, row.fixed);
    row.optimized = optimize(ansatz, row.fixed, options);
    row.start = "qaa";
    if (p > 1) {
      AnsatzParams nested = out.back().optimized.optimal;
      nested.p = p;
      nested.delta_t = delta_t;
      nested.gamma.push_back(0.0);
      nested.beta.push_back(0.0);
      OptimizationResult alt = optimize(ansatz, nested, options);
      if (alt.optimal_energy < row.optimized.optimal_energy) {
        row.optimized = std::move(alt);
        row.start = "nested";
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace fqaoa
