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

#include "fqaoa/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "fqaoa/error.hpp"
#include "fqaoa/rng.hpp"
#include "json.hpp"

namespace fqaoa {

PostSelection post_select(const Counts& counts, int M) {
  PostSelection out;
  for (const auto& [bits, n] : counts) {
    out.total += n;
    if (std::popcount(bits) == M) {
      out.kept.emplace(bits, n);
      out.retained += n;
    }
  }
  out.retained_fraction = out.total == 0 ? 0.0 : static_cast<double>(out.retained) / static_cast<double>(out.total);
  return out;
}

double retained_mass(const StateVector& state, int M) {
  const std::vector<double> w = weight_distribution(state);
  return (M >= 0 && M < static_cast<int>(w.size())) ? w[static_cast<std::size_t>(M)] : 0.0;
}

int energy_bin(double x) {
  if (!(x > 0.0)) return 0;
  const int b = static_cast<int>(std::ceil(x * kHistogramBins)) - 1;
  return std::clamp(b, 0, kHistogramBins - 1);
}

std::string EnergyHistogram::to_csv() const {
  std::string out = "bin_lo,bin_hi,probability\n";
  for (std::size_t b = 0; b < probability.size(); ++b) {
    out += fmt::format("{:.12g},{:.12g},{:.12g}\n", lo[b], hi[b], probability[b]);
  }
  return out;
}

namespace {

// Weight-M basis states with their scaled energies and bins.
struct ScaledState {
  Bits bits;
  double x;  // (E - E_min) / W, 0 when W = 0
  int bin;
};

bool flat(const ConstrainedSpectrum& spectrum) { return !(spectrum.W > 0.0); }

double scaled(const ConstrainedSpectrum& spectrum, double e) {
  return flat(spectrum) ? 0.0 : (e - spectrum.E_min) / spectrum.W;
}

EnergyHistogram empty_histogram(const ConstrainedSpectrum& spectrum) {
  EnergyHistogram h;
  h.E_min = spectrum.E_min;
  h.W = spectrum.W;
  if (flat(spectrum)) {
    spdlog::warn("W = 0: energy histogram collapses to a single bin");
    h.degenerate = true;
    h.lo = {0.0};
    h.hi = {1.0};
    h.probability = {0.0};
    return h;
  }
  for (int b = 0; b < kHistogramBins; ++b) {
    h.lo.push_back(static_cast<double>(b) / kHistogramBins);
    h.hi.push_back(static_cast<double>(b + 1) / kHistogramBins);
  }
  h.probability.assign(kHistogramBins, 0.0);
  return h;
}

std::vector<ScaledState> constrained_states(const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum) {
  const int n = instance.num_sites();
  const int M = spectrum.M;
  std::vector<ScaledState> out;
  if (M < 0 || M > n) return out;
  const Bits end = Bits{1} << n;
  for (Bits x = M == 0 ? 0 : (Bits{1} << M) - 1; x < end;) {
    const double s = scaled(spectrum, cost(instance, x));
    out.push_back({x, s, flat(spectrum) ? 0 : energy_bin(s)});
    if (M == 0) break;
    const Bits c = x & (~x + 1);
    const Bits r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
  return out;
}

// Accumulates weighted samples of (bin, x).
struct Accumulator {
  std::array<double, kHistogramBins> bins{};
  double mass = 0.0, m1 = 0.0, m2 = 0.0;

  void add(int bin, double x, double w) {
    bins[static_cast<std::size_t>(bin)] += w;
    mass += w;
    m1 += w * x;
    m2 += w * x * x;
  }

  EnergyHistogram histogram(const ConstrainedSpectrum& spectrum) const {
    EnergyHistogram h = empty_histogram(spectrum);
    if (mass <= 0.0) return h;
    if (h.degenerate) {
      h.probability[0] = 1.0;
      return h;
    }
    for (int b = 0; b < kHistogramBins; ++b) h.probability[static_cast<std::size_t>(b)] = bins[static_cast<std::size_t>(b)] / mass;
    return h;
  }

  EnergyStats stats() const {
    if (mass <= 0.0) return {};
    const double mean = m1 / mass;
    return {mean, std::sqrt(std::max(0.0, m2 / mass - mean * mean))};
  }
};

Accumulator accumulate(const StateVector& state, const std::vector<ScaledState>& states) {
  Accumulator acc;
  for (const auto& s : states) acc.add(s.bin, s.x, std::norm(state[s.bits]));
  return acc;
}

Accumulator accumulate(const Counts& counts, const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum) {
  Accumulator acc;
  for (const auto& [bits, n] : counts) {
    if (std::popcount(bits) != spectrum.M) {
      throw InputError("bitstring " + to_bitstring(bits, instance.num_sites()) + " violates the constraint; post-select first");
    }
    const double x = scaled(spectrum, cost(instance, bits));
    acc.add(flat(spectrum) ? 0 : energy_bin(x), x, static_cast<double>(n));
  }
  return acc;
}

}  // namespace

EnergyHistogram energy_histogram(const StateVector& state, const PortfolioInstance& instance,
                                 const ConstrainedSpectrum& spectrum) {
  return accumulate(state, constrained_states(instance, spectrum)).histogram(spectrum);
}

EnergyHistogram energy_histogram(const Counts& counts, const PortfolioInstance& instance,
                                 const ConstrainedSpectrum& spectrum) {
  return accumulate(counts, instance, spectrum).histogram(spectrum);
}

EnergyStats energy_stats(const StateVector& state, const PortfolioInstance& instance,
                         const ConstrainedSpectrum& spectrum) {
  return accumulate(state, constrained_states(instance, spectrum)).stats();
}

EnergyStats energy_stats(const Counts& counts, const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum) {
  return accumulate(counts, instance, spectrum).stats();
}

RandomBaseline random_baseline(const PortfolioInstance& instance, const ConstrainedSpectrum& spectrum) {
  RandomBaseline out;
  Accumulator acc;
  for (const auto& s : constrained_states(instance, spectrum)) acc.add(s.bin, s.x, 1.0);
  out.histogram = acc.histogram(spectrum);
  out.delta_E_over_W = acc.stats();
  const int n = instance.num_sites();
  double binom = 1.0;
  for (int m = 0; m <= n; ++m) {
    out.P_M.push_back(std::ldexp(binom, -n));
    binom = binom * (n - m) / (m + 1);
  }
  return out;
}

Estimate ratio_estimate(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw InputError("ratio estimate needs equal-length inputs");
  double sy = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sy += num[i];
    sx += den[i];
  }
  if (sx <= 0.0) return {};
  const double r = sy / sx;
  const std::size_t T = num.size();
  if (T < 2) return {r, 0.0};
  double ss = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double d = num[i] - r * den[i];
    ss += d * d;
  }
  const double var = static_cast<double>(T) / static_cast<double>(T - 1) * ss / (sx * sx);
  return {r, std::sqrt(var)};
}

double z_score(const Estimate& a, const Estimate& b) {
  const double diff = a.value - b.value;
  const double se = std::hypot(a.stderr_, b.stderr_);
  if (se == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return diff / se;
}

namespace {

Estimate binomial(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

std::vector<double> weight_marginal(const Counts& counts, int n) {
  std::vector<double> pm(static_cast<std::size_t>(n) + 1, 0.0);
  double total = 0.0;
  for (const auto& [bits, c] : counts) {
    pm[static_cast<std::size_t>(std::popcount(bits))] += static_cast<double>(c);
    total += static_cast<double>(c);
  }
  if (total > 0.0) {
    for (auto& v : pm) v /= total;
  }
  return pm;
}

void fill_from_counts(RunReport& report, const Counts& counts, const PortfolioInstance& instance,
                      const ConstrainedSpectrum& spectrum) {
  const PostSelection ps = post_select(counts, spectrum.M);
  const Accumulator acc = accumulate(ps.kept, instance, spectrum);
  report.P_M = weight_marginal(counts, instance.num_sites());
  report.retained_fraction = ps.retained_fraction;
  report.histogram = acc.histogram(spectrum);
  report.delta_E_over_W = acc.stats();
  report.post_selected = true;
  if (ps.retained == 0) spdlog::warn("post-selection kept no samples");
}

double json_number(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

void analyze_state(RunReport& report, const StateVector& state, const PortfolioInstance& instance,
                   const ConstrainedSpectrum& spectrum, std::uint64_t shots, std::uint64_t seed) {
  report.shots = shots;
  report.energy = expectation_diagonal(state, cost_table(instance));
  const std::size_t M = static_cast<std::size_t>(spectrum.M);
  if (shots == 0) {
    const Accumulator acc = accumulate(state, constrained_states(instance, spectrum));
    report.P_M = weight_distribution(state);
    report.retained_fraction = report.P_M[M];
    report.histogram = acc.histogram(spectrum);
    report.delta_E_over_W = acc.stats();
    report.post_selected = true;
    report.target_P_M = {report.P_M[M], 0.0};
    report.lowest_bin = {report.histogram.lowest_bin(), 0.0};
    return;
  }
  const Counts counts = sample(state, shots, seed);
  fill_from_counts(report, counts, instance, spectrum);
  const PostSelection ps = post_select(counts, spectrum.M);
  std::uint64_t low = 0;
  for (const auto& [bits, c] : ps.kept) {
    if (energy_bin(scaled(spectrum, cost(instance, bits))) == 0) low += c;
  }
  report.target_P_M = binomial(ps.retained, ps.total);
  report.lowest_bin = binomial(low, ps.retained);
}

void analyze_trajectories(RunReport& report, const NoisyProgram& program, const NoiseModel& noise,
                          std::uint64_t trajectories, const PortfolioInstance& instance,
                          const ConstrainedSpectrum& spectrum, std::uint64_t shots) {
  if (trajectories == 0) throw InputError("noisy runs need at least one trajectory");
  report.noise = noise;
  report.trajectories = trajectories;
  report.shots = shots;
  const std::vector<ScaledState> states = constrained_states(instance, spectrum);
  const std::vector<double> costs = cost_table(instance);
  const int n = instance.num_sites();

  struct Tally {
    std::vector<double> weights;
    Accumulator exact;
    double energy = 0.0;
    Counts counts;
    double n = 0.0, n_M = 0.0, n_low = 0.0;
  };
  std::vector<Tally> tallies(trajectories);
  program.for_each_trajectory(noise, trajectories, [&](const StateVector& state, std::uint64_t t) {
    Tally& tally = tallies[t];
    tally.weights = weight_distribution(state);
    tally.exact = accumulate(state, states);
    tally.energy = expectation_diagonal(state, costs);
    const std::uint64_t share = shots / trajectories + (t < shots % trajectories ? 1 : 0);
    if (share == 0) return;
    tally.counts = sample(state, share, derive_seed(noise.seed, kShotStream, t));
    for (const auto& [bits, c] : tally.counts) {
      tally.n += static_cast<double>(c);
      if (std::popcount(bits) != spectrum.M) continue;
      tally.n_M += static_cast<double>(c);
      if (energy_bin(scaled(spectrum, cost(instance, bits))) == 0) tally.n_low += static_cast<double>(c);
    }
  });

  const std::size_t M = static_cast<std::size_t>(spectrum.M);
  const auto T = static_cast<double>(trajectories);
  report.energy = 0.0;
  std::vector<double> mean_weights(static_cast<std::size_t>(n) + 1, 0.0);
  Accumulator exact;
  std::vector<double> mass_M, low_mass, ones, shots_n, shots_M, shots_low;
  Counts merged;
  for (const Tally& t : tallies) {
    report.energy += t.energy / T;
    for (std::size_t w = 0; w < mean_weights.size(); ++w) mean_weights[w] += t.weights[w] / T;
    for (std::size_t b = 0; b < exact.bins.size(); ++b) exact.bins[b] += t.exact.bins[b];
    exact.mass += t.exact.mass;
    exact.m1 += t.exact.m1;
    exact.m2 += t.exact.m2;
    mass_M.push_back(t.weights[M]);
    low_mass.push_back(t.exact.bins[0]);
    ones.push_back(1.0);
    shots_n.push_back(t.n);
    shots_M.push_back(t.n_M);
    shots_low.push_back(t.n_low);
    for (const auto& [bits, c] : t.counts) merged[bits] += c;
  }
  if (shots == 0) {
    report.P_M = mean_weights;
    report.retained_fraction = mean_weights[M];
    report.histogram = exact.histogram(spectrum);
    report.delta_E_over_W = exact.stats();
    report.post_selected = true;
    report.target_P_M = ratio_estimate(mass_M, ones);
    report.lowest_bin = ratio_estimate(low_mass, mass_M);
    return;
  }
  fill_from_counts(report, merged, instance, spectrum);
  report.target_P_M = ratio_estimate(shots_M, shots_n);
  report.lowest_bin = ratio_estimate(shots_low, shots_M);
}

std::string RunReport::pm_csv() const {
  std::string out = "M,probability\n";
  for (std::size_t m = 0; m < P_M.size(); ++m) out += fmt::format("{},{:.12g}\n", m, P_M[m]);
  return out;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["instance_hash"] = instance_hash;
  j["driver"] = to_string(kind);
  j["N"] = N;
  j["D"] = D;
  j["K"] = K;
  j["M"] = M;
  j["p"] = params.p;
  j["mode"] = mode;
  j["params"] = {{"gamma", params.gamma}, {"beta", params.beta}, {"delta_t", params.delta_t},
                 {"W_delta_t", params.delta_t * W}};
  j["W"] = W;
  j["E_min"] = E_min;
  j["t"] = t;
  j["fixed_energy"] = fixed_energy;
  if (optimized_energy) j["optimized_energy"] = *optimized_energy;
  j["energy"] = energy;
  j["seed"] = seed;
  j["noise"] = {{"p1", noise.p1}, {"p2", noise.p2}, {"seed", noise.seed}, {"trajectories", trajectories}};
  j["shots"] = shots;
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < histogram.probability.size(); ++b) {
    bins.push_back({{"bin_lo", histogram.lo[b]}, {"bin_hi", histogram.hi[b]}, {"probability", histogram.probability[b]}});
  }
  j["energy_histogram"] = std::move(bins);
  j["histogram_degenerate"] = histogram.degenerate;
  j["P_M"] = P_M;
  j["target_P_M"] = {{"value", target_P_M.value}, {"stderr", json_number(target_P_M.stderr_)}};
  j["lowest_bin"] = {{"value", lowest_bin.value}, {"stderr", json_number(lowest_bin.stderr_)}};
  j["delta_E_over_W"] = {{"mean", delta_E_over_W.mean}, {"std", delta_E_over_W.std}};
  j["post_selected"] = post_selected;
  j["retained_fraction"] = retained_fraction;
  j["gate_counts"] = {{"single_qubit", gate_counts.single_qubit}, {"two_qubit", gate_counts.two_qubit}};
  if (optimization_json) j["optimization"] = nlohmann::ordered_json::parse(*optimization_json);
  return j.dump(2) + "\n";
}

Comparison compare_runs(std::span<const RunReport> reports) {
  if (reports.empty()) throw InputError("nothing to compare");
  for (const auto& r : reports) {
    if (r.instance_hash != reports.front().instance_hash) throw InputError("reports come from different instances");
    if (r.M != reports.front().M) throw InputError("reports use different particle numbers");
  }
  Comparison out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::string label = to_string(reports[i].kind);
    for (std::size_t k = 0; k < i; ++k) {
      if (reports[k].kind == reports[i].kind) {
        label += "_" + std::to_string(i);
        break;
      }
    }
    out.labels.push_back(label);
  }
  auto row = [&](std::string metric, auto get) {
    ComparisonRow r;
    r.metric = std::move(metric);
    for (const auto& rep : reports) r.values.push_back(get(rep));
    if (reports.size() == 2) r.difference = r.values[0] - r.values[1];
    out.rows.push_back(std::move(r));
    return out.rows.size() - 1;
  };
  row("delta_E_over_W_mean", [](const RunReport& r) { return r.delta_E_over_W.mean; });
  row("delta_E_over_W_std", [](const RunReport& r) { return r.delta_E_over_W.std; });
  const std::size_t low = row("lowest_bin", [](const RunReport& r) { return r.lowest_bin.value; });
  const std::size_t pm = row("P_M", [](const RunReport& r) { return r.target_P_M.value; });
  row("retained_fraction", [](const RunReport& r) { return r.retained_fraction; });
  row("energy", [](const RunReport& r) { return r.energy; });
  row("gates_1q", [](const RunReport& r) { return static_cast<double>(r.gate_counts.single_qubit); });
  row("gates_2q", [](const RunReport& r) { return static_cast<double>(r.gate_counts.two_qubit); });

  if (reports.size() == 2) {
    const RunReport &a = reports[0], &b = reports[1];
    out.rows[pm].z = z_score(a.target_P_M, b.target_P_M);
    out.rows[low].z = z_score(a.lowest_bin, b.lowest_bin);
    if (!a.noise.noiseless() || !b.noise.noiseless()) {
      out.pm_ordering = *out.rows[pm].z > kZ95;
      out.lowest_bin_ordering = *out.rows[low].z > -kZ95;
      out.rows[pm].ordering_holds = out.pm_ordering;
      out.rows[low].ordering_holds = out.lowest_bin_ordering;
    }
  }
  return out;
}

std::string Comparison::to_csv() const {
  std::ostringstream os;
  os << "metric";
  for (const auto& l : labels) os << ',' << l;
  const bool pair = labels.size() == 2;
  if (pair) os << ",difference,z,ordering_holds";
  os << '\n';
  for (const auto& r : rows) {
    os << r.metric;
    for (double v : r.values) os << ',' << fmt::format("{:.12g}", v);
    if (pair) {
      os << ',' << fmt::format("{:.12g}", r.difference.value_or(0.0));
      os << ',' << (r.z ? fmt::format("{:.6g}", *r.z) : "");
      os << ',' << (r.ordering_holds ? (*r.ordering_holds ? "true" : "false") : "");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fqaoa
