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

#include "fqaoa/instance.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "fqaoa/error.hpp"
#include "fqaoa/rng.hpp"

namespace fqaoa {

using json = nlohmann::json;

std::string to_bitstring(Bits bits, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((bits >> i) & 1U) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

Bits parse_bitstring(std::string_view text) {
  if (text.size() > 64) throw InputError("bitstring longer than 64 sites");
  Bits bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= Bits{1} << i;
    } else if (text[i] != '0') {
      throw InputError("bitstring contains '" + std::string(1, text[i]) + "'");
    }
  }
  return bits;
}

void validate(const PortfolioInstance& instance) {
  const auto& in = instance;
  if (in.N < 1) throw ValidationError("N", "must be >= 1");
  if (in.D < 1) throw ValidationError("D", "must be >= 1");
  if ((in.N * in.D) % 2 != 0) throw ValidationError("D", "N*D must be even");
  // K = 0 would divide by zero in the cost.
  if (in.K < 1 || in.K > in.N * in.D / 2) {
    throw ValidationError("K", "must satisfy 1 <= K <= N*D/2");
  }
  if (!(in.lambda >= 0.0 && in.lambda <= 1.0)) throw ValidationError("lambda", "must lie in [0, 1]");
  if (in.sigma.rows() != in.N || in.sigma.cols() != in.N) {
    throw ValidationError("sigma", "must be N x N");
  }
  if (in.mu.size() != in.N) throw ValidationError("mu", "must have N entries");
  if (!in.sigma.allFinite()) throw ValidationError("sigma", "entries must be finite");
  if (!in.mu.allFinite()) throw ValidationError("mu", "entries must be finite");
  for (int a = 0; a < in.N; ++a) {
    for (int b = a + 1; b < in.N; ++b) {
      if (in.sigma(a, b) != in.sigma(b, a)) {
        throw ValidationError("sigma", "not symmetric at (" + std::to_string(a) + "," +
                                           std::to_string(b) + ")");
      }
    }
  }
}

namespace {

// Per-asset sums s_l = z_l - D/2 make the double sum over (d, d') collapse.
double cost_unchecked(const PortfolioInstance& in, Bits bits) {
  const int N = in.N;
  double s[64];
  for (int l = 0; l < N; ++l) s[l] = -0.5 * in.D;
  for (int d = 0; d < in.D; ++d) {
    for (int l = 0; l < N; ++l) {
      if ((bits >> (l + N * d)) & 1U) s[l] += 1.0;
    }
  }
  double risk = 0.0;
  double ret = 0.0;
  for (int l = 0; l < N; ++l) {
    double row = 0.0;
    for (int m = 0; m < N; ++m) row += in.sigma(l, m) * s[m];
    risk += s[l] * row;
    ret += in.mu(l) * s[l];
  }
  const double K = in.K;
  return in.lambda / (K * K) * risk + (1.0 - in.lambda) / K * ret;
}

}  // namespace

double cost(const PortfolioInstance& instance, Bits bits) {
  const int n = instance.num_sites();
  if (n > 64 || instance.N > 64) throw CapacityError("more than 64 sites");
  if (n < 64 && (bits >> n) != 0) {
    throw InputError("bitstring has occupied sites beyond N*D = " + std::to_string(n));
  }
  return cost_unchecked(instance, bits);
}

double cost(const PortfolioInstance& instance, std::string_view bitstring) {
  if (static_cast<int>(bitstring.size()) != instance.num_sites()) {
    throw InputError("bitstring has " + std::to_string(bitstring.size()) + " sites, expected " +
                     std::to_string(instance.num_sites()));
  }
  return cost_unchecked(instance, parse_bitstring(bitstring));
}

std::vector<double> cost_table(const PortfolioInstance& instance) {
  const int n = instance.num_sites();
  if (n > kMaxDenseSites) {
    throw CapacityError("cost table needs N*D <= " + std::to_string(kMaxDenseSites) + ", got " +
                        std::to_string(n));
  }
  const std::int64_t dim = std::int64_t{1} << n;
  std::vector<double> table(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(static) if (dim >= (1 << 14))
  for (std::int64_t i = 0; i < dim; ++i) {
    table[static_cast<std::size_t>(i)] = cost_unchecked(instance, static_cast<Bits>(i));
  }
  return table;
}

ConstrainedSpectrum brute_force_spectrum(const PortfolioInstance& instance, int M) {
  const int n = instance.num_sites();
  if (n > kMaxEnumerationSites) {
    throw CapacityError("brute-force enumeration supports N*D <= " +
                        std::to_string(kMaxEnumerationSites) + ", got " + std::to_string(n));
  }
  if (M < 0 || M > n) throw InputError("particle count M out of range");

  constexpr int kChunkBits = 12;
  const std::int64_t dim = std::int64_t{1} << n;
  const std::int64_t chunk = std::min<std::int64_t>(dim, std::int64_t{1} << kChunkBits);
  const std::int64_t n_chunks = dim / chunk;

  struct Partial {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::uint64_t count = 0;
  };
  std::vector<Partial> partial(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static) if (n_chunks > 1)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    Partial p;
    for (std::int64_t i = c * chunk; i < (c + 1) * chunk; ++i) {
      if (std::popcount(static_cast<std::uint64_t>(i)) != M) continue;
      const double e = cost_unchecked(instance, static_cast<Bits>(i));
      p.lo = std::min(p.lo, e);
      p.hi = std::max(p.hi, e);
      p.sum += e;
      ++p.count;
    }
    partial[static_cast<std::size_t>(c)] = p;
  }

  ConstrainedSpectrum out;
  out.M = M;
  Partial total;
  for (const auto& p : partial) {
    total.lo = std::min(total.lo, p.lo);
    total.hi = std::max(total.hi, p.hi);
    total.sum += p.sum;
    total.count += p.count;
  }
  out.num_states = total.count;
  out.E_min = total.lo;
  out.E_max = total.hi;
  out.W = total.hi - total.lo;
  out.uniform_mean = total.sum / static_cast<double>(total.count);

  const double tie = 1e-12 * std::max({std::abs(out.E_min), out.W, 1e-300});
  std::vector<double> sq(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<std::vector<Bits>> ground(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static) if (n_chunks > 1)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    double acc = 0.0;
    auto& g = ground[static_cast<std::size_t>(c)];
    for (std::int64_t i = c * chunk; i < (c + 1) * chunk; ++i) {
      if (std::popcount(static_cast<std::uint64_t>(i)) != M) continue;
      const double e = cost_unchecked(instance, static_cast<Bits>(i));
      acc += (e - out.uniform_mean) * (e - out.uniform_mean);
      if (e - out.E_min <= tie) g.push_back(static_cast<Bits>(i));
    }
    sq[static_cast<std::size_t>(c)] = acc;
  }
  double var = 0.0;
  for (std::size_t c = 0; c < sq.size(); ++c) {
    var += sq[c];
    out.ground_bitstrings.insert(out.ground_bitstrings.end(), ground[c].begin(), ground[c].end());
  }
  out.uniform_std = std::sqrt(var / static_cast<double>(total.count));
  return out;
}

PortfolioInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.N < 1 || spec.D < 1) throw InputError("generator: N and D must be >= 1");
  if (!(spec.volatility_scale > 0.0)) throw InputError("generator: volatility scale must be > 0");
  if (!(spec.correlation >= 0.0 && spec.correlation <= 1.0)) {
    throw InputError("generator: correlation strength must lie in [0, 1]");
  }
  Rng rng(derive_seed(spec.seed, kInstanceStream, 0));
  const int N = spec.N;
  Eigen::VectorXd vol(N), loading(N), mu(N);
  for (int l = 0; l < N; ++l) {
    vol(l) = spec.volatility_scale * (0.5 + uniform01(rng));
    loading(l) = 0.5 + uniform01(rng);
    mu(l) = spec.volatility_scale * (1.5 * uniform01(rng) - 0.25);
  }
  // F = [sqrt(rho) vol.loading | sqrt(1-rho) diag(vol)], sigma = F F^T.
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, N + 1);
  for (int l = 0; l < N; ++l) {
    F(l, 0) = std::sqrt(spec.correlation) * vol(l) * loading(l);
    F(l, l + 1) = std::sqrt(1.0 - spec.correlation) * vol(l);
  }
  PortfolioInstance out;
  out.N = N;
  out.D = spec.D;
  out.K = spec.K;
  out.lambda = spec.lambda;
  out.sigma = F * F.transpose();
  // Exact symmetry regardless of summation order.
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) out.sigma(b, a) = out.sigma(a, b);
  }
  out.mu = mu;
  validate(out);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

PortfolioInstance instance_from_returns(const std::filesystem::path& csv_path, double lambda,
                                        int D, int K) {
  std::ifstream in(csv_path);
  if (!in) throw InputError("cannot open returns file " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(csv_path.string() + ": empty file");
  const auto header = split_csv_line(line);
  const int N = static_cast<int>(header.size());
  if (N < 1) throw InputError(csv_path.string() + ": header has no asset names");

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != N) {
      throw InputError(csv_path.string() + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(N));
    }
    std::vector<double> row(static_cast<std::size_t>(N));
    for (int c = 0; c < N; ++c) {
      const std::string cell = trim(cells[static_cast<std::size_t>(c)]);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        throw InputError(csv_path.string() + ": row " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": non-numeric cell '" + cell + "'");
      }
      row[static_cast<std::size_t>(c)] = value;
    }
    rows.push_back(std::move(row));
  }
  const int T = static_cast<int>(rows.size());
  if (T < 2) throw InputError(csv_path.string() + ": need at least 2 return rows, got " +
                              std::to_string(T));

  Eigen::MatrixXd R(T, N);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < N; ++c) R(t, c) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)];
  }
  PortfolioInstance out;
  out.N = N;
  out.D = D;
  out.K = K;
  out.lambda = lambda;
  out.mu = R.colwise().mean().transpose();
  const Eigen::MatrixXd centered = R.rowwise() - out.mu.transpose();
  out.sigma = (centered.transpose() * centered) / static_cast<double>(T - 1);
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) out.sigma(b, a) = out.sigma(a, b);
  }
  validate(out);
  return out;
}

namespace {

json to_json(const PortfolioInstance& in) {
  json sigma = json::array();
  for (int a = 0; a < in.sigma.rows(); ++a) {
    json row = json::array();
    for (int b = 0; b < in.sigma.cols(); ++b) row.push_back(in.sigma(a, b));
    sigma.push_back(std::move(row));
  }
  json mu = json::array();
  for (int a = 0; a < in.mu.size(); ++a) mu.push_back(in.mu(a));
  json j;
  j["N"] = in.N;
  j["D"] = in.D;
  j["K"] = in.K;
  j["lambda"] = in.lambda;
  j["sigma"] = std::move(sigma);
  j["mu"] = std::move(mu);
  return j;
}

int int_field(const json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(name, "missing");
  const auto& v = j.at(name);
  if (!v.is_number_integer()) throw ValidationError(name, "must be an integer");
  return v.get<int>();
}

double number_field(const json& v, const std::string& name) {
  if (!v.is_number()) throw ValidationError(name, "must be a number");
  return v.get<double>();
}

}  // namespace

PortfolioInstance parse_instance_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("instance", "must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "N" && key != "D" && key != "K" && key != "lambda" && key != "sigma" && key != "mu") {
      throw ValidationError(key, "unknown field");
    }
  }
  PortfolioInstance out;
  out.N = int_field(j, "N");
  out.D = int_field(j, "D");
  out.K = int_field(j, "K");
  if (!j.contains("lambda")) throw ValidationError("lambda", "missing");
  out.lambda = number_field(j.at("lambda"), "lambda");
  if (out.N < 1) throw ValidationError("N", "must be >= 1");

  if (!j.contains("sigma") || !j.at("sigma").is_array()) {
    throw ValidationError("sigma", "missing or not an array");
  }
  const auto& s = j.at("sigma");
  if (static_cast<int>(s.size()) != out.N) throw ValidationError("sigma", "must have N rows");
  out.sigma.resize(out.N, out.N);
  for (int a = 0; a < out.N; ++a) {
    const auto& row = s.at(static_cast<std::size_t>(a));
    if (!row.is_array() || static_cast<int>(row.size()) != out.N) {
      throw ValidationError("sigma", "row " + std::to_string(a) + " must have N entries");
    }
    for (int b = 0; b < out.N; ++b) {
      out.sigma(a, b) = number_field(row.at(static_cast<std::size_t>(b)), "sigma");
    }
  }
  if (!j.contains("mu") || !j.at("mu").is_array()) throw ValidationError("mu", "missing or not an array");
  const auto& m = j.at("mu");
  if (static_cast<int>(m.size()) != out.N) throw ValidationError("mu", "must have N entries");
  out.mu.resize(out.N);
  for (int a = 0; a < out.N; ++a) out.mu(a) = number_field(m.at(static_cast<std::size_t>(a)), "mu");
  validate(out);
  return out;
}

std::string instance_to_json(const PortfolioInstance& instance, int indent) {
  return to_json(instance).dump(indent);
}

PortfolioInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str());
}

void save_instance(const PortfolioInstance& instance, const std::filesystem::path& path) {
  validate(instance);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file " + path.string());
  out << instance_to_json(instance) << '\n';
}

std::string instance_hash(const PortfolioInstance& instance) {
  const std::string text = to_json(instance).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fqaoa
