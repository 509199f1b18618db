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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fqaoa/analysis.hpp"
#include "fqaoa/driver.hpp"
#include "fqaoa/instance.hpp"
#include "fqaoa/trajectory.hpp"

namespace fqaoa {

/// Configuration of `fqaoa run`.
struct RunConfig {
  // Instance source; at most one of the three. None means the default generator.
  std::optional<std::filesystem::path> instance_path;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::filesystem::path> returns_csv;
  int N = 8, D = 2, K = 4;
  double lambda = 0.9;

  std::vector<DriverKind> drivers{DriverKind::Cyclic};
  int p = 1;
  double wdt = 10.0;
  std::optional<double> delta_t;  // absolute; overrides wdt
  std::string mode = "fixed";     // fixed | optimize
  std::uint64_t shots = 0;        // 0: exact distributions
  double noise_p1 = 0.0;
  double noise_p2 = 0.0;
  std::uint64_t trajectories = 2000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  bool trace = false;

  /// Throws ValidationError on a bad field.
  void validate() const;
  bool noisy() const { return noise_p1 > 0.0 || noise_p2 > 0.0; }
};

struct RunOutput {
  std::vector<RunReport> reports;
  std::optional<Comparison> comparison;  // two drivers
};

PortfolioInstance resolve_instance(const RunConfig& config);
RunOutput execute_run(const RunConfig& config);
/// report_<driver>.json, histogram_<driver>.csv, pm_<driver>.csv and, for
/// two drivers, comparison.csv.
void write_run_outputs(const RunOutput& output, const std::filesystem::path& dir);

/// Full command line; returns the process exit code. Errors are printed to
/// `err` as one JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace fqaoa
