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

#include "fqaoa/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <omp.h>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "fqaoa/circuits.hpp"
#include "fqaoa/error.hpp"
#include "fqaoa/rng.hpp"
#include "fqaoa/schedule.hpp"
#include "fqaoa/sector.hpp"
#include "json.hpp"

namespace fqaoa {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f6973ULL;  // "nois"

void configure_logging() {
  auto logger = spdlog::get("fqaoa");
  if (!logger) {
    logger = spdlog::stderr_color_mt("fqaoa");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  }
  const char* env = std::getenv("FQAOA_LOG");
  const std::string level = env ? env : "warn";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

std::vector<DriverKind> parse_drivers(const std::string& text) {
  if (text == "both") return {DriverKind::Cyclic, DriverKind::Ladder};
  const DriverKind kind = parse_driver_kind(text);
  if (kind == DriverKind::Custom) throw ValidationError("driver", "run supports cyc, lad or both");
  return {kind};
}

}  // namespace

void RunConfig::validate() const {
  const int sources = (instance_path ? 1 : 0) + (gen_seed ? 1 : 0) + (returns_csv ? 1 : 0);
  if (sources > 1) throw ValidationError("instance", "--instance, --gen-seed and --returns are mutually exclusive");
  if (drivers.empty()) throw ValidationError("driver", "no driver selected");
  if (p < 1) throw ValidationError("p", "must be >= 1");
  if (!(wdt > 0.0)) throw ValidationError("wdt", "must be positive");
  if (delta_t && !(*delta_t > 0.0)) throw ValidationError("delta_t", "must be positive");
  if (mode != "fixed" && mode != "optimize") throw ValidationError("mode", "must be fixed or optimize");
  if (!(noise_p1 >= 0.0 && noise_p1 <= 1.0)) throw ValidationError("noise_p1", "must lie in [0, 1]");
  if (!(noise_p2 >= 0.0 && noise_p2 <= 1.0)) throw ValidationError("noise_p2", "must lie in [0, 1]");
  if (noisy() && trajectories == 0) throw ValidationError("trajectories", "noisy runs need at least one trajectory");
}

PortfolioInstance resolve_instance(const RunConfig& config) {
  if (config.instance_path) return load_instance(*config.instance_path);
  if (config.returns_csv) return instance_from_returns(*config.returns_csv, config.lambda, config.D, config.K);
  GeneratorSpec spec;
  spec.seed = config.gen_seed.value_or(42);
  spec.N = config.N;
  spec.D = config.D;
  spec.K = config.K;
  spec.lambda = config.lambda;
  return generate_instance(spec);
}

RunOutput execute_run(const RunConfig& config) {
  config.validate();
  const PortfolioInstance instance = resolve_instance(config);
  validate(instance);
  const int M = instance.particles();
  const ConstrainedSpectrum spectrum = brute_force_spectrum(instance, M);
  if (!(spectrum.W > 0.0)) spdlog::warn("W = 0: every constrained bitstring has the same cost");
  const double delta_t = config.delta_t ? *config.delta_t : delta_t_from_wdt(config.wdt, spectrum.W);
  const std::string hash = instance_hash(instance);

  RunOutput output;
  for (const DriverKind kind : config.drivers) {
    const SectorAnsatz ansatz(instance, kind, spectrum.W);
    RunReport report;
    report.instance_hash = hash;
    report.kind = kind;
    report.N = instance.N;
    report.D = instance.D;
    report.K = instance.K;
    report.M = M;
    report.mode = config.mode;
    report.W = spectrum.W;
    report.E_min = spectrum.E_min;
    report.t = ansatz.driver().t;
    report.seed = config.seed;

    const AnsatzParams fixed = qaa_schedule(config.p, delta_t);
    report.fixed_energy = energy(ansatz, fixed);
    report.params = fixed;
    if (config.mode == "optimize") {
      OptimizeOptions options;
      options.trace = config.trace;
      const OptimizationResult opt = optimize(ansatz, fixed, options);
      report.params = opt.optimal;
      report.optimized_energy = opt.optimal_energy;
      report.optimization_json = opt.to_json();
    }

    const AnsatzPlan plan = build_ansatz(instance, kind, report.params, spectrum.W);
    report.gate_counts = plan.reported_counts;
    if (config.noisy()) {
      const NoiseModel noise{config.noise_p1, config.noise_p2,
                             derive_seed(config.seed, kNoiseStream, static_cast<std::uint64_t>(kind))};
      const NoisyProgram program(plan);
      analyze_trajectories(report, program, noise, config.trajectories, instance, spectrum, config.shots);
    } else {
      analyze_state(report, run_plan(plan, Execution::Fused), instance, spectrum, config.shots, config.seed);
    }
    output.reports.push_back(std::move(report));
  }
  if (output.reports.size() == 2) output.comparison = compare_runs(output.reports);
  return output;
}

void write_run_outputs(const RunOutput& output, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& r : output.reports) {
    const std::string tag = to_string(r.kind);
    write_file(dir / ("report_" + tag + ".json"), r.to_json());
    write_file(dir / ("histogram_" + tag + ".csv"), r.histogram_csv());
    write_file(dir / ("pm_" + tag + ".csv"), r.pm_csv());
  }
  if (output.comparison) write_file(dir / "comparison.csv", output.comparison->to_csv());
}

namespace {

std::string error_json(const std::string& kind, const std::string& message, const std::string& field = "") {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (!field.empty()) j["field"] = field;
  return j.dump();
}

int cmd_run(const RunConfig& config, std::ostream& out) {
  const RunOutput output = execute_run(config);
  write_run_outputs(output, config.out_dir);
  for (const auto& r : output.reports) {
    out << fmt::format("{} p={} {}: energy {:.10g}, dE/W {:.4f} (sigma {:.4f}), lowest bin {:.4f}, P_M {:.4f}",
                       to_string(r.kind), r.params.p, r.mode, r.energy, r.delta_E_over_W.mean, r.delta_E_over_W.std,
                       r.lowest_bin.value, r.target_P_M.value);
    if (r.optimized_energy) out << fmt::format(", fixed {:.10g} -> optimized {:.10g}", r.fixed_energy, *r.optimized_energy);
    out << "\n";
  }
  if (output.comparison) {
    const auto& c = *output.comparison;
    if (c.pm_ordering) {
      out << fmt::format("ordering {} >= {}: P_M {}, lowest bin {}\n", c.labels[0], c.labels[1],
                         *c.pm_ordering ? "holds" : "fails", *c.lowest_bin_ordering ? "holds" : "fails");
    }
  }
  out << "wrote " << config.out_dir.string() << "\n";
  return 0;
}

int cmd_gatecount(int N, int D, int K, int p, const std::string& driver, bool json, std::ostream& out) {
  const DriverKind kind = parse_driver_kind(driver);
  const GateCountReport report = count_formulas(N, D, K, p, kind);
  if (json) {
    out << report.to_json() << "\n";
  } else {
    out << fmt::format("{:<10}{:>10}{:>10}{:>10}{:>10}\n", "operator", "1q", "2q", "census1q", "census2q");
    for (const auto& r : report.rows) {
      out << fmt::format("{:<10}{:>10}{:>10}", r.op, r.formula.single_qubit, r.formula.two_qubit);
      if (r.has_census) out << fmt::format("{:>10}{:>10}", r.census.single_qubit, r.census.two_qubit);
      out << "\n";
    }
    out << fmt::format("{} 1q, {} 2q\n", report.total_formula.single_qubit, report.total_formula.two_qubit);
  }
  if (!report.match) throw NumericalError("gate census disagrees with the closed-form counts");
  return 0;
}

int cmd_verify(const std::string& driver, int N, int D, int K, std::optional<int> M_override,
               const std::string& edges, std::ostream& out) {
  HoppingModel model;
  int M = 0;
  if (!edges.empty()) {
    model = load_custom_model(edges);
    M = M_override.value_or(model.n_sites / 2 - K);
  } else {
    const DriverKind kind = parse_driver_kind(driver);
    if (N < 1 || D < 1) throw ValidationError("N", "N and D must be >= 1");
    M = M_override.value_or(N * D / 2 - K);
    if (kind == DriverKind::Cyclic) {
      model = build_cyclic(N, D, M, 1.0);
    } else if (kind == DriverKind::Ladder) {
      model = build_ladder(N, D, 1.0, 1.0);
    } else {
      throw ValidationError("driver", "custom drivers need --edges");
    }
  }
  if (M < 0 || M > model.n_sites) throw ValidationError("K", "particle number out of range");
  const ConditionReport report = verify_conditions(model, M);
  nlohmann::ordered_json j;
  j["driver"] = to_string(model.kind);
  j["n_sites"] = model.n_sites;
  j["M"] = M;
  j["conditions"] = nlohmann::ordered_json::parse(report.to_json());
  bool pass = report.all_pass();
  if (report.condition_II) {
    const InitStateCheck init = check_init_state(model, M);
    j["init_state"] = {{"energy", init.energy},       {"E0", init.E0},
                       {"variance", init.variance},   {"leakage", init.leakage},
                       {"slater_deviation", init.slater_deviation},
                       {"single_qubit_gates", init.gates.single_qubit},
                       {"two_qubit_gates", init.gates.two_qubit},
                       {"pass", init.passes()}};
    pass = pass && init.passes();
  }
  j["pass"] = pass;
  out << j.dump(2) << "\n";
  if (!pass) throw NumericalError("driver conditions not satisfied");
  return 0;
}

void print_summary(const PortfolioInstance& instance, std::ostream& out) {
  const ConstrainedSpectrum s = brute_force_spectrum(instance, instance.particles());
  out << fmt::format("hash      {}\n", instance_hash(instance));
  out << fmt::format("N D K     {} {} {}\n", instance.N, instance.D, instance.K);
  out << fmt::format("lambda    {}\n", instance.lambda);
  out << fmt::format("M         {} ({} constrained states)\n", s.M, s.num_states);
  out << fmt::format("E_min     {:.12g}\n", s.E_min);
  out << fmt::format("E_max     {:.12g}\n", s.E_max);
  out << fmt::format("W         {:.12g}\n", s.W);
  if (s.W > 0.0) {
    out << fmt::format("uniform   dE/W {:.4f} (sigma {:.4f})\n", (s.uniform_mean - s.E_min) / s.W, s.uniform_std / s.W);
  } else {
    out << "warning   W = 0: every constrained bitstring has the same cost\n";
    spdlog::warn("W = 0: every constrained bitstring has the same cost");
  }
  for (const Bits b : s.ground_bitstrings) out << "ground    " << to_bitstring(b, instance.num_sites()) << "\n";
}

void emit_instance(const PortfolioInstance& instance, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << instance_to_json(instance) << "\n";
  } else {
    save_instance(instance, path);
    out << fmt::format("wrote {} (hash {})\n", path, instance_hash(instance));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Fermionic QAOA simulator for constrained portfolio optimization", "fqaoa"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0: runtime default)");
  app.fallthrough();

  RunConfig rc;
  std::string run_driver = "cyc";
  std::string instance_path, returns_path;
  std::uint64_t gen_seed = 42;
  std::optional<double> delta_t;
  auto* run = app.add_subcommand("run", "Simulate an FQAOA run and write reports");
  auto* opt_instance = run->add_option("--instance", instance_path, "Instance JSON file");
  auto* opt_gen = run->add_option("--gen-seed", gen_seed, "Generate the instance from this seed");
  auto* opt_returns = run->add_option("--returns", returns_path, "Build the instance from a returns CSV");
  opt_instance->excludes(opt_gen)->excludes(opt_returns);
  opt_gen->excludes(opt_returns);
  run->add_option("--N", rc.N, "Assets (generator)");
  run->add_option("--D", rc.D, "Bits per asset (generator, returns)");
  run->add_option("--K", rc.K, "Budget offset (generator, returns)");
  run->add_option("--lambda", rc.lambda, "Risk weight (generator, returns)");
  run->add_option("--driver", run_driver, "cyc, lad or both")->check(CLI::IsMember({"cyc", "lad", "both"}));
  run->add_option("--p", rc.p, "Ansatz depth");
  auto* opt_wdt = run->add_option("--wdt", rc.wdt, "Schedule unit as the product W*delta_t");
  run->add_option("--delta-t", delta_t, "Absolute schedule unit")->excludes(opt_wdt);
  run->add_option("--mode", rc.mode, "fixed or optimize")->check(CLI::IsMember({"fixed", "optimize"}));
  run->add_option("--shots", rc.shots, "Measurement shots (0: exact distributions)");
  run->add_option("--noise-p1", rc.noise_p1, "Single-qubit Pauli error probability");
  run->add_option("--noise-p2", rc.noise_p2, "Two-qubit Pauli error probability");
  run->add_option("--trajectories", rc.trajectories, "Noise trajectories");
  run->add_option("--seed", rc.seed, "Master seed");
  run->add_option("--out", rc.out_dir, "Output directory");
  run->add_flag("--trace", rc.trace, "Record the optimizer trajectory");

  int gN = 8, gD = 2, gK = 4, gp = 1;
  std::string g_driver = "cyc";
  bool g_json = false;
  auto* gatecount = app.add_subcommand("gatecount", "Gate counts of the ansatz");
  gatecount->add_option("--N", gN, "Assets");
  gatecount->add_option("--D", gD, "Bits per asset");
  gatecount->add_option("--K", gK, "Budget offset");
  gatecount->add_option("--p", gp, "Ansatz depth");
  gatecount->add_option("--driver", g_driver, "cyc or lad")->check(CLI::IsMember({"cyc", "lad"}));
  gatecount->add_flag("--json", g_json, "Print the JSON report");

  int vN = 8, vD = 2, vK = 4;
  std::optional<int> vM;
  std::string v_driver = "cyc", v_edges;
  auto* verify = app.add_subcommand("verify", "Check driver conditions and the prepared initial state");
  verify->add_option("--driver", v_driver, "cyc or lad")->check(CLI::IsMember({"cyc", "lad"}));
  verify->add_option("--N", vN, "Assets");
  verify->add_option("--D", vD, "Bits per asset");
  verify->add_option("--K", vK, "Budget offset");
  verify->add_option("--M", vM, "Particle number (overrides N*D/2-K)");
  verify->add_option("--edges", v_edges, "Custom hopping graph JSON");

  auto* inst = app.add_subcommand("instance", "Create or inspect instance files");
  inst->require_subcommand(1);
  GeneratorSpec spec;
  std::string gen_out;
  auto* gen = inst->add_subcommand("gen", "Generate a seeded instance");
  gen->add_option("--seed", spec.seed, "Generator seed");
  gen->add_option("--N", spec.N, "Assets");
  gen->add_option("--D", spec.D, "Bits per asset");
  gen->add_option("--K", spec.K, "Budget offset");
  gen->add_option("--lambda", spec.lambda, "Risk weight");
  gen->add_option("--volatility", spec.volatility_scale, "Volatility scale");
  gen->add_option("--correlation", spec.correlation, "Market correlation in [0, 1]");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");
  std::string csv_path, fr_out;
  double fr_lambda = 0.9;
  int frD = 2, frK = 4;
  auto* from = inst->add_subcommand("from-returns", "Estimate an instance from a returns CSV");
  from->add_option("--csv", csv_path, "Returns CSV with a header row")->required();
  from->add_option("--lambda", fr_lambda, "Risk weight");
  from->add_option("--D", frD, "Bits per asset");
  from->add_option("--K", frK, "Budget offset");
  from->add_option("--out", fr_out, "Output file (stdout when omitted)");
  from->add_flag("--show", "Print the spectrum summary as well");
  std::string show_path;
  auto* show = inst->add_subcommand("show", "Summarize an instance");
  show->add_option("--instance", show_path, "Instance JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << std::flush;
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All) << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()) << "\n";
    return 1;
  }

  try {
    if (threads < 0) throw ValidationError("threads", "must be >= 0");
    if (threads > 0) omp_set_num_threads(threads);
    if (run->parsed()) {
      if (!instance_path.empty()) rc.instance_path = instance_path;
      if (!opt_gen->empty()) rc.gen_seed = gen_seed;
      if (!returns_path.empty()) rc.returns_csv = returns_path;
      rc.delta_t = delta_t;
      rc.drivers = parse_drivers(run_driver);
      return cmd_run(rc, out);
    }
    if (gatecount->parsed()) return cmd_gatecount(gN, gD, gK, gp, g_driver, g_json, out);
    if (verify->parsed()) return cmd_verify(v_driver, vN, vD, vK, vM, v_edges, out);
    if (gen->parsed()) {
      emit_instance(generate_instance(spec), gen_out, out);
      return 0;
    }
    if (from->parsed()) {
      const PortfolioInstance instance = instance_from_returns(csv_path, fr_lambda, frD, frK);
      emit_instance(instance, fr_out, out);
      if (from->count("--show") > 0) print_summary(instance, out);
      return 0;
    }
    if (show->parsed()) {
      print_summary(load_instance(show_path), out);
      return 0;
    }
  } catch (const ValidationError& e) {
    err << error_json("validation", e.what(), e.field()) << "\n";
    return 1;
  } catch (const InputError& e) {
    err << error_json("input", e.what()) << "\n";
    return 1;
  } catch (const CapacityError& e) {
    err << error_json("capacity", e.what()) << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << error_json("numerical", e.what()) << "\n";
    return 3;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace fqaoa
