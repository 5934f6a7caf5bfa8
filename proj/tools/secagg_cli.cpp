// Copyright 2026 The secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// secagg: command-line front end for the aggregation simulator.
//
//   secagg keygen   --out DIR [--params toy|standard --nodes N --fanout F ...]
//   secagg run      [--scenario FILE] [--nodes ... --attack ... --strict ...]
//   secagg selftest
//   secagg bench    [--params toy|standard --iterations N --nodes N]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secagg/secagg.hpp"

namespace {

using namespace secagg;

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;

std::vector<std::uint64_t> parse_readings(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::Config, "--readings: '" + item + "' is not a nonnegative integer");
    }
  }
  if (out.empty()) throw Error(Errc::Config, "--readings: empty list");
  return out;
}

struct ScenarioFlags {
  std::string scenario_file;
  std::string params = "toy";
  std::size_t nodes = 4;
  std::size_t fanout = 1;
  std::uint64_t max_reading = 1000;
  std::string attack = "none";
  bool strict = false;
  std::uint64_t seed = 1;
  std::uint64_t epoch = 1;
  std::string readings;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--params", f.params, "Parameter set: toy or standard")->check(CLI::IsMember({"toy", "standard"}));
  cmd->add_option("--nodes", f.nodes, "Node count including the base station");
  cmd->add_option("--fanout", f.fanout, "Children per node in the complete tree");
  cmd->add_option("--max-reading", f.max_reading, "Largest admissible sensor reading");
  cmd->add_option("--seed", f.seed, "Seed for keys, readings, nonces, and attacks");
}

/// Scenario from the file (if any) with explicitly passed flags on top.
Scenario build_scenario(const CLI::App* cmd, const ScenarioFlags& f) {
  Scenario s;
  if (!f.scenario_file.empty()) s = scenario_from_json(read_json_file(f.scenario_file));
  // keygen lacks some of run's flags; an absent option counts as not given
  auto given = [cmd](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (f.scenario_file.empty() || given("--params")) s.params = param_set_from_string(f.params);
  if (f.scenario_file.empty() || given("--nodes")) s.nodes = f.nodes;
  if (f.scenario_file.empty() || given("--fanout")) s.fanout = f.fanout;
  if (f.scenario_file.empty() || given("--max-reading")) s.max_reading = f.max_reading;
  if (f.scenario_file.empty() || given("--attack")) s.attack = attack_from_string(f.attack);
  if (f.scenario_file.empty() || given("--strict")) s.strict = f.strict;
  if (f.scenario_file.empty() || given("--seed")) s.seed = f.seed;
  if (f.scenario_file.empty() || given("--epoch")) s.epoch = f.epoch;
  if (given("--readings")) s.readings = parse_readings(f.readings);
  s.validate();
  return s;
}

int cmd_keygen(const CLI::App* cmd, const ScenarioFlags& f, const std::string& out_dir, const std::string& params_dir) {
  Scenario s = build_scenario(cmd, f);
  Setup setup = make_setup(s, load_profile(s.params, params_dir));
  write_setup(setup, out_dir);
  std::cout << "wrote " << setup.topology.size() << "-node deployment (" << setup.profile.name << ", OU n "
            << bit_length(setup.ou.pk.n()) << " bits, curve " << setup.profile.curve.name() << ") to " << out_dir
            << '\n';
  return kExitOk;
}

int cmd_run(const CLI::App* cmd, const ScenarioFlags& f, const std::string& keys_dir, const std::string& report_path,
            bool summary, bool timing, const std::string& params_dir) {
  Scenario s = build_scenario(cmd, f);
  RunReport report;
  if (!keys_dir.empty()) {
    auto started = std::chrono::steady_clock::now();
    Setup setup = load_setup(keys_dir);
    // the key files fix the topology, parameter set, and recorded mode;
    // --strict can still switch a permissive deployment to strict
    if (cmd->count("--strict") > 0) setup.deployment.strict_mode = true;
    s.strict = setup.deployment.strict_mode;
    s.params = param_set_from_string(setup.profile.name);
    s.nodes = setup.topology.size();
    s.fanout = setup.topology.fanout;
    s.max_reading = setup.deployment.max_reading.get_ui();
    s.validate();
    report = run_epoch(s, setup);
    report.wall_clock = std::chrono::steady_clock::now() - started;
  } else {
    report = run_epoch(s, params_dir);
  }
  std::string doc = serialize(report, timing);
  if (report_path.empty() || report_path == "-") {
    std::cout << doc;
  } else {
    std::ofstream out(report_path);
    if (!out) throw Error(Errc::Config, "cannot write " + report_path);
    out << doc;
  }
  if (summary) std::cerr << summary_table(report);
  return report.as_expected() ? kExitOk : kExitUnexpected;
}

int cmd_selftest() {
  bool all = true;
  for (const auto& r : run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(1) << r.millis
              << " ms): " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kExitOk : kExitUnexpected;
}

template <typename F>
double time_per_op(std::size_t iterations, F&& op) {
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < iterations; ++i) op();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() /
         static_cast<double>(iterations);
}

int cmd_bench(const std::string& params, std::size_t iterations, std::size_t nodes, const std::string& params_dir) {
  ParamSet set = param_set_from_string(params);
  ParamProfile profile = load_profile(set, params_dir);
  const CurveParams& c = profile.curve;
  Rng rng(42);
  std::vector<std::pair<std::string, double>> rows;

  auto t0 = std::chrono::steady_clock::now();
  OuKeyPair ou = ou_keygen(profile.ou_bits, rng);
  rows.emplace_back("ou_keygen (" + std::to_string(profile.ou_bits) + "-bit primes)",
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  BigInt r = rand_range(rng, 1, ou.pk.n());
  rows.emplace_back("mod_exp (|n|-bit exponent)", time_per_op(iterations, [&] { (void)mod_exp(ou.pk.h(), r, ou.pk.n()); }));
  OuCiphertext ct = ou_encrypt(ou.pk, 123, rng);
  rows.emplace_back("ou_encrypt", time_per_op(iterations, [&] { ct = ou_encrypt(ou.pk, 123, rng); }));
  rows.emplace_back("ou_decrypt", time_per_op(iterations, [&] { (void)ou_decrypt(ou.sk, ct); }));
  rows.emplace_back("ou_add", time_per_op(iterations, [&] { (void)ou_add(ou.pk, ct, ct); }));
  SigKeyPair kp = keygen(c, rng);
  rows.emplace_back("scalar_mul", time_per_op(iterations, [&] { (void)scalar_mul(c, kp.signing.z, c.base()); }));
  EpochNonce nonce = epoch_setup(c, 1, rng);
  BigInt s = sign(c, kp.signing, 55, nonce);
  rows.emplace_back("sign", time_per_op(iterations, [&] { s = sign(c, kp.signing, 55, nonce); }));
  rows.emplace_back("verify", time_per_op(iterations, [&] { (void)verify(c, 55, {s, 1}, kp.verify, nonce.r_x); }));

  Scenario scenario;
  scenario.params = set;
  scenario.nodes = nodes;
  scenario.fanout = 4;
  Setup setup = make_setup(scenario, profile);
  std::size_t epoch_iters = std::max<std::size_t>(1, iterations / 10);
  rows.emplace_back("epoch (" + std::to_string(nodes) + " nodes, fanout 4, keys reused)", time_per_op(epoch_iters, [&] {
                      (void)run_epoch(scenario, setup);
                      ++scenario.seed;
                    }));

  std::cout << "bench: params " << profile.name << ", curve " << c.name() << ", " << iterations << " iterations\n";
  for (const auto& [name, ms] : rows) {
    std::cout << "  " << std::left << std::setw(48) << name << std::right << std::setw(12) << std::fixed
              << std::setprecision(4) << ms << " ms\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure in-network aggregation: OU encryption + additive ECDSA-style signatures"};
  app.require_subcommand(1);
  std::string params_dir = default_params_dir().string();
  app.add_option("--params-dir", params_dir, "Directory holding the curve parameter files");

  ScenarioFlags keygen_flags;
  std::string out_dir;
  auto* keygen = app.add_subcommand("keygen", "Generate a deployment and its key files");
  add_scenario_flags(keygen, keygen_flags);
  keygen->add_flag("--strict", keygen_flags.strict, "Record strict verification in the deployment");
  keygen->add_option("--out", out_dir, "Output directory")->required();

  ScenarioFlags run_flags;
  std::string keys_dir, report_path;
  bool summary = false, timing = false;
  auto* run = app.add_subcommand("run", "Run one epoch of a scenario and print its report");
  run->add_option("--scenario", run_flags.scenario_file, "Scenario file (JSON)")->check(CLI::ExistingFile);
  add_scenario_flags(run, run_flags);
  run->add_option("--attack", run_flags.attack, "none, tamper-ct, tamper-sig, forge-subtree, replay-epoch");
  run->add_flag("--strict", run_flags.strict, "Verify against the registry sum of contributor keys");
  run->add_option("--readings", run_flags.readings, "Comma-separated readings, one per non-base node");
  run->add_option("--epoch", run_flags.epoch, "Epoch id");
  run->add_option("--keys", keys_dir, "Use keys written by `keygen` instead of seeded ones")->check(CLI::ExistingDirectory);
  run->add_option("--report", report_path, "Write the report here instead of stdout");
  run->add_flag("--summary", summary, "Print a human-readable table to stderr");
  run->add_flag("--timing", timing, "Include wall-clock time in the report (breaks byte-identity)");

  auto* selftest = app.add_subcommand("selftest", "Run the exhaustive toy-curve checks");

  std::string bench_params = "toy";
  std::size_t iterations = 50, bench_nodes = 64;
  auto* bench = app.add_subcommand("bench", "Time primitives and whole epochs");
  bench->add_option("--params", bench_params, "toy or standard")->check(CLI::IsMember({"toy", "standard"}));
  bench->add_option("--iterations", iterations, "Iterations per primitive")->check(CLI::PositiveNumber);
  bench->add_option("--nodes", bench_nodes, "Node count for the epoch benchmark")->check(CLI::Range(2, 65536));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(keygen, keygen_flags, out_dir, params_dir);
    if (*run) return cmd_run(run, run_flags, keys_dir, report_path, summary, timing, params_dir);
    if (*selftest) return cmd_selftest();
    if (*bench) return cmd_bench(bench_params, iterations, bench_nodes, params_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input file: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
