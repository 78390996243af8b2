// Copyright 2026 The awe-takeoff Authors
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

// awe: command-line front end for the take-off simulator.
//
//   awe simulate --scenario F --out DIR [--seed N] [--duration S]
//   awe identify --data F [--channel roll|pitch] [--bounds a_lo,a_hi,b_lo,b_hi]
//   awe gains --a X --b Y --l1 L --l2 M
//   awe batch --scenarios DIR --seeds K [--out DIR]
//   awe synth-iddata --out F [--noise S] [--seed N]
//   awe show-scenario [--scenario F]
//
// Exit codes: 0 ok, 1 other failure, 2 invalid scenario or arguments,
// 3 run terminated by a safety event, 4 identification did not converge.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "awe/autopilot.hpp"
#include "awe/scenario.hpp"
#include "awe/sim_engine.hpp"
#include "awe/sysid.hpp"
#include "awe/telemetry.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSafety = 3;
constexpr int kExitNoConvergence = 4;

std::string default_out_dir() {
  const char *env = std::getenv("AWE_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "awe_out";
}

std::vector<double> split_numbers(const std::string &text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw awe::ParseError("bad number '" + item + "'");
    values.push_back(v);
  }
  return values;
}

void write_file(const fs::path &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw awe::Error("cannot write " + path.string());
  out << bytes;
}

int run_outcome(awe::RunStatus status) {
  return status == awe::RunStatus::kSensorFault ? kExitSafety : kExitOk;
}

struct SimulateArgs {
  std::string scenario;
  std::string out = default_out_dir();
  long long seed = -1;
  double duration = -1.0;
  bool quiet = false;
};

awe::Scenario load_with_overrides(const std::string &path, long long seed, double duration) {
  awe::Scenario s = path.empty() ? awe::paper_nominal_scenario() : awe::load_scenario(path);
  if (seed >= 0) s.sim.seed = static_cast<std::uint64_t>(seed);
  if (duration > 0.0) s.sim.duration = duration;
  s.validate();
  return s;
}

awe::RunResult write_run(const awe::Scenario &scenario, const fs::path &dir) {
  awe::RunResult result = awe::run_scenario(scenario);
  fs::create_directories(dir);
  write_file(dir / "telemetry.csv", awe::telemetry_csv(result.telemetry));
  std::ostringstream text, kv;
  awe::write_metrics_text(text, result.metrics, scenario.name);
  awe::write_metrics_kv(kv, result.metrics, scenario.name);
  write_file(dir / "metrics.txt", text.str());
  write_file(dir / "metrics.kv", kv.str());
  return result;
}

int cmd_simulate(const SimulateArgs &args) {
  const awe::Scenario scenario = load_with_overrides(args.scenario, args.seed, args.duration);
  const awe::RunResult result = write_run(scenario, args.out);
  if (!args.quiet) awe::write_metrics_text(std::cout, result.metrics, scenario.name);
  return run_outcome(result.metrics.status);
}

struct IdentifyArgs {
  std::string data;
  std::string channel = "roll";
  std::string bounds;
  std::string init;
  std::string out;
  bool kv = false;
};

int cmd_identify(const IdentifyArgs &args) {
  std::ifstream in(args.data);
  if (!in) throw awe::Error("cannot open " + args.data);
  const awe::IdDataset data = awe::id_channel(awe::read_id_csv(in), args.channel);

  awe::IdBounds bounds;
  if (!args.bounds.empty()) {
    const auto v = split_numbers(args.bounds);
    if (v.size() != 4) throw awe::ParseError("--bounds expects a_lo,a_hi,b_lo,b_hi");
    bounds = {v[0], v[1], v[2], v[3]};
  }
  bounds.validate();
  std::pair<double, double> init{0.5 * (bounds.a_lo + bounds.a_hi), 0.5 * (bounds.b_lo + bounds.b_hi)};
  if (!args.init.empty()) {
    const auto v = split_numbers(args.init);
    if (v.size() != 2) throw awe::ParseError("--init expects a,b");
    init = {v[0], v[1]};
  }

  const awe::IdResult result = awe::identify(data, bounds, init);
  if (args.kv) {
    awe::write_id_result_kv(std::cout, result, args.channel);
  } else {
    awe::write_id_result_text(std::cout, result, args.channel);
  }
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    std::ostringstream text, kv;
    awe::write_id_result_text(text, result, args.channel);
    awe::write_id_result_kv(kv, result, args.channel);
    write_file(fs::path(args.out) / "id_result.txt", text.str());
    write_file(fs::path(args.out) / "id_result.kv", kv.str());
  }
  return result.converged && !result.flat_cost ? kExitOk : kExitNoConvergence;
}

struct GainsArgs {
  double a = -2.3;
  double b = 12.6;
  double l1 = -2.7;
  double l2 = -3.1;
  double l1_imag = 0.0;
};

int cmd_gains(const GainsArgs &args) {
  const std::complex<double> l1(args.l1, args.l1_imag);
  const std::complex<double> l2(args.l2, -args.l1_imag);
  const awe::LoopGains g = awe::gains_from_eigenvalues(args.a, args.b, l1, l2);
  const auto eig = awe::eigenvalues_2x2(awe::closed_loop_matrix(args.a, args.b, g));
  std::printf("K_e     %.5f\n", g.k_error);
  std::printf("K_e_dot %.5f\n", g.k_error_rate);
  for (const auto &e : eig) {
    if (e.imag() == 0.0) {
      std::printf("eigenvalue %.12g\n", e.real());
    } else {
      std::printf("eigenvalue %.12g %+.12gi\n", e.real(), e.imag());
    }
  }
  return kExitOk;
}

struct BatchArgs {
  std::string scenarios;
  int seeds = 14;
  std::string out = default_out_dir();
  int jobs = 0;
};

struct BatchRun {
  std::string name;
  std::uint64_t seed = 0;
  awe::Scenario scenario;
  awe::RunMetrics metrics;
  std::string error;
};

int cmd_batch(const BatchArgs &args) {
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(args.scenarios)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scn") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw awe::Error("no .scn files in " + args.scenarios);
  if (args.seeds < 1) throw awe::ValidationError("seeds", "must be at least 1");

  std::vector<BatchRun> runs;
  for (const auto &f : files) {
    const awe::Scenario base = awe::load_scenario(f.string());
    for (int k = 1; k <= args.seeds; ++k) {
      BatchRun r;
      r.name = f.stem().string();
      r.seed = static_cast<std::uint64_t>(k);
      r.scenario = base;
      r.scenario.sim.seed = r.seed;
      runs.push_back(std::move(r));
    }
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned jobs = args.jobs > 0 ? static_cast<unsigned>(args.jobs) : hw;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < runs.size(); i = next++) {
      BatchRun &r = runs[i];
      try {
        const fs::path dir = fs::path(args.out) / r.name / ("seed_" + std::to_string(r.seed));
        r.metrics = write_run(r.scenario, dir).metrics;
      } catch (const std::exception &e) {
        r.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<size_t>(jobs, runs.size()); ++j) pool.emplace_back(worker);
  for (auto &t : pool) t.join();

  std::printf("%-20s %5s %-12s %9s %9s %9s %9s %9s %18s\n", "scenario", "seed", "status", "periodic", "period_s",
              "alt_max_m", "dip_m", "peak_N", "hash");
  int converged = 0, faults = 0, errors = 0;
  double worst_alt = 0.0, worst_dip = 0.0, worst_force = 0.0, period_sum = 0.0;
  for (const auto &r : runs) {
    if (!r.error.empty()) {
      ++errors;
      std::printf("%-20s %5llu error: %s\n", r.name.c_str(), static_cast<unsigned long long>(r.seed),
                  r.error.c_str());
      continue;
    }
    const awe::RunMetrics &m = r.metrics;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(m.telemetry_hash));
    std::printf("%-20s %5llu %-12s %9s %9.3f %9.3f %9.3f %9.3f %18s\n", r.name.c_str(),
                static_cast<unsigned long long>(r.seed), awe::to_string(m.status).c_str(),
                m.converged_to_periodic ? "yes" : "no", m.eight_period, m.altitude_max_error, m.altitude_max_dip,
                m.taut_peak_force, hash);
    if (m.converged_to_periodic) {
      ++converged;
      period_sum += m.eight_period;
    }
    if (m.status == awe::RunStatus::kSensorFault) ++faults;
    worst_alt = std::max(worst_alt, m.altitude_max_error);
    worst_dip = std::max(worst_dip, m.altitude_max_dip);
    worst_force = std::max(worst_force, m.taut_peak_force);
  }
  std::printf("aggregate: %zu runs, %d periodic, %d safety faults, %d errors\n", runs.size(), converged, faults,
              errors);
  std::printf("aggregate: mean period %.3f s, worst altitude error %.3f m, worst dip %.3f m, peak tether %.3f N\n",
              converged > 0 ? period_sum / converged : 0.0, worst_alt, worst_dip, worst_force);
  if (errors > 0) return kExitFailure;
  return faults > 0 ? kExitSafety : kExitOk;
}

struct SynthArgs {
  std::string out = "roll_id_synthetic.csv";
  double noise = 0.0;
  std::uint64_t seed = 0;
  int samples = 500;
};

int cmd_synth(const SynthArgs &args) {
  const awe::AttitudeModelParams model;
  awe::SyntheticIdSpec roll;
  roll.a = model.a_roll;
  roll.b = model.b_roll;
  roll.samples = args.samples;
  roll.noise_std = args.noise;
  roll.seed = args.seed;
  awe::SyntheticIdSpec pitch = roll;
  pitch.a = model.a_pitch;
  pitch.b = model.b_pitch;
  pitch.amplitude = 0.15;
  pitch.seed = args.seed + 1;

  awe::IdChannels channels;
  channels.sample_time = roll.sample_time;
  channels.k_id = roll.k_id;
  channels.names = {"roll", "pitch"};
  channels.data = {awe::make_synthetic_dataset(roll), awe::make_synthetic_dataset(pitch)};
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw awe::Error("cannot write " + args.out);
  awe::write_id_csv(out, channels);
  return kExitOk;
}

int cmd_show_scenario(const std::string &path) {
  const awe::Scenario s = path.empty() ? awe::paper_nominal_scenario() : awe::load_scenario(path);
  std::cout << awe::serialize_scenario(s);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Tethered take-off and figure-of-eight simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *simulate = app.add_subcommand("simulate", "Run one scenario, write telemetry and metrics");
  simulate->add_option("--scenario", sim.scenario, "Scenario file (default: built-in paper-nominal)");
  simulate->add_option("--out", sim.out, "Output directory (env AWE_OUT_DIR)");
  simulate->add_option("--seed", sim.seed, "Override sim.seed")->check(CLI::NonNegativeNumber);
  simulate->add_option("--duration", sim.duration, "Override sim.duration [s]")->check(CLI::PositiveNumber);
  simulate->add_flag("--quiet", sim.quiet, "Do not print the report");

  IdentifyArgs id;
  auto *identify = app.add_subcommand("identify", "Estimate (a, b) from closed-loop attitude data");
  identify->add_option("--data", id.data, "Identification CSV")->required();
  identify->add_option("--channel", id.channel, "Channel to fit")->check(CLI::IsMember({"roll", "pitch"}));
  identify->add_option("--bounds", id.bounds, "a_lo,a_hi,b_lo,b_hi");
  identify->add_option("--init", id.init, "Initial guess a,b");
  identify->add_option("--out", id.out, "Also write id_result.txt/.kv here");
  identify->add_flag("--kv", id.kv, "Print key=value instead of text");

  GainsArgs gains;
  auto *gains_cmd = app.add_subcommand("gains", "Attitude-loop gains from desired closed-loop eigenvalues");
  gains_cmd->add_option("--a", gains.a, "Rate damping a [1/s]")->required();
  gains_cmd->add_option("--b", gains.b, "Input gain b [1/s^2]")->required();
  gains_cmd->add_option("--l1", gains.l1, "First eigenvalue (real part)")->required();
  gains_cmd->add_option("--l2", gains.l2, "Second eigenvalue (real part)")->required();
  gains_cmd->add_option("--imag", gains.l1_imag, "Imaginary part of a conjugate pair");

  BatchArgs batch;
  auto *batch_cmd = app.add_subcommand("batch", "Run every scenario in a directory over several seeds");
  batch_cmd->add_option("--scenarios", batch.scenarios, "Directory of .scn files")->required();
  batch_cmd->add_option("--seeds", batch.seeds, "Seeds 1..K per scenario")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--out", batch.out, "Output root (env AWE_OUT_DIR)");
  batch_cmd->add_option("--jobs", batch.jobs, "Worker threads (default: all cores)");

  SynthArgs synth;
  auto *synth_cmd = app.add_subcommand("synth-iddata", "Write a synthetic closed-loop identification dataset");
  synth_cmd->add_option("--out", synth.out, "Output CSV");
  synth_cmd->add_option("--noise", synth.noise, "Output noise std [rad]")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.seed, "Noise seed");
  synth_cmd->add_option("--samples", synth.samples, "Samples per channel")->check(CLI::Range(2, 1000000));

  std::string show_path;
  auto *show_cmd = app.add_subcommand("show-scenario", "Print a scenario with every default filled in");
  show_cmd->add_option("--scenario", show_path, "Scenario file (default: built-in paper-nominal)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*identify) return cmd_identify(id);
    if (*gains_cmd) return cmd_gains(gains);
    if (*batch_cmd) return cmd_batch(batch);
    if (*synth_cmd) return cmd_synth(synth);
    if (*show_cmd) return cmd_show_scenario(show_path);
  } catch (const awe::ValidationError &e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const awe::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const awe::ScenarioInvalid &e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const awe::ZeroGain &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const awe::UnstableRequest &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
