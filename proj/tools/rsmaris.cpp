// SPDX-License-Identifier: Apache-2.0
//
// rsmaris: Monte-Carlo simulator for malicious-RIS attacks on RSMA/SDMA downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsmaris/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string output_path;
  std::string dump_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_dump) {
  cmd->add_option("--config", flags.config_path, "Configuration file (defaults built in)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", flags.output_path, "Output CSV path (stdout when omitted)");
  cmd->add_option("--seed", flags.seed, "Master seed, overrides the configuration");
  cmd->add_option("--trials", flags.trials, "Trials per cell, overrides the configuration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", flags.threads, "Worker threads (0: available parallelism)");
  if (with_dump)
    cmd->add_option("--dump-trials", flags.dump_path, "Write per-trial samples to this CSV");
}

rsmaris::ExperimentConfig resolve(const CommonFlags& flags) {
  rsmaris::ExperimentConfig config = flags.config_path.empty()
                                         ? rsmaris::ExperimentConfig::defaults()
                                         : rsmaris::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  config.validate();
  return config;
}

// Writes to the file named by `path`, or to stdout when it is empty.
template <typename Emit>
void emit_to(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rsmaris::Error(path + ": cannot open for writing");
  emit(out);
  if (!out) throw rsmaris::Error(path + ": write failed");
}

void report(const rsmaris::RunStats& stats) {
  if (stats.redraws > 0)
    std::cerr << "note: " << stats.redraws << " singular channel draw(s) were redrawn\n";
  if (stats.fallback_inits > 0)
    std::cerr << "note: " << stats.fallback_inits
              << " mitigation run(s) started from the all-ones phase vector"
              << " (singular cascade Gram matrix)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rsmaris: malicious-RIS attacks against RSMA and SDMA downlinks"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the configured experiment and write CSV results");
  add_common(run, run_flags, true);

  CommonFlags sweep_flags;
  std::vector<double> tau_attacker{0.3, 0.6, 0.9};
  std::vector<double> tau_bs{0.0, 0.3};
  auto* sweep = app.add_subcommand("sweep-tau", "Sweep the attacker's and the BS's CSI error");
  add_common(sweep, sweep_flags, true);
  sweep->add_option("--tau-attacker", tau_attacker, "Attacker error factors (all attacker links)")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--tau-bs", tau_bs, "BS direct-link error factors")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));

  std::uint64_t validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "Run the invariant self-check suite");
  validate->add_option("--seed", validate_seed, "Seed for the randomized checks");

  std::string demo_output;
  auto* demo = app.add_subcommand("demo-config", "Write the reference configuration file");
  demo->add_option("--output", demo_output, "Destination (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const rsmaris::ExperimentConfig config = resolve(run_flags);
      rsmaris::RunStats stats;
      const auto records = rsmaris::run_experiment(
          config, {run_flags.threads, !run_flags.dump_path.empty()}, &stats);
      emit_to(run_flags.output_path, [&](std::ostream& out) { rsmaris::write_csv(out, records); });
      if (!run_flags.dump_path.empty())
        emit_to(run_flags.dump_path,
                [&](std::ostream& out) { rsmaris::write_trial_csv(out, stats.samples); });
      report(stats);
      return 0;
    }
    if (*sweep) {
      const rsmaris::ExperimentConfig base = resolve(sweep_flags);
      std::vector<rsmaris::ResultRecord> all;
      std::vector<rsmaris::TrialSample> samples;
      for (double bs : tau_bs) {
        for (double att : tau_attacker) {
          rsmaris::ExperimentConfig config = base;
          config.bs_csi.tau_bs_user = bs;
          config.attacker_csi.tau_bs_user = att;
          config.attacker_csi.tau_bs_ris = att;
          config.attacker_csi.tau_ris_user = att;
          rsmaris::RunStats stats;
          const auto records = rsmaris::run_experiment(
              config, {sweep_flags.threads, !sweep_flags.dump_path.empty()}, &stats);
          all.insert(all.end(), records.begin(), records.end());
          samples.insert(samples.end(), stats.samples.begin(), stats.samples.end());
          report(stats);
        }
      }
      emit_to(sweep_flags.output_path, [&](std::ostream& out) { rsmaris::write_csv(out, all); });
      if (!sweep_flags.dump_path.empty())
        emit_to(sweep_flags.dump_path,
                [&](std::ostream& out) { rsmaris::write_trial_csv(out, samples); });
      return 0;
    }
    if (*validate) return rsmaris::run_validation(std::cout, validate_seed) ? 0 : 1;
    if (*demo) {
      emit_to(demo_output, [](std::ostream& out) {
        rsmaris::write_config(out, rsmaris::ExperimentConfig::defaults());
      });
      return 0;
    }
  } catch (const rsmaris::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
