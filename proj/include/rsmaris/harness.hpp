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

#ifndef RSMARIS_HARNESS_HPP
#define RSMARIS_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rsmaris/attacker.hpp"
#include "rsmaris/channel.hpp"
#include "rsmaris/metrics.hpp"
#include "rsmaris/transmitter.hpp"

namespace rsmaris {

double dbm_to_mw(double dbm);

std::string_view to_string(Scheme scheme);
std::string_view to_string(AttackKind attack);
Scheme parse_scheme(std::string_view text);
AttackKind parse_attack(std::string_view text);

/// Everything that defines an experiment. Powers are in dBm here and are
/// converted to mW once, when a trial is evaluated.
struct ExperimentConfig {
  ScenarioGeometry<double> geometry;
  Eigen::Index antennas = 10;
  Eigen::Index elements = 200;
  std::vector<double> power_sweep_dbm;
  double noise_dbm = -50.0;
  CsiErrorSpec<double> bs_csi;
  CsiErrorSpec<double> attacker_csi;
  InterferenceReference interference_reference = InterferenceReference::LeastInterfered;
  std::vector<Scheme> schemes;
  std::vector<AttackKind> attacks;
  RVector<double> weights;
  int iterations = 3000;
  double step_scale = 0.99;
  MitigationStart mitigation_start = MitigationStart::AsPrinted;
  int trials = 500;
  std::uint64_t seed = 1;

  /// The reference scenario: K = 3 users at (30,15), (50,15), (55,10), BS at
  /// the origin, RIS with L = 200 at (40,5), M = 10, eta = 2.5, noise -50 dBm,
  /// delta = 0.99, I = 3000, equal weights, 0..40 dBm in 5 dB steps.
  static ExperimentConfig defaults();

  Eigen::Index users() const { return geometry.users(); }
  AttackSpec<double> attack_spec(AttackKind kind) const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Shared state of one trial index: true channels, the BS's estimate and the
/// precoders built from it. Identical for every power, scheme and attack.
struct TrialContext {
  std::uint64_t trial_seed = 0;
  int redraws = 0;
  ChannelRealization<double> truth;
  ChannelEstimate<double> bs_estimate;
  PrecoderSet<double> precoders;
};

TrialContext prepare_trial(const ExperimentConfig& config, std::uint64_t trial_index);

/// RIS state the attacker deploys during data transmission, computed from
/// the attacker's own channel estimate.
ReflectionState<double> attack_state(const ExperimentConfig& config, const TrialContext& trial,
                                     AttackKind attack, AttackTrace<double>* trace = nullptr);

/// Power allocation (made while the RIS absorbs) and rates on the true
/// channels with the RIS in `state`.
RateReport<double> evaluate_trial(const ExperimentConfig& config, const TrialContext& trial,
                                  const ReflectionState<double>& state, double power_dbm,
                                  Scheme scheme);

RateReport<double> run_trial(const ExperimentConfig& config, double power_dbm, Scheme scheme,
                             AttackKind attack, std::uint64_t trial_index);

struct ResultRecord {
  double power_dbm = 0.0;
  Scheme scheme = Scheme::Rsma;
  AttackKind attack = AttackKind::None;
  double tau_bs = 0.0;
  double tau_attacker = 0.0;
  double mean_sum_rate = 0.0;
  double std_sum_rate = 0.0;
  double mean_common_rate = 0.0;
  double mean_private_rate_sum = 0.0;
  double mean_alpha_common = 0.0;
  int trials = 0;
};

struct TrialSample {
  std::uint64_t trial = 0;
  double power_dbm = 0.0;
  Scheme scheme = Scheme::Rsma;
  AttackKind attack = AttackKind::None;
  double sum_rate = 0.0;
  double common_rate = 0.0;
  double private_rate_sum = 0.0;
  double alpha_common = 0.0;
};

struct RunOptions {
  unsigned threads = 0;  // 0: available parallelism
  bool keep_samples = false;
};

struct RunStats {
  int redraws = 0;
  int fallback_inits = 0;
  std::vector<TrialSample> samples;  // filled when RunOptions::keep_samples
};

/// Averages `trials` independent trials for every (power, scheme, attack)
/// cell. Records are sorted by power, scheme, attack and do not depend on the
/// thread count.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         const RunOptions& options = {},
                                         RunStats* stats = nullptr);

// CSV output ---------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "power_dbm,scheme,attack,tau_bs,tau_attacker,mean_sum_rate,std_sum_rate,"
    "mean_common_rate,mean_private_rate_sum,mean_alpha_common,trials";

std::string format_number(double value);
void write_csv(std::ostream& out, const std::vector<ResultRecord>& records, bool header = true);
void write_trial_csv(std::ostream& out, const std::vector<TrialSample>& samples);
std::vector<ResultRecord> read_csv(std::istream& in);

// Configuration files ------------------------------------------------------

/// INI-style sections; see README for the schema. Keys absent from the file
/// keep their default value. `origin` prefixes diagnostics.
ExperimentConfig read_config(std::istream& in, const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& config);

// Invariant suite ----------------------------------------------------------

/// Quick self-check of the core invariants; one line per check on `log`.
bool run_validation(std::ostream& log, std::uint64_t seed = 1);

}  // namespace rsmaris

#endif  // RSMARIS_HARNESS_HPP
