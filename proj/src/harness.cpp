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

#include "rsmaris/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rsmaris/random.hpp"

namespace rsmaris {

namespace {

// Sub-stream keys below a trial seed.
enum StreamKey : std::uint64_t {
  kFadingStream = 1,
  kBsErrorStream = 2,
  kAttackerErrorStream = 3,
  kRandomPhaseStream = 4,
};

constexpr int kMaxRedrawsPerTrial = 16;

}  // namespace

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Rsma ? "rsma" : "sdma"; }

std::string_view to_string(AttackKind attack) {
  switch (attack) {
    case AttackKind::None:
      return "none";
    case AttackKind::Random:
      return "random";
    case AttackKind::Aligned:
      return "aligned";
    case AttackKind::Mitigation:
      return "mitigation";
  }
  return "none";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "rsma") return Scheme::Rsma;
  if (text == "sdma") return Scheme::Sdma;
  throw ConfigError("unknown scheme '" + std::string(text) + "' (expected rsma or sdma)");
}

AttackKind parse_attack(std::string_view text) {
  for (AttackKind kind : {AttackKind::None, AttackKind::Random, AttackKind::Aligned,
                          AttackKind::Mitigation})
    if (text == to_string(kind)) return kind;
  throw ConfigError("unknown attack '" + std::string(text) +
                    "' (expected none, random, aligned or mitigation)");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.geometry.bs_position = {0.0, 0.0};
  c.geometry.ris_position = {40.0, 5.0};
  c.geometry.user_positions = {{30.0, 15.0}, {50.0, 15.0}, {55.0, 10.0}};
  c.geometry.path_loss_exponent = 2.5;
  c.antennas = 10;
  c.elements = 200;
  for (int p = 0; p <= 40; p += 5) c.power_sweep_dbm.push_back(p);
  c.noise_dbm = -50.0;
  c.schemes = {Scheme::Rsma, Scheme::Sdma};
  c.attacks = {AttackKind::None, AttackKind::Random, AttackKind::Aligned, AttackKind::Mitigation};
  c.weights = RVector<double>::Constant(3, 1.0 / 3.0);
  c.iterations = 3000;
  c.step_scale = 0.99;
  c.trials = 500;
  c.seed = 1;
  return c;
}

AttackSpec<double> ExperimentConfig::attack_spec(AttackKind kind) const {
  return {kind, weights, iterations, step_scale, mitigation_start};
}

void ExperimentConfig::validate() const {
  try {
    geometry.validate();
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("[scenario] ") + e.what());
  }
  if (antennas < 1) throw ConfigError("[scenario] antennas: must be at least 1");
  if (elements < 1) throw ConfigError("[scenario] ris_elements: must be at least 1");
  if (antennas < users())
    throw ConfigError("[scenario] antennas: zero-forcing needs at least as many antennas as users");
  if (power_sweep_dbm.empty()) throw ConfigError("[transmitter] power_sweep_dbm: must not be empty");
  for (double p : power_sweep_dbm)
    if (!std::isfinite(p)) throw ConfigError("[transmitter] power_sweep_dbm: non-finite value");
  if (!std::isfinite(noise_dbm)) throw ConfigError("[transmitter] noise_dbm: non-finite value");
  if (schemes.empty()) throw ConfigError("[transmitter] schemes: must not be empty");
  if (attacks.empty()) throw ConfigError("[attacker] attacks: must not be empty");
  try {
    bs_csi.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[bs_csi] ") + e.what());
  }
  try {
    attacker_csi.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[attacker_csi] ") + e.what());
  }
  try {
    attack_spec(AttackKind::None).validate(users());
  } catch (const Error& e) {
    throw ConfigError(std::string("[attacker] ") + e.what());
  }
  if (trials < 1) throw ConfigError("[harness] trials: must be at least 1");
}

TrialContext prepare_trial(const ExperimentConfig& config, std::uint64_t trial_index) {
  for (int redraw = 0; redraw <= kMaxRedrawsPerTrial; ++redraw) {
    TrialContext ctx;
    ctx.redraws = redraw;
    ctx.trial_seed =
        derive_seed(config.seed, {trial_index, static_cast<std::uint64_t>(redraw)});
    Rng fading(derive_seed(ctx.trial_seed, {kFadingStream}));
    Rng bs_error(derive_seed(ctx.trial_seed, {kBsErrorStream}));
    ctx.truth = draw_channels(config.geometry, config.antennas, config.elements, fading);
    ctx.bs_estimate = corrupt_csi(ctx.truth, config.bs_csi, bs_error);
    try {
      // The RIS absorbs while the BS estimates, so only the direct links enter.
      ctx.precoders = build_precoders<double>(ctx.bs_estimate.h_hat);
    } catch (const SingularityError&) {
      continue;
    }
    return ctx;
  }
  throw SingularityError("trial " + std::to_string(trial_index) +
                         ": no usable channel draw after repeated redraws");
}

ReflectionState<double> attack_state(const ExperimentConfig& config, const TrialContext& trial,
                                     AttackKind attack, AttackTrace<double>* trace) {
  const auto attack_id = static_cast<std::uint64_t>(attack);
  switch (attack) {
    case AttackKind::None:
      return ReflectionState<double>::absorb();
    case AttackKind::Random: {
      Rng rng(derive_seed(trial.trial_seed, {kRandomPhaseStream}));
      return random_attack<double>(config.elements, rng);
    }
    case AttackKind::Aligned:
    case AttackKind::Mitigation: {
      Rng rng(derive_seed(trial.trial_seed, {kAttackerErrorStream, attack_id}));
      const ChannelEstimate<double> seen = corrupt_csi(trial.truth, config.attacker_csi, rng);
      const CascadeMatrix<double> cascades = cascade(seen);
      const AttackSpec<double> spec = config.attack_spec(attack);
      if (attack == AttackKind::Aligned) return aligned_attack(cascades, spec, trace);
      return mitigation_attack(cascades, seen.h_hat, spec, trace);
    }
  }
  return ReflectionState<double>::absorb();
}

RateReport<double> evaluate_trial(const ExperimentConfig& config, const TrialContext& trial,
                                  const ReflectionState<double>& state, double power_dbm,
                                  Scheme scheme) {
  // Users report interference measured on their direct links while the RIS
  // still absorbs, so the allocation never sees the reflected path.
  const PowerAllocation<double> power =
      allocate_power(trial.truth.h, trial.precoders.privates, dbm_to_mw(power_dbm),
                     dbm_to_mw(config.noise_dbm), scheme, config.interference_reference);
  return rate_report(trial.truth, state, trial.precoders, power);
}

RateReport<double> run_trial(const ExperimentConfig& config, double power_dbm, Scheme scheme,
                             AttackKind attack, std::uint64_t trial_index) {
  config.validate();
  const TrialContext trial = prepare_trial(config, trial_index);
  return evaluate_trial(config, trial, attack_state(config, trial, attack), power_dbm, scheme);
}

namespace {

struct Cell {
  double power_dbm;
  Scheme scheme;
  AttackKind attack;
};

struct Sample {
  double sum_rate = 0.0;
  double common_rate = 0.0;
  double private_rate_sum = 0.0;
  double alpha_common = 0.0;
};

struct TrialOutcome {
  std::vector<Sample> cells;
  int redraws = 0;
  int fallback_inits = 0;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
  std::vector<double> powers = config.power_sweep_dbm;
  std::vector<Scheme> schemes = config.schemes;
  std::vector<AttackKind> attacks = config.attacks;
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
  std::sort(attacks.begin(), attacks.end());
  attacks.erase(std::unique(attacks.begin(), attacks.end()), attacks.end());

  std::vector<Cell> cells;
  for (double p : powers)
    for (Scheme s : schemes)
      for (AttackKind a : attacks) cells.push_back({p, s, a});
  return cells;
}

TrialOutcome run_one(const ExperimentConfig& config, const std::vector<Cell>& cells,
                     std::uint64_t trial_index) {
  TrialOutcome out;
  const TrialContext trial = prepare_trial(config, trial_index);
  out.redraws = trial.redraws;
  out.cells.resize(cells.size());

  // The reflection state depends only on the attacker's estimate, so it is
  // computed once per attack and shared by every power and scheme.
  std::vector<AttackKind> attacks;
  for (const Cell& c : cells)
    if (std::find(attacks.begin(), attacks.end(), c.attack) == attacks.end())
      attacks.push_back(c.attack);
  for (AttackKind attack : attacks) {
    AttackTrace<double> trace;
    const ReflectionState<double> state = attack_state(config, trial, attack, &trace);
    if (trace.fallback_init) ++out.fallback_inits;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].attack != attack) continue;
      const RateReport<double> report =
          evaluate_trial(config, trial, state, cells[i].power_dbm, cells[i].scheme);
      out.cells[i] = {report.sum_rate, report.allocated_common_rate, report.private_rate_sum(),
                      report.alpha_common};
    }
  }
  return out;
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         const RunOptions& options, RunStats* stats) {
  config.validate();
  const std::vector<Cell> cells = enumerate_cells(config);
  const auto trials = static_cast<std::size_t>(config.trials);

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(trials));

  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        outcomes[t] = run_one(config, cells, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the failure of the lowest trial index so errors are reproducible.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  int redraws = 0, fallbacks = 0;
  for (const auto& o : outcomes) {
    redraws += o.redraws;
    fallbacks += o.fallback_inits;
  }
  if (redraws > config.trials / 100)
    throw SingularityError("run_experiment: " + std::to_string(redraws) +
                           " singular channel draws exceed 1% of " +
                           std::to_string(config.trials) + " trials");

  std::vector<ResultRecord> records;
  records.reserve(cells.size());
  const double n = static_cast<double>(trials);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ResultRecord r;
    r.power_dbm = cells[i].power_dbm;
    r.scheme = cells[i].scheme;
    r.attack = cells[i].attack;
    r.tau_bs = config.bs_csi.tau_bs_user;
    r.tau_attacker = config.attacker_csi.tau_bs_ris;
    r.trials = config.trials;
    for (const auto& o : outcomes) {
      r.mean_sum_rate += o.cells[i].sum_rate;
      r.mean_common_rate += o.cells[i].common_rate;
      r.mean_private_rate_sum += o.cells[i].private_rate_sum;
      r.mean_alpha_common += o.cells[i].alpha_common;
    }
    r.mean_sum_rate /= n;
    r.mean_common_rate /= n;
    r.mean_private_rate_sum /= n;
    r.mean_alpha_common /= n;
    if (trials > 1) {
      double ss = 0.0;
      for (const auto& o : outcomes) {
        const double d = o.cells[i].sum_rate - r.mean_sum_rate;
        ss += d * d;
      }
      r.std_sum_rate = std::sqrt(ss / (n - 1.0));
    }
    records.push_back(r);
  }

  if (stats) {
    stats->redraws = redraws;
    stats->fallback_inits = fallbacks;
    stats->samples.clear();
    if (options.keep_samples) {
      stats->samples.reserve(trials * cells.size());
      for (std::size_t t = 0; t < trials; ++t)
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const Sample& s = outcomes[t].cells[i];
          stats->samples.push_back({t, cells[i].power_dbm, cells[i].scheme, cells[i].attack,
                                    s.sum_rate, s.common_rate, s.private_rate_sum,
                                    s.alpha_common});
        }
    }
  }
  return records;
}

}  // namespace rsmaris
