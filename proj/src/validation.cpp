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

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>

#include "rsmaris/harness.hpp"
#include "rsmaris/random.hpp"

namespace rsmaris {

namespace {

using Check = std::function<std::string(Rng&)>;  // empty string: pass

ChannelRealization<double> small_draw(Rng& rng, Eigen::Index M, Eigen::Index L, Eigen::Index K) {
  ScenarioGeometry<double> g;
  g.ris_position = {40.0, 5.0};
  for (Eigen::Index k = 0; k < K; ++k)
    g.user_positions.push_back({30.0 + 10.0 * static_cast<double>(k), 15.0 - 2.0 * static_cast<double>(k)});
  return draw_channels(g, M, L, rng);
}

std::string khatri_rao(Rng& rng) {
  for (int n = 0; n < 200; ++n) {
    const Eigen::Index M = 1 + n % 8, L = 1 + n % 16;
    const CMatrix<double> G = complex_gaussian<double>(L, M, 1.0, rng);
    const CMatrix<double> f = complex_gaussian<double>(L, 1, 1.0, rng);
    const auto cascades = cascade<double>(G, f);
    ReflectionState<double> theta = random_attack<double>(L, rng);
    const CVector<double> lhs = cascades[0] * theta.theta;
    const CVector<double> rhs = (f.col(0).adjoint() * theta.theta.asDiagonal() * G).transpose();
    if ((lhs - rhs).norm() > 1e-10 * (1.0 + rhs.norm())) return "identity violated";
  }
  return {};
}

std::string zero_forcing(Rng& rng) {
  for (int n = 0; n < 200; ++n) {
    const CMatrix<double> H = complex_gaussian<double>(6, 3, 1.0, rng);
    const CMatrix<double> P = zf_private_precoders<double>(H);
    CMatrix<double> cross = H.adjoint() * P;
    if ((cross - CMatrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-10)
      return "H^H P differs from identity";
  }
  return {};
}

std::string power_budget(Rng& rng) {
  for (int n = 0; n < 200; ++n) {
    const auto truth = small_draw(rng, 10, 4, 3);
    const CMatrix<double> noisy =
        truth.h + 0.3 * complex_gaussian<double>(10, 3, truth.gain_bs_user.maxCoeff(), rng);
    const CMatrix<double> P = zf_private_precoders<double>(noisy);
    for (double dbm : {0.0, 20.0, 40.0}) {
      const auto a = allocate_power<double>(truth.h, P, dbm_to_mw(dbm), dbm_to_mw(-50.0), Scheme::Rsma);
      if (std::abs(a.alpha_common + a.alpha_private.sum() - 1.0) > 1e-12) return "budget not one";
      if (a.alpha_common < 0.0 || (a.alpha_private.array() < 0.0).any()) return "negative share";
    }
  }
  return {};
}

std::string attacks_improve(Rng& rng) {
  for (int n = 0; n < 20; ++n) {
    const auto truth = small_draw(rng, 4, 16, 3);
    const auto cascades = cascade<double>(truth.G, truth.f);
    const auto spec = AttackSpec<double>::uniform(AttackKind::Aligned, 3, 300);
    AttackTrace<double> trace;
    const auto aligned = aligned_attack(cascades, spec, &trace);
    if (trace.final_objective < trace.initial_objective) return "aligned objective decreased";
    if ((aligned.theta.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-12) return "modulus drift";
    const auto mitigation = mitigation_attack(cascades, truth.h, spec, &trace);
    if (trace.final_objective > trace.initial_objective) return "mitigation objective increased";
    if ((mitigation.theta.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-12) return "modulus drift";
  }
  return {};
}

ExperimentConfig tiny_config(std::uint64_t seed) {
  ExperimentConfig c = ExperimentConfig::defaults();
  c.elements = 16;
  c.iterations = 100;
  c.trials = 6;
  c.power_sweep_dbm = {10.0, 30.0};
  c.seed = seed;
  return c;
}

std::string perfect_csi_equality(Rng& rng) {
  const auto records = run_experiment(tiny_config(rng()), {1, false});
  for (const auto& r : records) {
    if (r.scheme != Scheme::Rsma) continue;
    for (const auto& s : records)
      if (s.scheme == Scheme::Sdma && s.attack == r.attack && s.power_dbm == r.power_dbm &&
          std::abs(s.mean_sum_rate - r.mean_sum_rate) > 1e-9)
        return "RSMA and SDMA differ under perfect CSI";
  }
  return {};
}

std::string thread_independence(Rng& rng) {
  ExperimentConfig c = tiny_config(rng());
  c.bs_csi = CsiErrorSpec<double>::uniform(0.3);
  c.attacker_csi = CsiErrorSpec<double>::uniform(0.3);
  std::ostringstream one, three;
  write_csv(one, run_experiment(c, {1, false}));
  write_csv(three, run_experiment(c, {3, false}));
  return one.str() == three.str() ? std::string{} : "CSV depends on thread count";
}

}  // namespace

bool run_validation(std::ostream& log, std::uint64_t seed) {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"khatri-rao cascade identity", khatri_rao},
      {"zero-forcing exactness", zero_forcing},
      {"power budget", power_budget},
      {"attack objectives and unit modulus", attacks_improve},
      {"perfect-CSI RSMA/SDMA equality", perfect_csi_equality},
      {"thread-count independence", thread_independence},
  };
  bool all = true;
  std::uint64_t key = 0;
  for (const auto& [name, check] : checks) {
    Rng rng(derive_seed(seed, {++key}));
    std::string failure;
    try {
      failure = check(rng);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    log << (failure.empty() ? "[ok]   " : "[FAIL] ") << name;
    if (!failure.empty()) log << ": " << failure;
    log << '\n';
    all = all && failure.empty();
  }
  return all;
}

}  // namespace rsmaris
