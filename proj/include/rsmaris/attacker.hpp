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

#ifndef RSMARIS_ATTACKER_HPP
#define RSMARIS_ATTACKER_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rsmaris/channel.hpp"
#include "rsmaris/power_iteration.hpp"
#include "rsmaris/types.hpp"

namespace rsmaris {

enum class AttackKind { None = 0, Random = 1, Aligned = 2, Mitigation = 3 };

/// Starting point of the mitigation descent.
///  AsPrinted:    phase of +(K_bar^H K_bar)^-1 K_bar^H h_bar; all-ones when
///                K_bar^H K_bar is singular (always the case for L > K M).
///  LeastSquares: phase of -pinv(K_bar) h_bar, the minimum-norm unconstrained
///                minimizer; all-ones when it vanishes.
///  Ones:         all-ones.
enum class MitigationStart { AsPrinted, LeastSquares, Ones };

// Largest condition number of K_bar^H K_bar treated as invertible.
inline constexpr double kGramConditionLimit = 1e12;

/// RIS configuration during data transmission. Absorb contributes nothing to
/// any effective channel; Reflect applies diag(theta) with |theta_l| = 1.
template <typename Real = double>
struct ReflectionState {
  enum class Mode { Absorb, Reflect };
  Mode mode = Mode::Absorb;
  CVector<Real> theta;

  static ReflectionState absorb() { return {}; }
  static ReflectionState reflect(CVector<Real> phases) { return {Mode::Reflect, std::move(phases)}; }
  bool reflecting() const { return mode == Mode::Reflect; }
};

template <typename Real = double>
struct AttackSpec {
  AttackKind kind = AttackKind::None;
  RVector<Real> weights;  // omega_k, nonnegative, summing to one
  int iterations = 3000;
  Real step_scale = Real(0.99);
  MitigationStart mitigation_start = MitigationStart::AsPrinted;

  static AttackSpec uniform(AttackKind kind, Eigen::Index users, int iterations = 3000,
                            Real step_scale = Real(0.99)) {
    return {kind, RVector<Real>::Constant(users, Real(1) / Real(users)), iterations, step_scale,
            MitigationStart::AsPrinted};
  }

  void validate(Eigen::Index users) const {
    if (weights.size() != users)
      throw DimensionError("attack: expected " + std::to_string(users) + " weights");
    if ((weights.array() < Real(0)).any()) throw DomainError("attack: weights must be nonnegative");
    if (!(std::abs(weights.sum() - Real(1)) <= Real(1e-9)))
      throw DomainError("attack: weights must sum to one");
    if (iterations < 1) throw DomainError("attack: iterations must be positive");
    if (!(step_scale > Real(0) && step_scale < Real(1)))
      throw DomainError("attack: step scale must lie in (0, 1)");
  }
};

/// Optional diagnostics filled by the optimized attacks.
template <typename Real = double>
struct AttackTrace {
  Real lambda_max = Real(0);
  Real step = Real(0);
  Real initial_objective = Real(0);
  Real final_objective = Real(0);
  bool fallback_init = false;
  bool record_history = false;
  std::vector<Real> history;  // objective at theta_(1) .. theta_(I) when recorded
};

/// Vertical stack [sqrt(w_1) K_1; ...; sqrt(w_K) K_K], KM x L.
template <typename Real>
CMatrix<Real> stack_cascades(const CascadeMatrix<Real>& cascades, const RVector<Real>& weights) {
  if (cascades.empty()) throw DimensionError("stack_cascades: no users");
  if (static_cast<Eigen::Index>(cascades.size()) != weights.size())
    throw DimensionError("stack_cascades: one weight per user is required");
  const Eigen::Index M = cascades.front().rows(), L = cascades.front().cols();
  CMatrix<Real> out(M * weights.size(), L);
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const auto& block = cascades[static_cast<std::size_t>(k)];
    if (block.rows() != M || block.cols() != L)
      throw DimensionError("stack_cascades: cascade shapes disagree");
    out.middleRows(k * M, M) = std::sqrt(weights(k)) * block;
  }
  return out;
}

/// Stack [sqrt(w_1) conj(h_1); ...; sqrt(w_K) conj(h_K)], KM x 1.
template <typename Real>
CVector<Real> stack_direct(const CMatrix<Real>& h_hat, const RVector<Real>& weights) {
  if (h_hat.cols() != weights.size())
    throw DimensionError("stack_direct: one weight per user is required");
  const Eigen::Index M = h_hat.rows();
  CVector<Real> out(M * weights.size());
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    out.segment(k * M, M) = std::sqrt(weights(k)) * h_hat.col(k).conjugate();
  return out;
}

/// sum_k w_k ||K_k theta||^2
template <typename Real>
Real aligned_objective(const CascadeMatrix<Real>& cascades, const RVector<Real>& weights,
                       const CVector<Real>& theta) {
  Real total = Real(0);
  for (std::size_t k = 0; k < cascades.size(); ++k)
    total += weights(static_cast<Eigen::Index>(k)) * (cascades[k] * theta).squaredNorm();
  return total;
}

/// sum_k w_k ||K_k theta + conj(h_k)||^2
template <typename Real>
Real mitigation_objective(const CascadeMatrix<Real>& cascades, const CMatrix<Real>& h_hat,
                          const RVector<Real>& weights, const CVector<Real>& theta) {
  Real total = Real(0);
  for (std::size_t k = 0; k < cascades.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    total += weights(kk) * (cascades[k] * theta + h_hat.col(kk).conjugate()).squaredNorm();
  }
  return total;
}

/// Element-wise projection onto the unit circle. A zero entry has no phase
/// and keeps the corresponding entry of `previous`.
template <typename Real>
CVector<Real> project_unit_modulus(const CVector<Real>& target, const CVector<Real>& previous) {
  CVector<Real> out(target.size());
  for (Eigen::Index l = 0; l < target.size(); ++l) {
    const Real magnitude = std::abs(target(l));
    out(l) = magnitude > Real(0) ? target(l) / magnitude : previous(l);
  }
  return out;
}

/// Phases drawn i.i.d. uniform on [0, 2pi).
template <typename Real, typename Urbg>
ReflectionState<Real> random_attack(Eigen::Index L, Urbg& rng) {
  if (L < 1) throw DimensionError("random_attack: L must be at least 1");
  std::uniform_real_distribution<Real> phase(Real(0), Real(2) * std::numbers::pi_v<Real>);
  CVector<Real> theta(L);
  for (Eigen::Index l = 0; l < L; ++l) theta(l) = std::polar(Real(1), phase(rng));
  return ReflectionState<Real>::reflect(std::move(theta));
}

namespace detail {

template <typename Real>
Real gradient_step(const CMatrix<Real>& stacked, const AttackSpec<Real>& spec,
                   AttackTrace<Real>* trace) {
  const Real lambda = gram_lambda_max<Real>(stacked).eigenvalue;
  // A vanishing cascade has a zero gradient; the iterate simply stays put.
  const Real step = lambda > Real(0) ? spec.step_scale / lambda : Real(0);
  if (trace) {
    trace->lambda_max = lambda;
    trace->step = step;
    trace->history.clear();
  }
  return step;
}

}  // namespace detail

/// Aligned-interference attack: projected gradient ascent on
/// ||K_bar theta||^2 from the all-ones start, I - 1 updates with step
/// delta / lambda_max(K_bar^H K_bar).
template <typename Real>
ReflectionState<Real> aligned_attack(const CascadeMatrix<Real>& cascades,
                                     const AttackSpec<Real>& spec,
                                     AttackTrace<Real>* trace = nullptr) {
  spec.validate(static_cast<Eigen::Index>(cascades.size()));
  const CMatrix<Real> stacked = stack_cascades(cascades, spec.weights);
  const Real step = detail::gradient_step(stacked, spec, trace);

  CVector<Real> theta = CVector<Real>::Ones(stacked.cols());
  CVector<Real> image = stacked * theta;
  if (trace) trace->initial_objective = image.squaredNorm();
  for (int i = 1; i < spec.iterations; ++i) {
    if (trace && trace->record_history) trace->history.push_back(image.squaredNorm());
    const CVector<Real> target = theta + step * (stacked.adjoint() * image);
    theta = project_unit_modulus<Real>(target, theta);
    image.noalias() = stacked * theta;
  }
  if (!theta.allFinite()) throw NumericError("aligned_attack: non-finite iterate");
  if (trace) {
    trace->final_objective = image.squaredNorm();
    if (trace->record_history) trace->history.push_back(trace->final_objective);
  }
  return ReflectionState<Real>::reflect(std::move(theta));
}

/// Mitigation attack: projected gradient descent on ||K_bar theta + h_bar||^2
/// from the start selected by spec.mitigation_start, I - 1 updates.
template <typename Real>
ReflectionState<Real> mitigation_attack(const CascadeMatrix<Real>& cascades,
                                        const CMatrix<Real>& h_hat,
                                        const AttackSpec<Real>& spec,
                                        AttackTrace<Real>* trace = nullptr) {
  spec.validate(static_cast<Eigen::Index>(cascades.size()));
  const CMatrix<Real> stacked = stack_cascades(cascades, spec.weights);
  const CVector<Real> direct = stack_direct(h_hat, spec.weights);
  if (direct.size() != stacked.rows())
    throw DimensionError("mitigation_attack: direct channels do not match the cascades");
  if (!direct.allFinite()) throw NumericError("mitigation_attack: non-finite direct channel");
  const Real step = detail::gradient_step(stacked, spec, trace);

  const Eigen::Index L = stacked.cols();
  const CVector<Real> ones = CVector<Real>::Ones(L);
  CVector<Real> start;
  switch (spec.mitigation_start) {
    case MitigationStart::AsPrinted:
      if (L <= stacked.rows()) {
        Eigen::JacobiSVD<CMatrix<Real>> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const Real ratio = sv(0) / sv(L - 1);
        if (sv(L - 1) > Real(0) && ratio * ratio <= Real(kGramConditionLimit))
          start = svd.solve(direct);
      }
      break;
    case MitigationStart::LeastSquares:
      start = -Eigen::CompleteOrthogonalDecomposition<CMatrix<Real>>(stacked).solve(direct);
      break;
    case MitigationStart::Ones:
      break;
  }
  const bool usable = start.size() == L && start.allFinite() && start.squaredNorm() > Real(0);
  CVector<Real> theta = usable ? project_unit_modulus<Real>(start, ones) : ones;
  if (trace) trace->fallback_init = !usable && spec.mitigation_start != MitigationStart::Ones;

  CVector<Real> residual = stacked * theta + direct;
  if (trace) trace->initial_objective = residual.squaredNorm();
  for (int i = 1; i < spec.iterations; ++i) {
    if (trace && trace->record_history) trace->history.push_back(residual.squaredNorm());
    const CVector<Real> target = theta - step * (stacked.adjoint() * residual);
    theta = project_unit_modulus<Real>(target, theta);
    residual.noalias() = stacked * theta;
    residual += direct;
  }
  if (!theta.allFinite()) throw NumericError("mitigation_attack: non-finite iterate");
  if (trace) {
    trace->final_objective = residual.squaredNorm();
    if (trace->record_history) trace->history.push_back(trace->final_objective);
  }
  return ReflectionState<Real>::reflect(std::move(theta));
}

/// Entries of the row f_k^H diag(theta) G + h_k^H seen by user k (length M);
/// the signal of stream p at user k is effective_channel(...).transpose() * p.
template <typename Real>
CVector<Real> effective_channel(const ChannelRealization<Real>& truth,
                                const ReflectionState<Real>& state, Eigen::Index k) {
  if (k < 0 || k >= truth.users()) throw DimensionError("effective_channel: bad user index");
  CVector<Real> row = truth.h.col(k).conjugate();
  if (state.reflecting()) {
    if (state.theta.size() != truth.elements())
      throw DimensionError("effective_channel: theta length does not match L");
    row += truth.G.transpose() * truth.f.col(k).conjugate().cwiseProduct(state.theta);
  }
  return row;
}

/// All users at once; column k is effective_channel(truth, state, k).
template <typename Real>
CMatrix<Real> effective_channels(const ChannelRealization<Real>& truth,
                                 const ReflectionState<Real>& state) {
  CMatrix<Real> out(truth.antennas(), truth.users());
  for (Eigen::Index k = 0; k < truth.users(); ++k) out.col(k) = effective_channel(truth, state, k);
  return out;
}

}  // namespace rsmaris

#endif  // RSMARIS_ATTACKER_HPP
