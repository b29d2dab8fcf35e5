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

#ifndef RSMARIS_TRANSMITTER_HPP
#define RSMARIS_TRANSMITTER_HPP

#include <algorithm>
#include <cmath>

#include "rsmaris/types.hpp"

namespace rsmaris {

enum class Scheme { Rsma = 0, Sdma = 1 };

/// Which user's reported interference sets the private power fraction.
enum class InterferenceReference {
  LeastInterfered,  // min over users, as printed in the allocation rule
  MostInterfered,   // max over users
};

/// Common precoder p_c (unit norm) and the K private ZF precoders stored as
/// the columns of an M x K matrix.
template <typename Real = double>
struct PrecoderSet {
  CVector<Real> common;
  CMatrix<Real> privates;
};

template <typename Real = double>
struct PowerAllocation {
  Real total_power = Real(0);  // mW
  Real alpha_common = Real(0);
  RVector<Real> alpha_private;
  Real noise_power = Real(0);  // mW
  Scheme scheme = Scheme::Rsma;
};

// Largest Gram-matrix condition number accepted by the ZF construction.
inline constexpr double kZfConditionLimit = 1e12;

/// Columns of H (H^H H)^-1. The columns are not normalized; H^H P = I.
template <typename Real>
CMatrix<Real> zf_private_precoders(const CMatrix<Real>& h_hat) {
  const Eigen::Index M = h_hat.rows(), K = h_hat.cols();
  if (K < 1 || M < K) throw DimensionError("zf_private_precoders: requires M >= K >= 1");

  Eigen::JacobiSVD<CMatrix<Real>> svd(h_hat);
  const auto& sv = svd.singularValues();
  const Real smax = sv(0), smin = sv(K - 1);
  if (!std::isfinite(smax)) throw NumericError("zf_private_precoders: non-finite channel");
  if (!(smin > Real(0)) || (smax / smin) * (smax / smin) > Real(kZfConditionLimit))
    throw SingularityError("zf_private_precoders: channel Gram matrix is rank deficient");

  // H = QR  =>  H (H^H H)^-1 = Q R^-H
  Eigen::HouseholderQR<CMatrix<Real>> qr(h_hat);
  const CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(M, K);
  const CMatrix<Real> r = qr.matrixQR().topRows(K).template triangularView<Eigen::Upper>();
  CMatrix<Real> r_inv_h = CMatrix<Real>::Identity(K, K);
  r.adjoint().template triangularView<Eigen::Lower>().solveInPlace(r_inv_h);
  return q * r_inv_h;
}

/// Weighted matched filter with equal weights: p_c = s / ||s||, s = sum_k h_k.
template <typename Real>
CVector<Real> mf_common_precoder(const CMatrix<Real>& h_hat) {
  if (h_hat.cols() < 1) throw DimensionError("mf_common_precoder: no users");
  const CVector<Real> s = h_hat.rowwise().sum();
  const Real scale = h_hat.colwise().norm().sum();
  const Real norm = s.norm();
  if (!std::isfinite(norm)) throw NumericError("mf_common_precoder: non-finite channel");
  if (!(norm > Real(1e-12) * scale))
    throw SingularityError("mf_common_precoder: channel sum cancels");
  return s / norm;
}

template <typename Real>
PrecoderSet<Real> build_precoders(const CMatrix<Real>& h_hat) {
  return {mf_common_precoder<Real>(h_hat), zf_private_precoders<Real>(h_hat)};
}

/// Interference sum_{i != k} |h_k^H p_i|^2 seen by each user on its direct
/// link, for unit per-stream power.
template <typename Real>
RVector<Real> direct_interference(const CMatrix<Real>& h, const CMatrix<Real>& p_private) {
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> gains = (h.adjoint() * p_private).cwiseAbs2();
  gains.diagonal().setZero();
  return gains.rowwise().sum();
}

// Below this (mW) the reported interference counts as zero.
inline constexpr double kInterferenceFloor = 1e-30;

/// RSMA: uniform private fraction alpha_p = min{1/K, sigma^2 / (I_ref P)}
/// where I_ref is the reported direct-link interference (min over users by
/// default), and the remainder goes to the common stream. SDMA: alpha_c = 0,
/// alpha_p = 1/K.
template <typename Real>
PowerAllocation<Real> allocate_power(
    const CMatrix<Real>& h_true, const CMatrix<Real>& p_private, Real total_power,
    Real noise_power, Scheme scheme,
    InterferenceReference reference = InterferenceReference::LeastInterfered) {
  if (!(total_power > Real(0)) || !(noise_power > Real(0)))
    throw DomainError("allocate_power: transmit and noise power must be positive");
  const Eigen::Index K = p_private.cols();
  if (K < 1 || h_true.cols() != K || h_true.rows() != p_private.rows())
    throw DimensionError("allocate_power: channel and precoder shapes disagree");

  const Real uniform = Real(1) / Real(K);
  PowerAllocation<Real> out;
  out.total_power = total_power;
  out.noise_power = noise_power;
  out.scheme = scheme;

  Real alpha_p = uniform;
  if (scheme == Scheme::Rsma) {
    const RVector<Real> leak = direct_interference<Real>(h_true, p_private);
    const Real ref = reference == InterferenceReference::LeastInterfered ? leak.minCoeff()
                                                                          : leak.maxCoeff();
    const Real denominator = ref * total_power;
    if (denominator >= Real(kInterferenceFloor))
      alpha_p = std::min(uniform, noise_power / denominator);
  }
  out.alpha_private = RVector<Real>::Constant(K, alpha_p);
  out.alpha_common = alpha_p == uniform ? Real(0) : std::max(Real(0), Real(1) - Real(K) * alpha_p);
  return out;
}

}  // namespace rsmaris

#endif  // RSMARIS_TRANSMITTER_HPP
