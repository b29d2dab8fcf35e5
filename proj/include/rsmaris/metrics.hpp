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

#ifndef RSMARIS_METRICS_HPP
#define RSMARIS_METRICS_HPP

#include <cmath>

#include "rsmaris/attacker.hpp"
#include "rsmaris/channel.hpp"
#include "rsmaris/transmitter.hpp"
#include "rsmaris/types.hpp"

namespace rsmaris {

/// Per-user SINRs and rates (bits/s/Hz) of one transmission.
template <typename Real = double>
struct RateReport {
  RVector<Real> common_sinr;
  RVector<Real> private_sinr;
  RVector<Real> common_rate_per_user;
  RVector<Real> private_rates;
  Real allocated_common_rate = Real(0);
  Real sum_rate = Real(0);
  Real alpha_common = Real(0);

  Real private_rate_sum() const { return private_rates.sum(); }
};

namespace detail {

// Received power |g^T p_i|^2 P alpha_i of each private stream.
template <typename Real>
RVector<Real> private_stream_powers(const CVector<Real>& g, const PrecoderSet<Real>& precoders,
                                    const PowerAllocation<Real>& power) {
  const RVector<Real> gains = (precoders.privates.transpose() * g).cwiseAbs2();
  return gains.cwiseProduct(power.alpha_private) * power.total_power;
}

}  // namespace detail

/// Common-stream SINR; every private stream, including user k's own, is
/// interference for the common message.
template <typename Real>
Real common_sinr(const CVector<Real>& g, const PrecoderSet<Real>& precoders,
                 const PowerAllocation<Real>& power) {
  const Real signal =
      std::norm(g.cwiseProduct(precoders.common).sum()) * power.total_power * power.alpha_common;
  if (signal == Real(0)) return Real(0);
  const Real interference = detail::private_stream_powers(g, precoders, power).sum();
  return signal / (interference + power.noise_power);
}

/// Private-stream SINR of user k after perfect SIC of the common message.
template <typename Real>
Real private_sinr(const CVector<Real>& g, Eigen::Index k, const PrecoderSet<Real>& precoders,
                  const PowerAllocation<Real>& power) {
  if (k < 0 || k >= precoders.privates.cols())
    throw DimensionError("private_sinr: bad user index");
  RVector<Real> streams = detail::private_stream_powers(g, precoders, power);
  const Real signal = streams(k);
  if (signal == Real(0)) return Real(0);
  streams(k) = Real(0);
  return signal / (streams.sum() + power.noise_power);
}

/// Builds a report from per-user SINRs: R_c = min_k log2(1 + gamma_c_k),
/// R = R_c + sum_k log2(1 + gamma_p_k). SDMA never carries a common message.
template <typename Real>
RateReport<Real> assemble_report(RVector<Real> common, RVector<Real> privates, Scheme scheme,
                                 Real alpha_common) {
  RateReport<Real> out;
  out.common_sinr = std::move(common);
  out.private_sinr = std::move(privates);
  out.common_rate_per_user = out.common_sinr.array().log1p() / std::log(Real(2));
  out.private_rates = out.private_sinr.array().log1p() / std::log(Real(2));
  out.allocated_common_rate =
      scheme == Scheme::Sdma || out.common_rate_per_user.size() == 0
          ? Real(0)
          : out.common_rate_per_user.minCoeff();
  out.sum_rate = out.allocated_common_rate + out.private_rates.sum();
  out.alpha_common = alpha_common;
  return out;
}

/// Rates of every user on the true channels with the RIS in `state`.
template <typename Real>
RateReport<Real> rate_report(const ChannelRealization<Real>& truth,
                             const ReflectionState<Real>& state,
                             const PrecoderSet<Real>& precoders,
                             const PowerAllocation<Real>& power) {
  const Eigen::Index K = truth.users();
  if (precoders.privates.cols() != K || power.alpha_private.size() != K ||
      precoders.privates.rows() != truth.antennas() || precoders.common.size() != truth.antennas())
    throw DimensionError("rate_report: precoders, power and channels disagree");

  RVector<Real> common(K), privates(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const CVector<Real> g = effective_channel(truth, state, k);
    common(k) = common_sinr(g, precoders, power);
    privates(k) = private_sinr(g, k, precoders, power);
  }
  return assemble_report<Real>(std::move(common), std::move(privates), power.scheme,
                               power.alpha_common);
}

}  // namespace rsmaris

#endif  // RSMARIS_METRICS_HPP
