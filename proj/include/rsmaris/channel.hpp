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

#ifndef RSMARIS_CHANNEL_HPP
#define RSMARIS_CHANNEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "rsmaris/random.hpp"
#include "rsmaris/types.hpp"

namespace rsmaris {

template <typename Real>
using Point2 = Eigen::Matrix<Real, 2, 1>;

/// Positions (meters) of the BS, the RIS and the K single-antenna users, plus
/// the distance path-loss exponent shared by every link.
template <typename Real = double>
struct ScenarioGeometry {
  Point2<Real> bs_position = Point2<Real>::Zero();
  Point2<Real> ris_position = Point2<Real>::Zero();
  std::vector<Point2<Real>> user_positions;
  Real path_loss_exponent = Real(2.5);

  Eigen::Index users() const { return static_cast<Eigen::Index>(user_positions.size()); }

  /// Throws GeometryError when K = 0, eta <= 0, or any link has zero length.
  void validate() const {
    if (user_positions.empty()) throw GeometryError("geometry: at least one user is required");
    if (!(path_loss_exponent > Real(0)) || !std::isfinite(path_loss_exponent))
      throw GeometryError("geometry: path-loss exponent must be positive and finite");
    if ((bs_position - ris_position).norm() == Real(0))
      throw GeometryError("geometry: BS and RIS are co-located");
    for (std::size_t k = 0; k < user_positions.size(); ++k) {
      if ((user_positions[k] - bs_position).norm() == Real(0) ||
          (user_positions[k] - ris_position).norm() == Real(0))
        throw GeometryError("geometry: user " + std::to_string(k) +
                            " is co-located with the BS or the RIS");
    }
  }
};

/// Identifies one of the three link families of the scenario.
struct Link {
  enum class Kind { BsRis, RisUser, BsUser };
  Kind kind = Kind::BsRis;
  Eigen::Index user = 0;

  static Link bs_ris() { return {Kind::BsRis, 0}; }
  static Link ris_user(Eigen::Index k) { return {Kind::RisUser, k}; }
  static Link bs_user(Eigen::Index k) { return {Kind::BsUser, k}; }
};

template <typename Real>
Real link_distance(const ScenarioGeometry<Real>& geometry, Link link) {
  if (link.kind != Link::Kind::BsRis && (link.user < 0 || link.user >= geometry.users()))
    throw DimensionError("link: user index " + std::to_string(link.user) + " out of range");
  const auto user = [&]() { return geometry.user_positions[static_cast<std::size_t>(link.user)]; };
  switch (link.kind) {
    case Link::Kind::BsRis:
      return (geometry.ris_position - geometry.bs_position).norm();
    case Link::Kind::RisUser:
      return (user() - geometry.ris_position).norm();
    case Link::Kind::BsUser:
      return (user() - geometry.bs_position).norm();
  }
  return Real(0);
}

/// Large-scale power gain d^-eta of one link.
template <typename Real>
Real path_loss(const ScenarioGeometry<Real>& geometry, Link link) {
  const Real d = link_distance(geometry, link);
  if (!(d > Real(0))) throw GeometryError("path_loss: zero-length link");
  return std::pow(d, -geometry.path_loss_exponent);
}

/// True channels of one Monte-Carlo trial. Users are stored column-wise:
/// h is M x K (column k = h_k), f is L x K (column k = f_k), G is L x M.
/// The per-link large-scale gains are kept alongside so that estimation
/// errors can be drawn at the same scale as the links they corrupt.
template <typename Real = double>
struct ChannelRealization {
  CMatrix<Real> h;
  CMatrix<Real> G;
  CMatrix<Real> f;
  RVector<Real> gain_bs_user;
  RVector<Real> gain_ris_user;
  Real gain_bs_ris = Real(0);

  Eigen::Index antennas() const { return h.rows(); }
  Eigen::Index users() const { return h.cols(); }
  Eigen::Index elements() const { return G.rows(); }
};

/// Rayleigh fading with per-entry variance equal to the link path loss.
template <typename Real, typename Urbg>
ChannelRealization<Real> draw_channels(const ScenarioGeometry<Real>& geometry, Eigen::Index M,
                                       Eigen::Index L, Urbg& rng) {
  if (M < 1 || L < 1) throw DimensionError("draw_channels: M and L must be at least 1");
  geometry.validate();
  const Eigen::Index K = geometry.users();

  ChannelRealization<Real> out;
  out.gain_bs_ris = path_loss(geometry, Link::bs_ris());
  out.gain_bs_user.resize(K);
  out.gain_ris_user.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    out.gain_bs_user(k) = path_loss(geometry, Link::bs_user(k));
    out.gain_ris_user(k) = path_loss(geometry, Link::ris_user(k));
  }

  out.G = complex_gaussian<Real>(L, M, out.gain_bs_ris, rng);
  out.h.resize(M, K);
  out.f.resize(L, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    out.h.col(k) = complex_gaussian<Real>(M, 1, out.gain_bs_user(k), rng);
    out.f.col(k) = complex_gaussian<Real>(L, 1, out.gain_ris_user(k), rng);
  }
  return out;
}

/// How the estimation-error term is scaled relative to the link it corrupts.
enum class ErrorScaling {
  PathLoss,  // error variance = link path loss, estimate keeps the link's power
  Unit,      // unit-variance error regardless of the link gain
};

template <typename Real = double>
struct CsiErrorSpec {
  Real tau_bs_user = Real(0);
  Real tau_bs_ris = Real(0);
  Real tau_ris_user = Real(0);
  ErrorScaling scaling = ErrorScaling::PathLoss;

  static CsiErrorSpec uniform(Real tau) { return {tau, tau, tau, ErrorScaling::PathLoss}; }

  void validate() const {
    for (Real tau : {tau_bs_user, tau_bs_ris, tau_ris_user})
      if (!(tau >= Real(0) && tau <= Real(1)))
        throw DomainError("csi error factor must lie in [0, 1]");
  }
};

template <typename Real = double>
struct ChannelEstimate {
  CMatrix<Real> h_hat;
  CMatrix<Real> G_hat;
  CMatrix<Real> f_hat;
};

namespace detail {

template <typename Real>
void blend_estimate(CMatrix<Real>& target, Real tau, const CMatrix<Real>& error) {
  if (tau == Real(0)) return;
  target = std::sqrt(Real(1) - tau * tau) * target + tau * error;
}

}  // namespace detail

/// Gauss-Markov corruption x_hat = sqrt(1 - tau^2) x + tau z, one tau per link
/// family. All three error terms are always drawn so the stream position
/// after the call does not depend on the tau values.
template <typename Real, typename Urbg>
ChannelEstimate<Real> corrupt_csi(const ChannelRealization<Real>& truth,
                                  const CsiErrorSpec<Real>& spec, Urbg& rng) {
  spec.validate();
  const Eigen::Index M = truth.antennas(), K = truth.users(), L = truth.elements();
  const bool scaled = spec.scaling == ErrorScaling::PathLoss;

  CMatrix<Real> z_G = complex_gaussian<Real>(L, M, scaled ? truth.gain_bs_ris : Real(1), rng);
  CMatrix<Real> z_h(M, K), z_f(L, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    z_h.col(k) = complex_gaussian<Real>(M, 1, scaled ? truth.gain_bs_user(k) : Real(1), rng);
    z_f.col(k) = complex_gaussian<Real>(L, 1, scaled ? truth.gain_ris_user(k) : Real(1), rng);
  }

  ChannelEstimate<Real> out{truth.h, truth.G, truth.f};
  detail::blend_estimate(out.h_hat, spec.tau_bs_user, z_h);
  detail::blend_estimate(out.G_hat, spec.tau_bs_ris, z_G);
  detail::blend_estimate(out.f_hat, spec.tau_ris_user, z_f);
  return out;
}

/// One M x L cascade matrix per user.
template <typename Real = double>
using CascadeMatrix = std::vector<CMatrix<Real>>;

/// Per-user cascade matrices K_k = G^T <> f_k^H (M x L), i.e.
/// K_k(m, l) = G(l, m) conj(f_k(l)), so that K_k theta = (f_k^H diag(theta) G)^T.
template <typename Real>
CascadeMatrix<Real> cascade(const CMatrix<Real>& G, const CMatrix<Real>& f) {
  if (G.rows() != f.rows())
    throw DimensionError("cascade: G and f disagree on the number of RIS elements");
  CascadeMatrix<Real> out;
  out.reserve(static_cast<std::size_t>(f.cols()));
  for (Eigen::Index k = 0; k < f.cols(); ++k)
    out.emplace_back(G.transpose() * f.col(k).conjugate().asDiagonal());
  return out;
}

template <typename Real>
CascadeMatrix<Real> cascade(const ChannelEstimate<Real>& estimate) {
  return cascade<Real>(estimate.G_hat, estimate.f_hat);
}

}  // namespace rsmaris

#endif  // RSMARIS_CHANNEL_HPP
