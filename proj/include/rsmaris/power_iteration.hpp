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

#ifndef RSMARIS_POWER_ITERATION_HPP
#define RSMARIS_POWER_ITERATION_HPP

#include <cmath>

#include "rsmaris/random.hpp"
#include "rsmaris/types.hpp"

namespace rsmaris {

struct PowerIterationOptions {
  double tolerance = 1e-6;  // relative change of the Rayleigh quotient
  int max_iterations = 500;
};

template <typename Real>
struct PowerIterationResult {
  Real eigenvalue = Real(0);
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of the Hermitian PSD matrix B^H B, applied in factored
/// form (never forms the Gram matrix). The start vector is a fixed
/// pseudo-random draw, so the result is a deterministic function of B.
template <typename Real>
PowerIterationResult<Real> gram_lambda_max(const CMatrix<Real>& B,
                                           const PowerIterationOptions& options = {}) {
  if (!B.allFinite()) throw NumericError("gram_lambda_max: non-finite entries");
  PowerIterationResult<Real> out;
  if (B.cols() == 0 || B.squaredNorm() == Real(0)) {
    out.converged = true;
    return out;
  }

  Rng rng(0x5eed0fdec0de5eedULL);
  CVector<Real> v = complex_gaussian<Real>(B.cols(), 1, Real(1), rng);
  v.normalize();
  Real previous = Real(0);
  for (int i = 0; i < options.max_iterations; ++i) {
    CVector<Real> w = B.adjoint() * (B * v);
    const Real rayleigh = std::real(v.dot(w));
    out.eigenvalue = rayleigh;
    out.iterations = i + 1;
    const Real norm = w.norm();
    if (!(norm > Real(0))) break;
    v = w / norm;
    if (i > 0 && std::abs(rayleigh - previous) <= Real(options.tolerance) * std::abs(rayleigh)) {
      out.converged = true;
      break;
    }
    previous = rayleigh;
  }
  if (!std::isfinite(out.eigenvalue)) throw NumericError("gram_lambda_max: diverged");
  return out;
}

}  // namespace rsmaris

#endif  // RSMARIS_POWER_ITERATION_HPP
