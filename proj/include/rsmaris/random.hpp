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

#ifndef RSMARIS_RANDOM_HPP
#define RSMARIS_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "rsmaris/types.hpp"

namespace rsmaris {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent sub-stream seed from a parent seed and a key path.
// Order of keys matters: derive_seed(s, {1, 2}) != derive_seed(s, {2, 1}).
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(parent);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// Circularly-symmetric complex Gaussian entries with E|x|^2 = variance.
template <typename Real, typename Urbg>
CMatrix<Real> complex_gaussian(Eigen::Index rows, Eigen::Index cols, Real variance,
                               Urbg& rng) {
  // Unit draws are scaled afterwards so a zero variance (vanishing path loss)
  // still consumes the same number of variates.
  std::normal_distribution<Real> normal(Real(0), Real(1));
  const Real scale = std::sqrt(variance / Real(2));
  CMatrix<Real> out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      out(i, j) = Complex<Real>(scale * re, scale * im);
    }
  return out;
}

}  // namespace rsmaris

#endif  // RSMARIS_RANDOM_HPP
