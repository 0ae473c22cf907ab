// Copyright 2026 The cshlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSHLAB_TESTS_SUPPORT_FIELDS_HPP_
#define CSHLAB_TESTS_SUPPORT_FIELDS_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cshlab/spectral_grid.hpp"

namespace cshlab::testing {

// Gaussian random coefficients on the modes with max(|m1|, |m2|) <= kmax,
// returned in spectral form.
inline ScalarField random_band_limited(const GridSpec& g, int kmax,
                                       std::uint64_t seed, bool mean_zero = false,
                                       ValueKind kind = ValueKind::complex) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> d(g.size());
  for (int j2 = 0; j2 < g.n(); ++j2) {
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const int m1 = g.signed_index(j1);
      const int m2 = g.signed_index(j2);
      const double re = nd(rng);
      const double im = nd(rng);
      if (std::abs(m1) > kmax || std::abs(m2) > kmax) continue;
      if (mean_zero && m1 == 0 && m2 == 0) continue;
      d[g.flat(j1, j2)] = cplx(re, im);
    }
  }
  return ScalarField(g, Representation::spectral, kind, std::move(d));
}

inline ScalarField random_physical(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<cplx> d(g.size());
  for (auto& v : d) {
    const double re = ud(rng);
    v = cplx(re, ud(rng));
  }
  return ScalarField(g, Representation::physical, ValueKind::complex,
                     std::move(d));
}

inline double rel_l2(const ScalarField& a, const ScalarField& b) {
  const double nb = l2_norm(b);
  const double diff = l2_norm(as_spectral(a) - as_spectral(b));
  return nb > 0.0 ? diff / nb : diff;
}

}  // namespace cshlab::testing

#endif  // CSHLAB_TESTS_SUPPORT_FIELDS_HPP_
