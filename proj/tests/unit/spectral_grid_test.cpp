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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cshlab/errors.hpp"
#include "cshlab/spectral_grid.hpp"
#include "support/fields.hpp"

namespace cshlab {
namespace {

using testing::random_band_limited;
using testing::random_physical;
using testing::rel_l2;

constexpr double kPi = std::numbers::pi;

// Direct O(n^4) transform with the library's normalization.
std::vector<cplx> naive_forward(const GridSpec& g, const ScalarField& f) {
  const int n = g.n();
  std::vector<cplx> out(g.size());
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < n; ++k1) {
      cplx acc = 0.0;
      for (int j2 = 0; j2 < n; ++j2) {
        for (int j1 = 0; j1 < n; ++j1) {
          const double ph = -2.0 * kPi * (double(k1) * j1 + double(k2) * j2) / n;
          acc += f.at(j1, j2) * std::polar(1.0, ph);
        }
      }
      out[g.flat(k1, k2)] = acc / double(n * n);
    }
  }
  return out;
}

TEST(GridSpec, RejectsBadShapes) {
  EXPECT_THROW(GridSpec(12, 1.0), InvalidGrid);
  EXPECT_THROW(GridSpec(4, 1.0), InvalidGrid);
  EXPECT_THROW(GridSpec(16, 0.0), InvalidGrid);
  EXPECT_THROW(GridSpec(16, 1.0, 0.0), InvalidGrid);
  EXPECT_NO_THROW(GridSpec(16, 1.0, 1.0));
}

TEST(GridSpec, SignedIndices) {
  GridSpec g(8, 2 * kPi);
  EXPECT_EQ(g.signed_index(0), 0);
  EXPECT_EQ(g.signed_index(3), 3);
  EXPECT_EQ(g.signed_index(4), -4);
  EXPECT_EQ(g.signed_index(7), -1);
  EXPECT_EQ(g.wrap_index(-1), 7);
  EXPECT_DOUBLE_EQ(g.frequency_unit(), 1.0);
}

TEST(Transform, MatchesDirectSum) {
  GridSpec g(8, 3.0);
  ScalarField f = random_physical(g, 11);
  const std::vector<cplx> ref = naive_forward(g, f);
  ScalarField s = to_spectral(f);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - ref[i]), 0.0, 1e-14);
  }
}

TEST(Transform, ConstantMapsToZeroMode) {
  GridSpec g(16, 1.5);
  ScalarField c(g, Representation::physical, ValueKind::complex,
                std::vector<cplx>(g.size(), cplx(2.0, -1.0)));
  ScalarField s = to_spectral(c);
  EXPECT_NEAR(std::abs(s.mode(0, 0) - cplx(2.0, -1.0)), 0.0, 1e-15);
  double rest = 0.0;
  for (std::size_t i = 1; i < s.data().size(); ++i) rest += std::abs(s[i]);
  EXPECT_LT(rest, 1e-13);
}

TEST(Transform, PlaneWavesAreSingleModes) {
  GridSpec g(16, 2.0);
  ScalarField s = to_spectral(ScalarField::plane_wave(g, 1, 0));
  EXPECT_NEAR(std::abs(s.mode(1, 0) - 1.0), 0.0, 1e-14);
  s = to_spectral(ScalarField::plane_wave(g, 0, -3));
  EXPECT_NEAR(std::abs(s.mode(0, -3) - 1.0), 0.0, 1e-14);
  double total = 0.0;
  for (const auto& v : s.data()) total += std::norm(v);
  EXPECT_NEAR(total, 1.0, 1e-13);

  std::vector<cplx> delta(g.size());
  delta[g.flat(0, 1)] = 1.0;
  ScalarField p = to_physical(
      ScalarField(g, Representation::spectral, ValueKind::complex, delta));
  for (int j2 = 0; j2 < g.n(); ++j2) {
    const cplx want = std::exp(cplx(0.0, 2 * kPi * g.coordinate(j2) / 2.0));
    EXPECT_NEAR(std::abs(p.at(3, j2) - want), 0.0, 1e-14);
  }
}

TEST(Transform, RoundTripAndParseval) {
  GridSpec g(32, 2 * kPi);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ScalarField f = random_physical(g, seed);
    ScalarField s = to_spectral(f);
    EXPECT_LT(rel_l2(to_physical(s), f), 1e-12);
    double phys = 0.0;
    for (const auto& v : f.data()) phys += std::norm(v);
    phys *= g.cell_area();
    double spec = 0.0;
    for (const auto& v : s.data()) spec += std::norm(v);
    spec *= g.length() * g.length();
    EXPECT_NEAR(phys / spec, 1.0, 1e-12);
  }
  ScalarField z(g, Representation::spectral, ValueKind::complex);
  EXPECT_EQ(l2_norm(to_physical(z)), 0.0);
}

TEST(Transform, RepresentationIsChecked) {
  GridSpec g(8, 1.0);
  ScalarField p(g, Representation::physical, ValueKind::complex);
  EXPECT_THROW(to_physical(p), RepresentationMismatch);
  EXPECT_THROW(p.mode(0, 0), RepresentationMismatch);
  EXPECT_THROW(to_spectral(to_spectral(p)), RepresentationMismatch);
}

TEST(RealFields, HermitianSymmetryHolds) {
  GridSpec g(16, 1.0);
  ScalarField f = random_band_limited(g, 8, 3, false, ValueKind::real);
  for (int j2 = 0; j2 < g.n(); ++j2) {
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const int m1 = g.signed_index(j1);
      const int m2 = g.signed_index(j2);
      EXPECT_NEAR(std::abs(f.mode(m1, m2) - std::conj(f.mode(-m1, -m2))), 0.0,
                  1e-15);
    }
  }
  ScalarField p = to_physical(f);
  for (const auto& v : p.data()) EXPECT_EQ(v.imag(), 0.0);
}

TEST(Multiplier, AbsGradScalesPlaneWave) {
  GridSpec g(16, 3.0);
  ScalarField f = ScalarField::plane_wave(g, 1, 0);
  ScalarField r = apply_multiplier(f, symbols::abs_grad_pow(1.0));
  EXPECT_LT(rel_l2(r, (2 * kPi / 3.0) * f), 1e-13);
}

TEST(Multiplier, RieszOrthogonalDirection) {
  GridSpec g(16, 2.0);
  ScalarField f = ScalarField::from_function(
      g, [](double x1, double) { return std::sin(2 * kPi * x1 / 2.0); },
      ValueKind::real);
  EXPECT_LT(l2_norm(apply_multiplier(f, symbols::riesz(2))), 1e-14);
}

TEST(Multiplier, InverseLaplacianSolvesPoisson) {
  const double l = 3.0;
  const double kappa = 2 * kPi / l;
  GridSpec g(16, l);
  auto c = [&](double x1, double) { return std::cos(kappa * x1); };
  ScalarField f = ScalarField::from_function(g, c, ValueKind::real);
  ScalarField u = apply_multiplier(f, symbols::inv_lap());
  // Laplacian of u must reproduce f, so u = -cos / kappa^2.
  EXPECT_LT(rel_l2(u, (-1.0 / (kappa * kappa)) * f), 1e-13);
  EXPECT_LT(rel_l2(apply_multiplier(u, symbols::laplacian()), f), 1e-13);
}

TEST(Multiplier, SingularSymbolNeedsMeanZero) {
  GridSpec g(16, 1.0);
  ScalarField f(g, Representation::physical, ValueKind::complex,
                std::vector<cplx>(g.size(), 1.0));
  // Symbols with a contract value at the origin never throw.
  EXPECT_NO_THROW(apply_multiplier(f, symbols::inv_lap()));
  EXPECT_THROW(apply_multiplier(f, symbols::abs_grad_pow(-1.0)), SingularSymbol);
  ScalarField r =
      apply_multiplier(f, with_origin_value(symbols::abs_grad_pow(-1.0), 2.0));
  EXPECT_NEAR(std::abs(r.mode(0, 0) - 2.0), 0.0, 1e-15);
}

TEST(Multiplier, CompositionMatchesProductSymbol) {
  GridSpec g(32, 2 * kPi);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ScalarField f = random_band_limited(g, 15, seed);
    const Symbol a = symbols::derivative(1);
    const Symbol b = symbols::japanese_pow(-0.7);
    ScalarField two = apply_multiplier(apply_multiplier(f, a), b);
    ScalarField one = apply_multiplier(f, compose(a, b));
    EXPECT_LT(rel_l2(two, one), 1e-12);
  }
}

TEST(Multiplier, RieszAfterDerivativeSumsToMinusIdentity) {
  GridSpec g(32, 2 * kPi);
  ScalarField f = random_band_limited(g, 15, 5, true);
  ScalarField s = apply_multiplier(apply_multiplier(f, symbols::derivative(1)),
                                   symbols::riesz(1)) +
                  apply_multiplier(apply_multiplier(f, symbols::derivative(2)),
                                   symbols::riesz(2));
  EXPECT_LT(rel_l2(s, -1.0 * f), 1e-12);
  ScalarField id = apply_multiplier(apply_multiplier(f, symbols::laplacian()),
                                    symbols::inv_lap());
  EXPECT_LT(rel_l2(id, f), 1e-12);
}

TEST(Multiplier, HermitianSymbolsPreserveRealness) {
  GridSpec g(16, 2 * kPi);
  ScalarField f = random_band_limited(g, 8, 9, true, ValueKind::real);
  const std::vector<Symbol> syms = {
      symbols::derivative(1),    symbols::derivative(2),
      symbols::laplacian(),      symbols::abs_grad_pow(0.5),
      symbols::japanese_pow(1.5), symbols::riesz(1),
      symbols::riesz(2),         symbols::inv_lap(),
      symbols::cos_wave(0.3),    symbols::sin_wave_over_grad(0.3),
      symbols::grad_sin_wave(0.3)};
  for (const auto& s : syms) {
    ScalarField r = apply_multiplier(f, s);
    EXPECT_TRUE(r.is_real()) << s.name;
    // Check realness independently of the kind tag.
    ScalarField raw(g, Representation::spectral, ValueKind::complex,
                    std::vector<cplx>(r.data().begin(), r.data().end()));
    ScalarField p = to_physical(raw);
    double im = 0.0;
    for (const auto& v : p.data()) im = std::max(im, std::abs(v.imag()));
    EXPECT_LE(im, 1e-12 * std::max(1.0, linf_norm(p))) << s.name;
  }
}

TEST(Dealias, KeepsLowModesAndIsIdempotent) {
  GridSpec g(32, 1.0);
  ScalarField low = random_band_limited(g, 9, 1);
  EXPECT_EQ(rel_l2(dealias(low), low), 0.0);
  std::vector<cplx> top(g.size());
  top[g.flat(g.wrap_index(-16), 0)] = 1.0;
  top[g.flat(11, 0)] = 1.0;
  ScalarField t(g, Representation::spectral, ValueKind::complex, top);
  EXPECT_EQ(l2_norm(dealias(t)), 0.0);
  ScalarField f = random_band_limited(g, 16, 2);
  ScalarField once = dealias(f);
  EXPECT_EQ(rel_l2(dealias(once), once), 0.0);
}

TEST(Products, PaddedProductIsExact) {
  GridSpec g(16, 2 * kPi);
  ScalarField a = random_band_limited(g, 3, 21);
  ScalarField b = random_band_limited(g, 3, 22);
  // Product of two |m| <= 3 fields lives in |m| <= 6 < n/2: no aliasing, so
  // the plain pointwise product is exact too.
  ScalarField p = padded_product(a, b);
  EXPECT_LT(rel_l2(p, to_spectral(pointwise_product(a, b))), 1e-13);
}

TEST(Products, GridMismatchIsReported) {
  ScalarField a(GridSpec(8, 1.0), Representation::physical, ValueKind::complex);
  ScalarField b(GridSpec(8, 2.0), Representation::physical, ValueKind::complex);
  EXPECT_THROW(a + b, GridMismatch);
  EXPECT_THROW(pointwise_product(a, b), GridMismatch);
}

TEST(Norms, LpNormsOfConstants) {
  GridSpec g(16, 2.0);
  ScalarField c(g, Representation::physical, ValueKind::complex,
                std::vector<cplx>(g.size(), 3.0));
  EXPECT_NEAR(l2_norm(c), 3.0 * 2.0, 1e-13);
  EXPECT_NEAR(lp_norm(c, 4.0), 3.0 * std::pow(4.0, 0.25), 1e-13);
  EXPECT_NEAR(linf_norm(c), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(integral(c) - 12.0), 0.0, 1e-12);
}

}  // namespace
}  // namespace cshlab
