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
#include "cshlab/lp_toolkit.hpp"
#include "support/fields.hpp"

namespace cshlab {
namespace {

using testing::random_band_limited;
using testing::rel_l2;

constexpr double kPi = std::numbers::pi;

double ref_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double ref_chi(double r) { return ref_step((4.0 - r) / 2.0); }

// Field with the given modes, each of unit amplitude.
ScalarField modes(const GridSpec& g, std::initializer_list<std::pair<int, int>> ms) {
  std::vector<cplx> d(g.size());
  for (auto [m1, m2] : ms) d[g.flat(g.wrap_index(m1), g.wrap_index(m2))] = 1.0;
  return ScalarField(g, Representation::spectral, ValueKind::complex, d);
}

TEST(Bump, ProfileAndSupport) {
  EXPECT_EQ(lp::bump(0.0), 1.0);
  EXPECT_EQ(lp::bump(2.0), 1.0);
  EXPECT_EQ(lp::bump(4.0), 0.0);
  EXPECT_EQ(lp::bump(5.0), 0.0);
  EXPECT_NEAR(lp::smooth_step(0.5), 0.5, 1e-15);
  for (double r = 0.0; r < 5.0; r += 0.037) {
    EXPECT_NEAR(lp::bump(r), ref_chi(r), 1e-15);
    EXPECT_NEAR(lp::band_symbol(3, r * 8.0), ref_chi(r) - ref_chi(2.0 * r),
                1e-15);
  }
}

TEST(Bands, ResolvableRange) {
  GridSpec g(64, 2 * kPi);
  const lp::BandRange br = lp::resolvable_bands(g);
  EXPECT_EQ(br.k_max, 3);  // 2^(3+2) = 32 = nyquist
  EXPECT_EQ(br.k_min, -1);
  EXPECT_NO_THROW(lp::require_band(g, 3));
  EXPECT_THROW(lp::require_band(g, 4), BandOutOfRange);
  ScalarField f = random_band_limited(g, 4, 1);
  EXPECT_THROW(lp::lp_project(f, 4), BandOutOfRange);
}

TEST(Projection, ConstantsAreRemovedOrKept) {
  GridSpec g(32, 2 * kPi);
  ScalarField c = modes(g, {{0, 0}});
  const lp::BandRange br = lp::resolvable_bands(g);
  for (int k = br.k_min; k <= br.k_max; ++k) {
    EXPECT_EQ(l2_norm(lp::lp_project(c, k)), 0.0);
    EXPECT_LT(rel_l2(lp::lp_project_leq(c, k), c), 1e-15);
  }
}

TEST(Projection, PlateauPlaneWavePassesUnchanged) {
  GridSpec g(64, 2 * kPi);
  // |xi| = 4 = 2^(1+1) sits where chi_1 = 1 and chi_0 = 0.
  ScalarField f = modes(g, {{4, 0}});
  EXPECT_NEAR(ref_chi(4.0 / 2.0) - ref_chi(4.0 / 1.0), 1.0, 0.0);
  EXPECT_LT(rel_l2(lp::lp_project(f, 1), f), 1e-15);
  EXPECT_EQ(l2_norm(lp::lp_project(f, 0)), 0.0);
  EXPECT_EQ(l2_norm(lp::lp_project(f, 2)), 0.0);
}

TEST(Projection, TelescopingSums) {
  GridSpec g(64, 2 * kPi);
  const lp::BandRange br = lp::resolvable_bands(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    // |m| <= 11 per axis keeps |xi| <= 16 = 2^(k_max+1).
    ScalarField f = random_band_limited(g, 11, seed, true);
    ScalarField sum(g, Representation::spectral);
    for (int k = br.k_min; k <= br.k_max; ++k) sum = sum + lp::lp_project(f, k);
    EXPECT_LT(rel_l2(sum, f), 1e-10);
    for (int k = br.k_min; k <= br.k_max; ++k) {
      ScalarField s = lp::lp_project_leq(f, k);
      for (int j = k + 1; j <= br.k_max; ++j) s = s + lp::lp_project(f, j);
      EXPECT_LT(rel_l2(s, f), 1e-10);
    }
    EXPECT_LT(rel_l2(lp::band_sum(f), f), 1e-10);
  }
}

TEST(Projection, LowProjectionAtLargeIndexIsIdentity) {
  GridSpec g(64, 2 * kPi);
  ScalarField f = random_band_limited(g, 5, 3);
  EXPECT_LT(rel_l2(lp::lp_project_leq(f, 3), f), 1e-15);
}

TEST(SquareFunction, LittlewoodPaleyEquivalence) {
  GridSpec g(64, 2 * kPi);
  const lp::BandRange br = lp::resolvable_bands(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ScalarField f = random_band_limited(g, 11, 100 + seed, true);
    std::vector<double> acc(g.size());
    for (int k = br.k_min; k <= br.k_max; ++k) {
      ScalarField p = to_physical(lp::lp_project(f, k));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(p[i]);
    }
    double s = 0.0;
    for (double v : acc) s += v;
    const double ratio = std::sqrt(s * g.cell_area()) / l2_norm(f);
    EXPECT_GE(ratio, 0.5);
    EXPECT_LE(ratio, 2.0);
  }
}

TEST(Sobolev, ClosedForms) {
  const double l = 3.0;
  GridSpec g(32, l);
  EXPECT_EQ(lp::sobolev_norm(ScalarField(g), 1.0, false), 0.0);
  ScalarField w = ScalarField::plane_wave(g, 1, 0);
  EXPECT_NEAR(lp::sobolev_norm(w, 1.0, true), (2 * kPi / l) * l, 1e-12);
  const double xi = 2 * kPi / l;
  EXPECT_NEAR(lp::sobolev_norm(w, 1.5, false),
              std::pow(1.0 + xi * xi, 0.75) * l, 1e-12);
  ScalarField f = random_band_limited(g, 10, 5);
  EXPECT_NEAR(lp::sobolev_norm(f, 0.0, false) / l2_norm(f), 1.0, 1e-12);
  // The homogeneous norm ignores the mean.
  ScalarField c = modes(g, {{0, 0}});
  EXPECT_EQ(lp::sobolev_norm(c, 1.0, true), 0.0);
}

TEST(CubeCover, SingletonAtEqualScales) {
  GridSpec g(64, 2 * kPi);
  const lp::CubeCover cv = lp::cube_cover(g, 2, 2);
  EXPECT_EQ(cv.size(), 1u);
  EXPECT_TRUE(cv.singleton());
  for (double r = 1.0; r <= 16.0; r += 0.5) EXPECT_EQ(cv.symbol(0, r, 0.3), 1.0);
  EXPECT_THROW(lp::cube_cover(g, 3, 2), BandOutOfRange);
  EXPECT_THROW(lp::cube_cover(g, 0, 4), BandOutOfRange);
}

TEST(CubeCover, PartitionOfUnityOnAnnulus) {
  GridSpec g(128, 2 * kPi);
  for (int k = 1; k <= 4; ++k) {
    for (int ell = 0; ell <= k; ++ell) {
      const lp::CubeCover cv = lp::cube_cover(g, ell, k);
      // Sum cube weights at every grid frequency.
      std::vector<double> sum(g.size());
      for (std::size_t c = 0; c < cv.size(); ++c) {
        for (const auto& e : cv.entries(c)) sum[e.index] += e.weight;
      }
      const double r_in = std::ldexp(1.0, k - 2), r_out = std::ldexp(1.0, k + 2);
      const WaveTable& w = wave_table(g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (w.norm[i] < r_in || w.norm[i] > r_out) continue;
        ASSERT_NEAR(sum[i], 1.0, 1e-12) << "k=" << k << " ell=" << ell;
      }
      // Independent check through the symbol at off-grid points.
      for (double th = 0.1; th < 6.2; th += 0.7) {
        const double r = 0.5 * (r_in + r_out);
        double s = 0.0;
        for (std::size_t c = 0; c < cv.size(); ++c) {
          s += cv.symbol(c, r * std::cos(th), r * std::sin(th));
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
      EXPECT_LE(static_cast<double>(cv.size()),
                lp::CubeCover::kCountConstant * std::pow(4.0, k - ell));
    }
  }
}

TEST(CubeCover, CountForThreeOctaves) {
  GridSpec g(256, 2 * kPi);
  const int k = 5;
  const lp::CubeCover cv = lp::cube_cover(g, k - 3, k);
  EXPECT_LE(static_cast<double>(cv.size()), lp::CubeCover::kCountConstant * 64.0);
  EXPECT_GT(cv.size(), 1u);
}

TEST(CubeCover, AlmostOrthogonality) {
  GridSpec g(128, 2 * kPi);
  const int k = 4;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ScalarField fk = lp::lp_project(random_band_limited(g, 63, seed, true), k);
    const double base = std::pow(l2_norm(fk), 2);
    for (int ell = 0; ell < k; ++ell) {
      const lp::CubeCover cv = lp::cube_cover(g, ell, k);
      double s = 0.0;
      for (std::size_t c = 0; c < cv.size(); ++c) {
        s += std::pow(l2_norm(lp::cube_project(fk, cv, c)), 2);
      }
      EXPECT_GE(s / base, lp::CubeCover::kOrthogonalityLower);
      EXPECT_LE(s / base, lp::CubeCover::kOrthogonalityUpper + 1e-12);
    }
  }
}

TEST(CubeCover, SquareFunctionMatchesPointwiseSum) {
  GridSpec g(64, 2 * kPi);
  ScalarField f = lp::lp_project(random_band_limited(g, 31, 8, true), 3);
  for (int ell = 0; ell <= 3; ++ell) {
    const lp::CubeCover cv = lp::cube_cover(g, ell, 3);
    std::vector<double> acc(g.size());
    for (std::size_t c = 0; c < cv.size(); ++c) {
      ScalarField p = to_physical(lp::cube_project(f, cv, c));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(p[i]);
    }
    ScalarField sf = lp::square_function(f, cv);
    double err = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      err = std::max(err, std::abs(sf[i].real() - std::sqrt(acc[i])));
      mx = std::max(mx, std::sqrt(acc[i]));
    }
    EXPECT_LE(err, 1e-10 * mx) << "ell=" << ell;
  }
}

lp::FieldSeries constant_series(const ScalarField& f, int samples, double t1) {
  lp::FieldSeries s;
  s.dt = t1 / (samples - 1);
  s.samples.assign(samples, f);
  return s;
}

TEST(SNorms, ZeroAndScaling) {
  GridSpec g(32, 2 * kPi);
  lp::FieldSeries z = constant_series(ScalarField(g, Representation::spectral), 5, 1.0);
  EXPECT_EQ(lp::s_gamma_norm(z, 0.9).value, 0.0);
  EXPECT_EQ(lp::s0k_norm(z, 1), 0.0);
  EXPECT_THROW(lp::s0k_norm(lp::FieldSeries{}, 1), EmptyTrajectory);

  lp::FieldSeries s;
  s.dt = 1.0 / 8;
  lp::FieldSeries s3 = s;
  for (int i = 0; i < 9; ++i) {
    ScalarField f = random_band_limited(g, 7, 40 + i, true);
    s.samples.push_back(f);
    s3.samples.push_back(-3.0 * f);
  }
  const double a = lp::s_gamma_norm(s, 0.8).value;
  const double b = lp::s_gamma_norm(s3, 0.8).value;
  EXPECT_NEAR(b / a, 3.0, 1e-12);
}

TEST(SNorms, DominatesLInfinityL2) {
  GridSpec g(64, 2 * kPi);
  ScalarField f = random_band_limited(g, 20, 17, true);
  lp::FieldSeries s = constant_series(f, 9, 1.0);
  EXPECT_GE(lp::s0k_norm(s, 2), l2_norm(lp::lp_project(f, 2)));
}

TEST(SNorms, SupremumMatchesExhaustiveScales) {
  GridSpec g(64, 2 * kPi);
  lp::FieldSeries s;
  s.dt = 0.25;
  for (int i = 0; i < 5; ++i) {
    s.samples.push_back(random_band_limited(g, 20, 70 + i, true));
  }
  const int k = 2;
  const lp::BandNorm bn = lp::s0k_detail(s, k);
  double best = 0.0, linf = 0.0;
  for (const auto& f : s.samples) linf = std::max(linf, l2_norm(lp::lp_project(f, k)));
  for (int ell = lp::finest_scale(g); ell <= k; ++ell) {
    const lp::CubeCover cv = lp::cube_cover(g, ell, k);
    std::vector<double> sup;
    for (const auto& f : s.samples) {
      ScalarField fk = lp::lp_project(f, k);
      std::vector<double> acc(g.size());
      for (std::size_t c = 0; c < cv.size(); ++c) {
        ScalarField p = to_physical(lp::cube_project(fk, cv, c));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(p[i]);
      }
      double m = 0.0;
      for (double v : acc) m = std::max(m, std::sqrt(v));
      sup.push_back(m);
    }
    double q = 0.0;
    for (std::size_t i = 0; i < sup.size(); ++i) {
      q += (i == 0 || i + 1 == sup.size() ? 0.5 : 1.0) * std::pow(sup[i], 4);
    }
    const double l4sq = std::sqrt(q * s.dt);
    best = std::max(best, std::ldexp(1.0, k - ell) * std::pow(2.0, -1.5 * k) * l4sq);
  }
  EXPECT_NEAR(bn.value, std::sqrt(linf * linf + best), 1e-10 * bn.value);
}

TEST(SNorms, ConstantPlateauWaveMatchesSobolev) {
  GridSpec g(64, 2 * kPi);
  lp::FieldSeries s = constant_series(modes(g, {{0, 4}}), 65, 1.0);
  const lp::TrajectoryNormReport r = lp::s_gamma_norm(s, 0.0);
  const double h0 = lp::sobolev_norm(s.samples[0], 0.0, false);
  EXPECT_GE(r.value, h0);
  EXPECT_LE(r.value, 1.05 * h0);
  EXPECT_EQ(r.samples, 65u);
  EXPECT_EQ(r.quadrature, "trapezoid");
}

TEST(SNorms, TimeNorms) {
  EXPECT_EQ(lp::time_lq({1.0, 3.0, 2.0}, 0.5, INFINITY), 3.0);
  // Trapezoid of a constant is exact.
  EXPECT_NEAR(lp::time_lq({2.0, 2.0, 2.0, 2.0}, 1.0 / 3, 4.0), 2.0, 1e-15);
}

TEST(SNorms, JsonReportHasBandsAndQuadrature) {
  GridSpec g(32, 2 * kPi);
  lp::FieldSeries s = constant_series(random_band_limited(g, 7, 3, true), 3, 1.0);
  const std::string js = lp::to_json(lp::s_gamma_norm(s, 0.9));
  EXPECT_NE(js.find("\"gamma\": 0.9"), std::string::npos);
  EXPECT_NE(js.find("\"bands\""), std::string::npos);
  EXPECT_NE(js.find("\"trapezoid\""), std::string::npos);
}

TEST(Trichotomy, ReconstructsBandLimitedProduct) {
  GridSpec g(64, 2 * kPi);
  ScalarField f = random_band_limited(g, 5, 1, true);
  ScalarField h = random_band_limited(g, 5, 2, true);
  const lp::Trichotomy t = lp::trichotomy_split(f, h);
  ScalarField total = t.lh + t.hl + t.hh + t.remainder;
  ScalarField direct = lp::band_sum(padded_product(f, h));
  EXPECT_LT(rel_l2(total, direct), 1e-8);
}

TEST(Trichotomy, LowTimesHigh) {
  GridSpec g(64, 2 * kPi);
  ScalarField lo = modes(g, {{1, 0}, {0, -1}});
  ScalarField hi = modes(g, {{12, 3}, {-9, 8}});
  const lp::Trichotomy t = lp::trichotomy_split(lo, hi);
  EXPECT_EQ(l2_norm(t.hl), 0.0);
  EXPECT_EQ(l2_norm(t.hh), 0.0);
  EXPECT_LT(rel_l2(t.lh, lp::band_sum(padded_product(lo, hi))), 1e-8);
}

TEST(Trichotomy, SwappingInputsSwapsSides) {
  GridSpec g(64, 2 * kPi);
  ScalarField f = random_band_limited(g, 6, 11, true);
  ScalarField h = random_band_limited(g, 3, 12, true);
  const lp::Trichotomy a = lp::trichotomy_split(f, h);
  const lp::Trichotomy b = lp::trichotomy_split(h, f);
  EXPECT_LT(l2_norm(a.lh - b.hl), 1e-12 * l2_norm(a.lh + a.hl));
  EXPECT_LT(l2_norm(a.hl - b.lh), 1e-12 * l2_norm(a.lh + a.hl));
  const lp::Trichotomy s = lp::trichotomy_split(f, f);
  EXPECT_LT(l2_norm(s.lh - s.hl), 1e-12 * l2_norm(s.lh + s.hl));
}

TEST(Trichotomy, RejectsNonBandLimitedInput) {
  GridSpec g(64, 2 * kPi);
  ScalarField c = modes(g, {{0, 0}, {1, 1}});
  EXPECT_THROW(lp::trichotomy_split(c, c), BandOutOfRange);
}

}  // namespace
}  // namespace cshlab
