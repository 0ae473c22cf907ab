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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "cshlab/csh_model.hpp"
#include "cshlab/integrator.hpp"
#include "cshlab/lp_toolkit.hpp"
#include "cshlab/spectral_grid.hpp"

namespace cshlab {
namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(const GridSpec& g, int kmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> d(g.size());
  for (int j2 = 0; j2 < g.n(); ++j2) {
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const double re = nd(rng), im = nd(rng);
      const int m1 = g.signed_index(j1), m2 = g.signed_index(j2);
      if (std::abs(m1) > kmax || std::abs(m2) > kmax || (m1 == 0 && m2 == 0)) continue;
      d[g.flat(j1, j2)] = cplx(re, im);
    }
  }
  return ScalarField(g, Representation::spectral, ValueKind::complex, std::move(d));
}

CshState bump_state(const GridSpec& g) {
  const ScalarField phi = as_spectral(gaussian_bump(g, 1.0, 0.7, kPi, kPi));
  return make_state(phi, cplx(0.0, -1.0) * phi, GaugeConvention{});
}

void BM_FftRoundTrip(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 2 * kPi);
  const ScalarField f = to_physical(random_field(g, g.n() / 4, 1));
  for (auto _ : state) {
    ScalarField h = to_physical(to_spectral(f));
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(2)->Range(32, 256);

void BM_SolveGauge(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 2 * kPi);
  const CshState s = bump_state(g);
  for (auto _ : state) {
    GaugeFields gf = solve_gauge(s.phi, s.u, GaugeConvention{});
    benchmark::DoNotOptimize(gf);
  }
}
BENCHMARK(BM_SolveGauge)->RangeMultiplier(2)->Range(32, 128);

void BM_TwistedDuhamelStep(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 2 * kPi);
  const CshState s = bump_state(g);
  const PotentialSpec pot = self_dual_potential(1.0);
  StepConfig cfg;
  cfg.dt = 1e-3;
  for (auto _ : state) {
    CshState next = twisted_duhamel_step(s, cfg, pot);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_TwistedDuhamelStep)->RangeMultiplier(2)->Range(32, 128);

void BM_Rk4Step(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 2 * kPi);
  const CshState s = bump_state(g);
  const PotentialSpec pot = self_dual_potential(1.0);
  StepConfig cfg;
  cfg.dt = 1e-3;
  cfg.scheme = Scheme::rk4_reference;
  for (auto _ : state) {
    CshState next = rk4_reference_step(s, cfg, pot);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(2)->Range(32, 128);

// Square function over the cover C(l, k) with k = 4 on a 128 grid.
void BM_SquareFunction(benchmark::State& state) {
  const GridSpec g(128, 2 * kPi);
  const int k = 4;
  const int ell = static_cast<int>(state.range(0));
  const ScalarField f = lp::lp_project(random_field(g, 40, 2), k);
  const lp::CubeCover cover = lp::cube_cover(g, ell, k);
  for (auto _ : state) {
    ScalarField sf = lp::square_function(f, cover);
    benchmark::DoNotOptimize(sf);
  }
  state.counters["cubes"] = static_cast<double>(cover.size());
}
BENCHMARK(BM_SquareFunction)->DenseRange(0, 4);

// S^gamma of a 65-sample series on a unit interval.
void BM_SGammaNorm(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 2 * kPi);
  const ScalarField f = random_field(g, g.n() / 4, 3);
  lp::FieldSeries series;
  series.dt = 1.0 / 64;
  for (int i = 0; i <= 64; ++i) {
    series.samples.push_back(apply_multiplier(f, symbols::cos_wave(i * series.dt)));
  }
  for (auto _ : state) {
    lp::TrajectoryNormReport r = lp::s_gamma_norm(series, 0.9);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SGammaNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cshlab

BENCHMARK_MAIN();
