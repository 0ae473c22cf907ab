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

// Littlewood-Paley projections, frequency-cube covers, square functions and
// the space-time norms built from them.
//
// Cutoff profile. With psi(t) = exp(-1/t) for t > 0 (0 otherwise) and
// h(t) = psi(t) / (psi(t) + psi(1 - t)):
//   chi(r)   = h((4 - r) / 2)             1 on r <= 2, 0 on r >= 4
//   P_k      = chi(|xi| / 2^k) - chi(|xi| / 2^(k-1))
//   beta(x)  = h(1 - |x|)                 1D partition of unity on Z
//   chi_c    = beta(xi1 / 2^l - c1) beta(xi2 / 2^l - c2)
// Sum_c chi_c^2 lies in [1/4, 1], so sum_c ||P_c f||^2 / ||f||^2 is in
// [1/4, 1]. Cube counts obey #C(l,k) <= 121 * 4^(k-l).
//
// The dyadic index is anchored at angular frequency 1 (2^0 = 1).

#ifndef CSHLAB_LP_TOOLKIT_HPP_
#define CSHLAB_LP_TOOLKIT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "cshlab/spectral_grid.hpp"

namespace cshlab::lp {

double smooth_step(double t);
double bump(double r);
double low_symbol(int k, double xi_norm);
double band_symbol(int k, double xi_norm);

struct BandRange {
  int k_min = 0;
  int k_max = 0;
};

// Bands k_min..k_max whose projections sum to the identity on
// 2^(k_min+1) <= |xi| <= 2^(k_max+1); k_max is the last band whose support
// stays below the Nyquist frequency.
BandRange resolvable_bands(const GridSpec& grid);
// Smallest cube scale, the first l with 2^l >= 2 pi / L.
int finest_scale(const GridSpec& grid);
// Throws BandOutOfRange if 2^(k+2) exceeds the Nyquist frequency.
void require_band(const GridSpec& grid, int k);

ScalarField lp_project(const ScalarField& f, int k);
ScalarField lp_project_leq(const ScalarField& f, int k);

// ||<grad>^s f|| or ||grad|^s f|| (zero mode dropped when homogeneous).
double sobolev_norm(const ScalarField& f, double s, bool homogeneous);

struct Cube {
  int c1 = 0;
  int c2 = 0;
};

class CubeCover {
 public:
  static constexpr double kCountConstant = 121.0;
  static constexpr double kOrthogonalityLower = 0.25;
  static constexpr double kOrthogonalityUpper = 1.0;

  // One retained grid mode of a cube and its cutoff weight.
  struct Entry {
    std::size_t index;
    int m1, m2;
    double weight;
  };

  CubeCover(const GridSpec& grid, int ell, int k);

  int ell() const { return ell_; }
  int k() const { return k_; }
  double side() const;
  bool singleton() const { return ell_ == k_; }
  const std::vector<Cube>& cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  const GridSpec& grid() const { return grid_; }

  // chi_c at an arbitrary frequency.
  double symbol(std::size_t c, double xi1, double xi2) const;
  // Grid modes inside the support of cube c.
  const std::vector<Entry>& entries(std::size_t c) const { return entries_[c]; }

 private:
  GridSpec grid_;
  int ell_;
  int k_;
  std::vector<Cube> cubes_;
  std::vector<std::vector<Entry>> entries_;
};

// Throws BandOutOfRange when ell > k or band k is not resolvable.
CubeCover cube_cover(const GridSpec& grid, int ell, int k);

// P_c f for a single cube.
ScalarField cube_project(const ScalarField& f, const CubeCover& cover,
                         std::size_t c);
// (sum_c |P_c f|^2)^(1/2) sampled on the grid; real physical field.
ScalarField square_function(const ScalarField& f, const CubeCover& cover);

// Uniformly sampled fields on an interval.
struct FieldSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<ScalarField> samples;

  double interval() const;
};

// L^q norm in time of uniformly spaced samples; composite trapezoid rule
// for finite q, max over samples for q = infinity.
double time_lq(const std::vector<double>& values, double dt, double q);

struct BandNorm {
  int k = 0;
  double value = 0.0;          // ||P_k phi||_{S^0_k}
  double linf_l2 = 0.0;        // ||P_k phi||_{L^inf L^2}
  double sup_term = 0.0;       // square of the cube supremum part
  int attaining_ell = 0;
  bool attained_at_lattice = false;
  std::vector<std::pair<int, double>> per_ell;  // (l, weighted term)
};

BandNorm s0k_detail(const FieldSeries& series, int k);
double s0k_norm(const FieldSeries& series, int k);

struct TrajectoryNormReport {
  double gamma = 0.0;
  double value = 0.0;
  std::vector<BandNorm> bands;
  std::string quadrature = "trapezoid";
  std::size_t samples = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double sup_sobolev = 0.0;  // max_t ||phi(t)||_{H^gamma}
};

TrajectoryNormReport s_gamma_norm(const FieldSeries& series, double gamma);
std::string to_json(const TrajectoryNormReport& report);

struct Trichotomy {
  ScalarField lh;
  ScalarField hl;
  ScalarField hh;
  ScalarField remainder;  // triples outside the three index sets
};

// Membership tests for the index sets of a product decomposition.
bool in_lh(int k0, int k1, int k2);
bool in_hl(int k0, int k1, int k2);
bool in_hh(int k0, int k1, int k2);

// Splits sum_{k0} P_{k0}(f g) over the resolvable bands. A triple lying in
// both LH and HL goes to LH when k1 < k2, to HL when k1 > k2, and half to
// each when k1 = k2; the rest go to HH or the remainder. Throws
// BandOutOfRange unless both inputs are mean-zero and band-limited.
Trichotomy trichotomy_split(const ScalarField& f, const ScalarField& g);
// sum_{k in range} P_k f.
ScalarField band_sum(const ScalarField& f);

}  // namespace cshlab::lp

#endif  // CSHLAB_LP_TOOLKIT_HPP_
