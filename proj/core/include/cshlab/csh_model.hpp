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

// State, potential and elliptic gauge solves for the Chern-Simons-Higgs
// system in Coulomb gauge on the torus.
//
// Sign conventions. D_mu = d_mu - i A_mu, u = D_t phi and
// rho = Im(phi conj(u)). The spatial potentials solve
//   div a = 0,   curl a = d1 a2 - d2 a1 = sigma * rho,
// i.e. a1 = sigma R2 rho, a2 = -sigma R1 rho with R_j = (-Lap)^-1 d_j.
// The temporal potential is a0 = a01 + a02 with
//   Lap a01 = -d1 Im(phi conj(d2 phi)) + d2 Im(phi conj(d1 phi)),
//   Lap a02 = -d1 (a2 |phi|^2) + d2 (a1 |phi|^2).
// All potentials have zero mean.

#ifndef CSHLAB_CSH_MODEL_HPP_
#define CSHLAB_CSH_MODEL_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "cshlab/spectral_grid.hpp"

namespace cshlab {

struct PotentialSpec {
  double mass = 0.0;
  // V(r) = sum_j v_coeffs[j-1] r^j; no constant term.
  std::vector<double> v_coeffs;
  // Witness for V(r) >= -alpha^2 r, unset when unverified.
  std::optional<double> alpha;

  double V(double r) const;
  double dV(double r) const;
  int degree() const { return static_cast<int>(v_coeffs.size()); }
};

// V(r) = r (1 - r) / 16.
PotentialSpec self_dual_potential(double mass = 0.0);

// Smallest alpha >= 0 with V(r) + alpha^2 r >= 0 at `samples` uniform points
// of (0, r_max]. A necessary check on the sampled range, not a proof.
double fit_alpha(const PotentialSpec& pot, double r_max, int samples = 100001);
bool alpha_holds(const PotentialSpec& pot, double alpha, double r_max,
                 int samples = 100001);

struct GaugeConvention {
  int sigma = -1;
  // When false all potentials are forced to zero (linear test problems).
  bool couple = true;
};

struct Provenance {
  long step = 0;
  int picard_iters = 0;
  double picard_residual = 0.0;
  std::vector<double> picard_deltas;
  bool guard_warning = false;
};

struct CshState {
  double t = 0.0;
  ScalarField phi;  // complex, spectral
  ScalarField u;    // complex, spectral
  ScalarField a0;   // real, spectral
  ScalarField a1;
  ScalarField a2;
  // Curl of a carried by its own evolution law, d_t b = -div J. When
  // present, constraint diagnostics measure it against sigma * rho.
  std::optional<ScalarField> transported_curl;
  Provenance provenance;

  const GridSpec& grid() const { return phi.grid(); }
};

struct A0Parts {
  ScalarField a0;
  ScalarField a01;
  ScalarField a02;
};

struct GaugeFields {
  ScalarField a0;
  ScalarField a1;
  ScalarField a2;
};

// Div-curl solve with curl a = sigma * Im(f conj(g)); sigma = +1 is the
// initial-data convention.
std::pair<ScalarField, ScalarField> coulomb_initial_data(const ScalarField& f,
                                                         const ScalarField& g,
                                                         int sigma = 1);
std::pair<ScalarField, ScalarField> solve_spatial_potentials(
    const ScalarField& phi, const ScalarField& u, int sigma);
A0Parts solve_a0(const ScalarField& phi, const ScalarField& a1,
                 const ScalarField& a2);
GaugeFields solve_gauge(const ScalarField& phi, const ScalarField& u,
                        const GaugeConvention& conv);

// Current J_j = Im(phi conj(D_j phi)), dealiased and real.
std::pair<ScalarField, ScalarField> current(const ScalarField& phi,
                                            const ScalarField& a1,
                                            const ScalarField& a2);
// Im(phi conj(u)), dealiased and real.
ScalarField charge_density(const ScalarField& phi, const ScalarField& u);
ScalarField divergence(const ScalarField& a1, const ScalarField& a2);
ScalarField curl(const ScalarField& a1, const ScalarField& a2);

// Both sides of d1(f d2 g) - d2(f d1 g) = -d1(d2 f g) + d2(d1 f g), each
// evaluated with its own products and derivatives.
std::pair<ScalarField, ScalarField> null_form_pair(const ScalarField& phi,
                                                   const ScalarField& psi);

// Gauge change by chi: phi -> exp(-i chi) phi, u -> exp(-i chi) u,
// a0 -> a0 - chi_t, a_j -> a_j - d_j chi. With D = d - iA this is the
// covariant pairing for the phase exp(-i chi).
CshState gauge_transform(const CshState& state, const ScalarField& chi,
                         const ScalarField& chi_t);

// phi V'(|phi|^2), dealiased.
ScalarField eval_w(const ScalarField& phi, const PotentialSpec& pot);

// Builds a state from (phi, u): dealiases both and solves the gauge.
CshState make_state(const ScalarField& phi, const ScalarField& u,
                    const GaugeConvention& conv, double t = 0.0);

// Initial data generators.
struct FourierMode {
  int m1 = 0;
  int m2 = 0;
  cplx amplitude = 0.0;
};

ScalarField gaussian_bump(const GridSpec& grid, cplx amplitude, double width,
                          double c1, double c2);
ScalarField fourier_modes(const GridSpec& grid,
                          const std::vector<FourierMode>& modes);
ScalarField vortex_like(const GridSpec& grid, int winding, double core,
                        double amplitude = 1.0);

}  // namespace cshlab

#endif  // CSHLAB_CSH_MODEL_HPP_
