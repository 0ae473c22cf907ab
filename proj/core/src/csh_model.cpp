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

#include "cshlab/csh_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cshlab/errors.hpp"

namespace cshlab {
namespace {

const Symbol& d1() {
  static const Symbol s = symbols::derivative(1);
  return s;
}
const Symbol& d2() {
  static const Symbol s = symbols::derivative(2);
  return s;
}
const Symbol& riesz1() {
  static const Symbol s = symbols::riesz(1);
  return s;
}
const Symbol& riesz2() {
  static const Symbol s = symbols::riesz(2);
  return s;
}
const Symbol& invlap() {
  static const Symbol s = symbols::inv_lap();
  return s;
}

ScalarField zero_real(const GridSpec& g) {
  return ScalarField(g, Representation::spectral, ValueKind::real);
}

// Im(a conj(b)) dealiased, as a real spectral field.
ScalarField im_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField pa = as_physical(a);
  ScalarField pb = as_physical(b);
  std::vector<cplx> d(a.grid().size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (pa[i] * std::conj(pb[i])).imag();
  }
  return dealias(to_spectral(ScalarField(a.grid(), Representation::physical,
                                         ValueKind::real, std::move(d))));
}

ScalarField modulus_squared(const ScalarField& phi) {
  ScalarField p = as_physical(phi);
  std::vector<cplx> d(p.grid().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(p[i]);
  return dealias(to_spectral(ScalarField(p.grid(), Representation::physical,
                                         ValueKind::real, std::move(d))));
}

// inv_lap(-d1 x2 + d2 x1) for real spectral inputs.
ScalarField curl_poisson(const ScalarField& x1, const ScalarField& x2) {
  ScalarField rhs = apply_multiplier(x1, d2()) - apply_multiplier(x2, d1());
  return apply_multiplier(rhs, invlap()).with_kind(ValueKind::real);
}

struct CurrentParts {
  ScalarField x1, x2;  // Im(phi conj(d_j phi))
  ScalarField y1, y2;  // a_j |phi|^2
};

CurrentParts current_parts(const ScalarField& phi, const ScalarField& a1,
                           const ScalarField& a2) {
  require_same_grid(phi, a1);
  require_same_grid(phi, a2);
  ScalarField p = as_physical(phi);
  ScalarField dp1 = to_physical(apply_multiplier(phi, d1()));
  ScalarField dp2 = to_physical(apply_multiplier(phi, d2()));
  ScalarField dens = modulus_squared(p);
  return CurrentParts{im_product(p, dp1), im_product(p, dp2),
                      dealiased_product(a1, dens).with_kind(ValueKind::real),
                      dealiased_product(a2, dens).with_kind(ValueKind::real)};
}

}  // namespace

double PotentialSpec::V(double r) const {
  double acc = 0.0;
  for (std::size_t j = v_coeffs.size(); j-- > 0;) acc = (acc + v_coeffs[j]) * r;
  return acc;
}

double PotentialSpec::dV(double r) const {
  double acc = 0.0;
  for (std::size_t j = v_coeffs.size(); j-- > 0;) {
    acc = acc * r + static_cast<double>(j + 1) * v_coeffs[j];
  }
  return acc;
}

PotentialSpec self_dual_potential(double mass) {
  PotentialSpec p;
  p.mass = mass;
  p.v_coeffs = {1.0 / 16.0, -1.0 / 16.0};
  return p;
}

double fit_alpha(const PotentialSpec& pot, double r_max, int samples) {
  if (!(r_max > 0.0) || samples < 2) {
    throw InvalidArgument("fit_alpha needs r_max > 0 and at least 2 samples");
  }
  double a2 = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double r = r_max * i / (samples - 1);
    a2 = std::max(a2, -pot.V(r) / r);
  }
  return std::sqrt(a2);
}

bool alpha_holds(const PotentialSpec& pot, double alpha, double r_max,
                 int samples) {
  for (int i = 0; i < samples; ++i) {
    const double r = r_max * i / (samples - 1);
    const double v = pot.V(r) + alpha * alpha * r;
    if (v < -1e-14 * std::max(1.0, std::abs(pot.V(r)))) return false;
  }
  return true;
}

std::pair<ScalarField, ScalarField> coulomb_initial_data(const ScalarField& f,
                                                         const ScalarField& g,
                                                         int sigma) {
  require_same_grid(f, g);
  const ScalarField rho = im_product(f, g);
  ScalarField a1 = static_cast<double>(sigma) * apply_multiplier(rho, riesz2());
  ScalarField a2 = static_cast<double>(-sigma) * apply_multiplier(rho, riesz1());
  return {a1.with_kind(ValueKind::real), a2.with_kind(ValueKind::real)};
}

std::pair<ScalarField, ScalarField> solve_spatial_potentials(
    const ScalarField& phi, const ScalarField& u, int sigma) {
  return coulomb_initial_data(phi, u, sigma);
}

A0Parts solve_a0(const ScalarField& phi, const ScalarField& a1,
                 const ScalarField& a2) {
  const CurrentParts c = current_parts(phi, a1, a2);
  ScalarField a01 = curl_poisson(c.x1, c.x2);
  ScalarField a02 = curl_poisson(c.y1, c.y2);
  ScalarField a0 = a01 + a02;
  return A0Parts{std::move(a0), std::move(a01), std::move(a02)};
}

GaugeFields solve_gauge(const ScalarField& phi, const ScalarField& u,
                        const GaugeConvention& conv) {
  const GridSpec& g = phi.grid();
  if (!conv.couple) return GaugeFields{zero_real(g), zero_real(g), zero_real(g)};
  auto [a1, a2] = solve_spatial_potentials(phi, u, conv.sigma);
  A0Parts parts = solve_a0(phi, a1, a2);
  return GaugeFields{std::move(parts.a0), std::move(a1), std::move(a2)};
}

std::pair<ScalarField, ScalarField> current(const ScalarField& phi,
                                            const ScalarField& a1,
                                            const ScalarField& a2) {
  const CurrentParts c = current_parts(phi, a1, a2);
  return {c.x1 + c.y1, c.x2 + c.y2};
}

ScalarField charge_density(const ScalarField& phi, const ScalarField& u) {
  return im_product(phi, u);
}

ScalarField divergence(const ScalarField& a1, const ScalarField& a2) {
  return apply_multiplier(a1, d1()) + apply_multiplier(a2, d2());
}

ScalarField curl(const ScalarField& a1, const ScalarField& a2) {
  return apply_multiplier(a2, d1()) - apply_multiplier(a1, d2());
}

std::pair<ScalarField, ScalarField> null_form_pair(const ScalarField& phi,
                                                   const ScalarField& psi) {
  require_same_grid(phi, psi);
  const ScalarField lhs =
      apply_multiplier(dealiased_product(phi, apply_multiplier(psi, d2())), d1()) -
      apply_multiplier(dealiased_product(phi, apply_multiplier(psi, d1())), d2());
  const ScalarField rhs =
      apply_multiplier(dealiased_product(apply_multiplier(phi, d1()), psi), d2()) -
      apply_multiplier(dealiased_product(apply_multiplier(phi, d2()), psi), d1());
  return {lhs, rhs};
}

CshState gauge_transform(const CshState& state, const ScalarField& chi,
                         const ScalarField& chi_t) {
  require_same_grid(state.phi, chi);
  require_same_grid(state.phi, chi_t);
  ScalarField c = as_physical(chi);
  std::vector<cplx> phase(c.grid().size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    phase[i] = std::exp(cplx(0.0, -c[i].real()));
  }
  const ScalarField rot(c.grid(), Representation::physical, ValueKind::complex,
                        std::move(phase));
  const ScalarField chi_s = as_spectral(chi).with_kind(ValueKind::real);
  CshState out = state;
  out.phi = to_spectral(pointwise_product(state.phi, rot));
  out.u = to_spectral(pointwise_product(state.u, rot));
  out.a0 = state.a0 - as_spectral(chi_t).with_kind(ValueKind::real);
  out.a1 = state.a1 - apply_multiplier(chi_s, d1());
  out.a2 = state.a2 - apply_multiplier(chi_s, d2());
  return out;
}

ScalarField eval_w(const ScalarField& phi, const PotentialSpec& pot) {
  ScalarField p = as_physical(phi);
  std::vector<cplx> d(p.grid().size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = p[i] * pot.dV(std::norm(p[i]));
  }
  return dealias(to_spectral(ScalarField(p.grid(), Representation::physical,
                                         ValueKind::complex, std::move(d))));
}

CshState make_state(const ScalarField& phi, const ScalarField& u,
                    const GaugeConvention& conv, double t) {
  require_same_grid(phi, u);
  ScalarField p = dealias(phi).with_kind(ValueKind::complex);
  ScalarField v = dealias(u).with_kind(ValueKind::complex);
  GaugeFields gf = solve_gauge(p, v, conv);
  return CshState{t,
                  std::move(p),
                  std::move(v),
                  std::move(gf.a0),
                  std::move(gf.a1),
                  std::move(gf.a2),
                  std::nullopt,
                  Provenance{}};
}

ScalarField gaussian_bump(const GridSpec& grid, cplx amplitude, double width,
                          double c1, double c2) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian width must be positive");
  const double l = grid.length();
  auto f = [&](double x1, double x2) {
    double acc = 0.0;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double d1v = x1 - c1 + i * l;
        const double d2v = x2 - c2 + j * l;
        acc += std::exp(-(d1v * d1v + d2v * d2v) / (2.0 * width * width));
      }
    }
    return amplitude * acc;
  };
  return dealias(ScalarField::from_function(grid, f));
}

ScalarField fourier_modes(const GridSpec& grid,
                          const std::vector<FourierMode>& modes) {
  std::vector<cplx> d(grid.size());
  const int half = grid.n() / 2;
  for (const auto& m : modes) {
    if (m.m1 < -half || m.m1 >= half || m.m2 < -half || m.m2 >= half) {
      throw InvalidArgument("fourier mode outside the grid range");
    }
    d[grid.flat(grid.wrap_index(m.m1), grid.wrap_index(m.m2))] += m.amplitude;
  }
  return ScalarField(grid, Representation::spectral, ValueKind::complex,
                     std::move(d));
}

ScalarField vortex_like(const GridSpec& grid, int winding, double core,
                        double amplitude) {
  if (!(core > 0.0)) throw InvalidArgument("vortex core must be positive");
  const double l = grid.length();
  const double envelope = l / 10.0;
  auto wrap = [l](double x) { return x - l * std::floor(x / l + 0.5); };
  auto f = [&](double x1, double x2) {
    const cplx z(wrap(x1 - 0.5 * l), wrap(x2 - 0.5 * l));
    const double r2 = std::norm(z);
    const cplx w = (winding >= 0 ? z : std::conj(z)) / std::sqrt(r2 + core * core);
    return amplitude * std::pow(w, std::abs(winding)) *
           std::exp(-r2 / (2.0 * envelope * envelope));
  };
  return dealias(ScalarField::from_function(grid, f));
}

}  // namespace cshlab
