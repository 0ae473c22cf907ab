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

#include "cshlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cshlab/errors.hpp"
#include "cshlab/lp_toolkit.hpp"

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

struct CovariantTerms {
  double u2 = 0.0;
  double dphi2 = 0.0;  // sum_j ||D_j phi||^2
  double phi2 = 0.0;
  double v_int = 0.0;
};

CovariantTerms covariant_terms(const CshState& s, const PotentialSpec& pot) {
  const ScalarField p = as_physical(s.phi);
  const ScalarField up = as_physical(s.u);
  const ScalarField g1 = to_physical(apply_multiplier(s.phi, d1()));
  const ScalarField g2 = to_physical(apply_multiplier(s.phi, d2()));
  const ScalarField b1 = as_physical(s.a1);
  const ScalarField b2 = as_physical(s.a2);
  const cplx i(0.0, 1.0);
  CovariantTerms t;
  for (std::size_t j = 0; j < p.data().size(); ++j) {
    const double r = std::norm(p[j]);
    t.u2 += std::norm(up[j]);
    t.dphi2 += std::norm(g1[j] - i * b1[j].real() * p[j]) +
               std::norm(g2[j] - i * b2[j].real() * p[j]);
    t.phi2 += r;
    t.v_int += pot.V(r);
  }
  const double w = s.grid().cell_area();
  t.u2 *= w;
  t.dphi2 *= w;
  t.phi2 *= w;
  t.v_int *= w;
  return t;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double energy(const CshState& state, const PotentialSpec& pot) {
  const CovariantTerms t = covariant_terms(state, pot);
  return 0.5 * (t.u2 + t.dphi2 + pot.mass * t.phi2 + t.v_int);
}

double charge(const CshState& state) {
  const double n = l2_norm(state.phi);
  return n * n;
}

double charge_rate(const CshState& state) {
  return 2.0 * inner_real(state.phi, state.u);
}

double charge_identity_residual(const Trajectory& traj, std::size_t i) {
  const std::size_t m = traj.states.size();
  if (m < 3 || i < 1 || i + 1 >= m) {
    throw IndexOutOfRange("charge identity needs 1 <= i <= M-2 stored states");
  }
  const double h = traj.sample_spacing();
  const double c = charge(traj.states[i]);
  const double fd = (charge(traj.states[i + 1]) - charge(traj.states[i - 1])) /
                    (2.0 * h);
  return std::abs(fd - charge_rate(traj.states[i])) / std::max(1.0, c);
}

ConstraintResiduals constraint_residuals(const CshState& state, int sigma) {
  ConstraintResiduals r;
  r.div_a_l2 = l2_norm(divergence(state.a1, state.a2));
  const ScalarField b =
      state.transported_curl ? as_spectral(*state.transported_curl)
                             : curl(state.a1, state.a2);
  ScalarField rho =
      static_cast<double>(sigma) * charge_density(state.phi, state.u);
  std::vector<cplx> d(rho.data().begin(), rho.data().end());
  d[0] = 0.0;
  rho = ScalarField(rho.grid(), Representation::spectral, ValueKind::real,
                    std::move(d));
  r.curl_constraint_l2 = l2_norm(b - rho);
  r.curl_reference_l2 = l2_norm(rho);
  return r;
}

AprioriReport apriori_monitor(const CshState& state, const PotentialSpec& pot,
                              const MonitorReference& ref) {
  if (!pot.alpha) throw AlphaUnset("apriori monitor needs alpha");
  const double a2 = *pot.alpha * *pot.alpha;
  const CovariantTerms t = covariant_terms(state, pot);
  AprioriReport rep;
  rep.lhs = t.u2 + t.dphi2 + pot.mass * t.phi2;
  const double e = 0.5 * (rep.lhs + t.v_int);
  rep.rhs = 2.0 * e + a2 * t.phi2;
  rep.slack = rep.rhs - rep.lhs;
  const double tol = 1e-12 * std::max(1.0, std::abs(rep.rhs));
  rep.holds = rep.slack >= -tol;
  if (pot.mass == 0.0) {
    // d/dt ||phi|| <= ||u|| <= sqrt(2 E0 + alpha^2 ||phi||^2).
    const double c = std::max(0.0, 2.0 * ref.energy0);
    const double dt = state.t - ref.t0;
    const double y0 = ref.phi_l2_0;
    const double alpha = std::sqrt(a2);
    double env;
    if (alpha == 0.0) {
      env = y0 + std::sqrt(c) * dt;
    } else if (c == 0.0) {
      env = y0 * std::exp(alpha * dt);
    } else {
      const double s = std::sqrt(c) / alpha;
      env = s * std::sinh(std::asinh(y0 / s) + alpha * dt);
    }
    rep.envelope = env;
    rep.envelope_ok = std::sqrt(t.phi2) <= env * (1.0 + 1e-9) + 1e-300;
  }
  return rep;
}

DiagnosticsRow make_row(const CshState& state, const PotentialSpec& pot,
                        int sigma, const std::string& scheme,
                        double charge_rate_residual) {
  DiagnosticsRow row;
  row.t = state.t;
  row.energy = energy(state, pot);
  row.charge = charge(state);
  row.charge_rate_residual = charge_rate_residual;
  const ConstraintResiduals c = constraint_residuals(state, sigma);
  row.div_a_l2 = c.div_a_l2;
  row.curl_constraint_l2 = c.curl_constraint_l2;
  row.phi_h1 = lp::sobolev_norm(state.phi, 1.0, false);
  row.u_l2 = l2_norm(state.u);
  row.a0_linf = linf_norm(state.a0);
  row.picard_iters = state.provenance.picard_iters;
  row.picard_residual = state.provenance.picard_residual;
  row.scheme = scheme;
  return row;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",        "energy",           "charge", "charge_rate_residual",
      "div_a_l2", "curl_constraint_l2", "phi_h1", "u_l2",
      "a0_linf",  "picard_iters",     "picard_residual", "scheme"};
  return cols;
}

void write_csv_header(std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
}

void write_csv_row(std::ostream& os, const DiagnosticsRow& r) {
  os << fmt17(r.t) << ',' << fmt17(r.energy) << ',' << fmt17(r.charge) << ','
     << fmt17(r.charge_rate_residual) << ',' << fmt17(r.div_a_l2) << ','
     << fmt17(r.curl_constraint_l2) << ',' << fmt17(r.phi_h1) << ','
     << fmt17(r.u_l2) << ',' << fmt17(r.a0_linf) << ',' << r.picard_iters
     << ',' << fmt17(r.picard_residual) << ',' << r.scheme << '\n';
}

std::vector<DiagnosticsRow> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty diagnostics csv");
  {
    std::ostringstream hdr;
    write_csv_header(hdr);
    std::string want = hdr.str();
    want.pop_back();
    if (line != want) throw FormatError("unexpected diagnostics csv header");
  }
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != csv_columns().size()) {
      throw FormatError("diagnostics csv row has wrong column count");
    }
    try {
      DiagnosticsRow r;
      r.t = std::stod(f[0]);
      r.energy = std::stod(f[1]);
      r.charge = std::stod(f[2]);
      r.charge_rate_residual = std::stod(f[3]);
      r.div_a_l2 = std::stod(f[4]);
      r.curl_constraint_l2 = std::stod(f[5]);
      r.phi_h1 = std::stod(f[6]);
      r.u_l2 = std::stod(f[7]);
      r.a0_linf = std::stod(f[8]);
      r.picard_iters = std::stoi(f[9]);
      r.picard_residual = std::stod(f[10]);
      r.scheme = f[11];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw FormatError("diagnostics csv cell is not numeric");
    }
  }
  return rows;
}

}  // namespace cshlab
