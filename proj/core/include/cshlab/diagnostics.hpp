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

#ifndef CSHLAB_DIAGNOSTICS_HPP_
#define CSHLAB_DIAGNOSTICS_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cshlab/csh_model.hpp"
#include "cshlab/trajectory.hpp"

namespace cshlab {

// 1/2 integral of |u|^2 + |D_1 phi|^2 + |D_2 phi|^2 + m|phi|^2 + V(|phi|^2).
double energy(const CshState& state, const PotentialSpec& pot);

// Integral of |phi|^2.
double charge(const CshState& state);

// 2 * integral of Re(phi conj(u)), the exact time derivative of charge().
double charge_rate(const CshState& state);

// Mismatch between a central difference of charge() over neighbouring stored
// states and charge_rate() at state i, normalized by max(1, charge).
double charge_identity_residual(const Trajectory& traj, std::size_t i);

struct ConstraintResiduals {
  double div_a_l2 = 0.0;
  double curl_constraint_l2 = 0.0;
  // L^2 norm of the mean-free part of sigma * Im(phi conj(u)).
  double curl_reference_l2 = 0.0;
};

// The curl residual compares the transported curl when present (curl a
// otherwise) against the mean-free part of sigma * Im(phi conj(u)). The
// torus cannot carry a curl with nonzero mean.
ConstraintResiduals constraint_residuals(const CshState& state, int sigma);

struct MonitorReference {
  double t0 = 0.0;
  double energy0 = 0.0;
  double phi_l2_0 = 0.0;
};

struct AprioriReport {
  double lhs = 0.0;    // ||u||^2 + sum_j ||D_j phi||^2 + m ||phi||^2
  double rhs = 0.0;    // 2 E + alpha^2 ||phi||^2
  double slack = 0.0;  // rhs - lhs
  bool holds = true;
  // Growth envelope for ||phi||_{L^2}, only when m = 0.
  std::optional<double> envelope;
  bool envelope_ok = true;
};

AprioriReport apriori_monitor(const CshState& state, const PotentialSpec& pot,
                              const MonitorReference& ref);

DiagnosticsRow make_row(const CshState& state, const PotentialSpec& pot,
                        int sigma, const std::string& scheme,
                        double charge_rate_residual);

const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRow& row);
std::vector<DiagnosticsRow> read_csv(const std::string& text);

}  // namespace cshlab

#endif  // CSHLAB_DIAGNOSTICS_HPP_
