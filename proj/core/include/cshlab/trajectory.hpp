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

#ifndef CSHLAB_TRAJECTORY_HPP_
#define CSHLAB_TRAJECTORY_HPP_

#include <string>
#include <vector>

#include "cshlab/csh_model.hpp"

namespace cshlab {

struct DiagnosticsRow {
  double t = 0.0;
  double energy = 0.0;
  double charge = 0.0;
  double charge_rate_residual = 0.0;
  double div_a_l2 = 0.0;
  double curl_constraint_l2 = 0.0;
  double phi_h1 = 0.0;
  double u_l2 = 0.0;
  double a0_linf = 0.0;
  int picard_iters = 0;
  double picard_residual = 0.0;
  std::string scheme;
};

// States are kept every `stride` steps of size `dt`, so states[i] sits at
// t0 + i * stride * dt. Rows carry their own times.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  long stride = 1;
  std::vector<CshState> states;
  std::vector<DiagnosticsRow> rows;

  double sample_spacing() const { return dt * static_cast<double>(stride); }
};

}  // namespace cshlab

#endif  // CSHLAB_TRAJECTORY_HPP_
