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

#ifndef CSHLAB_INTEGRATOR_HPP_
#define CSHLAB_INTEGRATOR_HPP_

#include <functional>
#include <string>
#include <utility>

#include "cshlab/csh_model.hpp"
#include "cshlab/trajectory.hpp"

namespace cshlab {

enum class Scheme { twisted_duhamel, rk4_reference };
enum class Quadrature { trapezoid, midpoint };

std::string to_string(Scheme s);
std::string to_string(Quadrature q);
Scheme parse_scheme(const std::string& s);
Quadrature parse_quadrature(const std::string& s);

struct StepConfig {
  double dt = 1e-3;
  int picard_max = 8;
  double picard_tol = 1e-12;
  Quadrature quadrature = Quadrature::trapezoid;
  Scheme scheme = Scheme::twisted_duhamel;
  // Steps with dt * ||a0||_inf^2 above this are flagged in provenance.
  double delta0_guard = 1.0;
  GaugeConvention gauge;

  // Throws InvalidArgument.
  void validate() const;
};

// Free wave propagation by time t of position f and velocity g.
std::pair<ScalarField, ScalarField> half_wave(const ScalarField& f,
                                              const ScalarField& g, double t);

// Re-solves a1, a2, a0 from (phi, u). Transported curl and provenance are
// carried over unchanged.
CshState refresh_gauge(const CshState& state, const GaugeConvention& conv);

// F_tot built from the gauge fields cached in the state.
ScalarField nonlinearity_f(const CshState& state, const PotentialSpec& pot);

CshState twisted_duhamel_step(const CshState& state, const StepConfig& cfg,
                              const PotentialSpec& pot);
CshState rk4_reference_step(const CshState& state, const StepConfig& cfg,
                            const PotentialSpec& pot);
CshState step(const CshState& state, const StepConfig& cfg,
              const PotentialSpec& pot);

struct EvolveOptions {
  long diag_every = 1;
  // Stride between stored states; 0 keeps only the first and last.
  long store_every = 1;
  // Called after every accepted step, including step 0.
  std::function<void(const CshState&, long)> on_step;
};

enum class AbortKind { none, picard_divergence, non_finite };

struct EvolveResult {
  Trajectory trajectory;
  AbortKind abort = AbortKind::none;
  std::string message;
  long abort_step = -1;
  int abort_iterations = 0;
};

// Runs ceil((t_end - t0) / dt) uniform steps. Failures end the run early and
// are reported in the result together with everything computed so far.
EvolveResult evolve_checked(const CshState& initial, const StepConfig& cfg,
                            const PotentialSpec& pot, double t_end,
                            const EvolveOptions& opts = {});

// As evolve_checked, but rethrows PicardDivergence or NonFinite.
Trajectory evolve(const CshState& initial, const StepConfig& cfg,
                  const PotentialSpec& pot, double t_end,
                  const EvolveOptions& opts = {});

}  // namespace cshlab

#endif  // CSHLAB_INTEGRATOR_HPP_
