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

#ifndef CSHLAB_TOOLS_CLI_CONFIG_HPP_
#define CSHLAB_TOOLS_CLI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cshlab/csh_model.hpp"
#include "cshlab/estimate_lab.hpp"
#include "cshlab/integrator.hpp"

namespace cshlab::cli {

// Flat `key = value` configuration. Every key has a default; unknown keys
// are rejected. Values are echoed back by to_map in a form that parses to
// the same RunConfig.
struct RunConfig {
  // grid
  int n = 64;
  double length = 6.283185307179586;
  double dealias_fraction = GridSpec::kDefaultDealias;

  // potential: self_dual | polynomial | none
  std::string potential = "self_dual";
  double mass = 1.0;
  std::vector<double> v_coeffs;  // polynomial only
  std::string alpha = "auto";    // auto | none | <number>
  double alpha_r_max = 4.0;

  int sigma = -1;
  bool couple = true;

  // initial: zero | gaussian_bump | fourier_modes | vortex_like | random |
  // snapshot
  std::string generator = "gaussian_bump";
  double amplitude = 1.0;
  double width = 0.7;
  double center1 = 3.141592653589793;
  double center2 = 3.141592653589793;
  int winding = 1;
  double core = 0.5;
  int kmax = 4;
  std::vector<FourierMode> modes;           // added to phi
  double omega = 1.0;                       // u = -i omega phi + ...
  std::vector<FourierMode> velocity_modes;  // added to u
  std::string snapshot;

  // step
  double dt = 1e-3;
  std::string scheme = "twisted_duhamel";
  int picard_max = 8;
  double picard_tol = 1e-12;
  std::string quadrature = "trapezoid";
  double delta0_guard = 1.0;

  // run
  double t_end = 1.0;
  long diag_every = 1;
  long snapshot_every = 0;  // 0 writes the first and last state only
  std::string output = "out";
  std::uint64_t seed = 20260101;

  // verify
  int null_form_pairs = 100;
  std::vector<std::string> estimate_only;  // empty runs the catalogue
  // estimate.<id>.<param>; ensemble_size and grid_n set the case size.
  std::map<std::string, std::map<std::string, double>> estimate_overrides;

  // norms
  double norms_gamma = 0.9;
  std::string norms_trajectory;  // defaults to the output directory

  // convergence
  int levels = 4;
  double convergence_tolerance = 0.3;
  bool grid_pair = true;
  double grid_tolerance = 1e-8;
};

using KeyValues = std::map<std::string, std::string>;

// Parses `key = value` lines; `#` starts a comment. Throws ConfigError with
// the line number on malformed lines or repeated keys.
KeyValues parse_key_values(const std::string& text);

// Throws ConfigError on unknown keys or unparseable values.
RunConfig from_map(const KeyValues& kv);
KeyValues to_map(const RunConfig& cfg);
std::string to_text(const RunConfig& cfg);

// Reads a key-value file, or the "config" object of a run_manifest.json.
RunConfig load_config(const std::string& path);

// Checks each module's preconditions without computing anything heavy.
// Throws ConfigError.
void validate(const RunConfig& cfg);

GridSpec make_grid(const RunConfig& cfg);
PotentialSpec make_potential(const RunConfig& cfg);
StepConfig make_step(const RunConfig& cfg);
CshState make_initial_state(const RunConfig& cfg);
CshState make_initial_state(const RunConfig& cfg, const GridSpec& grid);
// Default catalogue cases filtered by estimate_only, with overrides and
// the run seed applied.
std::vector<estimates::EstimateCase> make_estimate_cases(const RunConfig& cfg);

}  // namespace cshlab::cli

#endif  // CSHLAB_TOOLS_CLI_CONFIG_HPP_
