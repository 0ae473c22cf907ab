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

#ifndef CSHLAB_TOOLS_CLI_COMMANDS_HPP_
#define CSHLAB_TOOLS_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"

namespace cshlab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitConfigError = 2,
  kExitRuntimeAbort = 3,
};

// Overrides the configured output directory when --out is absent.
inline constexpr const char* kOutputDirEnv = "CSHLAB_OUTPUT_DIR";

// Relative bound on ||div a|| for every emitted state.
inline constexpr double kDivTolerance = 1e-11;
// Bound on ||lhs - rhs|| / (||phi||_{H^1} ||psi||_{H^1}) for the null form.
inline constexpr double kNullFormTolerance = 1e-11;
inline constexpr double kTelescopeTolerance = 1e-10;
inline constexpr double kPartitionTolerance = 1e-12;
inline constexpr double kFftRoundTripTolerance = 1e-12;

struct Options {
  std::string config_path;  // empty uses the built-in defaults
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::optional<std::string> trajectory;  // norms only
  std::optional<double> gamma;            // norms only
};

// Loads the configuration and applies --seed and the output overrides
// (--out, then the environment, then the file).
RunConfig resolve_config(const Options& opts);

// ||div a|| / (||d1 a1|| + ||d2 a2||), 0 when a vanishes.
double relative_divergence(const CshState& s);

int cmd_simulate(const Options& opts);
int cmd_verify(const Options& opts);
int cmd_norms(const Options& opts);
int cmd_convergence(const Options& opts);

// Parses argv and dispatches to a subcommand.
int run(int argc, char** argv);

}  // namespace cshlab::cli

#endif  // CSHLAB_TOOLS_CLI_COMMANDS_HPP_
