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

// Empirical probes of the inequality lemmas used in the local theory: draw
// seeded random ensembles, evaluate both sides, and report ratio statistics
// at resolutions n and 2n. A bounded ratio that does not drift with
// resolution is the only claim; implicit constants are never asserted.
//
// Ensembles. Fields have random complex Gaussian coefficients with
// amplitude |xi|^(-a), a cycling through {0.5, 1, 1.5} across members, zero
// mean, unit L^2 norm, and Fourier support in |xi| < radius. The radius is
// chosen so that every product an estimate forms stays alias free on the
// grid. Time-dependent inputs are free waves sampled at 65 uniform times on
// [0, 1]. Coefficients are keyed by (seed, member, slot, mode), so the 2n
// ensemble extends the n ensemble mode by mode.

#ifndef CSHLAB_ESTIMATE_LAB_HPP_
#define CSHLAB_ESTIMATE_LAB_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cshlab/spectral_grid.hpp"

namespace cshlab::estimates {

using ParamMap = std::map<std::string, double>;

struct EstimateCase {
  std::string id;
  std::string variant;  // empty for single-variant entries
  ParamMap params;      // missing keys take catalogue defaults
  int ensemble_size = 6;
  std::uint64_t seed = 20260101;
  int n = 32;  // coarse resolution; the fine run uses 2n
  double length = 6.283185307179586;
};

struct EstimateInfo {
  std::string id;
  std::string title;
  std::vector<std::string> variants;  // first is the default
  ParamMap defaults;
  std::string domain;  // hypotheses in words
  int default_n = 32;
  int default_ensemble = 6;
  // Returns the violated hypothesis, or nullopt when admissible.
  std::function<std::optional<std::string>(const ParamMap&, const std::string&)>
      violation;
};

enum class Status { stable, marginal, unstable, skipped, nonfinite };
std::string to_string(Status s);

inline constexpr double kStableDrift = 2.0;
inline constexpr double kUnstableDrift = 4.0;
inline constexpr int kTimeSamples = 65;
inline constexpr double kInterval = 1.0;

struct ResolutionStats {
  int n = 0;
  std::vector<double> ratios;
  double ratio_max = 0.0;
  double ratio_median = 0.0;
};

struct EstimateReport {
  EstimateCase spec;  // with defaults filled in
  ResolutionStats coarse;
  ResolutionStats fine;
  // ratio_max at 2n over ratio_max at n. Only growth can falsify an upper
  // bound, so the drift factor is max(1, resolution_ratio).
  double resolution_ratio = 0.0;
  double drift_factor = 0.0;
  Status status = Status::skipped;
  std::string message;
  double ratio_max() const { return coarse.ratio_max; }
};

const std::vector<EstimateInfo>& list_estimates();
// Throws NotFound for unknown identifiers.
const EstimateInfo& find_estimate(std::string_view id);

// Fills defaults and resolves the variant; throws NotFound for unknown
// variants and InvalidArgument for unknown parameter names.
EstimateCase normalized(const EstimateCase& c);
// Throws InadmissibleParameters when a hypothesis of the lemma fails.
void check_admissible(const EstimateCase& c);

EstimateCase default_case(const std::string& id, const std::string& variant = "");
// One default case per (entry, variant).
std::vector<EstimateCase> default_suite();

// LHS/RHS ratio of every ensemble member at resolution n.
std::vector<double> sample_ratios(const EstimateCase& c, int n);
// Throws InadmissibleParameters.
EstimateReport run_estimate(const EstimateCase& c);
// Like run_estimate, but inadmissible cases come back with status skipped.
EstimateReport run_or_skip(const EstimateCase& c);
// Runs cases concurrently on up to `threads` workers (0: hardware count);
// results keep the input order.
std::vector<EstimateReport> run_all(const std::vector<EstimateCase>& cases,
                                    unsigned threads = 0);

std::string to_json(const std::vector<EstimateReport>& reports);

// Building blocks of the kt_str case: the L^q_t L^r_x norm over [0, 1] of
// the cube square function of exp(i sign t |grad|) f_k, and the matching
// right-hand side 2^((1-2/q-2/r)(l-k)) 2^((1-1/q-2/r)k) ||f_k||_2.
double kt_lhs(const ScalarField& fk, int ell, int k, double q, double r,
              double sign);
double kt_rhs(const ScalarField& fk, int ell, int k, double q, double r);

}  // namespace cshlab::estimates

#endif  // CSHLAB_ESTIMATE_LAB_HPP_
