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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "cshlab/errors.hpp"
#include "cshlab/estimate_lab.hpp"
#include "cshlab/lp_toolkit.hpp"

namespace cshlab::estimates {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EstimateCase small_case(const std::string& id, const std::string& variant = "",
                        ParamMap params = {}) {
  EstimateCase c;
  c.id = id;
  c.variant = variant;
  c.params = std::move(params);
  c.ensemble_size = 2;
  c.n = find_estimate(id).default_n;
  return c;
}

bool admissible(const std::string& id, ParamMap params, const std::string& variant = "") {
  try {
    check_admissible(small_case(id, variant, std::move(params)));
    return true;
  } catch (const InadmissibleParameters&) {
    return false;
  }
}

TEST(Catalogue, CoversEveryLemmaOnce) {
  const auto& cat = list_estimates();
  EXPECT_GE(cat.size(), 13u);
  std::set<std::string> ids;
  for (const auto& e : cat) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_TRUE(static_cast<bool>(e.violation)) << e.id;
    EXPECT_FALSE(e.domain.empty()) << e.id;
    EXPECT_FALSE(e.variants.empty()) << e.id;
    EXPECT_FALSE(e.violation(e.defaults, e.variants.front()).has_value()) << e.id;
  }
  for (const char* id : {"bernstein", "sob_prod", "simple_conv", "kt_str", "bilin_str",
                         "bilin_var_str", "abstract_est_a1", "abstract_est_a2", "wente",
                         "quadric", "abstract_est_phi", "quintic", "vphi"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
}

TEST(Catalogue, LookupErrors) {
  EXPECT_THROW(find_estimate("strichartz_2d"), NotFound);
  EXPECT_THROW(normalized(small_case("quintic", "linf_h1")), NotFound);
  EXPECT_THROW(normalized(small_case("wente", "", {{"delta", 1.0}})), InvalidArgument);
  const EstimateCase c = normalized(small_case("quintic"));
  EXPECT_EQ(c.variant, "linf_hgm1");
  EXPECT_EQ(c.params.at("gamma"), 0.9);
}

TEST(Catalogue, DefaultSuiteHasEveryVariant) {
  std::size_t variants = 0;
  for (const auto& e : list_estimates()) variants += e.variants.size();
  EXPECT_EQ(default_suite().size(), variants);
}

TEST(Hypotheses, StrictBoundariesAreRejected) {
  EXPECT_FALSE(admissible("abstract_est_a2", {{"gamma", 0.75}}));
  EXPECT_TRUE(admissible("abstract_est_a2", {{"gamma", 0.76}}));
  EXPECT_FALSE(admissible("wente", {{"gamma", 0.75}}));
  EXPECT_FALSE(admissible("wente", {{"gamma", 1.75}, {"beta", 1.0}}));
  EXPECT_FALSE(admissible("abstract_est_phi", {{"gamma", 1.75}}));
  EXPECT_FALSE(admissible("quadric", {{"gamma", 0.75}}));
  EXPECT_FALSE(admissible("quintic", {{"gamma", 1.0}}, "linf_hgm1"));
  EXPECT_FALSE(admissible("quintic", {{"beta", 1.0}}, "linf_l2"));
  EXPECT_FALSE(admissible("quintic", {{"beta", 0.0}}, "linf_l2"));
  EXPECT_FALSE(admissible("bilin_var_str", {{"sigma", -0.5}}));
  EXPECT_FALSE(admissible("bilin_str", {{"sigma", 0.0}}));
  // q = r = 8: lower bound -2 + 1/2 + 1/2 = -1.
  EXPECT_FALSE(admissible("bilin_str", {{"sigma", -1.0}}));
  EXPECT_FALSE(admissible("bilin_str", {{"r", kInf}}));
  EXPECT_FALSE(admissible("sob_prod", {{"beta0", 0.0}, {"beta1", 1.0}, {"beta2", 0.0}}));
  EXPECT_FALSE(admissible("sob_prod", {{"beta0", 0.3}, {"beta1", 0.3}, {"beta2", 0.3}}));
  EXPECT_FALSE(admissible("low_freq", {{"k", 1.0}}));
  EXPECT_FALSE(admissible("low_freq", {{"k", -0.5}}));
}

TEST(Hypotheses, ClosedBoundariesAreAccepted) {
  EXPECT_TRUE(admissible("bernstein", {{"p", 2.0}}));
  EXPECT_TRUE(admissible("bernstein", {{"p", kInf}}));
  EXPECT_FALSE(admissible("bernstein", {{"p", 1.99}}));
  // beta = 2(gamma - 1/2) is allowed, anything above is not.
  EXPECT_TRUE(admissible("abstract_est_a1", {{"gamma", 0.9}, {"beta", 0.8}}));
  EXPECT_FALSE(admissible("abstract_est_a1", {{"gamma", 0.9}, {"beta", 0.81}}));
  EXPECT_TRUE(admissible("abstract_est_a1", {{"gamma", 1.0}, {"beta", 0.99}}));
  EXPECT_FALSE(admissible("abstract_est_a1", {{"gamma", 1.0}, {"beta", 1.0}}));
  EXPECT_FALSE(admissible("abstract_est_a1", {{"gamma", 0.75}, {"beta", 0.4}}));
  EXPECT_TRUE(admissible("wente", {{"gamma", 0.9}, {"beta", 0.75}}));
  EXPECT_FALSE(admissible("wente", {{"gamma", 0.9}, {"beta", 1.06}}));
  // 2/q = 1/2 - 1/r exactly.
  EXPECT_TRUE(admissible("kt_str", {{"q", 8.0}, {"r", 4.0}}));
  EXPECT_FALSE(admissible("kt_str", {{"q", 4.0}, {"r", 4.0}}));
  EXPECT_FALSE(admissible("kt_str", {{"d", -1.0}}));
  EXPECT_FALSE(admissible("kt_str", {{"sign", 0.5}}));
  // N < 1 + 2 / (1 - gamma) = 21 at gamma = 0.9; any N at gamma = 1.
  EXPECT_TRUE(admissible("vphi", {{"gamma", 0.9}, {"N", 20.0}}));
  EXPECT_FALSE(admissible("vphi", {{"gamma", 0.9}, {"N", 21.0}}));
  EXPECT_TRUE(admissible("vphi", {{"gamma", 1.0}, {"N", 40.0}}));
  EXPECT_FALSE(admissible("vphi", {{"gamma", 1.01}, {"N", 2.0}}));
  EXPECT_FALSE(admissible("simple_conv", {{"a", 1.5}}));
  EXPECT_FALSE(admissible("simple_conv", {{"p", 0.5}}));
}

TEST(RunEstimate, InadmissibleIsThrownOrSkipped) {
  const EstimateCase c = small_case("abstract_est_a1", "", {{"gamma", 0.7}});
  EXPECT_THROW(run_estimate(c), InadmissibleParameters);
  EXPECT_THROW(sample_ratios(c, 32), InadmissibleParameters);
  const EstimateReport r = run_or_skip(c);
  EXPECT_EQ(r.status, Status::skipped);
  EXPECT_NE(r.message.find("gamma"), std::string::npos);
}

TEST(Bernstein, PlancherelCaseIsExactlyOne) {
  EstimateCase c = small_case("bernstein", "", {{"p", 2.0}});
  c.ensemble_size = 6;
  for (double r : sample_ratios(c, 64)) EXPECT_NEAR(r, 1.0, 1e-12);
}

TEST(Bernstein, SupremumBoundedByModeCount) {
  // ||f||_inf <= sum |fhat_m| <= sqrt(#modes) ||f||_2 / L with
  // #modes <= pi (R + 1)^2, so the ratio is at most (1 + 1/R) / L.
  EstimateCase c = small_case("bernstein", "", {{"p", kInf}});
  c.ensemble_size = 6;
  const double length = 2 * std::numbers::pi;
  for (double r : sample_ratios(c, 64)) {
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, 2.0 / length);
  }
}

TEST(SimpleConv, MinkowskiBounds) {
  // b_k <= s_k pointwise gives ratio >= 1; Minkowski gives <= 2a + 1.
  for (double p : {1.0, 2.0, 3.5, kInf}) {
    for (double a : {0.0, 1.0, 3.0}) {
      EstimateCase c = small_case("simple_conv", "", {{"a", a}, {"p", p}});
      c.ensemble_size = 4;
      for (double r : sample_ratios(c, 64)) {
        EXPECT_GE(r, 1.0 - 1e-14);
        EXPECT_LE(r, 2 * a + 1 + 1e-12);
        if (a == 0.0) {
          EXPECT_NEAR(r, 1.0, 1e-14);
        }
      }
    }
  }
}

TEST(KtStr, SingleModeUsualStrichartzClosedForm) {
  // With l = k the cover is one cube and the square function is
  // |exp(i t |grad|) P_k f| = chi_k(xi) for f = exp(i xi . x), constant in
  // space and time: LHS = chi_k(xi) L^(2/r), ||f_k||_2 = chi_k(xi) L.
  const GridSpec g(32, 2 * std::numbers::pi);
  const int k = 2;
  for (auto [m1, m2] : {std::pair{5, 0}, std::pair{3, 4}, std::pair{-6, 2}}) {
    const double xi = std::hypot(m1, m2);
    const double chi = lp::band_symbol(k, xi);
    ASSERT_GT(chi, 0.0);
    const ScalarField fk = lp::lp_project(ScalarField::plane_wave(g, m1, m2), k);
    for (auto [q, r] : {std::pair{4.0, kInf}, std::pair{8.0, 4.0}, std::pair{kInf, 2.0}}) {
      const double want = chi * (std::isinf(r) ? 1.0 : std::pow(g.length(), 2.0 / r));
      EXPECT_NEAR(kt_lhs(fk, k, k, q, r, 1.0), want, 1e-12 * want);
      EXPECT_NEAR(kt_lhs(fk, k, k, q, r, -1.0), want, 1e-12 * want);
      const double iq = std::isinf(q) ? 0.0 : 1 / q, ir = std::isinf(r) ? 0.0 : 1 / r;
      const double rhs = std::pow(2.0, (1 - iq - 2 * ir) * k) * chi * g.length();
      EXPECT_NEAR(kt_rhs(fk, k, k, q, r), rhs, 1e-12 * rhs);
    }
  }
}

TEST(KtStr, EnsembleRatioFinite) {
  for (double d : {0.0, 2.0}) {
    const auto ratios = sample_ratios(small_case("kt_str", "", {{"d", d}}), 32);
    for (double r : ratios) {
      EXPECT_TRUE(std::isfinite(r));
      EXPECT_GT(r, 0.0);
    }
  }
}

TEST(LowFreq, RatioAtLeastOne) {
  // ||f_k||_{S^0_k} >= ||f_k||_{L^inf L^2} by definition.
  for (double k : {-1.0, 0.0}) {
    for (double r : sample_ratios(small_case("low_freq", "", {{"k", k}}), 32)) {
      EXPECT_GE(r, 1.0 - 1e-14);
      EXPECT_LT(r, 10.0);
    }
  }
}

TEST(RunEstimate, Reproducible) {
  const EstimateCase c = small_case("abstract_est_phi");
  const auto a = sample_ratios(c, 32);
  const auto b = sample_ratios(c, 32);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, b);
  EstimateCase other = c;
  other.seed = c.seed + 1;
  EXPECT_NE(sample_ratios(other, 32), a);
}

TEST(RunEstimate, WenteNullFormCase) {
  EstimateCase c = small_case("wente", "", {{"gamma", 0.9}});
  c.ensemble_size = 3;
  const EstimateReport r = run_estimate(c);
  EXPECT_TRUE(std::isfinite(r.coarse.ratio_max));
  EXPECT_TRUE(std::isfinite(r.fine.ratio_max));
  EXPECT_LT(r.drift_factor, kStableDrift);
  EXPECT_EQ(r.status, Status::stable);
  EXPECT_EQ(r.fine.n, 2 * r.coarse.n);
  EXPECT_LE(r.coarse.ratio_median, r.coarse.ratio_max);
  EXPECT_DOUBLE_EQ(r.drift_factor, std::max(1.0, r.resolution_ratio));
}

TEST(RunAll, ConcurrentMatchesSequential) {
  std::vector<EstimateCase> cases = {small_case("sob_prod"), small_case("bernstein"),
                                     small_case("vphi", "", {{"gamma", 0.7}}),
                                     small_case("simple_conv")};
  const auto par = run_all(cases, 3);
  ASSERT_EQ(par.size(), cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const EstimateReport seq = run_or_skip(cases[i]);
    EXPECT_EQ(par[i].spec.id, cases[i].id);
    EXPECT_EQ(par[i].status, seq.status);
    EXPECT_EQ(par[i].coarse.ratios, seq.coarse.ratios);
    EXPECT_EQ(par[i].fine.ratios, seq.fine.ratios);
  }
  EXPECT_EQ(par[2].status, Status::skipped);
}

TEST(Report, JsonSchema) {
  std::vector<EstimateCase> cases = {small_case("kt_str"), small_case("vphi", "", {{"N", 30.0}})};
  const auto j = nlohmann::json::parse(to_json(run_all(cases, 1)));
  ASSERT_EQ(j.at("reports").size(), 2u);
  const auto& a = j["reports"][0];
  for (const char* key : {"id", "variant", "params", "seed", "n", "ensemble_size", "ratio_max",
                          "ratio_median", "drift_factor", "status"}) {
    EXPECT_TRUE(a.contains(key)) << key;
  }
  EXPECT_EQ(a["params"]["r"], "inf");
  EXPECT_EQ(a["n"], 32);
  EXPECT_EQ(a["ensemble_size"], 2);
  EXPECT_TRUE(a["ratio_max"].is_number());
  const auto& b = j["reports"][1];
  EXPECT_EQ(b["status"], "skipped");
  EXPECT_TRUE(b["ratio_max"].is_null());
}

}  // namespace
}  // namespace cshlab::estimates
