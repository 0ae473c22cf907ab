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

#include "cshlab/estimate_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "cshlab/errors.hpp"
#include "cshlab/integrator.hpp"
#include "cshlab/lp_toolkit.hpp"
#include "cshlab/spectral_grid.hpp"

namespace cshlab::estimates {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExponents[] = {0.5, 1.0, 1.5};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::int64_t v) {
  return splitmix(h ^ splitmix(static_cast<std::uint64_t>(v)));
}

// Standard complex normal from a hash; Box-Muller keeps the stream
// independent of the standard library's distribution implementations.
cplx gaussian(std::uint64_t key) {
  const std::uint64_t a = splitmix(key), b = splitmix(a);
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
}

ScalarField normalized_field(ScalarField f) {
  const double nrm = l2_norm(f);
  return nrm > 0.0 ? (1.0 / nrm) * f : f;
}

// One ensemble member at one resolution.
struct Member {
  GridSpec grid;
  std::uint64_t key;
  double exponent;

  // Largest radius for which products of `degree` factors are alias free and
  // each factor is fully seen by the resolvable bands.
  double radius(int degree) const {
    const double band = std::ldexp(1.0, lp::resolvable_bands(grid).k_max + 1);
    return std::min(grid.nyquist() / degree, band);
  }

  ScalarField field(int slot, double rad, ValueKind kind) const {
    const WaveTable& w = wave_table(grid);
    const std::uint64_t k = mix(key, slot);
    std::vector<cplx> d(grid.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double r = w.norm[i];
      if (r == 0.0 || r >= rad) continue;
      const std::uint64_t mk = mix(mix(k, w.m1[i]), w.m2[i]);
      d[i] = std::pow(r, -exponent) * gaussian(mk);
    }
    return normalized_field(
        ScalarField(grid, Representation::spectral, kind, std::move(d)));
  }

  // Free wave with position and velocity data drawn at matching regularity.
  lp::FieldSeries wave(int slot, int degree,
                       ValueKind kind = ValueKind::complex) const {
    const double rad = radius(degree);
    const ScalarField f = field(2 * slot, rad, kind);
    const ScalarField v = normalized_field(
        apply_multiplier(field(2 * slot + 1, rad, kind), symbols::abs_grad_pow(1.0)));
    lp::FieldSeries s;
    s.dt = kInterval / (kTimeSamples - 1);
    for (int i = 0; i < kTimeSamples; ++i) {
      ScalarField x = half_wave(f, v, i * s.dt).first;
      s.samples.push_back(kind == ValueKind::real ? x.with_kind(kind) : std::move(x));
    }
    return s;
  }
};

template <class F>
std::vector<double> each(const lp::FieldSeries& s, F&& f) {
  std::vector<double> out;
  out.reserve(s.samples.size());
  for (const auto& x : s.samples) out.push_back(f(x));
  return out;
}

template <class F>
lp::FieldSeries map_series(const lp::FieldSeries& s, F&& f) {
  lp::FieldSeries out;
  out.t0 = s.t0;
  out.dt = s.dt;
  out.samples.reserve(s.samples.size());
  for (const auto& x : s.samples) out.samples.push_back(f(x));
  return out;
}

template <class F>
lp::FieldSeries zip_series(const lp::FieldSeries& a, const lp::FieldSeries& b,
                           F&& f) {
  lp::FieldSeries out;
  out.t0 = a.t0;
  out.dt = a.dt;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    out.samples.push_back(f(a.samples[i], b.samples[i]));
  }
  return out;
}

double sup(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end());
}
double lq(const std::vector<double>& v, double q) {
  return lp::time_lq(v, kInterval / (kTimeSamples - 1), q);
}
double hdot(const ScalarField& f, double s) { return lp::sobolev_norm(f, s, true); }
double hinh(const ScalarField& f, double s) { return lp::sobolev_norm(f, s, false); }
double lnorm(const ScalarField& f, double p) {
  return std::isinf(p) ? linf_norm(f) : lp_norm(f, p);
}
double s_norm(const lp::FieldSeries& s, double gamma) {
  return lp::s_gamma_norm(s, gamma).value;
}

ScalarField mul(const ScalarField& a, const ScalarField& b) {
  return as_spectral(pointwise_product(a, b));
}
ScalarField inv_grad(const ScalarField& f) {
  static const Symbol s = with_origin_value(symbols::abs_grad_pow(-1.0), 0.0);
  return apply_multiplier(f, s);
}
ScalarField grad_pow(const ScalarField& f, double s) {
  return apply_multiplier(f, with_origin_value(symbols::abs_grad_pow(s), 0.0));
}

int as_int(double v) { return static_cast<int>(std::lround(v)); }
bool is_int(double v) { return std::isfinite(v) && v == std::round(v); }

using Ratio = std::function<double(const ParamMap&, const std::string&, const Member&)>;
using Check = std::function<std::optional<std::string>(const ParamMap&, const std::string&)>;

std::optional<std::string> fail(const std::string& why) { return why; }

// Parameters arrive as decimals, so a value within rounding of a boundary
// counts as on it: strict inequalities reject it, closed ones accept it.
double slack(double b) {
  return std::isfinite(b) ? 1e-12 * std::max(1.0, std::abs(b)) : 0.0;
}
bool lt(double x, double b) { return x < b - slack(b); }
bool le(double x, double b) { return x <= b + slack(b); }
bool gt(double x, double b) { return x > b + slack(b); }
bool ge(double x, double b) { return x >= b - slack(b); }

// ---------------------------------------------------------------- ratios --

double bernstein(const ParamMap& p, const std::string&, const Member& m) {
  const double pe = p.at("p");
  static constexpr int kShrink[] = {1, 2, 4};
  const double rad = m.radius(2) / kShrink[m.key % 3];
  const ScalarField f = m.field(0, rad, ValueKind::complex);
  const double area = std::numbers::pi * rad * rad;
  const double power = std::isinf(pe) ? 0.5 : 0.5 - 1.0 / pe;
  return lnorm(f, pe) / (std::pow(area, power) * l2_norm(f));
}

double sob_prod(const ParamMap& p, const std::string& v, const Member& m) {
  const bool hom = v == "homogeneous";
  const double rad = m.radius(2);
  const ScalarField f1 = m.field(0, rad, ValueKind::complex);
  const ScalarField f2 = m.field(1, rad, ValueKind::complex);
  const double lhs = lp::sobolev_norm(mul(f1, f2), -p.at("beta0"), hom);
  return lhs / (lp::sobolev_norm(f1, p.at("beta1"), hom) *
                lp::sobolev_norm(f2, p.at("beta2"), hom));
}

double seq_norm(const std::vector<double>& b, double pe) {
  if (std::isinf(pe)) return *std::max_element(b.begin(), b.end());
  double s = 0.0;
  for (double x : b) s += std::pow(x, pe);
  return std::pow(s, 1.0 / pe);
}

double simple_conv(const ParamMap& p, const std::string&, const Member& m) {
  const int a = as_int(p.at("a"));
  const double pe = p.at("p");
  const ScalarField f = m.field(0, m.radius(1), ValueKind::complex);
  const lp::BandRange br = lp::resolvable_bands(m.grid);
  std::vector<double> b;
  for (int k = br.k_min; k <= br.k_max; ++k) b.push_back(l2_norm(lp::lp_project(f, k)));
  const int nb = static_cast<int>(b.size());
  std::vector<double> s;
  for (int k = -a; k < nb + a; ++k) {
    double acc = 0.0;
    for (int j = std::max(0, k - a); j <= std::min(nb - 1, k + a); ++j) acc += b[j];
    s.push_back(acc);
  }
  return seq_norm(s, pe) / seq_norm(b, pe);
}

Symbol half_wave_symbol(double t, double sign) {
  Symbol s;
  s.name = "exp_wave";
  s.value = [t, sign](const Frequency& fr) { return std::polar(1.0, sign * t * fr.norm()); };
  s.hermitian = false;
  return s;
}

double kt_str(const ParamMap& p, const std::string&, const Member& m) {
  const double q = p.at("q"), r = p.at("r");
  const int k = lp::resolvable_bands(m.grid).k_max;
  const int ell = k - as_int(p.at("d"));
  if (ell < lp::finest_scale(m.grid)) {
    throw InvalidArgument("kt_str: cube scale below the lattice spacing");
  }
  const ScalarField fk = lp::lp_project(m.field(0, m.grid.nyquist(), ValueKind::complex), k);
  return kt_lhs(fk, ell, k, q, r, p.at("sign")) / kt_rhs(fk, ell, k, q, r);
}

double bilin_str(const ParamMap& p, const std::string&, const Member& m) {
  const double q = p.at("q"), r = p.at("r"), sigma = p.at("sigma");
  const lp::BandRange br = lp::resolvable_bands(m.grid);
  const int k1 = br.k_max, k2 = br.k_max, k0 = br.k_max - 5;
  if (k0 < br.k_min) throw InvalidArgument("bilin_str: grid too coarse for a high-high triple");
  const lp::FieldSeries w1 = m.wave(0, 1), w2 = m.wave(1, 1);
  const lp::FieldSeries p1 = map_series(w1, [&](const ScalarField& f) { return lp::lp_project(f, k1); });
  const lp::FieldSeries p2 = map_series(w2, [&](const ScalarField& f) { return lp::lp_project(f, k2); });
  std::vector<double> vals;
  for (std::size_t i = 0; i < p1.samples.size(); ++i) {
    const ScalarField out = grad_pow(
        lp::lp_project(padded_product(p1.samples[i], p2.samples[i]), k0), sigma);
    vals.push_back(lnorm(out, r / 2));
  }
  const double gamma = 1.0 - 2.0 / r - 1.0 / q;
  const double rhs = std::pow(2.0, gamma * k1) * lp::s0k_norm(p1, k1) *
                     std::pow(2.0, gamma * k2) * lp::s0k_norm(p2, k2);
  return lq(vals, q / 2) / rhs;
}

// Sum over HH triples of P_{k0}(f_{k1} g_{k2}) restricted to resolvable k0.
ScalarField hh_sum(const ScalarField& f, const ScalarField& g) {
  const lp::BandRange br = lp::resolvable_bands(f.grid());
  ScalarField acc(f.grid(), Representation::spectral);
  for (int k1 = br.k_min + 5; k1 <= br.k_max; ++k1) {
    const ScalarField f1 = lp::lp_project(f, k1);
    for (int k2 = std::max(br.k_min + 5, k1 - 5); k2 <= std::min(br.k_max, k1 + 5); ++k2) {
      const ScalarField prod = padded_product(f1, lp::lp_project(g, k2));
      for (int k0 = br.k_min; k0 <= std::min(k1, k2) - 5; ++k0) {
        acc = acc + lp::lp_project(prod, k0);
      }
    }
  }
  return acc;
}

double bilin_var_str(const ParamMap& p, const std::string&, const Member& m) {
  const double sigma = p.at("sigma");
  if (lp::resolvable_bands(m.grid).k_max < lp::resolvable_bands(m.grid).k_min + 5) {
    throw InvalidArgument("bilin_var_str: grid too coarse for high-high triples");
  }
  const lp::FieldSeries w1 = m.wave(0, 2), w2 = m.wave(1, 2);
  std::vector<double> vals;
  for (std::size_t i = 0; i < w1.samples.size(); ++i) {
    vals.push_back(l2_norm(apply_multiplier(hh_sum(w1.samples[i], w2.samples[i]),
                                            symbols::japanese_pow(sigma))));
  }
  const double rhs = lq(each(w1, [](const ScalarField& f) { return hdot(f, 0.75); }), 4) *
                     s_norm(w2, sigma);
  return lq(vals, 2) / rhs;
}

lp::FieldSeries inv_grad_product(const lp::FieldSeries& a, const lp::FieldSeries& b) {
  return zip_series(a, b, [](const ScalarField& x, const ScalarField& y) {
    return inv_grad(mul(x, y));
  });
}

double abstract_est_a1(const ParamMap& p, const std::string&, const Member& m) {
  const double gamma = p.at("gamma"), beta = p.at("beta");
  const lp::FieldSeries w1 = m.wave(0, 2), w2 = m.wave(1, 2);
  const lp::FieldSeries z = inv_grad_product(w1, w2);
  const double lhs = sup(each(z, [&](const ScalarField& f) { return hdot(f, beta); }));
  return lhs / (s_norm(w1, gamma) * s_norm(w2, gamma - 1));
}

double abstract_est_a2(const ParamMap& p, const std::string& v, const Member& m) {
  const double gamma = p.at("gamma");
  const lp::FieldSeries w1 = m.wave(0, 2), w2 = m.wave(1, 2);
  const lp::FieldSeries z = inv_grad_product(w1, w2);
  const double lhs =
      v == "l4_h34" ? lq(each(z, [](const ScalarField& f) { return hdot(f, 0.75); }), 4)
                    : lq(each(z, [](const ScalarField& f) { return linf_norm(f); }), 2);
  return lhs / (s_norm(w1, gamma) * s_norm(w2, gamma - 1));
}

double wente(const ParamMap& p, const std::string&, const Member& m) {
  const double gamma = p.at("gamma"), beta = p.at("beta");
  const lp::FieldSeries w1 = m.wave(0, 2), w2 = m.wave(1, 2);
  const Symbol d1 = symbols::derivative(1), d2 = symbols::derivative(2);
  const lp::FieldSeries z = zip_series(w1, w2, [&](const ScalarField& a, const ScalarField& b) {
    const ScalarField x = apply_multiplier(mul(a, apply_multiplier(b, d2)), d1) -
                          apply_multiplier(mul(a, apply_multiplier(b, d1)), d2);
    return -apply_multiplier(x, symbols::inv_lap());
  });
  const double lhs = lq(each(z, [&](const ScalarField& f) { return hdot(f, beta); }), 4);
  return lhs / (s_norm(w1, gamma) * s_norm(w2, gamma - 1));
}

double quadric(const ParamMap& p, const std::string&, const Member& m) {
  const double gamma = p.at("gamma");
  const lp::FieldSeries b = m.wave(0, 3, ValueKind::real);
  const lp::FieldSeries w1 = m.wave(1, 3), w2 = m.wave(2, 3);
  double lhs_half = 0.0, lhs_34 = 0.0, lhs_one = 0.0;
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    const ScalarField z = inv_grad(mul(b.samples[i], mul(w1.samples[i], w2.samples[i])));
    lhs_half = std::max(lhs_half, hdot(z, 0.5));
    lhs_34 = std::max(lhs_34, hdot(z, 0.75));
    lhs_one = std::max(lhs_one, hdot(z, 1.0) + linf_norm(z));
  }
  const double bn = sup(each(b, [](const ScalarField& f) { return hdot(f, 0.5); }));
  return (lhs_half + lhs_34 + lhs_one) / (bn * s_norm(w1, gamma) * s_norm(w2, gamma));
}

double abstract_est_phi(const ParamMap& p, const std::string& v, const Member& m) {
  const double gamma = p.at("gamma");
  const lp::FieldSeries b = m.wave(0, 2, ValueKind::real);
  const lp::FieldSeries w = m.wave(1, 2);
  const double s = v == "l2_hgm1" ? gamma - 1 : gamma;
  const lp::FieldSeries z = zip_series(b, w, mul);
  const double lhs = lq(each(z, [&](const ScalarField& f) { return hinh(f, s); }), 2);
  const double b_linf = lq(each(b, [](const ScalarField& f) { return linf_norm(f); }), 2);
  double b_h = lq(each(b, [](const ScalarField& f) { return hdot(f, 0.75); }), 4);
  if (v == "l2_hg") {
    b_h = lq(each(b, [&](const ScalarField& f) { return hdot(f, 0.75) + hdot(f, gamma); }), 4);
  }
  return lhs / ((b_linf + b_h) * s_norm(w, s));
}

double quintic(const ParamMap& p, const std::string& v, const Member& m) {
  const lp::FieldSeries b1 = m.wave(0, 3, ValueKind::real);
  const lp::FieldSeries b2 = m.wave(1, 3, ValueKind::real);
  const lp::FieldSeries w = m.wave(2, 3);
  std::vector<ScalarField> prod;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    prod.push_back(mul(b1.samples[i], mul(b2.samples[i], w.samples[i])));
  }
  auto sup_of = [](const lp::FieldSeries& s, double r) {
    return sup(each(s, [r](const ScalarField& f) { return hdot(f, r); }));
  };
  if (v == "linf_hgm1") {
    const double gamma = p.at("gamma");
    double lhs = 0.0;
    for (const auto& f : prod) lhs = std::max(lhs, hinh(f, gamma - 1));
    return lhs / (sup_of(b1, 0.5) * sup_of(b2, 0.5) * s_norm(w, gamma));
  }
  const double beta = p.at("beta");
  double lhs = 0.0;
  for (const auto& f : prod) lhs = std::max(lhs, l2_norm(f));
  return lhs / (sup_of(b1, 1 - beta / 2) * sup_of(b2, 1 - beta / 2) * sup_of(w, beta));
}

double vphi(const ParamMap& p, const std::string&, const Member& m) {
  const double gamma = p.at("gamma");
  const int nf = as_int(p.at("N"));
  std::vector<lp::FieldSeries> ws;
  double rhs = 1.0;
  for (int j = 0; j < nf; ++j) {
    ws.push_back(m.wave(j, nf));
    rhs *= s_norm(ws.back(), gamma);
  }
  std::vector<double> vals;
  for (int i = 0; i < kTimeSamples; ++i) {
    ScalarField acc = ws[0].samples[i];
    for (int j = 1; j < nf; ++j) acc = mul(acc, ws[j].samples[i]);
    vals.push_back(hinh(acc, gamma - 1));
  }
  return lq(vals, 1) / rhs;
}

double low_freq(const ParamMap& p, const std::string&, const Member& m) {
  const int k = as_int(p.at("k"));
  lp::require_band(m.grid, k);
  if (k < lp::resolvable_bands(m.grid).k_min) {
    throw BandOutOfRange("low_freq: band below the lowest resolvable band");
  }
  const lp::FieldSeries w = m.wave(0, 1);
  const double rhs = sup(each(w, [k](const ScalarField& f) { return l2_norm(lp::lp_project(f, k)); }));
  return lp::s0k_norm(w, k) / rhs;
}

// ------------------------------------------------------------ hypotheses --

std::optional<std::string> gamma_open(const ParamMap& p, double lo, double hi) {
  const double g = p.at("gamma");
  if (!(gt(g, lo) && lt(g, hi))) {
    return fail("gamma must satisfy " + std::to_string(lo) + " < gamma < " + std::to_string(hi));
  }
  return std::nullopt;
}

std::optional<std::string> strichartz_pair(double q, double r) {
  if (!(ge(q, 2) && ge(r, 2))) return fail("need 2 <= q, r");
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q, ir = std::isinf(r) ? 0.0 : 1.0 / r;
  if (!le(2 * iq, 0.5 - ir)) return fail("need 2/q <= 1/2 - 1/r");
  return std::nullopt;
}

struct Entry {
  EstimateInfo info;
  Ratio ratio;
};

std::vector<Entry> build_catalogue() {
  std::vector<Entry> c;
  auto add = [&](EstimateInfo info, Ratio r) { c.push_back({std::move(info), std::move(r)}); };

  add({"bernstein", "Bernstein inequality", {""}, {{"p", 4.0}},
       "2 <= p <= inf", 64, 12,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (!ge(p.at("p"), 2.0)) return fail("need p >= 2");
         return std::nullopt;
       }},
      bernstein);
  add({"sob_prod", "Sobolev product rule", {"homogeneous", "inhomogeneous"},
       {{"beta0", 0.25}, {"beta1", 0.5}, {"beta2", 0.25}},
       "beta0 + beta1 + beta2 = 1, max(beta_j) < 1", 64, 12,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         const double b0 = p.at("beta0"), b1 = p.at("beta1"), b2 = p.at("beta2");
         if (!(ge(b0 + b1 + b2, 1.0) && le(b0 + b1 + b2, 1.0))) return fail("need beta0 + beta1 + beta2 = 1");
         if (!lt(std::max({b0, b1, b2}), 1.0)) return fail("need max(beta_j) < 1");
         return std::nullopt;
       }},
      sob_prod);
  add({"simple_conv", "Simple convolution bound", {""}, {{"a", 2.0}, {"p", 2.0}},
       "a >= 0 integer, 1 <= p <= inf", 64, 12,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (!(is_int(p.at("a")) && p.at("a") >= 0)) return fail("need integer a >= 0");
         if (!ge(p.at("p"), 1.0)) return fail("need p >= 1");
         return std::nullopt;
       }},
      simple_conv);
  add({"kt_str", "Klainerman-Tataru refinement of Strichartz", {""},
       {{"q", 4.0}, {"r", kInf}, {"d", 2.0}, {"sign", 1.0}},
       "2 <= q, r <= inf, 2/q <= 1/2 - 1/r, d = k - l >= 0 integer, sign = +-1", 32, 6,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (auto e = strichartz_pair(p.at("q"), p.at("r"))) return e;
         if (!(is_int(p.at("d")) && p.at("d") >= 0)) return fail("need integer d = k - l >= 0");
         if (std::abs(p.at("sign")) != 1.0) return fail("need sign = +1 or -1");
         return std::nullopt;
       }},
      kt_str);
  add({"bilin_str", "Bilinear Strichartz for high-high interactions", {""},
       {{"q", 8.0}, {"r", 8.0}, {"sigma", -0.5}},
       "r < inf, (q, r) admissible, -2 + 4/r + 4/q < sigma < 0", 128, 3,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         const double q = p.at("q"), r = p.at("r"), s = p.at("sigma");
         if (!std::isfinite(r)) return fail("need r < inf");
         if (auto e = strichartz_pair(q, r)) return e;
         const double lo = -2.0 + 4.0 / r + (std::isinf(q) ? 0.0 : 4.0 / q);
         if (!(gt(s, lo) && lt(s, 0.0))) return fail("need -2 + 4/r + 4/q < sigma < 0");
         return std::nullopt;
       }},
      bilin_str);
  add({"bilin_var_str", "High-high sum in L^2_t L^2_x", {""}, {{"sigma", -0.25}},
       "sigma > -1/2", 128, 3,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (!gt(p.at("sigma"), -0.5)) return fail("need sigma > -1/2");
         return std::nullopt;
       }},
      bilin_var_str);
  add({"abstract_est_a1", "|grad|^-1 of a product in L^inf_t H^beta", {""},
       {{"gamma", 0.9}, {"beta", 0.8}},
       "3/4 < gamma < 1 and 0 < beta <= 2(gamma - 1/2), or gamma = 1 and 0 < beta < 1", 32, 6,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         const double g = p.at("gamma"), b = p.at("beta");
         if (ge(g, 1.0) && le(g, 1.0)) {
           if (!(gt(b, 0.0) && lt(b, 1.0))) return fail("gamma = 1 needs 0 < beta < 1");
           return std::nullopt;
         }
         if (auto e = gamma_open(p, 0.75, 1.0)) return e;
         if (!(gt(b, 0.0) && le(b, 2.0 * (g - 0.5)))) return fail("need 0 < beta <= 2(gamma - 1/2)");
         return std::nullopt;
       }},
      abstract_est_a1);
  add({"abstract_est_a2", "|grad|^-1 of a product in Strichartz norms", {"l4_h34", "l2_linf"},
       {{"gamma", 0.9}}, "gamma > 3/4", 32, 6,
       [](const ParamMap& p, const std::string&) { return gamma_open(p, 0.75, kInf); }},
      abstract_est_a2);
  add({"wente", "Wente-type null form bound", {""}, {{"gamma", 0.9}, {"beta", 1.05}},
       "3/4 < gamma < 7/4, 3/4 <= beta <= 2(gamma - 1/2) + 1/4", 32, 6,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (auto e = gamma_open(p, 0.75, 1.75)) return e;
         const double b = p.at("beta"), hi = 2.0 * (p.at("gamma") - 0.5) + 0.25;
         if (!(ge(b, 0.75) && le(b, hi))) return fail("need 3/4 <= beta <= 2(gamma - 1/2) + 1/4");
         return std::nullopt;
       }},
      wente);
  add({"quadric", "Trilinear bound for the quartic potential term", {""}, {{"gamma", 0.9}},
       "gamma > 3/4", 32, 6,
       [](const ParamMap& p, const std::string&) { return gamma_open(p, 0.75, kInf); }},
      quadric);
  add({"abstract_est_phi", "Potential times field in L^2_t Sobolev", {"l2_hgm1", "l2_hg"},
       {{"gamma", 0.9}}, "3/4 < gamma < 7/4", 32, 6,
       [](const ParamMap& p, const std::string&) { return gamma_open(p, 0.75, 1.75); }},
      abstract_est_phi);
  add({"quintic", "Two potentials times field", {"linf_hgm1", "linf_l2"},
       {{"gamma", 0.9}, {"beta", 0.5}},
       "linf_hgm1: 3/4 < gamma < 1; linf_l2: 0 < beta < 1", 32, 6,
       [](const ParamMap& p, const std::string& v) -> std::optional<std::string> {
         if (v == "linf_hgm1") return gamma_open(p, 0.75, 1.0);
         if (!(gt(p.at("beta"), 0.0) && lt(p.at("beta"), 1.0))) return fail("need 0 < beta < 1");
         return std::nullopt;
       }},
      quintic);
  add({"vphi", "N-fold product in L^1_t H^(gamma-1)", {""}, {{"gamma", 0.9}, {"N", 3.0}},
       "3/4 < gamma <= 1, integer N >= 1, N < 1 + 2/(1 - gamma) when gamma < 1", 32, 6,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         const double g = p.at("gamma"), nf = p.at("N");
         if (!(gt(g, 0.75) && le(g, 1.0))) return fail("need 3/4 < gamma <= 1");
         if (!(is_int(nf) && nf >= 1)) return fail("need integer N >= 1");
         if (lt(g, 1.0) && !lt(nf, 1.0 + 2.0 / (1.0 - g))) return fail("need N < 1 + 2/(1 - gamma)");
         return std::nullopt;
       }},
      vphi);
  add({"low_freq", "S^0_k controlled by L^inf L^2 for k <= 0", {""}, {{"k", 0.0}},
       "integer k <= 0", 32, 6,
       [](const ParamMap& p, const std::string&) -> std::optional<std::string> {
         if (!(is_int(p.at("k")) && p.at("k") <= 0)) return fail("need integer k <= 0");
         return std::nullopt;
       }},
      low_freq);
  return c;
}

const std::vector<Entry>& catalogue() {
  static const std::vector<Entry> c = build_catalogue();
  return c;
}

const Entry& find_entry(std::string_view id) {
  for (const auto& e : catalogue()) {
    if (e.info.id == id) return e;
  }
  throw NotFound("unknown estimate: " + std::string(id));
}

ResolutionStats stats(const EstimateCase& c, int n) {
  ResolutionStats s;
  s.n = n;
  s.ratios = sample_ratios(c, n);
  s.ratio_max = -kInf;
  for (double r : s.ratios) s.ratio_max = std::isnan(r) ? r : std::max(s.ratio_max, r);
  std::vector<double> sorted = s.ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  s.ratio_median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  return s;
}

bool finite_positive(const ResolutionStats& s) {
  return std::all_of(s.ratios.begin(), s.ratios.end(),
                     [](double r) { return std::isfinite(r) && r > 0.0; });
}

nlohmann::json param_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::stable: return "stable";
    case Status::marginal: return "marginal";
    case Status::unstable: return "unstable";
    case Status::skipped: return "skipped";
    case Status::nonfinite: return "nonfinite";
  }
  return "unknown";
}

const std::vector<EstimateInfo>& list_estimates() {
  static const std::vector<EstimateInfo> infos = [] {
    std::vector<EstimateInfo> v;
    for (const auto& e : catalogue()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const EstimateInfo& find_estimate(std::string_view id) { return find_entry(id).info; }

EstimateCase normalized(const EstimateCase& c) {
  const EstimateInfo& info = find_estimate(c.id);
  EstimateCase out = c;
  if (out.variant.empty()) out.variant = info.variants.front();
  if (std::find(info.variants.begin(), info.variants.end(), out.variant) == info.variants.end()) {
    throw NotFound("unknown variant '" + out.variant + "' of " + c.id);
  }
  for (const auto& [k, v] : c.params) {
    if (!info.defaults.count(k)) throw InvalidArgument("unknown parameter '" + k + "' for " + c.id);
  }
  for (const auto& [k, v] : info.defaults) out.params.emplace(k, v);
  if (out.ensemble_size < 1) throw InvalidArgument("ensemble_size must be positive");
  return out;
}

void check_admissible(const EstimateCase& c) {
  const EstimateCase n = normalized(c);
  if (auto why = find_estimate(n.id).violation(n.params, n.variant)) {
    throw InadmissibleParameters(n.id + ": " + *why);
  }
}

EstimateCase default_case(const std::string& id, const std::string& variant) {
  const EstimateInfo& info = find_estimate(id);
  EstimateCase c;
  c.id = id;
  c.variant = variant;
  c.n = info.default_n;
  c.ensemble_size = info.default_ensemble;
  return normalized(c);
}

std::vector<EstimateCase> default_suite() {
  std::vector<EstimateCase> out;
  for (const auto& info : list_estimates()) {
    for (const auto& v : info.variants) out.push_back(default_case(info.id, v));
  }
  return out;
}

std::vector<double> sample_ratios(const EstimateCase& c, int n) {
  const EstimateCase nc = normalized(c);
  check_admissible(nc);
  const Entry& e = find_entry(nc.id);
  const GridSpec grid(n, nc.length);
  std::vector<double> out;
  for (int i = 0; i < nc.ensemble_size; ++i) {
    const Member m{grid, mix(nc.seed, i), kExponents[i % 3]};
    out.push_back(e.ratio(nc.params, nc.variant, m));
  }
  return out;
}

EstimateReport run_estimate(const EstimateCase& c) {
  EstimateReport r;
  r.spec = normalized(c);
  check_admissible(r.spec);
  r.coarse = stats(r.spec, r.spec.n);
  r.fine = stats(r.spec, 2 * r.spec.n);
  if (!finite_positive(r.coarse) || !finite_positive(r.fine)) {
    r.status = Status::nonfinite;
    r.drift_factor = std::numeric_limits<double>::quiet_NaN();
    r.resolution_ratio = r.drift_factor;
    r.message = "non-finite or non-positive ratio";
    return r;
  }
  r.resolution_ratio = r.fine.ratio_max / r.coarse.ratio_max;
  r.drift_factor = std::max(1.0, r.resolution_ratio);
  r.status = r.drift_factor < kStableDrift     ? Status::stable
             : r.drift_factor < kUnstableDrift ? Status::marginal
                                               : Status::unstable;
  return r;
}

EstimateReport run_or_skip(const EstimateCase& c) {
  try {
    return run_estimate(c);
  } catch (const InadmissibleParameters& e) {
    EstimateReport r;
    r.spec = normalized(c);
    r.status = Status::skipped;
    r.message = e.what();
    return r;
  }
}

std::vector<EstimateReport> run_all(const std::vector<EstimateCase>& cases,
                                    unsigned threads) {
  std::vector<EstimateReport> out(cases.size());
  std::vector<std::exception_ptr> errors(cases.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(cases.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < cases.size();) {
      try {
        out[i] = run_or_skip(cases[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string to_json(const std::vector<EstimateReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["id"] = r.spec.id;
    j["variant"] = r.spec.variant;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.spec.params) params[k] = param_json(v);
    j["params"] = params;
    j["seed"] = r.spec.seed;
    j["n"] = r.spec.n;
    j["ensemble_size"] = r.spec.ensemble_size;
    const bool ran = r.status != Status::skipped;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    j["ratio_max"] = ran ? num(r.coarse.ratio_max) : nlohmann::json();
    j["ratio_median"] = ran ? num(r.coarse.ratio_median) : nlohmann::json();
    j["fine_n"] = ran ? nlohmann::json(r.fine.n) : nlohmann::json();
    j["fine_ratio_max"] = ran ? num(r.fine.ratio_max) : nlohmann::json();
    j["fine_ratio_median"] = ran ? num(r.fine.ratio_median) : nlohmann::json();
    j["resolution_ratio"] = ran ? num(r.resolution_ratio) : nlohmann::json();
    j["drift_factor"] = ran ? num(r.drift_factor) : nlohmann::json();
    j["status"] = to_string(r.status);
    j["message"] = r.message;
    arr.push_back(j);
  }
  nlohmann::json root;
  root["reports"] = arr;
  return root.dump(2);
}

double kt_lhs(const ScalarField& fk, int ell, int k, double q, double r,
              double sign) {
  const lp::CubeCover cover = lp::cube_cover(fk.grid(), ell, k);
  std::vector<double> vals;
  for (int i = 0; i < kTimeSamples; ++i) {
    const double t = i * kInterval / (kTimeSamples - 1);
    const ScalarField w = apply_multiplier(fk, half_wave_symbol(t, sign));
    vals.push_back(lnorm(lp::square_function(w, cover), r));
  }
  return lq(vals, q);
}

double kt_rhs(const ScalarField& fk, int ell, int k, double q, double r) {
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q, ir = std::isinf(r) ? 0.0 : 1.0 / r;
  return std::pow(2.0, (1 - 2 * iq - 2 * ir) * (ell - k)) *
         std::pow(2.0, (1 - iq - 2 * ir) * k) * l2_norm(fk);
}

}  // namespace cshlab::estimates
