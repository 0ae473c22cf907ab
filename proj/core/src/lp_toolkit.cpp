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

#include "cshlab/lp_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "cshlab/errors.hpp"
#include "fft_backend.hpp"

namespace cshlab::lp {
namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double transition(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = psi(t);
  return a / (a + psi(1.0 - t));
}

double beta(double x) { return transition(1.0 - std::abs(x)); }

// Modes whose frequency lies in the open interval (lo, hi), clipped to the
// grid range.
std::pair<int, int> mode_range(const GridSpec& g, double lo, double hi) {
  const double k = g.frequency_unit();
  int a = static_cast<int>(std::floor(lo / k)) + 1;
  int b = static_cast<int>(std::ceil(hi / k)) - 1;
  a = std::max(a, -g.n() / 2);
  b = std::min(b, g.n() / 2 - 1);
  return {a, b};
}

ScalarField apply_radial(const ScalarField& f,
                         const std::function<double(double)>& weight) {
  ScalarField s = as_spectral(f);
  const WaveTable& w = wave_table(s.grid());
  std::vector<cplx> d(s.data().begin(), s.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] != cplx(0.0)) d[i] *= weight(w.norm[i]);
  }
  return ScalarField(s.grid(), Representation::spectral, s.value_kind(),
                     std::move(d));
}

}  // namespace

double smooth_step(double t) { return transition(t); }

double bump(double r) { return transition((4.0 - r) / 2.0); }

double low_symbol(int k, double xi_norm) {
  return bump(xi_norm / std::ldexp(1.0, k));
}

double band_symbol(int k, double xi_norm) {
  return low_symbol(k, xi_norm) - low_symbol(k - 1, xi_norm);
}

BandRange resolvable_bands(const GridSpec& grid) {
  BandRange r;
  r.k_max = static_cast<int>(std::floor(std::log2(grid.nyquist()) + 1e-12)) - 2;
  r.k_min =
      static_cast<int>(std::floor(std::log2(grid.frequency_unit()) + 1e-12)) - 1;
  return r;
}

int finest_scale(const GridSpec& grid) {
  return static_cast<int>(std::ceil(std::log2(grid.frequency_unit()) - 1e-12));
}

void require_band(const GridSpec& grid, int k) {
  if (std::ldexp(1.0, k + 2) > grid.nyquist() * (1.0 + 1e-12)) {
    throw BandOutOfRange("band " + std::to_string(k) +
                         " exceeds the Nyquist frequency of the grid");
  }
}

ScalarField lp_project(const ScalarField& f, int k) {
  require_band(f.grid(), k);
  return apply_radial(f, [k](double r) { return band_symbol(k, r); });
}

ScalarField lp_project_leq(const ScalarField& f, int k) {
  require_band(f.grid(), k);
  return apply_radial(f, [k](double r) { return low_symbol(k, r); });
}

double sobolev_norm(const ScalarField& f, double s, bool homogeneous) {
  ScalarField sp = as_spectral(f);
  const WaveTable& w = wave_table(sp.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i < sp.data().size(); ++i) {
    const double a = std::norm(sp[i]);
    if (a == 0.0) continue;
    const double r = w.norm[i];
    if (homogeneous) {
      if (r == 0.0) continue;
      sum += std::pow(r, 2.0 * s) * a;
    } else {
      sum += std::pow(1.0 + r * r, s) * a;
    }
  }
  return sp.grid().length() * std::sqrt(sum);
}

CubeCover::CubeCover(const GridSpec& grid, int ell, int k)
    : grid_(grid), ell_(ell), k_(k) {
  const double h = std::ldexp(1.0, ell);
  const double r_in = std::ldexp(1.0, k - 2);
  const double r_out = std::ldexp(1.0, k + 2);
  if (ell == k) {
    cubes_.push_back(Cube{0, 0});
    std::vector<Entry> all;
    const WaveTable& w = wave_table(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      all.push_back(Entry{i, w.m1[i], w.m2[i], 1.0});
    }
    entries_.push_back(std::move(all));
    return;
  }
  const int cmax = static_cast<int>(std::ceil(r_out / h)) + 1;
  for (int c2 = -cmax; c2 <= cmax; ++c2) {
    for (int c1 = -cmax; c1 <= cmax; ++c1) {
      // Open box (c-1, c+1) * h; nearest and farthest distance to origin.
      auto near = [&](int c) {
        const double lo = (c - 1) * h, hi = (c + 1) * h;
        return lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
      };
      auto far = [&](int c) {
        return std::max(std::abs((c - 1) * h), std::abs((c + 1) * h));
      };
      const double dmin = std::hypot(near(c1), near(c2));
      const double dmax = std::hypot(far(c1), far(c2));
      if (dmin >= r_out || dmax <= r_in) continue;
      cubes_.push_back(Cube{c1, c2});
      std::vector<Entry> es;
      const auto [a1, b1] = mode_range(grid, (c1 - 1) * h, (c1 + 1) * h);
      const auto [a2, b2] = mode_range(grid, (c2 - 1) * h, (c2 + 1) * h);
      const double kf = grid.frequency_unit();
      for (int m2 = a2; m2 <= b2; ++m2) {
        const double w2 = beta(kf * m2 / h - c2);
        if (w2 == 0.0) continue;
        for (int m1 = a1; m1 <= b1; ++m1) {
          const double w1 = beta(kf * m1 / h - c1);
          if (w1 == 0.0) continue;
          es.push_back(Entry{grid.flat(grid.wrap_index(m1), grid.wrap_index(m2)),
                             m1, m2, w1 * w2});
        }
      }
      entries_.push_back(std::move(es));
    }
  }
}

double CubeCover::side() const { return std::ldexp(1.0, ell_); }

double CubeCover::symbol(std::size_t c, double xi1, double xi2) const {
  if (singleton()) return 1.0;
  const double h = side();
  return beta(xi1 / h - cubes_[c].c1) * beta(xi2 / h - cubes_[c].c2);
}

CubeCover cube_cover(const GridSpec& grid, int ell, int k) {
  if (ell > k) {
    throw BandOutOfRange("cube scale must not exceed the band index");
  }
  require_band(grid, k);
  return CubeCover(grid, ell, k);
}

ScalarField cube_project(const ScalarField& f, const CubeCover& cover,
                         std::size_t c) {
  ScalarField s = as_spectral(f);
  std::vector<cplx> d(s.grid().size());
  for (const auto& e : cover.entries(c)) d[e.index] = e.weight * s[e.index];
  return ScalarField(s.grid(), Representation::spectral, ValueKind::complex,
                     std::move(d));
}

ScalarField square_function(const ScalarField& f, const CubeCover& cover) {
  require_same_grid(f, ScalarField(cover.grid()));
  const GridSpec& g = f.grid();
  if (cover.singleton()) {
    ScalarField p = as_physical(f);
    std::vector<cplx> d(g.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(p[i]);
    return ScalarField(g, Representation::physical, ValueKind::real,
                       std::move(d));
  }
  ScalarField s = as_spectral(f);
  const int n = g.n();
  // Spectral coefficients of sum_c |P_c f|^2, indexed by offset mod n.
  std::vector<cplx> h(g.size());
  struct Mode {
    int m1, m2;
    cplx a;
  };
  std::vector<Mode> modes;
  std::vector<cplx> buf, out, local;
  for (std::size_t c = 0; c < cover.size(); ++c) {
    modes.clear();
    int lo1 = std::numeric_limits<int>::max(), lo2 = lo1;
    int hi1 = std::numeric_limits<int>::min(), hi2 = hi1;
    for (const auto& e : cover.entries(c)) {
      const cplx a = e.weight * s[e.index];
      if (a == cplx(0.0)) continue;
      modes.push_back(Mode{e.m1, e.m2, a});
      lo1 = std::min(lo1, e.m1);
      hi1 = std::max(hi1, e.m1);
      lo2 = std::min(lo2, e.m2);
      hi2 = std::max(hi2, e.m2);
    }
    if (modes.empty()) continue;
    const std::size_t kcount = modes.size();
    const int w = std::max(hi1 - lo1, hi2 - lo2) + 1;
    int p = 1;
    while (p < 2 * w - 1) p *= 2;
    const double fft_cost = 1.0 * p * p * std::log2(2.0 * p * p);
    const int span = 2 * w - 1;
    if (static_cast<double>(kcount) * kcount <= fft_cost) {
      // Direct sum over pairs into a local offset window.
      // Plain doubles avoid the checked complex multiply in the hot loop.
      local.assign(static_cast<std::size_t>(span) * span, cplx(0.0));
      double* acc = reinterpret_cast<double*>(local.data());
      for (const auto& x : modes) {
        const double xr = x.a.real(), xi = x.a.imag();
        double* base = acc + 2 * (static_cast<std::ptrdiff_t>(x.m2 + w - 1) * span +
                                  (x.m1 + w - 1));
        for (const auto& y : modes) {
          const double yr = y.a.real(), yi = y.a.imag();
          double* dst = base - 2 * (static_cast<std::ptrdiff_t>(y.m2) * span + y.m1);
          dst[0] += xr * yr + xi * yi;
          dst[1] += xi * yr - xr * yi;
        }
      }
      for (int d2 = -(w - 1); d2 <= w - 1; ++d2) {
        const std::size_t row = static_cast<std::size_t>(g.wrap_index(d2)) * n;
        const cplx* src = &local[static_cast<std::size_t>(d2 + w - 1) * span];
        for (int d1 = -(w - 1); d1 <= w - 1; ++d1) {
          h[row + g.wrap_index(d1)] += src[d1 + w - 1];
        }
      }
      continue;
    }
    // Autocorrelation through a zero-padded p x p transform.
    const std::size_t pp = static_cast<std::size_t>(p) * p;
    buf.assign(pp, cplx(0.0));
    out.assign(pp, cplx(0.0));
    for (const auto& x : modes) {
      buf[static_cast<std::size_t>(x.m2 - lo2) * p + (x.m1 - lo1)] = x.a;
    }
    detail::fft2d(p, p, buf.data(), out.data(), -1);
    for (auto& v : out) v = std::norm(v);
    detail::fft2d(p, p, out.data(), buf.data(), +1);
    const double scale = 1.0 / static_cast<double>(pp);
    for (int d2 = -(w - 1); d2 <= w - 1; ++d2) {
      const int r2 = (d2 + p) % p;
      for (int d1 = -(w - 1); d1 <= w - 1; ++d1) {
        const int r1 = (d1 + p) % p;
        h[g.flat(g.wrap_index(d1), g.wrap_index(d2))] +=
            scale * buf[static_cast<std::size_t>(r2) * p + r1];
      }
    }
  }
  std::vector<cplx> sq(g.size());
  detail::fft2d(n, n, h.data(), sq.data(), +1);
  for (auto& v : sq) v = std::sqrt(std::max(0.0, v.real()));
  return ScalarField(g, Representation::physical, ValueKind::real,
                     std::move(sq));
}

double FieldSeries::interval() const {
  return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1);
}

double time_lq(const std::vector<double>& values, double dt, double q) {
  if (values.empty()) return 0.0;
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (values.size() == 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double wgt = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
    sum += wgt * std::pow(std::abs(values[i]), q);
  }
  return std::pow(sum * dt, 1.0 / q);
}

BandNorm s0k_detail(const FieldSeries& series, int k) {
  if (series.samples.empty()) throw EmptyTrajectory("no samples in series");
  const GridSpec& g = series.samples.front().grid();
  BandNorm out;
  out.k = k;
  std::vector<ScalarField> pk;
  pk.reserve(series.samples.size());
  bool any = false;
  for (const auto& f : series.samples) {
    pk.push_back(lp_project(f, k));
    const double nrm = l2_norm(pk.back());
    out.linf_l2 = std::max(out.linf_l2, nrm);
    any = any || nrm > 0.0;
  }
  const int lmin = std::min(finest_scale(g), k);
  out.attaining_ell = k;
  if (!any) {
    for (int ell = lmin; ell <= k; ++ell) out.per_ell.emplace_back(ell, 0.0);
    return out;
  }
  double best = -1.0;
  for (int ell = lmin; ell <= k; ++ell) {
    const CubeCover cover = cube_cover(g, ell, k);
    std::vector<double> sup_x;
    sup_x.reserve(pk.size());
    for (const auto& f : pk) sup_x.push_back(linf_norm(square_function(f, cover)));
    const double l4 = time_lq(sup_x, series.dt, 4.0);
    const double term =
        std::ldexp(1.0, k - ell) * std::pow(2.0, -1.5 * k) * l4 * l4;
    out.per_ell.emplace_back(ell, term);
    if (term > best) {
      best = term;
      out.attaining_ell = ell;
    }
  }
  out.sup_term = best;
  out.attained_at_lattice = out.attaining_ell == lmin && lmin < k;
  out.value = std::sqrt(out.linf_l2 * out.linf_l2 + out.sup_term);
  return out;
}

double s0k_norm(const FieldSeries& series, int k) {
  return s0k_detail(series, k).value;
}

TrajectoryNormReport s_gamma_norm(const FieldSeries& series, double gamma) {
  if (series.samples.empty()) throw EmptyTrajectory("no samples in series");
  const GridSpec& g = series.samples.front().grid();
  TrajectoryNormReport rep;
  rep.gamma = gamma;
  rep.samples = series.samples.size();
  rep.t0 = series.t0;
  rep.t1 = series.t0 + series.interval();
  const BandRange br = resolvable_bands(g);
  double sum = 0.0;
  for (int k = br.k_min; k <= br.k_max; ++k) {
    BandNorm b = s0k_detail(series, k);
    sum += std::pow(2.0, 2.0 * gamma * std::max(k, 0)) * b.value * b.value;
    rep.bands.push_back(std::move(b));
  }
  rep.value = std::sqrt(sum);
  for (const auto& f : series.samples) {
    rep.sup_sobolev = std::max(rep.sup_sobolev, sobolev_norm(f, gamma, false));
  }
  return rep;
}

std::string to_json(const TrajectoryNormReport& report) {
  nlohmann::json j;
  j["gamma"] = report.gamma;
  j["value"] = report.value;
  j["quadrature"] = report.quadrature;
  j["samples"] = report.samples;
  j["interval"] = {report.t0, report.t1};
  j["sup_sobolev"] = report.sup_sobolev;
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : report.bands) {
    nlohmann::json e;
    e["k"] = b.k;
    e["s0k"] = b.value;
    e["linf_l2"] = b.linf_l2;
    e["sup_term"] = b.sup_term;
    e["attaining"] = {{"ell", b.attaining_ell}, {"k", b.k}};
    e["attained_at_lattice"] = b.attained_at_lattice;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [ell, v] : b.per_ell) per[std::to_string(ell)] = v;
    e["per_ell"] = per;
    bands.push_back(e);
  }
  j["bands"] = bands;
  return j.dump(2);
}

bool in_lh(int k0, int k1, int k2) {
  return k1 <= k2 + 5 && std::abs(k0 - k2) <= 5;
}

bool in_hl(int k0, int k1, int k2) {
  return k2 <= k1 + 5 && std::abs(k0 - k1) <= 5;
}

bool in_hh(int k0, int k1, int k2) {
  return k0 <= std::min(k1, k2) - 5 && std::abs(k1 - k2) <= 5;
}

ScalarField band_sum(const ScalarField& f) {
  const BandRange br = resolvable_bands(f.grid());
  ScalarField s = as_spectral(f);
  return apply_radial(s, [br](double r) {
    return low_symbol(br.k_max, r) - low_symbol(br.k_min - 1, r);
  });
}

Trichotomy trichotomy_split(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const GridSpec& grid = f.grid();
  for (const ScalarField* x : {&f, &g}) {
    const double nrm = l2_norm(*x);
    if (l2_norm(band_sum(*x) - *x) > 1e-10 * std::max(nrm, 1e-300)) {
      throw BandOutOfRange(
          "trichotomy inputs must be mean-zero and band-limited");
    }
  }
  const BandRange br = resolvable_bands(grid);
  std::vector<ScalarField> fk, gk;
  for (int k = br.k_min; k <= br.k_max; ++k) {
    fk.push_back(lp_project(f, k));
    gk.push_back(lp_project(g, k));
  }
  const ScalarField zero(grid, Representation::spectral);
  Trichotomy t{zero, zero, zero, zero};
  const int nb = br.k_max - br.k_min + 1;
  for (int i1 = 0; i1 < nb; ++i1) {
    if (l2_norm(fk[i1]) == 0.0) continue;
    for (int i2 = 0; i2 < nb; ++i2) {
      if (l2_norm(gk[i2]) == 0.0) continue;
      const ScalarField prod = padded_product(fk[i1], gk[i2]);
      const int k1 = br.k_min + i1, k2 = br.k_min + i2;
      for (int k0 = br.k_min; k0 <= br.k_max; ++k0) {
        const ScalarField piece = lp_project(prod, k0);
        const bool lh = in_lh(k0, k1, k2);
        const bool hl = in_hl(k0, k1, k2);
        // The index sets overlap; overlapping triples go to the side of
        // the higher input band, split evenly on ties, so that swapping
        // the inputs swaps LH and HL.
        if (lh && hl && k1 == k2) {
          t.lh = t.lh + 0.5 * piece;
          t.hl = t.hl + 0.5 * piece;
        } else if (lh && (!hl || k1 < k2)) {
          t.lh = t.lh + piece;
        } else if (hl) {
          t.hl = t.hl + piece;
        } else if (in_hh(k0, k1, k2)) {
          t.hh = t.hh + piece;
        } else {
          t.remainder = t.remainder + piece;
        }
      }
    }
  }
  return t;
}

}  // namespace cshlab::lp
