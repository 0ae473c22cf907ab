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

#include "cshlab/integrator.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "cshlab/diagnostics.hpp"
#include "cshlab/errors.hpp"

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

// Radial wave multipliers sampled on the grid for one time step.
struct Propagator {
  std::vector<double> cos_full;   // cos(dt |xi|)
  std::vector<double> sinc_full;  // sin(dt |xi|) / |xi|, dt at xi = 0
  std::vector<double> gsin_full;  // |xi| sin(dt |xi|)
  std::vector<double> cos_half;
  std::vector<double> sinc_half;
  std::vector<double> gsin_half;
};

void fill(const WaveTable& w, double t, std::vector<double>& c,
          std::vector<double>& s, std::vector<double>& g) {
  const std::size_t n = w.norm.size();
  c.resize(n);
  s.resize(n);
  g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = w.norm[i];
    c[i] = std::cos(t * r);
    s[i] = r == 0.0 ? t : std::sin(t * r) / r;
    g[i] = r * std::sin(t * r);
  }
}

std::shared_ptr<const Propagator> propagator(const GridSpec& grid, double dt) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>,
                  std::shared_ptr<const Propagator>>
      cache;
  const auto key = std::make_tuple(grid.n(), grid.length(), dt);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 64) cache.clear();
  auto p = std::make_shared<Propagator>();
  const WaveTable& w = wave_table(grid);
  fill(w, dt, p->cos_full, p->sinc_full, p->gsin_full);
  fill(w, 0.5 * dt, p->cos_half, p->sinc_half, p->gsin_half);
  cache.emplace(key, p);
  return p;
}

// Spectral accumulator: out += coef * mult .* f for each term.
class Combo {
 public:
  explicit Combo(const GridSpec& g) : grid_(g), d_(g.size()) {}
  Combo& add(const ScalarField& f, cplx coef) {
    const auto src = f.data();
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += coef * src[i];
    return *this;
  }
  Combo& add(const ScalarField& f, cplx coef, const std::vector<double>& m) {
    const auto src = f.data();
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += coef * m[i] * src[i];
    return *this;
  }
  ScalarField field() {
    return ScalarField(grid_, Representation::spectral, ValueKind::complex,
                       std::move(d_));
  }

 private:
  GridSpec grid_;
  std::vector<cplx> d_;
};

struct Rhs {
  ScalarField f;                    // F_tot
  ScalarField g;                    // a0 phi
  std::optional<ScalarField> divj;  // div J
};

Rhs evaluate(const CshState& s, const PotentialSpec& pot, bool want_divj) {
  const GridSpec& grid = s.grid();
  const ScalarField p = as_physical(s.phi);
  const ScalarField up = as_physical(s.u);
  const ScalarField g1 = to_physical(apply_multiplier(s.phi, d1()));
  const ScalarField g2 = to_physical(apply_multiplier(s.phi, d2()));
  const ScalarField b0 = as_physical(s.a0);
  const ScalarField b1 = as_physical(s.a1);
  const ScalarField b2 = as_physical(s.a2);
  const std::size_t n = grid.size();
  std::vector<cplx> fd(n), gd(n), j1, j2;
  if (want_divj) {
    j1.resize(n);
    j2.resize(n);
  }
  const cplx i(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double a0 = b0[k].real();
    const double a1 = b1[k].real();
    const double a2 = b2[k].real();
    const double r = std::norm(p[k]);
    fd[k] = pot.mass * p[k] + 2.0 * i * (a1 * g1[k] + a2 * g2[k]) -
            i * a0 * up[k] + (a1 * a1 + a2 * a2) * p[k] + p[k] * pot.dV(r);
    gd[k] = a0 * p[k];
    if (want_divj) {
      j1[k] = (p[k] * std::conj(g1[k])).imag() + a1 * r;
      j2[k] = (p[k] * std::conj(g2[k])).imag() + a2 * r;
    }
  }
  auto spec = [&grid](std::vector<cplx>&& d, ValueKind kind) {
    return dealias(to_spectral(
        ScalarField(grid, Representation::physical, kind, std::move(d))));
  };
  Rhs out{spec(std::move(fd), ValueKind::complex),
          spec(std::move(gd), ValueKind::complex), std::nullopt};
  if (want_divj) {
    out.divj = divergence(spec(std::move(j1), ValueKind::real),
                          spec(std::move(j2), ValueKind::real));
  }
  return out;
}

double pair_norm(const ScalarField& a, const ScalarField& b) {
  const double x = l2_norm(a);
  const double y = l2_norm(b);
  return std::sqrt(x * x + y * y);
}

void check_finite(const CshState& s, long step) {
  if (!all_finite(s.phi) || !all_finite(s.u)) {
    throw NonFinite("non-finite field at step " + std::to_string(step), step);
  }
}

CshState with_fields(const CshState& base, ScalarField phi, ScalarField u,
                     const GaugeConvention& conv) {
  CshState s = base;
  s.phi = std::move(phi);
  s.u = std::move(u);
  return refresh_gauge(s, conv);
}

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::twisted_duhamel ? "twisted_duhamel" : "rk4_reference";
}

std::string to_string(Quadrature q) {
  return q == Quadrature::trapezoid ? "trapezoid" : "midpoint";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "twisted_duhamel") return Scheme::twisted_duhamel;
  if (s == "rk4_reference") return Scheme::rk4_reference;
  throw InvalidArgument("unknown scheme '" + s + "'");
}

Quadrature parse_quadrature(const std::string& s) {
  if (s == "trapezoid") return Quadrature::trapezoid;
  if (s == "midpoint") return Quadrature::midpoint;
  throw InvalidArgument("unknown quadrature '" + s + "'");
}

void StepConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
  if (picard_max < 1) throw InvalidArgument("picard_max must be >= 1");
  if (!(picard_tol > 0.0)) throw InvalidArgument("picard_tol must be > 0");
  if (!(delta0_guard > 0.0)) throw InvalidArgument("delta0_guard must be > 0");
  if (gauge.sigma != 1 && gauge.sigma != -1) {
    throw InvalidArgument("sigma must be +1 or -1");
  }
}

std::pair<ScalarField, ScalarField> half_wave(const ScalarField& f,
                                              const ScalarField& g, double t) {
  require_same_grid(f, g);
  const ScalarField fs = as_spectral(f).with_kind(ValueKind::complex);
  const ScalarField gs = as_spectral(g).with_kind(ValueKind::complex);
  const auto prop = propagator(f.grid(), t);
  ScalarField pos = Combo(f.grid())
                        .add(fs, 1.0, prop->cos_full)
                        .add(gs, 1.0, prop->sinc_full)
                        .field();
  ScalarField vel = Combo(f.grid())
                        .add(fs, -1.0, prop->gsin_full)
                        .add(gs, 1.0, prop->cos_full)
                        .field();
  return {std::move(pos), std::move(vel)};
}

CshState refresh_gauge(const CshState& state, const GaugeConvention& conv) {
  CshState s = state;
  GaugeFields gf = solve_gauge(s.phi, s.u, conv);
  s.a0 = std::move(gf.a0);
  s.a1 = std::move(gf.a1);
  s.a2 = std::move(gf.a2);
  return s;
}

ScalarField nonlinearity_f(const CshState& state, const PotentialSpec& pot) {
  return evaluate(state, pot, false).f;
}

CshState twisted_duhamel_step(const CshState& state, const StepConfig& cfg,
                              const PotentialSpec& pot) {
  cfg.validate();
  const GridSpec& grid = state.grid();
  const double dt = cfg.dt;
  const auto prop = propagator(grid, dt);
  const cplx i(0.0, 1.0);
  const bool trap = cfg.quadrature == Quadrature::trapezoid;
  const long step_index = state.provenance.step + 1;

  const Rhs r0 = evaluate(state, pot, state.transported_curl.has_value());
  const double a0max = linf_norm(state.a0);

  // Parts of the update that do not depend on the iterate.
  Combo phi_base(grid), u_base(grid);
  phi_base.add(state.phi, 1.0, prop->cos_full).add(state.u, 1.0, prop->sinc_full);
  u_base.add(state.phi, -1.0, prop->gsin_full).add(state.u, 1.0, prop->cos_full);
  const ScalarField phi_free = std::move(phi_base).field();
  const ScalarField u_free = std::move(u_base).field();

  auto apply_map = [&](const Rhs& rk) {
    Combo phi(grid), u(grid);
    phi.add(phi_free, 1.0);
    u.add(u_free, 1.0);
    if (trap) {
      phi.add(r0.f, -0.5 * dt, prop->sinc_full)
          .add(r0.g, 0.5 * dt * i, prop->cos_full)
          .add(rk.g, 0.5 * dt * i);
      u.add(r0.f, -0.5 * dt, prop->cos_full)
          .add(rk.f, -0.5 * dt)
          .add(r0.g, -0.5 * dt * i, prop->gsin_full);
    } else {
      for (const Rhs* r : {&r0, &rk}) {
        phi.add(r->f, -0.5 * dt, prop->sinc_half)
            .add(r->g, 0.5 * dt * i, prop->cos_half);
        u.add(r->f, -0.5 * dt, prop->cos_half)
            .add(r->g, -0.5 * dt * i, prop->gsin_half);
      }
    }
    return std::make_pair(std::move(phi).field(), std::move(u).field());
  };

  CshState cur = with_fields(state, phi_free, u_free, cfg.gauge);
  std::vector<double> deltas;
  int growth = 0;
  int iters = 0;
  double delta = 0.0;
  for (int k = 0; k < cfg.picard_max; ++k) {
    const Rhs rk = evaluate(cur, pot, false);
    auto [phi_n, u_n] = apply_map(rk);
    const double num = pair_norm(phi_n - cur.phi, u_n - cur.u);
    const double den = pair_norm(phi_n, u_n);
    delta = den > 0.0 ? num / den : num;
    ++iters;
    if (!std::isfinite(delta)) {
      throw PicardDivergence("non-finite Picard iterate at step " +
                                 std::to_string(step_index),
                             step_index, iters);
    }
    if (!deltas.empty() && delta > deltas.back()) {
      if (++growth >= 3) {
        throw PicardDivergence("Picard deltas grew 3 times in a row at step " +
                                   std::to_string(step_index),
                               step_index, iters);
      }
    } else {
      growth = 0;
    }
    deltas.push_back(delta);
    cur = with_fields(state, std::move(phi_n), std::move(u_n), cfg.gauge);
    if (delta <= cfg.picard_tol) break;
  }

  if (state.transported_curl) {
    const Rhs r1 = evaluate(cur, pot, true);
    cur.transported_curl =
        as_spectral(*state.transported_curl) - 0.5 * dt * (*r0.divj + *r1.divj);
    cur.transported_curl = cur.transported_curl->with_kind(ValueKind::real);
  }
  cur.t = state.t + dt;
  cur.provenance = Provenance{step_index, iters, delta, std::move(deltas),
                              dt * a0max * a0max > cfg.delta0_guard};
  return cur;
}

CshState rk4_reference_step(const CshState& state, const StepConfig& cfg,
                            const PotentialSpec& pot) {
  cfg.validate();
  const GridSpec& grid = state.grid();
  const double dt = cfg.dt;
  const cplx i(0.0, 1.0);
  const bool with_b = state.transported_curl.has_value();
  static const Symbol lap = symbols::laplacian();

  struct Deriv {
    ScalarField phi, u;
    std::optional<ScalarField> b;
  };
  auto deriv = [&](const CshState& s) {
    const Rhs r = evaluate(s, pot, with_b);
    Deriv d{Combo(grid).add(s.u, 1.0).add(r.g, i).field(),
            apply_multiplier(s.phi, lap) - r.f, std::nullopt};
    if (with_b) d.b = -1.0 * *r.divj;
    return d;
  };
  auto stage = [&](const Deriv& k, double h) {
    CshState s = with_fields(state, state.phi + h * k.phi,
                             state.u + h * k.u, cfg.gauge);
    if (with_b) {
      s.transported_curl = as_spectral(*state.transported_curl) + h * *k.b;
    }
    return s;
  };

  const Deriv k1 = deriv(state);
  const Deriv k2 = deriv(stage(k1, 0.5 * dt));
  const Deriv k3 = deriv(stage(k2, 0.5 * dt));
  const Deriv k4 = deriv(stage(k3, dt));
  const double w = dt / 6.0;
  ScalarField phi = Combo(grid)
                        .add(state.phi, 1.0)
                        .add(k1.phi, w)
                        .add(k2.phi, 2.0 * w)
                        .add(k3.phi, 2.0 * w)
                        .add(k4.phi, w)
                        .field();
  ScalarField u = Combo(grid)
                      .add(state.u, 1.0)
                      .add(k1.u, w)
                      .add(k2.u, 2.0 * w)
                      .add(k3.u, 2.0 * w)
                      .add(k4.u, w)
                      .field();
  CshState out = with_fields(state, std::move(phi), std::move(u), cfg.gauge);
  if (with_b) {
    out.transported_curl =
        (as_spectral(*state.transported_curl) + w * *k1.b + (2.0 * w) * *k2.b +
         (2.0 * w) * *k3.b + w * *k4.b)
            .with_kind(ValueKind::real);
  }
  const double a0max = linf_norm(state.a0);
  out.t = state.t + dt;
  out.provenance = Provenance{state.provenance.step + 1, 0, 0.0, {},
                              dt * a0max * a0max > cfg.delta0_guard};
  return out;
}

CshState step(const CshState& state, const StepConfig& cfg,
              const PotentialSpec& pot) {
  return cfg.scheme == Scheme::twisted_duhamel
             ? twisted_duhamel_step(state, cfg, pot)
             : rk4_reference_step(state, cfg, pot);
}

EvolveResult evolve_checked(const CshState& initial, const StepConfig& cfg,
                            const PotentialSpec& pot, double t_end,
                            const EvolveOptions& opts) {
  cfg.validate();
  if (!(t_end > initial.t)) throw InvalidArgument("t_end must exceed t0");
  if (opts.diag_every < 1) throw InvalidArgument("diag_every must be >= 1");
  if (opts.store_every < 0) throw InvalidArgument("store_every must be >= 0");
  const long steps = static_cast<long>(
      std::ceil((t_end - initial.t) / cfg.dt - 1e-9));
  const std::string tag = to_string(cfg.scheme);
  const int sigma = cfg.gauge.sigma;

  EvolveResult res;
  Trajectory& tr = res.trajectory;
  tr.t0 = initial.t;
  tr.dt = cfg.dt;
  tr.stride = opts.store_every == 0 ? std::max(1L, steps) : opts.store_every;

  CshState s = refresh_gauge(initial, cfg.gauge);
  if (!s.transported_curl) s.transported_curl = curl(s.a1, s.a2);
  s.provenance = Provenance{};

  std::vector<double> q, rate;
  std::vector<long> row_steps;
  q.reserve(steps + 1);
  rate.reserve(steps + 1);
  auto record = [&](long k) {
    q.push_back(charge(s));
    rate.push_back(charge_rate(s));
    if (k % opts.diag_every == 0 || k == steps) {
      tr.rows.push_back(make_row(s, pot, sigma, tag, 0.0));
      row_steps.push_back(k);
    }
    if (k % tr.stride == 0) tr.states.push_back(s);
    if (opts.on_step) opts.on_step(s, k);
  };

  record(0);
  long k = 1;
  try {
    for (; k <= steps; ++k) {
      s = step(s, cfg, pot);
      s.t = initial.t + static_cast<double>(k) * cfg.dt;
      check_finite(s, k);
      record(k);
    }
  } catch (const PicardDivergence& e) {
    res.abort = AbortKind::picard_divergence;
    res.message = e.what();
    res.abort_step = e.step();
    res.abort_iterations = e.iterations();
  } catch (const NonFinite& e) {
    res.abort = AbortKind::non_finite;
    res.message = e.what();
    res.abort_step = e.step();
  }

  // Charge-rate residuals: central differences inside, one-sided second
  // order differences at the ends of the computed range.
  const long last = static_cast<long>(q.size()) - 1;
  const double h = cfg.dt;
  for (std::size_t r = 0; r < row_steps.size(); ++r) {
    const long j = row_steps[r];
    double fd = 0.0;
    if (last == 0) {
      fd = rate[0];
    } else if (last == 1) {
      fd = (q[1] - q[0]) / h;
    } else if (j == 0) {
      fd = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
    } else if (j == last) {
      fd = (3.0 * q[j] - 4.0 * q[j - 1] + q[j - 2]) / (2.0 * h);
    } else {
      fd = (q[j + 1] - q[j - 1]) / (2.0 * h);
    }
    tr.rows[r].charge_rate_residual =
        std::abs(fd - rate[j]) / std::max(1.0, q[j]);
  }
  return res;
}

Trajectory evolve(const CshState& initial, const StepConfig& cfg,
                  const PotentialSpec& pot, double t_end,
                  const EvolveOptions& opts) {
  EvolveResult r = evolve_checked(initial, cfg, pot, t_end, opts);
  switch (r.abort) {
    case AbortKind::picard_divergence:
      throw PicardDivergence(r.message, r.abort_step, r.abort_iterations);
    case AbortKind::non_finite:
      throw NonFinite(r.message, r.abort_step);
    case AbortKind::none:
      break;
  }
  return std::move(r.trajectory);
}

}  // namespace cshlab
