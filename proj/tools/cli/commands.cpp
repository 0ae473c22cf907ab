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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cshlab/diagnostics.hpp"
#include "cshlab/errors.hpp"
#include "cshlab/io.hpp"
#include "cshlab/lp_toolkit.hpp"

#ifndef CSHLAB_VERSION
#define CSHLAB_VERSION "unknown"
#endif
#ifndef CSHLAB_BUILD_TYPE
#define CSHLAB_BUILD_TYPE "unknown"
#endif

namespace cshlab::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Log {
 public:
  explicit Log(bool quiet) : quiet_(quiet) {}
  template <typename... Args>
  void operator()(const Args&... args) const {
    if (quiet_) return;
    (std::cerr << ... << args) << '\n';
  }

 private:
  bool quiet_;
};

void write_json(const fs::path& path, const json& j) {
  io::write_file_atomic(path, j.dump(2) + "\n");
}

json build_info() {
  return {{"version", CSHLAB_VERSION},
          {"build_type", CSHLAB_BUILD_TYPE},
          {"compiler", __VERSION__},
          {"cxx_standard", static_cast<long>(__cplusplus)}};
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : to_map(cfg)) j[k] = v;
  return j;
}

// Runs f and turns configuration and format errors into exit code 2.
template <typename F>
int guarded(const char* cmd, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    std::cerr << cmd << ": config error: " << e.what() << '\n';
  } catch (const FormatError& e) {
    std::cerr << cmd << ": format error: " << e.what() << '\n';
  } catch (const InvalidGrid& e) {
    std::cerr << cmd << ": config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << cmd << ": aborted: " << e.what() << '\n';
    return kExitRuntimeAbort;
  }
  return kExitConfigError;
}

double rel_diff(const ScalarField& a, const ScalarField& b) {
  const double nb = l2_norm(b);
  const double d = l2_norm(as_spectral(a) - as_spectral(b));
  return nb > 0.0 ? d / nb : d;
}

}  // namespace

RunConfig resolve_config(const Options& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out) {
    cfg.output = *opts.out;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    cfg.output = env;
  }
  validate(cfg);
  return cfg;
}

double relative_divergence(const CshState& s) {
  const ScalarField d1 = apply_multiplier(s.a1, symbols::derivative(1));
  const ScalarField d2 = apply_multiplier(s.a2, symbols::derivative(2));
  const double scale = l2_norm(d1) + l2_norm(d2);
  const double div = l2_norm(d1 + d2);
  return scale > 0.0 ? div / scale : div;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Options& opts) {
  return guarded("simulate", [&] {
    const Log log(opts.quiet);
    const RunConfig cfg = resolve_config(opts);
    const PotentialSpec pot = make_potential(cfg);
    const StepConfig step_cfg = make_step(cfg);
    const CshState initial = make_initial_state(cfg);
    if (!(cfg.t_end > initial.t)) throw ConfigError("run.t_end must exceed the initial time");
    const fs::path out = cfg.output;
    fs::create_directories(out);

    std::optional<MonitorReference> ref;
    double min_slack = std::numeric_limits<double>::infinity();
    long monitor_violations = 0, guard_warnings = 0;
    double max_div = 0.0;
    json snapshots = json::array();
    CshState last = initial;
    long last_step = 0;

    EvolveOptions eo;
    eo.diag_every = cfg.diag_every;
    eo.store_every = 0;
    eo.on_step = [&](const CshState& s, long k) {
      last = s;
      last_step = k;
      max_div = std::max(max_div, relative_divergence(s));
      if (s.provenance.guard_warning) ++guard_warnings;
      if (pot.alpha) {
        if (!ref) ref = MonitorReference{s.t, energy(s, pot), l2_norm(s.phi)};
        const AprioriReport r = apriori_monitor(s, pot, *ref);
        min_slack = std::min(min_slack, r.slack);
        if (!r.holds || !r.envelope_ok) ++monitor_violations;
      }
      if (k == 0 || (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)) {
        const std::string name = io::snapshot_name(k);
        io::write_snapshot(out / name, s, cfg.sigma);
        snapshots.push_back(name);
      }
    };
    log("simulate: n=", cfg.n, " dt=", cfg.dt, " t_end=", cfg.t_end,
        " scheme=", cfg.scheme, " sigma=", cfg.sigma);
    const EvolveResult res = evolve_checked(initial, step_cfg, pot, cfg.t_end, eo);
    const std::string final_name = io::snapshot_name(last_step);
    if (snapshots.empty() || snapshots.back() != final_name) {
      io::write_snapshot(out / final_name, last, cfg.sigma);
      snapshots.push_back(final_name);
    }

    std::ostringstream csv;
    write_csv_header(csv);
    for (const auto& row : res.trajectory.rows) write_csv_row(csv, row);
    io::write_file_atomic(out / "diagnostics.csv", csv.str());

    const bool div_ok = max_div <= kDivTolerance;
    const bool monitor_ok = monitor_violations == 0;
    int code = kExitOk;
    std::string status = "completed";
    if (res.abort != AbortKind::none) {
      code = kExitRuntimeAbort;
      status = res.abort == AbortKind::picard_divergence ? "picard_divergence" : "non_finite";
    } else if (!div_ok || !monitor_ok) {
      code = kExitPropertyFailure;
      status = "property_failure";
    }

    json m;
    m["schema"] = "cshlab.run_manifest/1";
    m["config"] = config_json(cfg);
    m["build"] = build_info();
    m["sigma"] = cfg.sigma;
    m["status"] = status;
    m["exit_code"] = code;
    m["message"] = res.message;
    m["abort_step"] = res.abort_step;
    m["steps_completed"] = last_step;
    m["t_final"] = last.t;
    m["rows"] = res.trajectory.rows.size();
    m["snapshots"] = snapshots;
    m["guard_warnings"] = guard_warnings;
    json checks;
    checks["max_div_a_relative"] = max_div;
    checks["div_a_tolerance"] = kDivTolerance;
    checks["div_a_ok"] = div_ok;
    if (pot.alpha) {
      checks["apriori"] = {{"alpha", *pot.alpha},
                           {"min_slack", min_slack},
                           {"violations", monitor_violations},
                           {"ok", monitor_ok}};
    } else {
      checks["apriori"] = nullptr;
    }
    m["checks"] = checks;
    write_json(out / "run_manifest.json", m);

    if (code == kExitRuntimeAbort) {
      std::cerr << "simulate: aborted at step " << res.abort_step << ": " << res.message << '\n';
    } else if (code == kExitPropertyFailure) {
      std::cerr << "simulate: property check failed (div " << max_div << ", monitor violations "
                << monitor_violations << ")\n";
    }
    log("simulate: ", status, ", ", last_step, " steps, output in ", out.string());
    return code;
  });
}

// ------------------------------------------------------------------ verify

namespace {

struct Check {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

json to_json(const Check& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"value", c.value},
          {"tolerance", c.tolerance}, {"detail", c.detail}};
}

ScalarField random_modes(const GridSpec& g, int mmax, std::uint64_t seed, bool mean_zero) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> d(g.size());
  for (int j2 = 0; j2 < g.n(); ++j2) {
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const double re = nd(rng), im = nd(rng);
      const int m1 = g.signed_index(j1), m2 = g.signed_index(j2);
      if (std::abs(m1) > mmax || std::abs(m2) > mmax) continue;
      if (mean_zero && m1 == 0 && m2 == 0) continue;
      d[g.flat(j1, j2)] = cplx(re, im);
    }
  }
  return ScalarField(g, Representation::spectral, ValueKind::complex, std::move(d));
}

Check check_null_form(const GridSpec& g, int pairs, std::uint64_t seed) {
  Check c{"null_form_identity", true, 0.0, kNullFormTolerance, ""};
  const int mmax = std::max(1, g.n() / 8);
  for (int i = 0; i < pairs; ++i) {
    const ScalarField phi = random_modes(g, mmax, seed + 2 * i, false);
    const ScalarField psi = random_modes(g, mmax, seed + 2 * i + 1, false);
    const auto [lhs, rhs] = null_form_pair(phi, psi);
    const double scale = lp::sobolev_norm(phi, 1.0, false) * lp::sobolev_norm(psi, 1.0, false);
    c.value = std::max(c.value, l2_norm(lhs - rhs) / scale);
  }
  c.passed = c.value <= c.tolerance;
  c.detail = std::to_string(pairs) + " pairs, |m| <= " + std::to_string(mmax);
  return c;
}

Check check_telescoping(const GridSpec& g, std::uint64_t seed) {
  Check c{"lp_telescoping", true, 0.0, kTelescopeTolerance, ""};
  const lp::BandRange br = lp::resolvable_bands(g);
  // Keep |xi| <= 2^(k_max + 1) on the square |m_i| <= mmax.
  const int mmax = static_cast<int>(
      std::floor(std::ldexp(1.0, br.k_max + 1) / (std::sqrt(2.0) * g.frequency_unit())));
  for (int i = 0; i < 10; ++i) {
    const ScalarField f = random_modes(g, mmax, seed + i, true);
    c.value = std::max(c.value, rel_diff(lp::band_sum(f), f));
  }
  c.passed = c.value <= c.tolerance;
  c.detail = "bands " + std::to_string(br.k_min) + ".." + std::to_string(br.k_max);
  return c;
}

std::vector<Check> check_cube_partition(const GridSpec& g) {
  Check part{"cube_partition_of_unity", true, 0.0, kPartitionTolerance, ""};
  Check count{"cube_count", true, 0.0, lp::CubeCover::kCountConstant, ""};
  const lp::BandRange br = lp::resolvable_bands(g);
  const WaveTable& w = wave_table(g);
  int covers = 0;
  for (int k = std::max(br.k_min, 1); k <= br.k_max; ++k) {
    for (int ell = lp::finest_scale(g); ell <= k; ++ell) {
      const lp::CubeCover cv = lp::cube_cover(g, ell, k);
      std::vector<double> sum(g.size());
      for (std::size_t q = 0; q < cv.size(); ++q) {
        for (const auto& e : cv.entries(q)) sum[e.index] += e.weight;
      }
      const double r_in = std::ldexp(1.0, k - 2), r_out = std::ldexp(1.0, k + 2);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (w.norm[i] < r_in || w.norm[i] > r_out) continue;
        part.value = std::max(part.value, std::abs(sum[i] - 1.0));
      }
      count.value = std::max(count.value,
                             static_cast<double>(cv.size()) / std::pow(4.0, k - ell));
      ++covers;
    }
  }
  part.passed = part.value <= part.tolerance;
  count.passed = count.value <= count.tolerance;
  part.detail = std::to_string(covers) + " covers";
  count.detail = "max cubes / 4^(k - l)";
  return {part, count};
}

Check check_fft_round_trip(const GridSpec& g, std::uint64_t seed) {
  Check c{"fft_round_trip", true, 0.0, kFftRoundTripTolerance, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<cplx> d(g.size());
  for (auto& v : d) {
    const double re = ud(rng);
    v = cplx(re, ud(rng));
  }
  const ScalarField f(g, Representation::physical, ValueKind::complex, std::move(d));
  const ScalarField back = to_physical(to_spectral(f));
  double err = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(back[i] - f[i]));
    mx = std::max(mx, std::abs(f[i]));
  }
  c.value = err / mx;
  c.passed = c.value <= c.tolerance;
  return c;
}

Check check_snapshot_round_trip(const CshState& s, int sigma) {
  Check c{"snapshot_round_trip", true, 0.0, 0.0, "bit-exact"};
  const std::string bytes = io::encode_snapshot(s, sigma);
  const io::Snapshot snap = io::decode_snapshot(bytes);
  const std::pair<const ScalarField*, const ScalarField*> pairs[] = {
      {&s.phi, &snap.phi}, {&s.u, &snap.u}, {&s.a0, &snap.a0},
      {&s.a1, &snap.a1}, {&s.a2, &snap.a2}};
  long mismatches = 0;
  for (const auto& [orig, read] : pairs) {
    const ScalarField p = as_physical(*orig);
    for (std::size_t i = 0; i < p.data().size(); ++i) {
      const cplx want = orig->is_real() ? cplx(p[i].real(), 0.0) : p[i];
      if (want != (*read)[i]) ++mismatches;
    }
  }
  if (snap.t != s.t || snap.sigma != sigma) ++mismatches;
  c.value = static_cast<double>(mismatches);
  c.passed = mismatches == 0;
  return c;
}

Check check_csv_round_trip(const CshState& s, const PotentialSpec& pot, int sigma) {
  Check c{"csv_round_trip", true, 0.0, 0.0, "text-exact"};
  std::ostringstream a, b;
  write_csv_header(a);
  write_csv_row(a, make_row(s, pot, sigma, "twisted_duhamel", 0.0));
  write_csv_header(b);
  for (const auto& row : read_csv(a.str())) write_csv_row(b, row);
  c.passed = a.str() == b.str();
  c.value = c.passed ? 0.0 : 1.0;
  return c;
}

}  // namespace

int cmd_verify(const Options& opts) {
  return guarded("verify", [&] {
    const Log log(opts.quiet);
    const RunConfig cfg = resolve_config(opts);
    const GridSpec g = make_grid(cfg);
    const PotentialSpec pot = make_potential(cfg);
    const CshState s = make_initial_state(cfg);
    const std::vector<estimates::EstimateCase> cases = make_estimate_cases(cfg);

    std::vector<Check> checks;
    log("verify: structural checks on n=", g.n());
    checks.push_back(check_null_form(g, cfg.null_form_pairs, cfg.seed));
    checks.push_back(check_telescoping(g, cfg.seed));
    for (auto& c : check_cube_partition(g)) checks.push_back(std::move(c));
    checks.push_back(check_fft_round_trip(g, cfg.seed));
    checks.push_back(check_snapshot_round_trip(s, cfg.sigma));
    checks.push_back(check_csv_round_trip(s, pot, cfg.sigma));
    {
      Check c{"initial_coulomb_gauge", true, relative_divergence(s), kDivTolerance, ""};
      c.passed = c.value <= c.tolerance;
      checks.push_back(c);
    }

    log("verify: ", cases.size(), " estimate cases");
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const std::vector<estimates::EstimateReport> reports = estimates::run_all(cases, threads);
    json est = json::parse(estimates::to_json(reports));

    json failures = json::array();
    json check_list = json::array();
    for (const auto& c : checks) {
      check_list.push_back(to_json(c));
      if (!c.passed) failures.push_back(to_json(c));
    }
    long skipped = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto st = reports[i].status;
      if (st == estimates::Status::skipped) {
        ++skipped;
        log("verify: skipped ", reports[i].spec.id, ": ", reports[i].message);
      } else if (st != estimates::Status::stable) {
        failures.push_back(est["reports"][i]);
      }
    }
    json out;
    out["schema"] = "cshlab.verify/1";
    out["passed"] = failures.empty();
    out["checks"] = check_list;
    out["estimates"] = est["reports"];
    out["skipped"] = skipped;
    out["config"] = config_json(cfg);
    fs::create_directories(cfg.output);
    write_json(fs::path(cfg.output) / "verify.json", out);
    if (!failures.empty()) {
      std::cout << failures.dump(2) << '\n';
      return static_cast<int>(kExitPropertyFailure);
    }
    log("verify: all checks passed (", skipped, " skipped)");
    return static_cast<int>(kExitOk);
  });
}

// ------------------------------------------------------------------- norms

int cmd_norms(const Options& opts) {
  return guarded("norms", [&] {
    const Log log(opts.quiet);
    const RunConfig cfg = resolve_config(opts);
    const double gamma = opts.gamma.value_or(cfg.norms_gamma);
    if (!std::isfinite(gamma)) throw ConfigError("gamma must be finite");
    const fs::path dir = opts.trajectory ? *opts.trajectory
                         : !cfg.norms_trajectory.empty() ? cfg.norms_trajectory
                                                         : cfg.output;
    const std::vector<fs::path> files = io::list_snapshots(dir);
    if (files.size() < 2) {
      throw FormatError(dir.string() + ": a trajectory needs at least two snapshots");
    }
    lp::FieldSeries phi, u;
    std::vector<double> times;
    for (const auto& f : files) {
      const io::Snapshot s = io::read_snapshot(f);
      times.push_back(s.t);
      phi.samples.push_back(to_spectral(s.phi));
      u.samples.push_back(to_spectral(s.u));
    }
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw FormatError(dir.string() + ": snapshot times do not increase");
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double want = times.front() + static_cast<double>(i) * dt;
      if (std::abs(times[i] - want) > 1e-9 * std::max(1.0, std::abs(want))) {
        throw FormatError(files[i].string() + ": snapshots are not uniformly spaced in time");
      }
    }
    phi.t0 = u.t0 = times.front();
    phi.dt = u.dt = dt;
    log("norms: ", files.size(), " snapshots on [", times.front(), ", ", times.back(), "]");
    const lp::TrajectoryNormReport rp = lp::s_gamma_norm(phi, gamma);
    const lp::TrajectoryNormReport ru = lp::s_gamma_norm(u, gamma - 1.0);
    json out;
    out["schema"] = "cshlab.norms/1";
    out["gamma"] = gamma;
    out["trajectory"] = dir.string();
    out["samples"] = files.size();
    out["interval"] = {times.front(), times.back()};
    out["phi_s_gamma"] = json::parse(lp::to_json(rp));
    out["u_s_gamma_minus_1"] = json::parse(lp::to_json(ru));
    out["combined"] = std::hypot(rp.value, ru.value);
    fs::create_directories(cfg.output);
    write_json(fs::path(cfg.output) / "norms.json", out);
    if (!opts.quiet) std::cout << out["combined"].get<double>() << '\n';
    return static_cast<int>(kExitOk);
  });
}

// ------------------------------------------------------------- convergence

namespace {

struct LevelRun {
  double dt = 0.0;
  EvolveResult result;
  double energy0 = 0.0;
  double energy1 = 0.0;

  const CshState& final_state() const { return result.trajectory.states.back(); }
};

LevelRun run_level(const CshState& initial, StepConfig cfg, const PotentialSpec& pot,
                   double t_end, double dt) {
  LevelRun r;
  r.dt = dt;
  cfg.dt = dt;
  EvolveOptions eo;
  eo.diag_every = std::numeric_limits<long>::max();
  eo.store_every = 0;
  r.result = evolve_checked(initial, cfg, pot, t_end, eo);
  r.energy0 = r.result.trajectory.rows.front().energy;
  r.energy1 = r.result.trajectory.rows.back().energy;
  return r;
}

// Coarse-grid Fourier coefficients of a finer field; both grids share L.
ScalarField restrict_to(const ScalarField& fine, const GridSpec& coarse) {
  const ScalarField f = as_spectral(fine);
  const GridSpec& fg = f.grid();
  std::vector<cplx> d(coarse.size());
  for (int j2 = 0; j2 < coarse.n(); ++j2) {
    for (int j1 = 0; j1 < coarse.n(); ++j1) {
      const int m1 = coarse.signed_index(j1), m2 = coarse.signed_index(j2);
      d[coarse.flat(j1, j2)] = f[fg.flat(fg.wrap_index(m1), fg.wrap_index(m2))];
    }
  }
  return ScalarField(coarse, Representation::spectral, f.value_kind(), std::move(d));
}

double state_difference(const CshState& a, const CshState& b) {
  const double num = std::hypot(l2_norm(a.phi - b.phi), l2_norm(a.u - b.u));
  const double den = std::hypot(l2_norm(b.phi), l2_norm(b.u));
  return den > 0.0 ? num / den : num;
}

// Least-squares slope of log(y) against log(x), skipping nonpositive y.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int cmd_convergence(const Options& opts) {
  return guarded("convergence", [&] {
    const Log log(opts.quiet);
    const RunConfig cfg = resolve_config(opts);
    if (cfg.levels < 4) {
      throw ConfigError("convergence.levels = " + std::to_string(cfg.levels) +
                        ": a dt ladder needs at least 4 levels");
    }
    const PotentialSpec pot = make_potential(cfg);
    const StepConfig step_cfg = make_step(cfg);
    const CshState initial = make_initial_state(cfg);
    if (!(cfg.t_end > initial.t)) throw ConfigError("run.t_end must exceed the initial time");
    const double expected = step_cfg.scheme == Scheme::rk4_reference ? 4.0 : 2.0;

    std::vector<double> dts;
    for (int l = 0; l < cfg.levels; ++l) dts.push_back(std::ldexp(cfg.dt, -l));
    const bool grid_pair = cfg.grid_pair && cfg.generator != "snapshot";
    std::optional<GridSpec> fine_grid;
    std::optional<CshState> fine_initial;
    if (grid_pair) {
      fine_grid.emplace(make_grid([&] {
        RunConfig c = cfg;
        c.n = 2 * cfg.n;
        return c;
      }()));
      fine_initial = make_initial_state(cfg, *fine_grid);
    }

    log("convergence: ", cfg.levels, " levels from dt=", cfg.dt,
        grid_pair ? " plus a grid pair" : "");
    std::vector<std::future<LevelRun>> jobs;
    for (double dt : dts) {
      jobs.push_back(std::async(std::launch::async, run_level, std::cref(initial), step_cfg,
                                std::cref(pot), cfg.t_end, dt));
    }
    std::optional<std::future<LevelRun>> fine_job;
    if (grid_pair) {
      fine_job = std::async(std::launch::async, run_level, std::cref(*fine_initial), step_cfg,
                            std::cref(pot), cfg.t_end, dts.back());
    }
    std::vector<LevelRun> runs;
    for (auto& j : jobs) runs.push_back(j.get());
    std::optional<LevelRun> fine;
    if (fine_job) fine = fine_job->get();

    json out;
    out["schema"] = "cshlab.convergence/1";
    out["scheme"] = cfg.scheme;
    out["quadrature"] = cfg.quadrature;
    out["expected_order"] = expected;
    out["tolerance"] = cfg.convergence_tolerance;
    out["t_end"] = cfg.t_end;
    out["config"] = config_json(cfg);
    json levels = json::array();
    bool aborted = false;
    for (const auto& r : runs) {
      const bool ok = r.result.abort == AbortKind::none;
      aborted |= !ok;
      const double drift = std::abs(r.energy1 - r.energy0) / std::max(std::abs(r.energy0), 1e-300);
      levels.push_back({{"dt", r.dt},
                        {"status", ok ? "completed" : r.result.message},
                        {"energy_drift", drift},
                        {"phi_l2", l2_norm(r.final_state().phi)}});
    }
    if (fine && fine->result.abort != AbortKind::none) aborted = true;
    out["levels"] = levels;
    fs::create_directories(cfg.output);
    const fs::path path = fs::path(cfg.output) / "convergence.json";
    if (aborted) {
      out["passed"] = false;
      out["status"] = "aborted";
      write_json(path, out);
      std::cerr << "convergence: a ladder level aborted\n";
      return static_cast<int>(kExitRuntimeAbort);
    }

    std::vector<double> hs, errs, drifts;
    json diffs = json::array();
    for (std::size_t l = 0; l + 1 < runs.size(); ++l) {
      const double e = state_difference(runs[l].final_state(), runs[l + 1].final_state());
      hs.push_back(runs[l].dt);
      errs.push_back(e);
      diffs.push_back({{"dt", runs[l].dt}, {"difference", e}});
    }
    for (const auto& lv : levels) drifts.push_back(lv["energy_drift"].get<double>());
    json pairwise = json::array();
    for (std::size_t l = 0; l + 1 < errs.size(); ++l) {
      pairwise.push_back(errs[l + 1] > 0.0 && errs[l] > 0.0
                             ? json(std::log2(errs[l] / errs[l + 1]))
                             : json(nullptr));
    }
    const std::optional<double> slope = loglog_slope(hs, errs);
    const std::optional<double> drift_slope = loglog_slope(dts, drifts);
    const bool order_ok = slope && std::abs(*slope - expected) <= cfg.convergence_tolerance;
    out["differences"] = diffs;
    out["pairwise_slopes"] = pairwise;
    out["fitted_slope"] = opt_json(slope);
    out["energy_drift_slope"] = opt_json(drift_slope);
    out["order_passed"] = order_ok;

    bool grid_ok = true;
    if (fine) {
      const GridSpec g = make_grid(cfg);
      const double d = rel_diff(restrict_to(fine->final_state().phi, g), runs.back().final_state().phi);
      grid_ok = d <= cfg.grid_tolerance;
      out["grid_pair"] = {{"n", cfg.n}, {"n_fine", 2 * cfg.n}, {"dt", dts.back()},
                          {"relative_difference", d}, {"tolerance", cfg.grid_tolerance},
                          {"passed", grid_ok}};
    } else {
      out["grid_pair"] = nullptr;
    }
    const bool passed = order_ok && grid_ok;
    out["passed"] = passed;
    out["status"] = "completed";
    write_json(path, out);
    log("convergence: fitted slope ", slope ? *slope : std::nan(""), " (expected ", expected,
        "), ", passed ? "pass" : "FAIL");
    return static_cast<int>(passed ? kExitOk : kExitPropertyFailure);
  });
}

// --------------------------------------------------------------------- run

int run(int argc, char** argv) {
  CLI::App app{"Chern-Simons-Higgs pseudo-spectral simulator and estimate lab", "cshlab"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  std::string out, trajectory;
  double gamma = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "key = value configuration file");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed overriding run.seed");
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "evolve initial data and write outputs");
  CLI::App* verify = app.add_subcommand("verify", "run the property and estimate suite");
  CLI::App* norms = app.add_subcommand("norms", "S^gamma norms of a stored trajectory");
  CLI::App* convergence = app.add_subcommand("convergence", "dt ladder and grid pair");
  for (CLI::App* sub : {simulate, verify, norms, convergence}) common(sub);
  norms->add_option("--trajectory", trajectory, "directory of snapshots");
  norms->add_option("--gamma", gamma, "regularity index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitConfigError);
  }
  for (CLI::App* sub : {simulate, verify, norms, convergence}) {
    if (sub->count("--out")) opts.out = out;
    if (sub->count("--seed")) opts.seed = seed;
  }
  if (norms->count("--trajectory")) opts.trajectory = trajectory;
  if (norms->count("--gamma")) opts.gamma = gamma;

  if (*simulate) return cmd_simulate(opts);
  if (*verify) return cmd_verify(opts);
  if (*norms) return cmd_norms(opts);
  return cmd_convergence(opts);
}

}  // namespace cshlab::cli
