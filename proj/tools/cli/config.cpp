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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cshlab/errors.hpp"
#include "cshlab/io.hpp"

namespace cshlab::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& v,
                            const std::string& what) {
  throw ConfigError(key + ": cannot parse '" + v + "' as " + what);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) bad_value(key, v, "a number");
  return x;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) bad_value(key, v, "an integer");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& t : split(v, " \t,")) out.push_back(parse_double(key, t));
  return out;
}

std::string fmt_doubles(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + fmt(xs[i]);
  return s;
}

// "m1 m2 re im; m1 m2 re im"
std::vector<FourierMode> parse_modes(const std::string& key, const std::string& v) {
  std::vector<FourierMode> out;
  for (const auto& item : split(v, ";")) {
    const auto t = split(item, " \t,");
    if (t.empty()) continue;
    if (t.size() != 4) bad_value(key, item, "'m1 m2 re im'");
    out.push_back({parse_int<int>(key, t[0]), parse_int<int>(key, t[1]),
                   cplx(parse_double(key, t[2]), parse_double(key, t[3]))});
  }
  return out;
}

std::string fmt_modes(const std::vector<FourierMode>& ms) {
  std::string s;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) s += "; ";
    s += std::to_string(ms[i].m1) + " " + std::to_string(ms[i].m2) + " " +
         fmt(ms[i].amplitude.real()) + " " + fmt(ms[i].amplitude.imag());
  }
  return s;
}

struct Field {
  std::function<void(RunConfig&, const std::string& key, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define CSHLAB_DOUBLE(name, member)                                          \
  {name, {[](RunConfig& c, const std::string& k, const std::string& v) {     \
            c.member = parse_double(k, v);                                   \
          },                                                                 \
          [](const RunConfig& c) { return fmt(c.member); }}}
#define CSHLAB_INT(name, member)                                             \
  {name, {[](RunConfig& c, const std::string& k, const std::string& v) {     \
            c.member = parse_int<decltype(c.member)>(k, v);                  \
          },                                                                 \
          [](const RunConfig& c) { return std::to_string(c.member); }}}
#define CSHLAB_STRING(name, member)                                          \
  {name, {[](RunConfig& c, const std::string&, const std::string& v) {       \
            c.member = v;                                                    \
          },                                                                 \
          [](const RunConfig& c) { return c.member; }}}
#define CSHLAB_BOOL(name, member)                                            \
  {name, {[](RunConfig& c, const std::string& k, const std::string& v) {     \
            c.member = parse_bool(k, v);                                     \
          },                                                                 \
          [](const RunConfig& c) {                                           \
            return std::string(c.member ? "true" : "false");                 \
          }}}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = {
      CSHLAB_INT("grid.n", n),
      CSHLAB_DOUBLE("grid.L", length),
      CSHLAB_DOUBLE("grid.dealias_fraction", dealias_fraction),
      CSHLAB_STRING("potential.kind", potential),
      CSHLAB_DOUBLE("potential.mass", mass),
      {"potential.v_coeffs",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.v_coeffs = parse_doubles(k, v);
        },
        [](const RunConfig& c) { return fmt_doubles(c.v_coeffs); }}},
      CSHLAB_STRING("potential.alpha", alpha),
      CSHLAB_DOUBLE("potential.alpha_r_max", alpha_r_max),
      CSHLAB_INT("gauge.sigma", sigma),
      CSHLAB_BOOL("gauge.couple", couple),
      CSHLAB_STRING("initial.generator", generator),
      CSHLAB_DOUBLE("initial.amplitude", amplitude),
      CSHLAB_DOUBLE("initial.width", width),
      CSHLAB_DOUBLE("initial.center1", center1),
      CSHLAB_DOUBLE("initial.center2", center2),
      CSHLAB_INT("initial.winding", winding),
      CSHLAB_DOUBLE("initial.core", core),
      CSHLAB_INT("initial.kmax", kmax),
      {"initial.modes",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.modes = parse_modes(k, v);
        },
        [](const RunConfig& c) { return fmt_modes(c.modes); }}},
      CSHLAB_DOUBLE("initial.omega", omega),
      {"initial.velocity_modes",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.velocity_modes = parse_modes(k, v);
        },
        [](const RunConfig& c) { return fmt_modes(c.velocity_modes); }}},
      CSHLAB_STRING("initial.snapshot", snapshot),
      CSHLAB_DOUBLE("step.dt", dt),
      CSHLAB_STRING("step.scheme", scheme),
      CSHLAB_INT("step.picard_max", picard_max),
      CSHLAB_DOUBLE("step.picard_tol", picard_tol),
      CSHLAB_STRING("step.quadrature", quadrature),
      CSHLAB_DOUBLE("step.delta0_guard", delta0_guard),
      CSHLAB_DOUBLE("run.t_end", t_end),
      CSHLAB_INT("run.diag_every", diag_every),
      CSHLAB_INT("run.snapshot_every", snapshot_every),
      CSHLAB_STRING("run.output", output),
      CSHLAB_INT("run.seed", seed),
      CSHLAB_INT("verify.null_form_pairs", null_form_pairs),
      {"estimate.only",
       {[](RunConfig& c, const std::string&, const std::string& v) {
          c.estimate_only = split(v, " \t,");
        },
        [](const RunConfig& c) {
          std::string s;
          for (std::size_t i = 0; i < c.estimate_only.size(); ++i) {
            s += (i ? " " : "") + c.estimate_only[i];
          }
          return s;
        }}},
      CSHLAB_DOUBLE("norms.gamma", norms_gamma),
      CSHLAB_STRING("norms.trajectory", norms_trajectory),
      CSHLAB_INT("convergence.levels", levels),
      CSHLAB_DOUBLE("convergence.tolerance", convergence_tolerance),
      CSHLAB_BOOL("convergence.grid_pair", grid_pair),
      CSHLAB_DOUBLE("convergence.grid_tolerance", grid_tolerance),
  };
  return f;
}

#undef CSHLAB_DOUBLE
#undef CSHLAB_INT
#undef CSHLAB_STRING
#undef CSHLAB_BOOL

constexpr const char* kEstimatePrefix = "estimate.";

template <typename F>
auto as_config_error(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError(where + ": repeated key '" + key + "'");
    }
  }
  return kv;
}

RunConfig from_map(const KeyValues& kv) {
  RunConfig c;
  const auto& f = fields();
  for (const auto& [key, value] : kv) {
    if (auto it = f.find(key); it != f.end()) {
      it->second.set(c, key, value);
      continue;
    }
    // estimate.<id>.<param>
    if (key.rfind(kEstimatePrefix, 0) == 0) {
      const std::string rest = key.substr(std::char_traits<char>::length(kEstimatePrefix));
      const auto dot = rest.find('.');
      if (dot != std::string::npos && dot > 0 && dot + 1 < rest.size()) {
        c.estimate_overrides[rest.substr(0, dot)][rest.substr(dot + 1)] =
            parse_double(key, value);
        continue;
      }
    }
    throw ConfigError("unknown key '" + key + "'");
  }
  return c;
}

KeyValues to_map(const RunConfig& cfg) {
  KeyValues kv;
  for (const auto& [key, field] : fields()) kv[key] = field.get(cfg);
  for (const auto& [id, params] : cfg.estimate_overrides) {
    for (const auto& [p, v] : params) kv[kEstimatePrefix + id + "." + p] = fmt(v);
  }
  return kv;
}

std::string to_text(const RunConfig& cfg) {
  std::string s;
  for (const auto& [k, v] : to_map(cfg)) s += k + " = " + v + "\n";
  return s;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    KeyValues kv;
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& [k, v] : j.at("config").items()) kv[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": not a run manifest: " + e.what());
    }
    return from_map(kv);
  }
  try {
    return from_map(parse_key_values(text));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

GridSpec make_grid(const RunConfig& cfg) {
  return as_config_error("grid", [&] {
    return GridSpec(cfg.n, cfg.length, cfg.dealias_fraction);
  });
}

PotentialSpec make_potential(const RunConfig& cfg) {
  if (!std::isfinite(cfg.mass) || cfg.mass < 0.0) {
    throw ConfigError("potential.mass must be finite and >= 0");
  }
  PotentialSpec pot;
  if (cfg.potential == "self_dual") {
    pot = self_dual_potential(cfg.mass);
  } else if (cfg.potential == "polynomial") {
    if (cfg.v_coeffs.empty()) throw ConfigError("potential.v_coeffs is empty");
    pot.mass = cfg.mass;
    pot.v_coeffs = cfg.v_coeffs;
  } else if (cfg.potential == "none") {
    pot.mass = cfg.mass;
  } else {
    throw ConfigError("potential.kind must be self_dual, polynomial or none");
  }
  if (!(cfg.alpha_r_max > 0.0)) throw ConfigError("potential.alpha_r_max must be > 0");
  if (cfg.alpha == "auto") {
    pot.alpha = fit_alpha(pot, cfg.alpha_r_max);
  } else if (cfg.alpha != "none") {
    const double a = parse_double("potential.alpha", cfg.alpha);
    if (!(a >= 0.0) || !alpha_holds(pot, a, cfg.alpha_r_max)) {
      throw ConfigError("potential.alpha = " + cfg.alpha +
                        " fails V(r) + alpha^2 r >= 0 on (0, alpha_r_max]");
    }
    pot.alpha = a;
  }
  return pot;
}

StepConfig make_step(const RunConfig& cfg) {
  return as_config_error("step", [&] {
    StepConfig s;
    s.dt = cfg.dt;
    s.scheme = parse_scheme(cfg.scheme);
    s.picard_max = cfg.picard_max;
    s.picard_tol = cfg.picard_tol;
    s.quadrature = parse_quadrature(cfg.quadrature);
    s.delta0_guard = cfg.delta0_guard;
    s.gauge.sigma = cfg.sigma;
    s.gauge.couple = cfg.couple;
    s.validate();
    return s;
  });
}

namespace {

void check_modes(const GridSpec& g, const std::vector<FourierMode>& ms,
                 const std::string& key) {
  for (const auto& m : ms) {
    if (std::abs(m.m1) >= g.n() / 2 || std::abs(m.m2) >= g.n() / 2) {
      throw ConfigError(key + ": mode (" + std::to_string(m.m1) + ", " +
                        std::to_string(m.m2) + ") is not resolved by the grid");
    }
  }
}

ScalarField random_field(const GridSpec& g, int kmax, std::uint64_t seed,
                         double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> d(g.size());
  for (int j2 = 0; j2 < g.n(); ++j2) {
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const double re = nd(rng), im = nd(rng);
      if (std::abs(g.signed_index(j1)) > kmax || std::abs(g.signed_index(j2)) > kmax) {
        continue;
      }
      d[g.flat(j1, j2)] = cplx(re, im);
    }
  }
  ScalarField f(g, Representation::spectral, ValueKind::complex, std::move(d));
  const double nf = l2_norm(f);
  return nf > 0.0 ? (amplitude / nf) * f : f;
}

}  // namespace

CshState make_initial_state(const RunConfig& cfg) {
  return make_initial_state(cfg, make_grid(cfg));
}

CshState make_initial_state(const RunConfig& cfg, const GridSpec& g) {
  const GaugeConvention conv{cfg.sigma, cfg.couple};
  check_modes(g, cfg.modes, "initial.modes");
  check_modes(g, cfg.velocity_modes, "initial.velocity_modes");
  if (cfg.generator == "snapshot") {
    io::Snapshot s = io::read_snapshot(cfg.snapshot);
    if (s.sigma != cfg.sigma) {
      throw ConfigError("snapshot sigma " + std::to_string(s.sigma) +
                        " differs from gauge.sigma");
    }
    if (s.phi.grid().n() != g.n() || s.phi.grid().length() != g.length()) {
      throw ConfigError("snapshot grid differs from grid.n / grid.L");
    }
    auto regrid = [&](const ScalarField& f) {
      return ScalarField(g, Representation::physical, f.value_kind(),
                         std::vector<cplx>(f.data().begin(), f.data().end()));
    };
    return make_state(regrid(s.phi), regrid(s.u), conv, s.t);
  }

  ScalarField phi(g, Representation::spectral);
  const double amp = cfg.amplitude;
  if (cfg.generator == "gaussian_bump") {
    if (!(cfg.width > 0.0)) throw ConfigError("initial.width must be > 0");
    phi = as_spectral(gaussian_bump(g, amp, cfg.width, cfg.center1, cfg.center2));
  } else if (cfg.generator == "vortex_like") {
    if (!(cfg.core > 0.0)) throw ConfigError("initial.core must be > 0");
    phi = as_spectral(vortex_like(g, cfg.winding, cfg.core, amp));
  } else if (cfg.generator == "random") {
    if (cfg.kmax < 1 || cfg.kmax >= g.n() / 2) {
      throw ConfigError("initial.kmax must lie in [1, n/2)");
    }
    phi = random_field(g, cfg.kmax, cfg.seed, amp);
  } else if (cfg.generator != "zero" && cfg.generator != "fourier_modes") {
    throw ConfigError("unknown initial.generator '" + cfg.generator + "'");
  }
  if (!cfg.modes.empty()) phi = phi + as_spectral(fourier_modes(g, cfg.modes));
  ScalarField u = cplx(0.0, -cfg.omega) * phi;
  if (!cfg.velocity_modes.empty()) {
    u = u + as_spectral(fourier_modes(g, cfg.velocity_modes));
  }
  return make_state(phi, u, conv);
}

std::vector<estimates::EstimateCase> make_estimate_cases(const RunConfig& cfg) {
  const std::set<std::string> only(cfg.estimate_only.begin(), cfg.estimate_only.end());
  std::vector<estimates::EstimateCase> out;
  for (auto c : estimates::default_suite()) {
    if (!only.empty() && !only.count(c.id)) continue;
    c.seed = cfg.seed;
    if (auto it = cfg.estimate_overrides.find(c.id); it != cfg.estimate_overrides.end()) {
      for (const auto& [p, v] : it->second) {
        if (p == "ensemble_size") {
          c.ensemble_size = static_cast<int>(v);
        } else if (p == "grid_n") {
          c.n = static_cast<int>(v);
        } else {
          c.params[p] = v;
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

void validate(const RunConfig& cfg) {
  const GridSpec g = make_grid(cfg);
  make_potential(cfg);
  make_step(cfg);
  if (cfg.sigma != 1 && cfg.sigma != -1) throw ConfigError("gauge.sigma must be +1 or -1");
  static const std::set<std::string> gens = {"zero", "gaussian_bump", "fourier_modes",
                                             "vortex_like", "random", "snapshot"};
  if (!gens.count(cfg.generator)) {
    throw ConfigError("unknown initial.generator '" + cfg.generator + "'");
  }
  if (cfg.generator == "snapshot" && !std::filesystem::exists(cfg.snapshot)) {
    throw ConfigError("initial.snapshot '" + cfg.snapshot + "' does not exist");
  }
  check_modes(g, cfg.modes, "initial.modes");
  check_modes(g, cfg.velocity_modes, "initial.velocity_modes");
  if (!std::isfinite(cfg.t_end)) throw ConfigError("run.t_end must be finite");
  if (cfg.diag_every < 1) throw ConfigError("run.diag_every must be >= 1");
  if (cfg.snapshot_every < 0) throw ConfigError("run.snapshot_every must be >= 0");
  if (cfg.output.empty()) throw ConfigError("run.output is empty");
  if (cfg.null_form_pairs < 1) throw ConfigError("verify.null_form_pairs must be >= 1");
  for (const auto& id : cfg.estimate_only) {
    as_config_error("estimate.only", [&] { return estimates::find_estimate(id); });
  }
  for (const auto& [id, params] : cfg.estimate_overrides) {
    as_config_error("estimate." + id, [&] { return estimates::find_estimate(id); });
  }
  for (const auto& c : make_estimate_cases(cfg)) {
    if (c.ensemble_size < 1) throw ConfigError("estimate." + c.id + ".ensemble_size must be >= 1");
    as_config_error("estimate." + c.id, [&] { return estimates::normalized(c); });
  }
  if (!std::isfinite(cfg.norms_gamma)) throw ConfigError("norms.gamma must be finite");
  if (!(cfg.convergence_tolerance > 0.0) || !(cfg.grid_tolerance > 0.0)) {
    throw ConfigError("convergence tolerances must be > 0");
  }
}

}  // namespace cshlab::cli
