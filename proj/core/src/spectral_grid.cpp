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

#include "cshlab/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "cshlab/errors.hpp"
#include "fft_backend.hpp"

namespace cshlab {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<cplx> symmetrize(const GridSpec& g, const std::vector<cplx>& d) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  std::vector<cplx> out(d.size());
  for (std::size_t j2 = 0; j2 < n; ++j2) {
    const cplx* row = d.data() + j2 * n;
    const cplx* mirror = d.data() + ((n - j2) % n) * n;
    cplx* dst = out.data() + j2 * n;
    dst[0] = 0.5 * (row[0] + std::conj(mirror[0]));
    for (std::size_t j1 = 1; j1 < n; ++j1) {
      dst[j1] = 0.5 * (row[j1] + std::conj(mirror[n - j1]));
    }
  }
  return out;
}

ValueKind combine(const ScalarField& a, const ScalarField& b) {
  return a.is_real() && b.is_real() ? ValueKind::real : ValueKind::complex;
}

ScalarField in_rep(const ScalarField& f, Representation rep) {
  return rep == Representation::spectral ? as_spectral(f) : as_physical(f);
}

}  // namespace

GridSpec::GridSpec(int n, double length, double dealias_fraction)
    : n_(n), length_(length), dealias_fraction_(dealias_fraction) {
  if (!is_power_of_two(n) || n < 8) {
    throw InvalidGrid("grid size must be a power of two >= 8, got " +
                      std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidGrid("period length must be positive and finite");
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw InvalidGrid("dealias fraction must lie in (0, 1]");
  }
}

double GridSpec::frequency_unit() const {
  return 2.0 * std::numbers::pi / length_;
}

double GridSpec::nyquist() const { return std::numbers::pi * n_ / length_; }

bool GridSpec::keeps_mode(int m1, int m2) const {
  const int m = std::max(std::abs(m1), std::abs(m2));
  return m < dealias_fraction_ * n_ / 2.0;
}

const WaveTable& wave_table(const GridSpec& grid) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<WaveTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(grid.n(), grid.length());
  auto it = tables.find(key);
  if (it != tables.end()) return *it->second;
  auto t = std::make_unique<WaveTable>();
  const int n = grid.n();
  const double k = grid.frequency_unit();
  t->m1.resize(grid.size());
  t->m2.resize(grid.size());
  t->xi1.resize(grid.size());
  t->xi2.resize(grid.size());
  t->norm.resize(grid.size());
  for (int j2 = 0; j2 < n; ++j2) {
    for (int j1 = 0; j1 < n; ++j1) {
      const std::size_t i = grid.flat(j1, j2);
      t->m1[i] = grid.signed_index(j1);
      t->m2[i] = grid.signed_index(j2);
      t->xi1[i] = k * t->m1[i];
      t->xi2[i] = k * t->m2[i];
      t->norm[i] = std::hypot(t->xi1[i], t->xi2[i]);
    }
  }
  return *tables.emplace(key, std::move(t)).first->second;
}

ScalarField::ScalarField(const GridSpec& grid, Representation rep,
                         ValueKind kind)
    : grid_(grid), rep_(rep), kind_(kind), data_(grid.size()) {}

ScalarField::ScalarField(const GridSpec& grid, Representation rep,
                         ValueKind kind, std::vector<cplx> data)
    : grid_(grid), rep_(rep), kind_(kind), data_(std::move(data)) {
  if (data_.size() != grid_.size()) {
    throw InvalidArgument("field data size does not match grid");
  }
  if (kind_ == ValueKind::real) enforce_real();
}

void ScalarField::enforce_real() {
  if (rep_ == Representation::physical) {
    for (auto& v : data_) v = cplx(v.real(), 0.0);
  } else {
    data_ = symmetrize(grid_, data_);
  }
}

ScalarField ScalarField::from_function(
    const GridSpec& grid, const std::function<cplx(double, double)>& f,
    ValueKind kind) {
  std::vector<cplx> d(grid.size());
  for (int j2 = 0; j2 < grid.n(); ++j2) {
    for (int j1 = 0; j1 < grid.n(); ++j1) {
      d[grid.flat(j1, j2)] = f(grid.coordinate(j1), grid.coordinate(j2));
    }
  }
  return ScalarField(grid, Representation::physical, kind, std::move(d));
}

ScalarField ScalarField::plane_wave(const GridSpec& grid, int m1, int m2,
                                    cplx amplitude) {
  const double k = grid.frequency_unit();
  return from_function(grid, [&](double x1, double x2) {
    return amplitude * std::exp(cplx(0.0, k * (m1 * x1 + m2 * x2)));
  });
}

cplx ScalarField::mode(int m1, int m2) const {
  if (rep_ != Representation::spectral) {
    throw RepresentationMismatch("mode() requires a spectral field");
  }
  return data_[grid_.flat(grid_.wrap_index(m1), grid_.wrap_index(m2))];
}

ScalarField ScalarField::with_kind(ValueKind kind) const {
  return ScalarField(grid_, rep_, kind, data_);
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
}

ScalarField to_spectral(const ScalarField& f) {
  if (f.is_spectral()) {
    throw RepresentationMismatch("to_spectral expects a physical field");
  }
  const auto& g = f.grid();
  std::vector<cplx> out(g.size());
  detail::fft2d(g.n(), g.n(), f.data().data(), out.data(), -1);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& v : out) v *= scale;
  return ScalarField(g, Representation::spectral, f.value_kind(),
                     std::move(out));
}

ScalarField to_physical(const ScalarField& f) {
  if (!f.is_spectral()) {
    throw RepresentationMismatch("to_physical expects a spectral field");
  }
  const auto& g = f.grid();
  std::vector<cplx> out(g.size());
  detail::fft2d(g.n(), g.n(), f.data().data(), out.data(), +1);
  return ScalarField(g, Representation::physical, f.value_kind(),
                     std::move(out));
}

ScalarField as_spectral(const ScalarField& f) {
  return f.is_spectral() ? f : to_spectral(f);
}

ScalarField as_physical(const ScalarField& f) {
  return f.is_spectral() ? to_physical(f) : f;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField bb = in_rep(b, a.representation());
  std::vector<cplx> d(a.data().begin(), a.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += bb[i];
  return ScalarField(a.grid(), a.representation(), combine(a, b), std::move(d));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField bb = in_rep(b, a.representation());
  std::vector<cplx> d(a.data().begin(), a.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= bb[i];
  return ScalarField(a.grid(), a.representation(), combine(a, b), std::move(d));
}

ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

ScalarField operator*(cplx c, const ScalarField& f) {
  std::vector<cplx> d(f.data().begin(), f.data().end());
  for (auto& v : d) v *= c;
  const bool real = f.is_real() && c.imag() == 0.0;
  return ScalarField(f.grid(), f.representation(),
                     real ? ValueKind::real : ValueKind::complex, std::move(d));
}

ScalarField operator*(double c, const ScalarField& f) {
  std::vector<cplx> d(f.data().begin(), f.data().end());
  for (auto& v : d) v *= c;
  return ScalarField(f.grid(), f.representation(), f.value_kind(),
                     std::move(d));
}

ScalarField conj(const ScalarField& f) {
  ScalarField p = as_physical(f);
  std::vector<cplx> d(p.data().begin(), p.data().end());
  for (auto& v : d) v = std::conj(v);
  return ScalarField(p.grid(), Representation::physical, p.value_kind(),
                     std::move(d));
}

ScalarField real_part(const ScalarField& f) {
  ScalarField p = as_physical(f);
  std::vector<cplx> d(p.data().begin(), p.data().end());
  return ScalarField(p.grid(), Representation::physical, ValueKind::real,
                     std::move(d));
}

ScalarField imag_part(const ScalarField& f) {
  ScalarField p = as_physical(f);
  std::vector<cplx> d(p.data().begin(), p.data().end());
  for (auto& v : d) v = cplx(v.imag(), 0.0);
  return ScalarField(p.grid(), Representation::physical, ValueKind::real,
                     std::move(d));
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField pa = as_physical(a);
  ScalarField pb = as_physical(b);
  std::vector<cplx> d(pa.data().begin(), pa.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= pb[i];
  return ScalarField(a.grid(), Representation::physical, combine(a, b),
                     std::move(d));
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
  return dealias(to_spectral(pointwise_product(a, b)));
}

ScalarField padded_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const GridSpec& g = a.grid();
  const int n = g.n();
  const int n2 = 2 * n;
  const std::size_t big = static_cast<std::size_t>(n2) * n2;
  auto lift = [&](const ScalarField& f) {
    ScalarField s = as_spectral(f);
    std::vector<cplx> coef(big);
    for (int j2 = 0; j2 < n; ++j2) {
      const int w2 = (g.signed_index(j2) + n2) % n2;
      for (int j1 = 0; j1 < n; ++j1) {
        const int w1 = (g.signed_index(j1) + n2) % n2;
        coef[static_cast<std::size_t>(w2) * n2 + w1] = s.at(j1, j2);
      }
    }
    std::vector<cplx> phys(big);
    detail::fft2d(n2, n2, coef.data(), phys.data(), +1);
    return phys;
  };
  std::vector<cplx> pa = lift(a);
  std::vector<cplx> pb = lift(b);
  for (std::size_t i = 0; i < big; ++i) pa[i] *= pb[i];
  std::vector<cplx> coef(big);
  detail::fft2d(n2, n2, pa.data(), coef.data(), -1);
  const double scale = 1.0 / static_cast<double>(big);
  std::vector<cplx> out(g.size());
  for (int j2 = 0; j2 < n; ++j2) {
    const int w2 = (g.signed_index(j2) + n2) % n2;
    for (int j1 = 0; j1 < n; ++j1) {
      const int w1 = (g.signed_index(j1) + n2) % n2;
      out[g.flat(j1, j2)] = scale * coef[static_cast<std::size_t>(w2) * n2 + w1];
    }
  }
  return ScalarField(g, Representation::spectral, combine(a, b),
                     std::move(out));
}

ScalarField dealias(const ScalarField& f) {
  ScalarField s = as_spectral(f);
  const GridSpec& g = s.grid();
  const WaveTable& w = wave_table(g);
  std::vector<cplx> d(s.data().begin(), s.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!g.keeps_mode(w.m1[i], w.m2[i])) d[i] = 0.0;
  }
  return ScalarField(g, Representation::spectral, s.value_kind(), std::move(d));
}

ScalarField truncate_disk(const ScalarField& f, double radius) {
  ScalarField s = as_spectral(f);
  const WaveTable& w = wave_table(s.grid());
  std::vector<cplx> d(s.data().begin(), s.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (w.norm[i] > radius) d[i] = 0.0;
  }
  return ScalarField(s.grid(), Representation::spectral, s.value_kind(),
                     std::move(d));
}

double l2_norm(const ScalarField& f) {
  double sum = 0.0;
  for (const auto& v : f.data()) sum += std::norm(v);
  if (f.is_spectral()) return f.grid().length() * std::sqrt(sum);
  return std::sqrt(sum * f.grid().cell_area());
}

double linf_norm(const ScalarField& f) {
  ScalarField p = as_physical(f);
  double m = 0.0;
  for (const auto& v : p.data()) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) return linf_norm(f);
  if (p == 2.0) return l2_norm(f);
  ScalarField ph = as_physical(f);
  double sum = 0.0;
  for (const auto& v : ph.data()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid().cell_area(), 1.0 / p);
}

cplx integral(const ScalarField& f) {
  if (f.is_spectral()) {
    const double l = f.grid().length();
    return l * l * f[0];
  }
  cplx sum = 0.0;
  for (const auto& v : f.data()) sum += v;
  return sum * f.grid().cell_area();
}

double inner_real(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  if (a.is_spectral() && b.is_spectral()) {
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      sum += (a[i] * std::conj(b[i])).real();
    }
    const double l = a.grid().length();
    return sum * l * l;
  }
  ScalarField pa = as_physical(a);
  ScalarField pb = as_physical(b);
  for (std::size_t i = 0; i < pa.data().size(); ++i) {
    sum += (pa[i] * std::conj(pb[i])).real();
  }
  return sum * a.grid().cell_area();
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.data().begin(), f.data().end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double Frequency::norm() const { return std::hypot(xi1, xi2); }

Symbol compose(const Symbol& a, const Symbol& b) {
  Symbol s;
  s.name = a.name + "*" + b.name;
  s.value = [va = a.value, vb = b.value](const Frequency& f) {
    return va(f) * vb(f);
  };
  s.hermitian = a.hermitian && b.hermitian;
  auto origin = [](const Symbol& x) -> std::optional<cplx> {
    if (!x.singular_at_origin) return x.value(Frequency{});
    return x.origin_value;
  };
  const auto oa = origin(a);
  const auto ob = origin(b);
  if (a.singular_at_origin || b.singular_at_origin) {
    s.singular_at_origin = true;
    if (oa && ob) s.origin_value = *oa * *ob;
  }
  return s;
}

Symbol with_origin_value(Symbol s, cplx value) {
  s.singular_at_origin = true;
  s.origin_value = value;
  return s;
}

namespace symbols {
namespace {

Symbol make(std::string name, std::function<cplx(const Frequency&)> fn) {
  Symbol s;
  s.name = std::move(name);
  s.value = std::move(fn);
  return s;
}

}  // namespace

Symbol identity() {
  return make("id", [](const Frequency&) { return cplx(1.0); });
}

Symbol derivative(int axis) {
  if (axis != 1 && axis != 2) throw InvalidArgument("axis must be 1 or 2");
  return make("d" + std::to_string(axis), [axis](const Frequency& f) {
                  return cplx(0.0, axis == 1 ? f.xi1 : f.xi2);
                });
}

Symbol laplacian() {
  return make("lap", [](const Frequency& f) {
                  return cplx(-(f.xi1 * f.xi1 + f.xi2 * f.xi2));
                });
}

Symbol abs_grad_pow(double s) {
  Symbol sym = make("absgrad^" + std::to_string(s),
             [s](const Frequency& f) { return cplx(std::pow(f.norm(), s)); });
  if (s == 0.0) return identity();
  if (s < 0.0) sym.singular_at_origin = true;
  return sym;
}

Symbol japanese_pow(double s) {
  return make("jp^" + std::to_string(s), [s](const Frequency& f) {
                  return cplx(std::pow(1.0 + f.xi1 * f.xi1 + f.xi2 * f.xi2,
                                       0.5 * s));
                });
}

Symbol riesz(int axis) {
  if (axis != 1 && axis != 2) throw InvalidArgument("axis must be 1 or 2");
  Symbol s = make("riesz" + std::to_string(axis), [axis](const Frequency& f) {
             const double r2 = f.xi1 * f.xi1 + f.xi2 * f.xi2;
             return cplx(0.0, (axis == 1 ? f.xi1 : f.xi2) / r2);
           });
  return with_origin_value(std::move(s), 0.0);
}

Symbol inv_lap() {
  Symbol s = make("invlap", [](const Frequency& f) {
             return cplx(-1.0 / (f.xi1 * f.xi1 + f.xi2 * f.xi2));
           });
  return with_origin_value(std::move(s), 0.0);
}

Symbol cos_wave(double t) {
  return make("cos", [t](const Frequency& f) {
                  return cplx(std::cos(t * f.norm()));
                });
}

Symbol sin_wave_over_grad(double t) {
  return make("sinc", [t](const Frequency& f) {
                  const double r = f.norm();
                  return cplx(r == 0.0 ? t : std::sin(t * r) / r);
                });
}

Symbol grad_sin_wave(double t) {
  return make("gsin", [t](const Frequency& f) {
                  const double r = f.norm();
                  return cplx(r * std::sin(t * r));
                });
}

}  // namespace symbols

ScalarField apply_multiplier(const ScalarField& f, const Symbol& symbol) {
  ScalarField s = as_spectral(f);
  const GridSpec& g = s.grid();
  const WaveTable& w = wave_table(g);
  const int half = g.n() / 2;
  const double k = g.frequency_unit();
  std::vector<cplx> d(s.data().begin(), s.data().end());
  double energy = 0.0;
  for (const auto& v : d) energy += std::norm(v);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int m1 = w.m1[i];
    const int m2 = w.m2[i];
    if (m1 == 0 && m2 == 0 && symbol.singular_at_origin) {
      if (symbol.origin_value) {
        d[i] *= *symbol.origin_value;
      } else if (std::abs(d[i]) > 1e-12 * std::sqrt(energy)) {
        throw SingularSymbol("symbol " + symbol.name +
                             " is singular at the origin and the field has "
                             "nonzero mean");
      } else {
        d[i] = 0.0;
      }
      continue;
    }
    if (d[i] == cplx(0.0)) continue;
    const bool ny1 = m1 == -half;
    const bool ny2 = m2 == -half;
    if (symbol.hermitian && (ny1 || ny2)) {
      cplx acc = 0.0;
      int count = 0;
      for (int s1 : {-1, 1}) {
        if (!ny1 && s1 == 1) continue;
        for (int s2 : {-1, 1}) {
          if (!ny2 && s2 == 1) continue;
          const int a1 = ny1 && s1 == 1 ? half : m1;
          const int a2 = ny2 && s2 == 1 ? half : m2;
          acc += symbol.value(Frequency{a1, a2, k * a1, k * a2});
          ++count;
        }
      }
      d[i] *= acc / static_cast<double>(count);
    } else {
      d[i] *= symbol.value(Frequency{m1, m2, w.xi1[i], w.xi2[i]});
    }
  }
  const ValueKind kind =
      s.is_real() && symbol.hermitian ? ValueKind::real : ValueKind::complex;
  return ScalarField(g, Representation::spectral, kind, std::move(d));
}

}  // namespace cshlab
