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

// Periodic grid geometry, sampled fields, Fourier transforms and Fourier
// multipliers on the torus [0,L)^2.
//
// Conventions:
//   * samples are stored row-major with axis 1 fastest: index = j2 * n + j1;
//   * grid mode (j1, j2) carries the signed indices m_i in [-n/2, n/2) and the
//     angular frequency xi = (2 pi / L) (m1, m2);
//   * spectral coefficients satisfy f(x) = sum_m fhat_m exp(i xi . x), so
//     fhat = (1/n^2) DFT(f) and Parseval reads
//       (L/n)^2 sum_j |f_j|^2 = L^2 sum_m |fhat_m|^2.

#ifndef CSHLAB_SPECTRAL_GRID_HPP_
#define CSHLAB_SPECTRAL_GRID_HPP_

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cshlab {

using cplx = std::complex<double>;

enum class Representation { physical, spectral };
enum class ValueKind { complex, real };

class GridSpec {
 public:
  static constexpr double kDefaultDealias = 2.0 / 3.0;

  // Throws InvalidGrid unless n is a power of two >= 8, L > 0 and
  // dealias_fraction lies in (0, 1].
  GridSpec(int n, double length, double dealias_fraction = kDefaultDealias);

  int n() const { return n_; }
  double length() const { return length_; }
  double dealias_fraction() const { return dealias_fraction_; }

  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  double spacing() const { return length_ / n_; }
  double cell_area() const { return spacing() * spacing(); }
  double frequency_unit() const;
  // Largest resolvable angular frequency, pi n / L.
  double nyquist() const;

  int signed_index(int j) const { return j < n_ / 2 ? j : j - n_; }
  int wrap_index(int m) const { return ((m % n_) + n_) % n_; }
  std::size_t flat(int j1, int j2) const {
    return static_cast<std::size_t>(j2) * n_ + j1;
  }
  double coordinate(int j) const { return j * spacing(); }

  // True when mode (m1, m2) survives dealiasing.
  bool keeps_mode(int m1, int m2) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  double length_;
  double dealias_fraction_;
};

// Per-grid frequency tables, shared and immutable.
struct WaveTable {
  std::vector<int> m1, m2;
  std::vector<double> xi1, xi2, norm;
};
const WaveTable& wave_table(const GridSpec& grid);

class ScalarField {
 public:
  // Zero field.
  explicit ScalarField(const GridSpec& grid,
                       Representation rep = Representation::physical,
                       ValueKind kind = ValueKind::complex);
  // Takes ownership of data (size n^2). Real fields are projected onto the
  // real subspace: zero imaginary part in physical space, Hermitian
  // symmetry in spectral space.
  ScalarField(const GridSpec& grid, Representation rep, ValueKind kind,
              std::vector<cplx> data);

  static ScalarField from_function(
      const GridSpec& grid, const std::function<cplx(double, double)>& f,
      ValueKind kind = ValueKind::complex);
  // amplitude * exp(i xi . x) with xi the frequency of mode (m1, m2).
  static ScalarField plane_wave(const GridSpec& grid, int m1, int m2,
                                cplx amplitude = 1.0);

  const GridSpec& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  ValueKind value_kind() const { return kind_; }
  bool is_real() const { return kind_ == ValueKind::real; }
  bool is_spectral() const { return rep_ == Representation::spectral; }

  std::span<const cplx> data() const { return data_; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  const cplx& at(int j1, int j2) const { return data_[grid_.flat(j1, j2)]; }
  // Coefficient of signed mode (m1, m2); requires spectral representation.
  cplx mode(int m1, int m2) const;

  // Same samples, reinterpreted with another value kind (projecting if real).
  ScalarField with_kind(ValueKind kind) const;
  std::vector<cplx> release() && { return std::move(data_); }

 private:
  void enforce_real();

  GridSpec grid_;
  Representation rep_;
  ValueKind kind_;
  std::vector<cplx> data_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

ScalarField to_spectral(const ScalarField& f);
ScalarField to_physical(const ScalarField& f);
// Converting accessors; identity when already in the requested form.
ScalarField as_spectral(const ScalarField& f);
ScalarField as_physical(const ScalarField& f);

// Linear algebra; operands must share grid, and the result takes the
// representation of the left operand.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(cplx c, const ScalarField& f);
ScalarField operator*(double c, const ScalarField& f);
ScalarField conj(const ScalarField& f);
ScalarField real_part(const ScalarField& f);
ScalarField imag_part(const ScalarField& f);

// Pointwise product in physical space, no dealiasing.
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);
// Pointwise product followed by dealiasing; result is spectral.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);
// Product of band-limited inputs computed on a grid of twice the size, so
// no aliasing occurs; the result is restricted to the modes of the input
// grid. Result is spectral.
ScalarField padded_product(const ScalarField& a, const ScalarField& b);

// Zeroes every mode with max(|m1|,|m2|) >= dealias_fraction * n / 2.
ScalarField dealias(const ScalarField& f);
// Zeroes every mode with |xi| > radius.
ScalarField truncate_disk(const ScalarField& f, double radius);

// Quadrature-based norms; any representation.
double l2_norm(const ScalarField& f);
double lp_norm(const ScalarField& f, double p);
double linf_norm(const ScalarField& f);
// Integral of f over the torus.
cplx integral(const ScalarField& f);
// Real part of the L^2 inner product, integral of Re(a conj(b)).
double inner_real(const ScalarField& a, const ScalarField& b);
bool all_finite(const ScalarField& f);

// Angular frequency of a grid mode handed to symbol callbacks.
struct Frequency {
  int m1 = 0, m2 = 0;
  double xi1 = 0.0, xi2 = 0.0;
  double norm() const;
};

// A Fourier multiplier. `value` must be finite at every nonzero frequency.
// Symbols singular at the origin use `origin_value` when supplied; without
// one, applying them to a field with nonzero mean raises SingularSymbol.
// Hermitian symbols (s(-xi) = conj s(xi)) map real fields to real fields;
// their values on Nyquist lines are averaged over the sign of the Nyquist
// component so that the discrete symmetry holds exactly.
struct Symbol {
  std::string name;
  std::function<cplx(const Frequency&)> value;
  bool singular_at_origin = false;
  std::optional<cplx> origin_value;
  bool hermitian = true;
};

Symbol compose(const Symbol& a, const Symbol& b);
Symbol with_origin_value(Symbol s, cplx value);

namespace symbols {
Symbol identity();
Symbol derivative(int axis);           // i xi_axis, axis in {1, 2}
Symbol laplacian();                    // -|xi|^2
Symbol abs_grad_pow(double s);         // |xi|^s; 0 at origin for s > 0
Symbol japanese_pow(double s);         // (1 + |xi|^2)^(s/2)
Symbol riesz(int axis);                // i xi_axis / |xi|^2, 0 at origin
Symbol inv_lap();                      // -1/|xi|^2, 0 at origin
Symbol cos_wave(double t);             // cos(t|xi|)
Symbol sin_wave_over_grad(double t);   // sin(t|xi|)/|xi|, t at origin
Symbol grad_sin_wave(double t);        // |xi| sin(t|xi|)
}  // namespace symbols

ScalarField apply_multiplier(const ScalarField& f, const Symbol& symbol);

}  // namespace cshlab

#endif  // CSHLAB_SPECTRAL_GRID_HPP_
