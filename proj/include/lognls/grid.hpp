#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lognls/error.hpp"

namespace lognls {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

inline constexpr int kMaxDims = 3;

// Periodic uniform rectangular grid on [-L_i/2, L_i/2) per axis. Samples are
// stored row-major with axis 0 slowest. Construction goes through make_grid().
class GridSpec {
public:
  int dims() const noexcept { return dims_; }
  int points(int axis) const { return points_.at(check_axis(axis)); }
  double length(int axis) const { return lengths_.at(check_axis(axis)); }
  double spacing(int axis) const {
    const int a = check_axis(axis);
    return lengths_[a] / points_[a];
  }
  double volume() const noexcept;
  // Product of the spacings; the weight of one quadrature node.
  double cell_volume() const noexcept;
  std::size_t size() const noexcept;

  double coordinate(int axis, int index) const {
    return -0.5 * length(axis) + index * spacing(axis);
  }
  // Coordinates of flat sample `flat`; unused trailing axes are zero.
  Point point(std::size_t flat) const;
  // True when p lies in the half-open box [-L/2, L/2) on every used axis.
  bool contains(const Point &p) const;

  // Angular wavenumbers in DFT bin order: 2*pi*j/L for j = 0..n/2-1, then
  // -n/2..-1.
  std::vector<double> wavenumbers(int axis) const;

  bool operator==(const GridSpec &other) const = default;

private:
  friend GridSpec make_grid(int dims, std::span<const int> points,
                            std::span<const double> lengths);
  GridSpec() = default;
  int check_axis(int axis) const;

  int dims_ = 1;
  std::array<int, kMaxDims> points_{1, 1, 1};
  std::array<double, kMaxDims> lengths_{1.0, 1.0, 1.0};
};

// Throws InvalidArgument unless 1 <= dims <= 3, every point count is even and
// >= 8, and every length is positive and finite.
GridSpec make_grid(int dims, std::span<const int> points,
                   std::span<const double> lengths);

// Convenience for the common case of identical axes.
GridSpec make_cubic_grid(int dims, int points, double length);

// Sampled field over a GridSpec. Values are only replaced through
// mutable_values() or assignment; every public operation of the library
// leaves them finite.
template <class T> class Field {
public:
  explicit Field(GridSpec grid) : grid_(std::move(grid)), values_(grid_.size()) {}
  Field(GridSpec grid, std::vector<T> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw InvalidArgument("field: value count does not match grid size");
  }

  template <class Fn> static Field sample(const GridSpec &grid, Fn &&fn) {
    Field f(grid);
    for (std::size_t i = 0; i < f.values_.size(); ++i)
      f.values_[i] = fn(grid.point(i));
    return f;
  }

  const GridSpec &grid() const noexcept { return grid_; }
  std::span<const T> values() const noexcept { return values_; }
  std::span<T> mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const T &operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

private:
  GridSpec grid_;
  std::vector<T> values_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

extern template class Field<Complex>;
extern template class Field<double>;

// Riemann sum sum_x f(x) * prod_i h_i (trapezoid rule on a periodic grid).
double integrate(const RealField &f);
double norm_squared(const ComplexField &psi);
// Throws InvalidArgument for a zero-norm field.
ComplexField normalize(const ComplexField &psi);

// Discrete Fourier transform convention used throughout the library, with
// phases referenced to the lower box corner x0 = (-L/2, ...):
//
//   c_k = (1/N) sum_x psi(x) exp(-i k.(x - x0)),   psi(x) = sum_k c_k exp(i k.(x - x0))
//
// so a constant field maps to its value in the zero bin, exp(i k.x) maps to a
// single coefficient exp(i k.x0) of unit modulus, and Parseval reads
// int |psi|^2 = V sum_k |c_k|^2.
// Spectral fields reuse ComplexField with bins in wavenumbers() order.
class SpectralTransform {
public:
  explicit SpectralTransform(const GridSpec &grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform &) = delete;
  SpectralTransform &operator=(const SpectralTransform &) = delete;
  SpectralTransform(SpectralTransform &&) noexcept;
  SpectralTransform &operator=(SpectralTransform &&) noexcept;

  const GridSpec &grid() const noexcept;

  // In-place on a span of grid().size() samples.
  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ComplexField forward_transform(const ComplexField &psi);
ComplexField inverse_transform(const ComplexField &coeffs);
// V * sum |c_k|^2 for coefficients produced by forward_transform.
double norm_squared_spectral(const ComplexField &coeffs);

// |k|^2 for every spectral bin, in storage order.
std::vector<double> wavenumber_squared(const GridSpec &grid);

// Spectral partial derivative of a real periodic field along `axis`. The
// Nyquist bin is dropped, as is standard for odd-order derivatives.
RealField spectral_derivative(const RealField &f, int axis);

} // namespace lognls
