#include "lognls/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

namespace lognls {

namespace {

// The FFTW planner is not re-entrant.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

GridSpec make_grid(int dims, std::span<const int> points,
                   std::span<const double> lengths) {
  if (dims < 1 || dims > kMaxDims)
    throw InvalidArgument("make_grid: dims must be 1, 2 or 3, got " +
                          std::to_string(dims));
  if (points.size() != static_cast<std::size_t>(dims) ||
      lengths.size() != static_cast<std::size_t>(dims))
    throw InvalidArgument("make_grid: need one point count and one length per axis");

  GridSpec g;
  g.dims_ = dims;
  for (int a = 0; a < dims; ++a) {
    if (points[a] < 8 || points[a] % 2 != 0)
      throw InvalidArgument("make_grid: points per axis must be even, >= 8 (axis " +
                            std::to_string(a) + " has " + std::to_string(points[a]) + ")");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw InvalidArgument("make_grid: length per axis must be positive (axis " +
                            std::to_string(a) + ")");
    g.points_[a] = points[a];
    g.lengths_[a] = lengths[a];
  }
  return g;
}

GridSpec make_cubic_grid(int dims, int points, double length) {
  if (dims < 1 || dims > kMaxDims)
    throw InvalidArgument("make_grid: dims must be 1, 2 or 3, got " +
                          std::to_string(dims));
  std::array<int, kMaxDims> n{points, points, points};
  std::array<double, kMaxDims> l{length, length, length};
  return make_grid(dims, std::span(n).first(dims), std::span(l).first(dims));
}

int GridSpec::check_axis(int axis) const {
  if (axis < 0 || axis >= dims_)
    throw InvalidArgument("grid: axis " + std::to_string(axis) +
                          " out of range for dims = " + std::to_string(dims_));
  return axis;
}

double GridSpec::volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dims_; ++a) v *= lengths_[a];
  return v;
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dims_; ++a) v *= lengths_[a] / points_[a];
  return v;
}

std::size_t GridSpec::size() const noexcept {
  std::size_t n = 1;
  for (int a = 0; a < dims_; ++a) n *= static_cast<std::size_t>(points_[a]);
  return n;
}

Point GridSpec::point(std::size_t flat) const {
  Point p{0.0, 0.0, 0.0};
  for (int a = dims_ - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(points_[a]);
    p[a] = coordinate(a, static_cast<int>(flat % n));
    flat /= n;
  }
  return p;
}

bool GridSpec::contains(const Point &p) const {
  for (int a = 0; a < dims_; ++a) {
    const double half = 0.5 * lengths_[a];
    if (!(p[a] >= -half && p[a] < half)) return false;
  }
  return true;
}

std::vector<double> GridSpec::wavenumbers(int axis) const {
  const int a = check_axis(axis);
  const int n = points_[a];
  const double dk = 2.0 * std::numbers::pi / lengths_[a];
  std::vector<double> k(n);
  for (int j = 0; j < n; ++j) k[j] = dk * (j < n / 2 ? j : j - n);
  return k;
}

template <class T> bool Field<T>::all_finite() const {
  for (const auto &v : values_) {
    if constexpr (std::is_same_v<T, Complex>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

template class Field<Complex>;
template class Field<double>;

double integrate(const RealField &f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid().cell_volume();
}

double norm_squared(const ComplexField &psi) {
  double sum = 0.0;
  for (const Complex &v : psi.values()) sum += std::norm(v);
  return sum * psi.grid().cell_volume();
}

ComplexField normalize(const ComplexField &psi) {
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0)) throw InvalidArgument("normalize: field has zero norm");
  const double scale = 1.0 / std::sqrt(n2);
  ComplexField out = psi;
  for (Complex &v : out.mutable_values()) v *= scale;
  return out;
}

struct SpectralTransform::Impl {
  GridSpec grid;
  fftw_complex *buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Impl(const GridSpec &g) : grid(g) {
    std::array<int, kMaxDims> n{};
    for (int a = 0; a < g.dims(); ++a) n[a] = g.points(a);
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(g.size());
    forward = fftw_plan_dft(g.dims(), n.data(), buffer, buffer, FFTW_FORWARD,
                            FFTW_ESTIMATE);
    backward = fftw_plan_dft(g.dims(), n.data(), buffer, buffer, FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  Impl(const Impl &) = delete;
  Impl &operator=(const Impl &) = delete;

  void run(fftw_plan plan, std::span<Complex> data, double scale) const {
    if (data.size() != grid.size())
      throw InvalidArgument("spectral transform: size does not match grid");
    auto *buf = reinterpret_cast<Complex *>(buffer);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(plan);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = buf[i] * scale;
  }
};

SpectralTransform::SpectralTransform(const GridSpec &grid)
    : impl_(std::make_unique<Impl>(grid)) {}
SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform &&) noexcept = default;
SpectralTransform &SpectralTransform::operator=(SpectralTransform &&) noexcept = default;

const GridSpec &SpectralTransform::grid() const noexcept { return impl_->grid; }

void SpectralTransform::forward(std::span<Complex> data) const {
  impl_->run(impl_->forward, data, 1.0 / static_cast<double>(impl_->grid.size()));
}

void SpectralTransform::inverse(std::span<Complex> data) const {
  impl_->run(impl_->backward, data, 1.0);
}

ComplexField forward_transform(const ComplexField &psi) {
  SpectralTransform t(psi.grid());
  ComplexField out = psi;
  t.forward(out.mutable_values());
  return out;
}

ComplexField inverse_transform(const ComplexField &coeffs) {
  SpectralTransform t(coeffs.grid());
  ComplexField out = coeffs;
  t.inverse(out.mutable_values());
  return out;
}

double norm_squared_spectral(const ComplexField &coeffs) {
  double sum = 0.0;
  for (const Complex &c : coeffs.values()) sum += std::norm(c);
  return sum * coeffs.grid().volume();
}

std::vector<double> wavenumber_squared(const GridSpec &grid) {
  std::array<std::vector<double>, kMaxDims> k;
  for (int a = 0; a < grid.dims(); ++a) k[a] = grid.wavenumbers(a);
  std::vector<double> k2(grid.size());
  for (std::size_t flat = 0; flat < k2.size(); ++flat) {
    std::size_t rest = flat;
    double sum = 0.0;
    for (int a = grid.dims() - 1; a >= 0; --a) {
      const auto n = static_cast<std::size_t>(grid.points(a));
      const double ka = k[a][rest % n];
      sum += ka * ka;
      rest /= n;
    }
    k2[flat] = sum;
  }
  return k2;
}

RealField spectral_derivative(const RealField &f, int axis) {
  const GridSpec &g = f.grid();
  const std::vector<double> k = g.wavenumbers(axis);
  const int n_axis = g.points(axis);

  // Stride of `axis` in row-major order.
  std::size_t stride = 1;
  for (int a = g.dims() - 1; a > axis; --a) stride *= static_cast<std::size_t>(g.points(a));

  std::vector<Complex> data(f.values().begin(), f.values().end());
  SpectralTransform t(g);
  t.forward(data);
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    const int j = static_cast<int>((flat / stride) % n_axis);
    data[flat] *= (j == n_axis / 2) ? Complex{} : Complex(0.0, k[j]);
  }
  t.inverse(data);

  RealField out(g);
  auto v = out.mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = data[i].real();
  return out;
}

} // namespace lognls
