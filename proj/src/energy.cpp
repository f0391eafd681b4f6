#include "lognls/energy.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace lognls {

namespace {

constexpr double kRhoFloor = 1e-300;

void warn_unnormalized_once(double n2) {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true))
    std::cerr << "lognls: warning: energy() called on a field with norm^2 = " << n2
              << " (expected 1); continuing\n";
}

} // namespace

void validate(const PhysicalParams &params) {
  if (!(params.hbar > 0.0) || !std::isfinite(params.hbar))
    throw InvalidArgument("physical params: hbar must be positive");
  if (!(params.mass > 0.0) || !std::isfinite(params.mass))
    throw InvalidArgument("physical params: mass must be positive");
  if (!std::isfinite(params.kT)) throw InvalidArgument("physical params: kT must be finite");
}

RealField sample_potential(const PhysicalParams &params, const GridSpec &grid) {
  struct Visitor {
    const PhysicalParams &params;
    const GridSpec &grid;

    RealField operator()(const ZeroPotential &) const { return RealField(grid); }

    RealField operator()(const HarmonicPotential &h) const {
      for (int a = 0; a < grid.dims(); ++a)
        if (!(h.omega[a] > 0.0))
          throw InvalidArgument("harmonic potential: omega must be positive");
      const double m = params.mass;
      return RealField::sample(grid, [&](const Point &x) {
        double v = 0.0;
        for (int a = 0; a < grid.dims(); ++a) {
          const double d = x[a] - h.center[a];
          v += h.omega[a] * h.omega[a] * d * d;
        }
        return 0.5 * m * v;
      });
    }

    RealField operator()(const SampledPotential &s) const {
      if (!(s.field.grid() == grid))
        throw InvalidArgument("sampled potential: grid does not match the wavefunction grid");
      if (!s.field.all_finite()) throw InvalidArgument("sampled potential: non-finite value");
      return s.field;
    }
  };
  return std::visit(Visitor{params, grid}, params.potential);
}

RealField density(const ComplexField &psi) {
  RealField rho(psi.grid());
  auto out = rho.mutable_values();
  const auto in = psi.values();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::norm(in[i]);
  return rho;
}

double rho_log_rho(double rho) {
  if (rho < 0.0 || std::isnan(rho))
    throw InvalidArgument("rho_log_rho: density must be nonnegative");
  if (rho < kRhoFloor) return 0.0;
  return rho * std::log(rho);
}

double entropy_functional(const RealField &rho) {
  double sum = 0.0;
  for (double r : rho.values()) sum += rho_log_rho(r);
  return sum * rho.grid().cell_volume();
}

EnergyEvaluator::EnergyEvaluator(const GridSpec &grid, PhysicalParams params)
    : params_((validate(params), std::move(params))), transform_(grid),
      k2_(wavenumber_squared(grid)), potential_(sample_potential(params_, grid)) {}

EnergyBreakdown EnergyEvaluator::operator()(const ComplexField &psi) const {
  const GridSpec &g = psi.grid();
  if (!(g == transform_.grid()))
    throw InvalidArgument("energy: wavefunction grid does not match the evaluator grid");

  const double n2 = norm_squared(psi);
  if (std::abs(n2 - 1.0) > 1e-8) warn_unnormalized_once(n2);

  std::vector<Complex> coeffs(psi.values().begin(), psi.values().end());
  transform_.forward(coeffs);
  double grad2 = 0.0;
  for (std::size_t i = 0; i < k2_.size(); ++i) grad2 += k2_[i] * std::norm(coeffs[i]);
  grad2 *= g.volume();

  const RealField rho = density(psi);
  double ext = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) ext += potential_[i] * rho[i];
  ext *= g.cell_volume();

  EnergyBreakdown e;
  e.kinetic = params_.hbar * params_.hbar / (2.0 * params_.mass) * grad2;
  e.external = ext;
  e.logarithmic = params_.kT * entropy_functional(rho);
  e.total = e.kinetic + e.external + e.logarithmic;
  return e;
}

EnergyBreakdown energy(const ComplexField &psi, const PhysicalParams &params) {
  return EnergyEvaluator(psi.grid(), params)(psi);
}

std::vector<double> log_force_total(const ComplexField &psi, const PhysicalParams &params) {
  const GridSpec &g = psi.grid();
  std::vector<double> force(g.dims(), 0.0);
  if (params.kT == 0.0) return force;
  const RealField rho = density(psi);
  for (int a = 0; a < g.dims(); ++a)
    force[a] = -params.kT * integrate(spectral_derivative(rho, a));
  return force;
}

std::vector<double> log_torque_total(const ComplexField &psi, const PhysicalParams &params,
                                     const Point &center) {
  const GridSpec &g = psi.grid();
  if (!g.contains(center)) throw InvalidArgument("log_torque_total: center outside the box");
  const int d = g.dims();
  const std::size_t ncomp = d == 1 ? 0 : (d == 2 ? 1 : 3);
  std::vector<double> torque(ncomp, 0.0);
  if (params.kT == 0.0 || ncomp == 0) return torque;

  const RealField rho = density(psi);
  std::array<RealField, kMaxDims> grad{RealField(g), RealField(g), RealField(g)};
  for (int a = 0; a < d; ++a) grad[a] = spectral_derivative(rho, a);

  // Force density f = -kT grad rho; torque density r x f.
  std::array<double, 3> acc{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.point(i);
    const double rx = x[0] - center[0];
    const double ry = x[1] - center[1];
    const double rz = d == 3 ? x[2] - center[2] : 0.0;
    const double fx = -params.kT * grad[0][i];
    const double fy = -params.kT * grad[1][i];
    const double fz = d == 3 ? -params.kT * grad[2][i] : 0.0;
    acc[0] += ry * fz - rz * fy;
    acc[1] += rz * fx - rx * fz;
    acc[2] += rx * fy - ry * fx;
  }
  const double w = g.cell_volume();
  if (d == 2) {
    torque[0] = acc[2] * w;
  } else {
    for (int c = 0; c < 3; ++c) torque[c] = acc[c] * w;
  }
  return torque;
}

PointwiseBound pointwise_bound_report(const RealField &rho) {
  PointwiseBound best{0.0, 0.0};
  bool first = true;
  for (double r : rho.values()) {
    const double f = rho_log_rho(r);
    if (first || f < best.min_value) {
      best = {f, r};
      first = false;
    }
  }
  if (best.min_value < -1.0 / std::numbers::e - 1e-14)
    throw std::logic_error("pointwise_bound_report: rho ln rho fell below -1/e");
  return best;
}

} // namespace lognls
