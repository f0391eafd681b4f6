#include "lognls/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lognls {

namespace {

std::vector<Complex> kinetic_factors(const GridSpec &grid, const PhysicalParams &params,
                                     double dt, TimeMode mode) {
  const std::vector<double> k2 = wavenumber_squared(grid);
  const double c = params.hbar * dt / (4.0 * params.mass);
  std::vector<Complex> f(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i)
    f[i] = mode == TimeMode::RealTime ? std::polar(1.0, -c * k2[i]) : Complex(std::exp(-c * k2[i]));
  return f;
}

void apply_potential(std::span<Complex> psi, const RealField &v, const PhysicalParams &params,
                     double dt, double floor, TimeMode mode) {
  // In real time |psi| is untouched, so freezing rho is exact. In imaginary
  // time u = ln|psi| obeys hbar du/dtau = -(V + 2 kT u), solved exactly:
  //   u(tau) = u0 + g (V + kT ln rho0),  g = expm1(-2 kT tau / hbar) / (2 kT).
  // Freezing rho instead would shift the relaxed state by O(dt).
  double scale = -dt / params.hbar;
  if (mode == TimeMode::ImaginaryTime && params.kT != 0.0)
    scale = std::expm1(-2.0 * params.kT * dt / params.hbar) / (2.0 * params.kT);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double rho = std::max(std::norm(psi[i]), floor);
    const double w = v[i] + params.kT * std::log(rho);
    if (mode == TimeMode::RealTime)
      psi[i] *= std::polar(1.0, w * scale);
    else
      psi[i] *= std::exp(w * scale);
  }
}

void renormalize(ComplexField &psi) {
  const double n2 = norm_squared(psi);
  const double s = 1.0 / std::sqrt(n2);
  for (Complex &z : psi.mutable_values()) z *= s;
}

} // namespace

void validate(const EvolutionConfig &cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw InvalidArgument("evolution config: dt must be positive");
  if (cfg.steps < 1) throw InvalidArgument("evolution config: steps must be >= 1");
  if (!(cfg.density_floor > 0.0))
    throw InvalidArgument("evolution config: density_floor must be positive");
  if (cfg.record_every < 1 || cfg.record_every > cfg.steps)
    throw InvalidArgument("evolution config: record_every must be in [1, steps]");
}

Moments moments(const ComplexField &psi) {
  const GridSpec &g = psi.grid();
  const int d = g.dims();
  std::vector<double> m0(1, 0.0), m1(d, 0.0), m2(d, 0.0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double rho = std::norm(psi[i]);
    const Point x = g.point(i);
    m0[0] += rho;
    for (int a = 0; a < d; ++a) {
      m1[a] += rho * x[a];
      m2[a] += rho * x[a] * x[a];
    }
  }
  Moments out{std::vector<double>(d), std::vector<double>(d)};
  if (!(m0[0] > 0.0)) return out;
  for (int a = 0; a < d; ++a) {
    const double c = m1[a] / m0[0];
    out.center[a] = c;
    out.variance[a] = m2[a] / m0[0] - c * c;
  }
  return out;
}

ComplexField kinetic_half_step(const ComplexField &psi, const PhysicalParams &params, double dt,
                               TimeMode mode) {
  validate(params);
  const std::vector<Complex> f = kinetic_factors(psi.grid(), params, dt, mode);
  SpectralTransform t(psi.grid());
  ComplexField out = psi;
  auto v = out.mutable_values();
  t.forward(v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= f[i];
  t.inverse(v);
  return out;
}

ComplexField potential_log_step(const ComplexField &psi, const PhysicalParams &params, double dt,
                                double density_floor, TimeMode mode) {
  validate(params);
  if (!(density_floor > 0.0)) throw InvalidArgument("potential_log_step: density_floor must be positive");
  const RealField v = sample_potential(params, psi.grid());
  ComplexField out = psi;
  apply_potential(out.mutable_values(), v, params, dt, density_floor, mode);
  return out;
}

Propagator::Propagator(const GridSpec &grid, PhysicalParams params, TimeMode mode, double dt,
                       double density_floor)
    : params_((validate(params), std::move(params))), mode_(mode), dt_(dt),
      density_floor_(density_floor), transform_(grid),
      potential_(sample_potential(params_, grid)),
      kinetic_forward_(kinetic_factors(grid, params_, dt, mode)),
      kinetic_backward_(mode == TimeMode::RealTime ? kinetic_factors(grid, params_, -dt, mode)
                                                   : std::vector<Complex>{}) {
  if (!(density_floor > 0.0)) throw InvalidArgument("propagator: density_floor must be positive");
}

void Propagator::apply(ComplexField &psi, double dt, const std::vector<Complex> &kinetic) const {
  if (!(psi.grid() == grid())) throw InvalidArgument("propagator: field grid does not match");
  auto v = psi.mutable_values();
  transform_.forward(v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kinetic[i];
  transform_.inverse(v);
  apply_potential(v, potential_, params_, dt, density_floor_, mode_);
  transform_.forward(v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kinetic[i];
  transform_.inverse(v);
  if (mode_ == TimeMode::ImaginaryTime) renormalize(psi);
}

void Propagator::step(ComplexField &psi) const { apply(psi, dt_, kinetic_forward_); }

void Propagator::step_backward(ComplexField &psi) const {
  if (mode_ != TimeMode::RealTime)
    throw InvalidArgument("propagator: backward steps are only defined in real time");
  apply(psi, -dt_, kinetic_backward_);
}

ComplexField step(const ComplexField &psi, const PhysicalParams &params,
                  const EvolutionConfig &cfg) {
  validate(cfg);
  Propagator p(psi.grid(), params, cfg.mode, cfg.dt, cfg.density_floor);
  ComplexField out = psi;
  p.step(out);
  return out;
}

Trajectory evolve(const ComplexField &psi0, const PhysicalParams &params,
                  const EvolutionConfig &cfg, const RecordObserver &observer) {
  validate(cfg);
  if (!psi0.all_finite()) throw InvalidArgument("evolve: initial state has non-finite samples");
  const GridSpec &g = psi0.grid();
  const Propagator prop(g, params, cfg.mode, cfg.dt, cfg.density_floor);
  const EnergyEvaluator eval(g, params);

  ComplexField psi = cfg.mode == TimeMode::ImaginaryTime ? normalize(psi0) : psi0;
  Trajectory traj{.final_state = psi};
  const std::size_t samples = 1 + cfg.steps / cfg.record_every;
  traj.times.reserve(samples);

  auto record = [&](std::size_t n) {
    const Moments m = moments(psi);
    traj.times.push_back(static_cast<double>(n) * cfg.dt);
    traj.norm_series.push_back(norm_squared(psi));
    traj.energy_series.push_back(eval(psi));
    traj.center_series.push_back(m.center);
    traj.variance_series.push_back(m.variance);
    if (observer) observer(n, traj.times.back(), psi);
  };

  record(0);
  for (std::size_t n = 1; n <= cfg.steps; ++n) {
    prop.step(psi);
    if (!psi.all_finite())
      throw NumericalAbort(n, "evolve: non-finite sample at step " + std::to_string(n) +
                                  " (dt too large or density_floor too small)");
    if (n % cfg.record_every == 0) record(n);
  }
  traj.final_state = std::move(psi);
  return traj;
}

} // namespace lognls
