#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lognls/energy.hpp"
#include "lognls/grid.hpp"

namespace lognls {

enum class TimeMode { RealTime, ImaginaryTime };

struct EvolutionConfig {
  double dt = 1e-3;
  std::size_t steps = 100;
  TimeMode mode = TimeMode::RealTime;
  // Lower clamp for rho inside ln(rho); keeps the phase bounded where psi = 0.
  double density_floor = 1e-30;
  std::size_t record_every = 1;
};

// Throws InvalidArgument unless dt > 0, steps >= 1, density_floor > 0 and
// 1 <= record_every <= steps.
void validate(const EvolutionConfig &cfg);

struct Moments {
  std::vector<double> center;   // <x_i>
  std::vector<double> variance; // <x_i^2> - <x_i>^2
};

// Density-weighted moments per axis, normalized by int rho.
Moments moments(const ComplexField &psi);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norm_series;
  std::vector<EnergyBreakdown> energy_series;
  std::vector<std::vector<double>> center_series;
  std::vector<std::vector<double>> variance_series;
  ComplexField final_state;
};

// Multiplies mode k by exp(-i hbar |k|^2 dt / (4m)): the free flow over dt/2.
// ImaginaryTime substitutes dt -> -i dt, giving the real factor
// exp(-hbar |k|^2 dt / (4m)).
ComplexField kinetic_half_step(const ComplexField &psi, const PhysicalParams &params, double dt,
                               TimeMode mode = TimeMode::RealTime);

// Pointwise exp(-i (V + kT ln max(rho, floor)) dt / hbar). The phase depends
// on |psi| only, so in real time this is the exact flow of the substep.
ComplexField potential_log_step(const ComplexField &psi, const PhysicalParams &params,
                                double dt, double density_floor = 1e-30,
                                TimeMode mode = TimeMode::RealTime);

// Strang-split stepper with the per-mode kinetic factors and the sampled
// potential precomputed. Not safe for concurrent use of one instance.
class Propagator {
public:
  Propagator(const GridSpec &grid, PhysicalParams params, TimeMode mode, double dt,
             double density_floor = 1e-30);

  // kinetic(dt/2) . potential_log(dt) . kinetic(dt/2); ImaginaryTime also
  // renormalizes to unit norm.
  void step(ComplexField &psi) const;
  // The same composition with dt -> -dt. RealTime only.
  void step_backward(ComplexField &psi) const;

  const GridSpec &grid() const noexcept { return transform_.grid(); }

private:
  void apply(ComplexField &psi, double dt, const std::vector<Complex> &kinetic) const;

  PhysicalParams params_;
  TimeMode mode_;
  double dt_;
  double density_floor_;
  SpectralTransform transform_;
  RealField potential_;
  std::vector<Complex> kinetic_forward_;
  std::vector<Complex> kinetic_backward_;
};

ComplexField step(const ComplexField &psi, const PhysicalParams &params,
                  const EvolutionConfig &cfg);

// Called at every recorded sample with the step index, time and state.
using RecordObserver = std::function<void(std::size_t step, double t, const ComplexField &psi)>;

// Iterates step() cfg.steps times, recording observables at t = 0 and every
// record_every steps. Throws NumericalAbort (with the 1-based step index) as
// soon as a sample becomes non-finite. ImaginaryTime normalizes psi0 first.
Trajectory evolve(const ComplexField &psi0, const PhysicalParams &params,
                  const EvolutionConfig &cfg, const RecordObserver &observer = {});

} // namespace lognls
