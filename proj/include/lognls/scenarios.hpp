#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lognls/energy.hpp"
#include "lognls/propagator.hpp"
#include "lognls/varmin.hpp"

namespace lognls {

struct NamedValue {
  std::string name;
  double value = 0.0;
};

// One verdict: passes iff discrepancy <= tolerance. Checks marked
// `adjustable` take a user-supplied tolerance override; the others encode
// sign conditions (orderings, strict growth) and always use tolerance 0.
struct Check {
  std::string name;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool adjustable = true;

  bool passed() const noexcept { return discrepancy <= tolerance; }
};

struct ScenarioReport {
  std::string scenario;
  std::vector<NamedValue> predicted;
  std::vector<NamedValue> measured;
  std::vector<Check> checks;
  bool pass = false;
  // Time series of the primary run, when the scenario evolves a state.
  std::optional<Trajectory> trajectory;

  // Recomputes `pass` from the checks.
  void finalize();
  double max_discrepancy() const;
};

struct ScenarioSetup {
  GridSpec grid;
  PhysicalParams params;
  EvolutionConfig evolution;
};

// psi ∝ exp(-|x-c|^2 / (4 sigma^2) + i p.x); the density has standard
// deviation sigma along each axis. Normalized on the grid.
struct GaussianPacket {
  double sigma = 1.0;
  Point center{0.0, 0.0, 0.0};
  std::array<double, kMaxDims> momentum{0.0, 0.0, 0.0};
};

ComplexField make_gaussian_packet(const GridSpec &grid, const GaussianPacket &packet);

// A exp(i k.x) with k_i = 2 pi m_i / L_i. Throws InvalidArgument unless
// |m_i| < n_i / 2 on every axis.
ComplexField make_plane_wave(const GridSpec &grid, std::span<const int> mode_index, Complex amplitude);

// Width parameter of the stationary Gaussian for kT < 0: alpha = 2m|kT|/hbar^2.
double gausson_alpha(const PhysicalParams &params);

// Normalized psi ∝ exp(-alpha |x-c|^2 / 2). Throws InvalidArgument for kT >= 0.
ComplexField make_gausson(const PhysicalParams &params, const GridSpec &grid, const Point &center);

// Least-squares coefficient b of the fit E_loc(x) = a + b |x-c|^2, where
// E_loc = (H psi)/psi with the spectral Laplacian, over points whose density
// exceeds 1e-6 of the peak. Zero for an exact stationary Gaussian.
double local_energy_curvature(const ComplexField &psi, const PhysicalParams &params,
                              const Point &center);

struct PlaneWaveSpec {
  ScenarioSetup setup;
  std::array<int, kMaxDims> mode_index{1, 0, 0};
  double amplitude = 1.0; // |A|
};

struct GaussonSpec {
  ScenarioSetup setup; // kT < 0
  Point center{0.0, 0.0, 0.0};
};

struct ScalingSpec {
  ScenarioSetup setup;
  Complex c{2.0, 0.0};
  GaussianPacket initial;
};

struct FactorState {
  enum class Kind { Gaussian, PlaneWave, Gausson };
  Kind kind = Kind::Gaussian;
  GaussianPacket packet;  // Gaussian: sigma, center[0], momentum[0]
  int mode_index = 0;     // PlaneWave
  double amplitude = 1.0; // PlaneWave
  double center = 0.0;    // Gausson
};

struct FactorizationSpec {
  ScenarioSetup setup; // 2D grid
  FactorState factor_x;
  FactorState factor_y;
};

struct SpreadingSpec {
  ScenarioSetup setup;
  std::vector<double> kT_values{0.5, 0.0, -0.5};
  GaussianPacket initial;
};

struct EnergyBoundSweepSpec {
  std::vector<double> volumes{1.0, 2.718281828459045, 8.0, 100.0};
  int dims = 1;
  int points = 64;
  std::size_t seeds = 10;
  std::size_t random_adversaries = 20;
  MinimizerConfig minimizer;
};

// Imaginary-time relaxation toward the ground state.
struct RelaxationSpec {
  ScenarioSetup setup; // evolution.mode is forced to ImaginaryTime
  GaussianPacket initial;
};

using ScenarioSpec = std::variant<PlaneWaveSpec, GaussonSpec, ScalingSpec, FactorizationSpec,
                                  SpreadingSpec, EnergyBoundSweepSpec, RelaxationSpec>;

// Stable identifiers: plane_wave, gausson, scaling, factorization, spreading,
// energy_bound_sweep, relaxation.
std::string scenario_name(const ScenarioSpec &spec);

ScenarioReport run_plane_wave(const PlaneWaveSpec &spec);
ScenarioReport run_gausson_stationarity(const GaussonSpec &spec);
ScenarioReport run_scaling_covariance(const ScalingSpec &spec);
ScenarioReport run_factorization(const FactorizationSpec &spec);
ScenarioReport run_spreading(const SpreadingSpec &spec);
ScenarioReport run_energy_bound_sweep(const EnergyBoundSweepSpec &spec);
ScenarioReport run_relaxation(const RelaxationSpec &spec);

// Dispatches on the spec; `tolerance_override` replaces the tolerance of
// every adjustable check before the verdict is taken.
ScenarioReport run_scenario(const ScenarioSpec &spec,
                            std::optional<double> tolerance_override = std::nullopt);

// The fixed adversarial family used by the bound sweep: single-cell spike,
// two-level half box, a narrow bump, and `random_count` seeded random
// densities (half of them with zeroed cells). All normalized.
std::vector<std::pair<std::string, DensityVector>> adversarial_densities(const GridSpec &grid,
                                                                          std::size_t random_count,
                                                                          std::uint64_t seed);

} // namespace lognls
