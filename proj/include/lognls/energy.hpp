#pragma once

#include <variant>
#include <vector>

#include "lognls/grid.hpp"

namespace lognls {

struct ZeroPotential {};

// V(x) = m/2 * sum_i omega_i^2 (x_i - c_i)^2
struct HarmonicPotential {
  std::array<double, kMaxDims> omega{1.0, 1.0, 1.0};
  Point center{0.0, 0.0, 0.0};
};

struct SampledPotential {
  RealField field;
};

using PotentialSpec = std::variant<ZeroPotential, HarmonicPotential, SampledPotential>;

// Symbols of the logarithmic Schroedinger equation
//   i hbar dpsi/dt = [-hbar^2/(2m) Laplacian + V + kT ln|psi|^2] psi.
// kT is signed; zero recovers the linear equation. Natural units by default.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double kT = 0.0;
  PotentialSpec potential = ZeroPotential{};
};

// Throws InvalidArgument on nonpositive hbar/mass or non-finite kT.
void validate(const PhysicalParams &params);

// Samples the external potential on `grid`. Throws InvalidArgument when a
// sampled potential lives on a different grid or has non-finite values.
RealField sample_potential(const PhysicalParams &params, const GridSpec &grid);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double external = 0.0;
  double logarithmic = 0.0;
  double total = 0.0;
};

RealField density(const ComplexField &psi);

// rho ln rho, continuously extended by 0 at rho = 0 (and for rho < 1e-300).
// Global minimum -1/e at rho = 1/e. Throws InvalidArgument for rho < 0.
double rho_log_rho(double rho);

// int rho ln rho d^dx, without any kT factor. Throws on negative samples.
double entropy_functional(const RealField &rho);

// Quantum average of the Hamiltonian. The kinetic part is evaluated in
// gradient form, hbar^2/(2m) int |grad psi|^2, from the spectral coefficients.
// Unnormalized input is accepted (a one-time warning goes to stderr).
EnergyBreakdown energy(const ComplexField &psi, const PhysicalParams &params);

// Reusable form of energy() for repeated evaluation on one grid: caches the
// transform plan, |k|^2 and the sampled potential.
class EnergyEvaluator {
public:
  EnergyEvaluator(const GridSpec &grid, PhysicalParams params);
  EnergyBreakdown operator()(const ComplexField &psi) const;

private:
  PhysicalParams params_;
  SpectralTransform transform_;
  std::vector<double> k2_;
  RealField potential_;
};

// int -kT grad(rho) d^dx, one component per axis.
std::vector<double> log_force_total(const ComplexField &psi, const PhysicalParams &params);

// int (x - c) x (-kT grad rho) d^dx. Empty in 1D, one z component in 2D,
// three components in 3D. Throws InvalidArgument if `center` is outside the box.
std::vector<double> log_torque_total(const ComplexField &psi, const PhysicalParams &params,
                                     const Point &center);

struct PointwiseBound {
  double min_value = 0.0;
  double argmin_density = 0.0;
};

// Minimum of rho ln rho over the grid and the density where it is attained.
PointwiseBound pointwise_bound_report(const RealField &rho);

} // namespace lognls
