#pragma once

#include <cstdint>
#include <optional>

#include "lognls/grid.hpp"

namespace lognls {

// Nonnegative density sampled on a grid. The discrete normalization
// constraint is integrate(values) = 1.
class DensityVector {
public:
  // Throws InvalidArgument on a negative or non-finite sample.
  explicit DensityVector(RealField values);

  const RealField &field() const noexcept { return field_; }
  const GridSpec &grid() const noexcept { return field_.grid(); }
  std::span<const double> values() const noexcept { return field_.values(); }
  // |integrate(values) - 1| <= tol
  bool is_normalized(double tol = 1e-10) const;

  static DensityVector uniform(const GridSpec &grid);

private:
  RealField field_;
};

// Scales a nonnegative field so that it integrates to 1.
DensityVector normalize_density(RealField values);

struct MinimizerConfig {
  std::size_t max_iters = 10000;
  double tolerance = 1e-8; // KKT residual threshold
  double step_size = 0.5;  // mirror-descent step, in (0, 1]
  std::uint64_t seed = 0;
};

struct MinimizationResult {
  DensityVector rho_star;
  double value = 0.0;  // int rho ln rho at rho_star
  double lambda = 0.0; // Lagrange multiplier estimate
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Objective after every iteration, starting with the initial density.
  std::vector<double> objective_history;
};

// S = int [rho ln rho + lambda (rho - 1/V)] d^dx
double lagrangian(const DensityVector &rho, double lambda);

// Points whose density exceeds this count as the support.
double support_cutoff(const GridSpec &grid);

// Multiplier that best satisfies ln rho + 1 + lambda = 0 on the support in the
// least-squares sense: lambda = -1 - mean(ln rho).
double lambda_estimate(const DensityVector &rho);

// max over the support of |ln rho(x) + 1 + lambda|.
double kkt_residual(const DensityVector &rho, double lambda);

// Seeded random density, strictly positive and normalized.
DensityVector random_density(const GridSpec &grid, std::uint64_t seed);

// Entropic mirror descent on the normalized simplex starting from
// random_density(grid, cfg.seed):
//   rho <- rho * exp(-eta (ln rho + 1)), then renormalize.
// Iterates stay positive and normalized. Stops once the KKT residual drops to
// cfg.tolerance; otherwise returns converged = false after max_iters.
MinimizationResult minimize_entropy(const GridSpec &grid, const MinimizerConfig &cfg);
MinimizationResult minimize_entropy(const DensityVector &start, const MinimizerConfig &cfg);

// (-1/e) * V, from rho ln rho >= -1/e pointwise.
double crude_bound(const GridSpec &grid);
// -ln V, the constrained minimum of int rho ln rho over normalized densities.
double sharp_bound(const GridSpec &grid);

// Lower bound for the logarithmic energy kT * int rho ln rho of a normalized
// state. Only kT >= 0 has one from the volume constraint alone; for kT < 0
// the answer depends on how concentrated rho may be, so nullopt.
std::optional<double> log_energy_lower_bound(const GridSpec &grid, double kT);

} // namespace lognls
