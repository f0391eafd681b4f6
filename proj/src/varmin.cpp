#include "lognls/varmin.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lognls/energy.hpp"

namespace lognls {

namespace {

// Portable uniform draw in [0, 1) from the raw engine output.
double unit_draw(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

DensityVector::DensityVector(RealField values) : field_(std::move(values)) {
  for (double v : field_.values())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidArgument("density vector: samples must be finite and nonnegative");
}

bool DensityVector::is_normalized(double tol) const {
  return std::abs(integrate(field_) - 1.0) <= tol;
}

DensityVector DensityVector::uniform(const GridSpec &grid) {
  return DensityVector(RealField(grid, std::vector<double>(grid.size(), 1.0 / grid.volume())));
}

DensityVector normalize_density(RealField values) {
  const double total = integrate(values);
  if (!(total > 0.0)) throw InvalidArgument("normalize_density: zero total mass");
  for (double &v : values.mutable_values()) v /= total;
  return DensityVector(std::move(values));
}

double lagrangian(const DensityVector &rho, double lambda) {
  const double inv_v = 1.0 / rho.grid().volume();
  double sum = 0.0;
  for (double r : rho.values()) sum += rho_log_rho(r) + lambda * (r - inv_v);
  return sum * rho.grid().cell_volume();
}

double support_cutoff(const GridSpec &grid) { return 1e-12 / grid.volume(); }

double lambda_estimate(const DensityVector &rho) {
  const double cut = support_cutoff(rho.grid());
  double sum = 0.0;
  std::size_t count = 0;
  for (double r : rho.values()) {
    if (r > cut) {
      sum += std::log(r);
      ++count;
    }
  }
  if (count == 0) throw InvalidArgument("lambda_estimate: density has empty support");
  return -1.0 - sum / static_cast<double>(count);
}

double kkt_residual(const DensityVector &rho, double lambda) {
  const double cut = support_cutoff(rho.grid());
  double worst = 0.0;
  for (double r : rho.values())
    if (r > cut) worst = std::max(worst, std::abs(std::log(r) + 1.0 + lambda));
  return worst;
}

DensityVector random_density(const GridSpec &grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RealField f(grid);
  for (double &v : f.mutable_values()) v = 0.05 + unit_draw(rng);
  return normalize_density(std::move(f));
}

MinimizationResult minimize_entropy(const GridSpec &grid, const MinimizerConfig &cfg) {
  return minimize_entropy(random_density(grid, cfg.seed), cfg);
}

MinimizationResult minimize_entropy(const DensityVector &start, const MinimizerConfig &cfg) {
  if (cfg.max_iters < 1) throw InvalidArgument("minimizer config: max_iters must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw InvalidArgument("minimizer config: tolerance must be positive");
  if (!(cfg.step_size > 0.0) || cfg.step_size > 1.0)
    throw InvalidArgument("minimizer config: step_size must be in (0, 1]");
  if (!start.is_normalized(1e-10))
    throw InvalidArgument("minimize_entropy: starting density is not normalized");

  RealField rho = start.field();
  const double eta = cfg.step_size;
  const double cut = support_cutoff(rho.grid());

  MinimizationResult res{.rho_star = start};
  res.objective_history.push_back(entropy_functional(rho));
  res.lambda = lambda_estimate(start);
  res.kkt_residual = kkt_residual(start, res.lambda);

  while (res.kkt_residual > cfg.tolerance && res.iterations < cfg.max_iters) {
    // Gradient of int rho ln rho w.r.t. the nodal values is (ln rho + 1) per
    // unit cell volume; points off the support stay where they are.
    for (double &r : rho.mutable_values())
      if (r > cut) r *= std::exp(-eta * (std::log(r) + 1.0));
    DensityVector next = normalize_density(rho);
    rho = next.field();
    ++res.iterations;
    res.objective_history.push_back(entropy_functional(rho));
    res.lambda = lambda_estimate(next);
    res.kkt_residual = kkt_residual(next, res.lambda);
    res.rho_star = std::move(next);
  }

  res.value = entropy_functional(res.rho_star.field());
  res.converged = res.kkt_residual <= cfg.tolerance;
  return res;
}

double crude_bound(const GridSpec &grid) { return -grid.volume() / std::numbers::e; }

double sharp_bound(const GridSpec &grid) { return -std::log(grid.volume()); }

std::optional<double> log_energy_lower_bound(const GridSpec &grid, double kT) {
  if (kT < 0.0) return std::nullopt;
  return kT * sharp_bound(grid);
}

} // namespace lognls
