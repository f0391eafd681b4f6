#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "lognls/energy.hpp"
#include "lognls/scenarios.hpp"

using namespace lognls;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Normalized 1D Gaussian with <x^2> = sigma^2 and momentum p, written out here
// rather than taken from the scenario helpers.
ComplexField gaussian_1d(const GridSpec &g, double sigma, double p) {
  const double amp = std::pow(2.0 * kPi * sigma * sigma, -0.25);
  return ComplexField::sample(g, [&](const Point &x) {
    return amp * std::exp(-x[0] * x[0] / (4.0 * sigma * sigma)) * std::polar(1.0, p * x[0]);
  });
}

} // namespace

TEST_CASE("rho ln rho", "[energy]") {
  CHECK(rho_log_rho(0.0) == 0.0);
  CHECK(rho_log_rho(1.0) == 0.0);
  CHECK(rho_log_rho(1.0 / kE) == Approx(-1.0 / kE).epsilon(1e-15));
  CHECK(rho_log_rho(kE) == Approx(kE));
  CHECK(rho_log_rho(1e-320) == 0.0);
  CHECK_THROWS_AS(rho_log_rho(-1e-12), InvalidArgument);
  CHECK_THROWS_AS(rho_log_rho(std::nan("")), InvalidArgument);
}

TEST_CASE("pointwise bound report locates the minimum", "[energy]") {
  const GridSpec g = make_cubic_grid(1, 64, 1.0);
  const RealField rho = RealField::sample(g, [](const Point &x) { return 0.5 + x[0]; });
  const PointwiseBound b = pointwise_bound_report(rho);
  CHECK(b.min_value >= -1.0 / kE);
  CHECK(b.argmin_density == Approx(1.0 / kE).margin(1.0 / 64));
}

TEST_CASE("Gaussian energy components against closed forms", "[energy]") {
  const GridSpec g = make_cubic_grid(1, 512, 40.0);
  const double sigma = 1.3, p = 0.7, omega = 0.9;
  PhysicalParams params{.hbar = 1.0, .mass = 1.0, .kT = 0.4,
                        .potential = HarmonicPotential{{omega, 1.0, 1.0}, {0.0, 0.0, 0.0}}};
  const EnergyBreakdown e = energy(gaussian_1d(g, sigma, p), params);
  const double kinetic = 0.5 * (1.0 / (4.0 * sigma * sigma) + p * p);
  const double external = 0.5 * omega * omega * sigma * sigma;
  // Differential entropy of a normal density: -1/2 ln(2 pi e sigma^2).
  const double logarithmic = params.kT * (-0.5 * std::log(2.0 * kPi * kE * sigma * sigma));
  CHECK(e.kinetic == Approx(kinetic).epsilon(1e-12));
  CHECK(e.external == Approx(external).epsilon(1e-12));
  CHECK(e.logarithmic == Approx(logarithmic).epsilon(1e-12));
  CHECK(e.total == Approx(kinetic + external + logarithmic).epsilon(1e-12));
}

TEST_CASE("Gausson energy in two dimensions", "[energy]") {
  const PhysicalParams params{.hbar = 1.0, .mass = 1.0, .kT = -0.5};
  const GridSpec g = make_cubic_grid(2, 128, 24.0);
  const double alpha = 2.0 * params.mass * std::abs(params.kT);
  const ComplexField psi = ComplexField::sample(g, [&](const Point &x) {
    return std::sqrt(alpha / kPi) * std::exp(-0.5 * alpha * (x[0] * x[0] + x[1] * x[1]));
  });
  const EnergyBreakdown e = energy(psi, params);
  const double expected = 0.5 * 2 * std::abs(params.kT) * (2.0 - std::log(alpha / kPi));
  CHECK(e.total == Approx(expected).epsilon(1e-12));
  CHECK(e.kinetic == Approx(std::abs(params.kT)).epsilon(1e-12));
}

TEST_CASE("energy of a scaled state", "[energy]") {
  const GridSpec g = make_cubic_grid(1, 256, 30.0);
  PhysicalParams params{.kT = -0.8, .potential = HarmonicPotential{{0.5, 1.0, 1.0}, {1.0, 0.0, 0.0}}};
  const ComplexField psi = gaussian_1d(g, 1.1, 0.4);
  const EnergyBreakdown e1 = energy(psi, params);
  for (const Complex c : {Complex(2.0, 0.0), Complex(0.3, -0.4)}) {
    std::vector<Complex> scaled(psi.values().begin(), psi.values().end());
    for (Complex &z : scaled) z *= c;
    const EnergyBreakdown ec = energy(ComplexField(g, scaled), params);
    const double c2 = std::norm(c);
    CHECK(ec.kinetic == Approx(c2 * e1.kinetic).epsilon(1e-12));
    CHECK(ec.external == Approx(c2 * e1.external).epsilon(1e-12));
    CHECK(ec.logarithmic ==
          Approx(c2 * (e1.logarithmic + params.kT * std::log(c2) * 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("spectral kinetic energy agrees with finite differences to second order", "[energy]") {
  const double L = 20.0, sigma = 0.8;
  std::vector<double> gaps;
  for (int n : {64, 128}) {
    const GridSpec g = make_cubic_grid(1, n, L);
    const ComplexField psi = gaussian_1d(g, sigma, 1.0);
    // Periodic forward differences: sum |psi_{j+1} - psi_j|^2 / h^2 * h / 2.
    const double h = g.spacing(0);
    double fd = 0.0;
    for (int j = 0; j < n; ++j) fd += std::norm(psi[(j + 1) % n] - psi[j]);
    fd *= 0.5 / h;
    gaps.push_back(std::abs(fd - energy(psi, PhysicalParams{}).kinetic));
  }
  CHECK(gaps[0] / gaps[1] == Approx(4.0).epsilon(0.05));
}

TEST_CASE("logarithmic force and torque vanish", "[energy]") {
  const PhysicalParams params{.kT = 0.7};
  const GridSpec g = make_grid(2, std::array{64, 64}, std::array{16.0, 12.0});
  // Off-center, anisotropic, with momentum: nothing symmetric to hide behind.
  const ComplexField psi = ComplexField::sample(g, [](const Point &x) {
    const double u = x[0] - 1.5, v = x[1] + 0.7;
    return std::exp(-u * u / 2.0 - v * v / 1.2 - 0.3 * u * v) * std::polar(1.0, 0.8 * x[0] - 0.2 * x[1]);
  });
  for (double f : log_force_total(psi, params)) CHECK(std::abs(f) < 1e-12);
  const std::vector<double> tau = log_torque_total(psi, params, {2.0, -1.0, 0.0});
  REQUIRE(tau.size() == 1);
  CHECK(std::abs(tau[0]) < 1e-12);
  CHECK_THROWS_AS(log_torque_total(psi, params, {9.0, 0.0, 0.0}), InvalidArgument);
}

TEST_CASE("force and torque shapes", "[energy]") {
  const PhysicalParams zero_kT{};
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g = make_cubic_grid(d, 16, 4.0);
    const ComplexField psi = ComplexField::sample(g, [](const Point &x) {
      return std::exp(-x[0] * x[0] - x[1] * x[1] - x[2] * x[2]) + 0.1;
    });
    const std::vector<double> f = log_force_total(psi, zero_kT);
    REQUIRE(f.size() == static_cast<std::size_t>(d));
    for (double v : f) CHECK(v == 0.0);
    const std::size_t torque_size = d == 1 ? 0 : d == 2 ? 1 : 3;
    CHECK(log_torque_total(psi, PhysicalParams{.kT = 1.0}, {0.0, 0.0, 0.0}).size() == torque_size);
  }
}

TEST_CASE("parameter validation", "[energy]") {
  CHECK_THROWS_AS(validate(PhysicalParams{.hbar = 0.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(PhysicalParams{.mass = -1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(PhysicalParams{.kT = std::nan("")}), InvalidArgument);
  const GridSpec g = make_cubic_grid(1, 16, 1.0);
  const GridSpec other = make_cubic_grid(1, 32, 1.0);
  PhysicalParams p{.potential = SampledPotential{RealField(other)}};
  CHECK_THROWS_AS(sample_potential(p, g), InvalidArgument);
}
