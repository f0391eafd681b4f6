#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lognls/scenarios.hpp"

using namespace lognls;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ScenarioSetup setup(int dims, int n, double L, double kT, double dt, std::size_t steps,
                    std::size_t record_every) {
  return {make_cubic_grid(dims, n, L), PhysicalParams{.kT = kT},
          EvolutionConfig{.dt = dt, .steps = steps, .record_every = record_every}};
}

const Check &check_named(const ScenarioReport &r, const std::string &name) {
  for (const Check &c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  throw;
}

} // namespace

TEST_CASE("initial-state builders", "[scenarios]") {
  const GridSpec g = make_cubic_grid(2, 64, 20.0);
  const ComplexField packet = make_gaussian_packet(g, GaussianPacket{.sigma = 1.1, .momentum = {0.5, -1.0, 0.0}});
  CHECK(norm_squared(packet) == Approx(1.0).epsilon(1e-12));

  const PhysicalParams p{.hbar = 0.8, .mass = 1.7, .kT = -0.3};
  CHECK(gausson_alpha(p) == Approx(2.0 * 1.7 * 0.3 / 0.64));
  CHECK_THROWS_AS(gausson_alpha(PhysicalParams{.kT = 0.2}), InvalidArgument);
  const ComplexField gs = make_gausson(p, g, {1.0, -0.5, 0.0});
  CHECK(norm_squared(gs) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(local_energy_curvature(gs, p, {1.0, -0.5, 0.0})) < 1e-8);
  // A wider Gaussian is not stationary: its local energy bends.
  CHECK(std::abs(local_energy_curvature(make_gaussian_packet(g, GaussianPacket{.sigma = 2.0}), p,
                                        {0.0, 0.0, 0.0})) > 1e-2);

  const GridSpec line = make_cubic_grid(1, 16, 2.0 * kPi);
  const ComplexField wave = make_plane_wave(line, std::array{3}, Complex(0.0, 2.0));
  for (std::size_t i = 0; i < wave.size(); ++i)
    CHECK(std::abs(wave[i] - Complex(0.0, 2.0) * std::polar(1.0, 3.0 * line.point(i)[0])) < 1e-14);
  CHECK_THROWS_AS(make_plane_wave(line, std::array{8}, Complex(1.0)), InvalidArgument);
}

TEST_CASE("plane-wave scenario", "[scenarios]") {
  PlaneWaveSpec spec{setup(1, 32, 2.0 * kPi, -0.5, 1e-3, 500, 10), {2, 0, 0}, std::exp(1.0)};
  const ScenarioReport r = run_plane_wave(spec);
  CHECK(r.pass);
  CHECK(r.scenario == "plane_wave");
  CHECK(r.trajectory.has_value());
  // omega = k^2/2 + kT ln|A|^2 = 2 - 1.
  CHECK(r.measured.front().value == Approx(1.0).epsilon(1e-10));

  // A zero tolerance turns the same physics into a reported failure.
  const ScenarioReport strict = run_scenario(spec, 0.0);
  CHECK_FALSE(strict.pass);

  spec.setup.evolution.mode = TimeMode::ImaginaryTime;
  CHECK_THROWS_AS(run_plane_wave(spec), InvalidArgument);
}

TEST_CASE("plane wave in a constant potential in 2D", "[scenarios]") {
  ScenarioSetup s = setup(2, 16, 2.0 * kPi, 1.0, 1e-3, 200, 10);
  s.params.potential = SampledPotential{RealField(s.grid, std::vector<double>(s.grid.size(), 0.25))};
  const ScenarioReport r = run_plane_wave(PlaneWaveSpec{s, {1, -2, 0}, 1.0});
  CHECK(r.pass);
  CHECK(r.predicted.front().value == Approx(2.5 + 0.25));
}

TEST_CASE("Gausson scenario on a short horizon", "[scenarios]") {
  const ScenarioReport r = run_gausson_stationarity(GaussonSpec{setup(1, 512, 100.0, -0.5, 2e-3, 1000, 50), {}});
  CHECK(check_named(r, "x2_coefficient").passed());
  CHECK(check_named(r, "density_drift").passed());
  CHECK(check_named(r, "spreading_order_violation").passed());
  CHECK(r.pass);
  CHECK_THROWS_AS(run_gausson_stationarity(GaussonSpec{setup(1, 64, 20.0, 0.5, 1e-3, 10, 1), {}}),
                  InvalidArgument);
}

TEST_CASE("scaling covariance", "[scenarios]") {
  ScalingSpec spec{setup(1, 128, 30.0, 0.8, 1e-2, 50, 5), std::polar(0.5, 2.0), {}};
  spec.initial.momentum = {1.0, 0.0, 0.0};
  const ScenarioReport r = run_scaling_covariance(spec);
  CHECK(r.pass);
  CHECK(check_named(r, "relative_phase").discrepancy < 1e-9);
}

TEST_CASE("factorization", "[scenarios]") {
  FactorState gx;
  gx.packet = GaussianPacket{.sigma = 0.9, .center = {0.5, 0.0, 0.0}, .momentum = {1.0, 0.0, 0.0}};
  FactorState gy;
  gy.packet.sigma = 1.2;
  ScenarioSetup s = setup(2, 48, 14.0, 0.6, 2e-3, 100, 10);
  s.params.potential = HarmonicPotential{{0.5, 0.9, 1.0}, {0.0, 0.3, 0.0}};
  const ScenarioReport r = run_factorization(FactorizationSpec{s, gx, gy});
  CHECK(r.pass);
  CHECK(check_named(r, "product_mismatch").discrepancy < 1e-12);
  CHECK_THROWS_AS(run_factorization(FactorizationSpec{setup(1, 32, 10.0, 0.1, 1e-3, 10, 1), gx, gy}),
                  InvalidArgument);
}

TEST_CASE("spreading order", "[scenarios]") {
  SpreadingSpec spec{setup(1, 512, 120.0, 0.0, 2e-3, 1000, 50), {-0.5, 0.5, 0.0}, {}};
  const ScenarioReport r = run_spreading(spec);
  CHECK(r.pass);
  CHECK(check_named(r, "ordering_violation").discrepancy <= 0.0);
}

TEST_CASE("energy bound sweep", "[scenarios]") {
  EnergyBoundSweepSpec spec;
  spec.volumes = {0.5, 3.0};
  spec.seeds = 2;
  spec.random_adversaries = 3;
  const ScenarioReport r = run_energy_bound_sweep(spec);
  CHECK(r.pass);
  CHECK_FALSE(r.trajectory.has_value());
  CHECK(r.checks.size() > 4);
}

TEST_CASE("adversarial densities are normalized and respect the sharp bound", "[scenarios]") {
  const GridSpec g = make_cubic_grid(1, 64, 7.0);
  const auto family = adversarial_densities(g, 5, 9);
  CHECK(family.size() >= 8);
  for (const auto &[name, rho] : family) {
    INFO(name);
    CHECK(rho.is_normalized());
    CHECK(entropy_functional(rho.field()) >= sharp_bound(g) - 1e-12);
  }
}

TEST_CASE("relaxation reaches the Gausson energy", "[scenarios]") {
  RelaxationSpec spec{setup(1, 256, 40.0, -0.5, 1e-2, 3000, 100), {}};
  spec.initial.sigma = 2.0;
  const ScenarioReport r = run_relaxation(spec);
  CHECK(r.pass);
}

TEST_CASE("report bookkeeping", "[scenarios]") {
  ScenarioReport r;
  r.checks = {{"a", 0.1, 1.0}, {"b", 5.0, 10.0, false}, {"c", 0.3, 1.0}};
  r.finalize();
  CHECK(r.pass);
  CHECK(r.max_discrepancy() == Approx(0.3));
  r.checks.push_back({"d", 2.0, 1.0});
  r.finalize();
  CHECK_FALSE(r.pass);

  CHECK(scenario_name(EnergyBoundSweepSpec{}) == "energy_bound_sweep");
  CHECK(scenario_name(RelaxationSpec{setup(1, 16, 1.0, 0.0, 1e-3, 1, 1), {}}) == "relaxation");
}
