#include "lognls/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "lognls/scenarios.hpp"

namespace lognls {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

std::string format(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

const Check *find_check(const ScenarioReport &r, const std::string &name) {
  for (const Check &c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

double find_value(const std::vector<NamedValue> &values, const std::string &name) {
  for (const NamedValue &v : values)
    if (v.name == name) return v.value;
  return std::nan("");
}

CriterionResult pointwise_bound() {
  CriterionResult r{1, "pointwise bound rho ln rho >= -1/e"};
  std::mt19937_64 rng(1);
  double worst = std::numeric_limits<double>::infinity();
  // Mixture of linear and log-uniform draws so both the minimum near 1/e and
  // the extreme tails are sampled.
  for (int i = 0; i < 1000000; ++i) {
    double rho = 0.0;
    switch (i % 4) {
    case 0: rho = uniform(rng); break;
    case 1: rho = 2.0 * uniform(rng) / kE; break;
    case 2: rho = std::pow(10.0, -320.0 + 330.0 * uniform(rng)); break;
    default: rho = (i % 1000 == 3) ? 0.0 : 10.0 * uniform(rng); break;
    }
    worst = std::min(worst, rho_log_rho(rho));
  }
  // Whole random fields through the grid-level report as well.
  const GridSpec g = make_cubic_grid(2, 64, 1.0);
  for (int k = 0; k < 20; ++k) {
    RealField f(g);
    for (double &v : f.mutable_values()) v = 3.0 * uniform(rng);
    worst = std::min(worst, pointwise_bound_report(f).min_value);
  }
  const double at = rho_log_rho(1.0 / kE);
  const double at_err = std::abs(at + 1.0 / kE);
  r.pass = worst >= -1.0 / kE - 1e-14 && at_err <= 1e-15;
  r.detail = format("min over 1e6 samples = %.17g (bound %.17g); |f(1/e) + 1/e| = %.3g <= 1e-15",
                    worst, -1.0 / kE, at_err);
  return r;
}

const ScenarioReport &bound_sweep() {
  static const ScenarioReport report = [] {
    EnergyBoundSweepSpec spec;
    spec.volumes = {1.0, kE, 8.0, 100.0};
    spec.seeds = 10;
    spec.random_adversaries = 20;
    return run_energy_bound_sweep(spec);
  }();
  return report;
}

CriterionResult sharp_bound_criterion() {
  CriterionResult r{2, "sharp volume bound -ln V"};
  const ScenarioReport &s = bound_sweep();
  bool ok = true;
  double gap = 0.0, violation = -1.0;
  for (const Check &c : s.checks) {
    const bool relevant = c.name.ends_with("sharp_bound_violation") ||
                          c.name.ends_with("minimizer_gap") || c.name.ends_with("kkt_residual");
    if (!relevant) continue;
    ok = ok && c.passed();
    if (c.name.ends_with("minimizer_gap")) gap = std::max(gap, c.discrepancy);
    if (c.name.ends_with("sharp_bound_violation")) violation = std::max(violation, c.discrepancy);
  }
  r.pass = ok;
  r.detail = format("V in {1, e, 8, 100} x 10 seeds: max |min - (-ln V)| = %.3g <= 1e-8; "
                    "max (-ln V - observed) = %.3g <= 1e-8",
                    gap, violation);
  return r;
}

CriterionResult crude_bound_criterion() {
  CriterionResult r{3, "crude bound -V/e"};
  const ScenarioReport &s = bound_sweep();
  bool ok = true;
  double violation = -std::numeric_limits<double>::infinity(), order = -1.0;
  for (const Check &c : s.checks) {
    if (c.name.ends_with("crude_bound_violation")) {
      ok = ok && c.passed();
      violation = std::max(violation, c.discrepancy);
    } else if (c.name.ends_with("crude_above_sharp")) {
      ok = ok && c.passed();
      order = std::max(order, c.discrepancy);
    }
  }
  r.pass = ok;
  r.detail = format("max (-V/e - observed) = %.3g <= 1e-8; max (crude - sharp) = %.3g <= 0",
                    violation, order);
  return r;
}

// Random smooth periodic field: a handful of low Fourier modes with random
// complex amplitudes.
ComplexField random_periodic_packet(const GridSpec &g, std::mt19937_64 &rng) {
  struct Mode {
    std::array<double, kMaxDims> k;
    Complex amp;
  };
  std::vector<Mode> modes;
  for (int m = 0; m < 6; ++m) {
    Mode mode{{0.0, 0.0, 0.0}, std::polar(uniform(rng) + 0.1, 2.0 * kPi * uniform(rng))};
    for (int a = 0; a < g.dims(); ++a)
      mode.k[a] = 2.0 * kPi * (static_cast<int>(uniform(rng) * 7.0) - 3) / g.length(a);
    modes.push_back(mode);
  }
  return ComplexField::sample(g, [&](const Point &x) {
    Complex v{};
    for (const Mode &m : modes) {
      double phase = 0.0;
      for (int a = 0; a < g.dims(); ++a) phase += m.k[a] * x[a];
      v += m.amp * std::polar(1.0, phase);
    }
    return v;
  });
}

CriterionResult force_torque() {
  CriterionResult r{4, "vanishing total force and torque"};
  std::mt19937_64 rng(4);
  const std::array<GridSpec, 3> grids = {
      make_grid(1, std::array{64}, std::array{10.0}),
      make_grid(2, std::array{32, 48}, std::array{8.0, 6.0}),
      make_grid(3, std::array{16, 16, 20}, std::array{4.0, 5.0, 6.0})};
  double worst = 0.0;
  int states = 0;
  for (const GridSpec &g : grids) {
    for (int s = 0; s < 20; ++s) {
      const ComplexField psi = random_periodic_packet(g, rng);
      PhysicalParams p;
      p.kT = 2.0 * uniform(rng) - 1.0;
      double peak = 0.0;
      for (const Complex &z : psi.values()) peak = std::max(peak, std::norm(z));
      const double scale = std::abs(p.kT) * peak * g.volume();

      for (double f : log_force_total(psi, p)) worst = std::max(worst, std::abs(f) / scale);
      for (int c = 0; c < 3; ++c) {
        Point center{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dims(); ++a)
          center[a] = c == 0 ? 0.0 : (uniform(rng) - 0.5) * g.length(a);
        for (double t : log_torque_total(psi, p, center)) worst = std::max(worst, std::abs(t) / scale);
      }
      ++states;
    }
  }
  r.pass = worst <= 1e-10;
  r.detail = format("%d states (1D/2D/3D), 3 centers each: max |F|,|tau| / (|kT| max rho V) = %.3g "
                    "<= 1e-10",
                    states, worst);
  return r;
}

ScenarioSetup setup_1d(int n, double length, double kT, double dt, std::size_t steps,
                       std::size_t record_every) {
  PhysicalParams p;
  p.kT = kT;
  EvolutionConfig e;
  e.dt = dt;
  e.steps = steps;
  e.record_every = record_every;
  return {make_cubic_grid(1, n, length), p, e};
}

CriterionResult scaling() {
  CriterionResult r{5, "scaling covariance"};
  const std::array<Complex, 3> cs = {Complex(2.0, 0.0), Complex(0.5, 0.0),
                                     std::polar(2.0, kPi / 3.0)};
  bool ok = true;
  double dens = 0.0, phase = 0.0;
  for (const Complex c : cs) {
    ScalingSpec spec{setup_1d(256, 40.0, 1.0, 1e-2, 100, 1), c, {}};
    spec.initial.sigma = 1.0;
    spec.initial.momentum = {1.0, 0.0, 0.0};
    const ScenarioReport rep = run_scaling_covariance(spec);
    ok = ok && rep.pass;
    dens = std::max(dens, find_check(rep, "density_relation")->discrepancy);
    phase = std::max(phase, find_check(rep, "relative_phase")->discrepancy);
  }
  r.pass = ok;
  r.detail = format("c in {2, 0.5, 2e^{i pi/3}}, 100 steps: density error %.3g <= 1e-8; "
                    "phase error %.3g rad <= 1e-6",
                    dens, phase);
  return r;
}

CriterionResult factorization() {
  CriterionResult r{6, "factorization of product states"};
  PhysicalParams p;
  p.kT = -0.5;
  EvolutionConfig e;
  e.dt = 1e-3;
  e.steps = 100;
  e.record_every = 1;
  const GridSpec g = make_grid(2, std::array{64, 48}, std::array{16.0, 12.0});

  FactorState gauss;
  gauss.packet.sigma = 0.8;
  gauss.packet.center = {1.0, 0.0, 0.0};
  gauss.packet.momentum = {1.5, 0.0, 0.0};
  FactorState gausson;
  gausson.kind = FactorState::Kind::Gausson;
  FactorState wave;
  wave.kind = FactorState::Kind::PlaneWave;
  wave.mode_index = 2;
  wave.amplitude = 1.0 / std::sqrt(12.0); // unit norm on the y axis

  double worst = 0.0;
  bool ok = true;
  for (const auto &[fx, fy] : {std::pair{gauss, gausson}, std::pair{gauss, wave}}) {
    const ScenarioReport rep = run_factorization(FactorizationSpec{{g, p, e}, fx, fy});
    ok = ok && rep.pass;
    worst = std::max(worst, find_check(rep, "product_mismatch")->discrepancy);
  }
  r.pass = ok;
  r.detail = format("100 steps at dt = 1e-3: max |psi_2D - phi_x (x) phi_y| = %.3g <= 1e-8", worst);
  return r;
}

CriterionResult plane_wave() {
  CriterionResult r{7, "plane-wave dispersion"};
  struct Case {
    int k;
    double a2;
    double kT;
  };
  bool ok = true;
  double rel = 0.0, flat = 0.0;
  std::string omegas;
  for (const Case c : {Case{1, 1.0, 1.0}, Case{1, kE, 1.0}, Case{2, kE * kE, -0.5}}) {
    // L = 2 pi makes the wavenumber equal to the mode index.
    PlaneWaveSpec spec{setup_1d(32, 2.0 * kPi, c.kT, 1e-3, 1000, 10), {c.k, 0, 0}, std::sqrt(c.a2)};
    const ScenarioReport rep = run_plane_wave(spec);
    ok = ok && rep.pass;
    rel = std::max(rel, find_check(rep, "omega_relative_error")->discrepancy);
    flat = std::max(flat, find_check(rep, "amplitude_flatness")->discrepancy);
    omegas += format("%s%.12g", omegas.empty() ? "" : ", ", find_value(rep.measured, "omega"));
  }
  r.pass = ok;
  r.detail = format("omega measured = {%s} (expected {0.5, 1.5, 1}); max relative error %.3g "
                    "<= 1e-8; flatness %.3g <= 1e-10",
                    omegas.c_str(), rel, flat);
  return r;
}

CriterionResult gausson() {
  CriterionResult r{8, "Gausson stationarity and spreading order"};
  // Substituting exp(-alpha x^2 / 2) into the equation leaves the x^2
  // coefficient -hbar^2 alpha^2 / (2m) - kT alpha, which must cancel.
  double residual = 0.0;
  for (const auto &[hbar, mass, kT] :
       {std::tuple{1.0, 1.0, -0.5}, std::tuple{1.0, 1.0, -1.0}, std::tuple{0.7, 2.5, -0.3}}) {
    const PhysicalParams p{.hbar = hbar, .mass = mass, .kT = kT};
    const double alpha = gausson_alpha(p);
    residual = std::max(residual, std::abs(-hbar * hbar * alpha * alpha / (2.0 * mass) - kT * alpha));
  }

  GaussonSpec spec{setup_1d(2048, 400.0, -0.5, 1e-3, 10000, 100), {0.0, 0.0, 0.0}};
  const ScenarioReport rep = run_gausson_stationarity(spec);
  r.pass = residual <= 1e-12 && rep.pass;
  r.detail = format("x^2 residual %.3g <= 1e-12 (spectral fit %.3g); drift(kT=-1/2) = %.3g < 1e-6; "
                    "drift(kT=+1/2) = %.3g > 1e-3; order violation %.3g <= 0; "
                    "final var(+,0,-) = (%.6g, %.6g, %.6g)",
                    residual, find_value(rep.measured, "x2_coefficient"),
                    find_value(rep.measured, "density_drift"),
                    find_value(rep.measured, "density_drift_positive_kT"),
                    find_check(rep, "spreading_order_violation")->discrepancy,
                    find_value(rep.measured, "variance_final_positive_kT"),
                    find_value(rep.measured, "variance_final_zero_kT"),
                    find_value(rep.measured, "variance_final"));
  return r;
}

CriterionResult hygiene() {
  CriterionResult r{9, "numerical hygiene"};
  const GridSpec g = make_cubic_grid(1, 256, 40.0);
  GaussianPacket packet;
  packet.sigma = 1.0;
  packet.momentum = {1.0, 0.0, 0.0};
  const ComplexField psi0 = make_gaussian_packet(g, packet);

  // Norm drift over 1e4 steps.
  PhysicalParams p;
  p.kT = 0.5;
  double norm_drift = 0.0;
  {
    const Propagator prop(g, p, TimeMode::RealTime, 1e-3);
    ComplexField psi = psi0;
    for (int n = 1; n <= 10000; ++n) {
      prop.step(psi);
      if (n % 100 == 0) norm_drift = std::max(norm_drift, std::abs(norm_squared(psi) - 1.0));
    }
  }

  // Energy error ratio per dt halving, for both signs of kT.
  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
  for (double kT : {0.5, -0.5}) {
    PhysicalParams q;
    q.kT = kT;
    std::vector<double> errors;
    for (double dt : {0.02, 0.01, 0.005}) {
      EvolutionConfig e;
      e.dt = dt;
      e.steps = static_cast<std::size_t>(std::lround(2.0 / dt));
      const Trajectory t = evolve(psi0, q, e);
      double worst = 0.0;
      for (const EnergyBreakdown &en : t.energy_series)
        worst = std::max(worst, std::abs(en.total - t.energy_series.front().total));
      errors.push_back(worst);
    }
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
      ratio_lo = std::min(ratio_lo, errors[i] / errors[i + 1]);
      ratio_hi = std::max(ratio_hi, errors[i] / errors[i + 1]);
    }
  }

  // Forward then backward 1e3 steps.
  double round_trip = 0.0;
  {
    const Propagator prop(g, p, TimeMode::RealTime, 1e-2);
    ComplexField psi = psi0;
    for (int n = 0; n < 1000; ++n) prop.step(psi);
    for (int n = 0; n < 1000; ++n) prop.step_backward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i)
      round_trip = std::max(round_trip, std::abs(psi[i] - psi0[i]));
  }

  r.pass = norm_drift <= 1e-10 && ratio_lo >= 3.5 && ratio_hi <= 4.5 && round_trip <= 1e-8;
  r.detail = format("norm drift %.3g <= 1e-10; energy error ratios in [%.4f, %.4f] within "
                    "[3.5, 4.5]; round trip %.3g <= 1e-8",
                    norm_drift, ratio_lo, ratio_hi, round_trip);
  return r;
}

} // namespace

CriterionResult check_criterion(int id) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
  case 1: r = pointwise_bound(); break;
  case 2: r = sharp_bound_criterion(); break;
  case 3: r = crude_bound_criterion(); break;
  case 4: r = force_torque(); break;
  case 5: r = scaling(); break;
  case 6: r = factorization(); break;
  case 7: r = plane_wave(); break;
  case 8: r = gausson(); break;
  case 9: r = hygiene(); break;
  default: throw InvalidArgument("check_criterion: unknown criterion " + std::to_string(id));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult>
run_builtin_suite(const std::function<void(const CriterionResult &)> &on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kBuiltinCriteria; ++id) {
    out.push_back(check_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

} // namespace lognls
