#pragma once

#include <functional>
#include <string>
#include <vector>

namespace lognls {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail; // measured values against their thresholds
  double seconds = 0.0;
};

// Built-in property suite run by the `check` subcommand. Criteria:
//   1 pointwise bound rho ln rho >= -1/e
//   2 sharp volume bound -ln V (minimizer and adversarial densities)
//   3 crude bound -V/e
//   4 vanishing total force and torque of the logarithmic term
//   5 scaling covariance of the evolution
//   6 factorization of product states
//   7 plane-wave dispersion and flatness
//   8 Gausson stationarity, non-stationary positive-kT twin, spreading order
//   9 norm drift, second-order energy error, time reversibility
CriterionResult check_criterion(int id);
inline constexpr int kBuiltinCriteria = 9;

// Runs criteria 1..9 in order; `on_result` sees each result as it finishes.
std::vector<CriterionResult>
run_builtin_suite(const std::function<void(const CriterionResult &)> &on_result = {});

} // namespace lognls
