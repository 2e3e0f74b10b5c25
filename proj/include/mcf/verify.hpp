#pragma once

#include "mcf/lattice.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcf {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  std::optional<double> order_fit; // observed log-log slope, for sweep checks
  double tol = 0.0;                // bound on residual, or least acceptable order
  bool pass = false;
};

/// Residuals of one eps sweep, kept for plotting.
struct SweepSeries {
  std::string check;
  int sample = 0;
  std::vector<double> eps;
  std::vector<double> residual;
};

struct Report {
  std::vector<CheckResult> checks;
  std::vector<SweepSeries> sweeps;

  bool pass() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
};

struct VerifyOptions {
  int samples = 20;
  std::vector<double> eps_sweep{1e-1, 1e-2, 1e-3};
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

/// Identity suite for one lattice: recurrences, closure symmetry, condition
/// the Galilean residual at equilibrium and its order over the eps sweep, the supplementary
/// term's contribution to that residual, and (for K >= 2) the Hessian of h'0 at equilibrium. With
/// zero samples only the coefficient-wise recurrences run.
Report verify_lattice(const CoefficientLattice& lat, const VerifyOptions& opt = {});

/// {"checks": {name: {residual, order_fit, tol, pass}}, "pass": bool}
nlohmann::json report_json(const Report& r);

/// Rows "check,sample,eps,residual".
std::string sweeps_csv(const Report& r);

} // namespace mcf
