#include "mcf/verify.hpp"

#include "mcf/closure.hpp"
#include "mcf/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mcf {

namespace {

struct SampledState {
  double lam = 0.0;
  double lam_ll = 1.0;
  SymTensor dev;
};

SampledState draw(const CoefficientLattice& lat, std::uint64_t seed, std::size_t i) {
  auto rng = indexed_rng(seed, i);
  std::uniform_real_distribution<double> lam(lat.lambda0() - 0.1, lat.lambda0() + 0.1);
  std::uniform_real_distribution<double> lam_ll(0.8, 1.25);
  SampledState s;
  s.lam = lam(rng);
  s.lam_ll = lam_ll(rng);
  s.dev = random_deviation(lat.order(), rng);
  return s;
}

// the lattice with every H jet zeroed and the same supplementary constants
CoefficientLattice supplementary_only(const CoefficientLattice& lat) {
  auto table = lat.h_table();
  for (auto& row : table) {
    for (Jet& j : row) {
      std::fill(j.coeffs().begin(), j.coeffs().end(), 0.0);
    }
  }
  return CoefficientLattice::from_table(lat.order(), lat.truncation(), lat.lambda0(), table,
                                        lat.supplementary_constants(), lat.seed());
}

bool exponential_family(const CoefficientLattice& lat) {
  const std::string& label = lat.seed().label;
  return label == "exp" || label == "kinetic_exp";
}

CheckResult bound(std::string name, double residual, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.tol = tol;
  c.pass = std::isfinite(residual) && residual < tol;
  return c;
}

CheckResult order(std::string name, double residual, double slope, double min_order) {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.order_fit = slope;
  c.tol = min_order;
  c.pass = !(slope < min_order);
  return c;
}

double max_of(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) {
    r = std::max(r, x);
  }
  return r;
}

void sweep_checks(const CoefficientLattice& lat, const VerifyOptions& opt, Report& rep) {
  const int n = lat.order();
  const int k = lat.truncation();
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(opt.samples), 5);
  std::vector<std::vector<double>> res(count);
  parallel_for(count, [&](std::size_t i) {
    const SampledState s = draw(lat, opt.seed ^ 0x5eedULL, i);
    const SymTensor eq = equilibrium_multipliers(n, s.lam, s.lam_ll);
    for (double e : opt.eps_sweep) {
      res[i].push_back(residual_condition13(lat, eq + e * s.dev).max_abs());
    }
  });
  double worst_slope = std::numeric_limits<double>::infinity();
  double smallest = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    worst_slope = std::min(worst_slope, loglog_slope(opt.eps_sweep, res[i]));
    if (!res[i].empty()) {
      smallest = std::max(smallest, res[i].back());
    }
    rep.sweeps.push_back({"galilean_order", static_cast<int>(i), opt.eps_sweep, res[i]});
  }
  rep.add(order("galilean_order", smallest, worst_slope, k - 0.4));
}

void hessian_checks(const CoefficientLattice& lat, const VerifyOptions& opt, Report& rep) {
  const int n = lat.order();
  const SymTensor l = equilibrium_multipliers(n, lat.lambda0(), 1.0);
  const Eigen::MatrixXd h = hessian_h0(lat, l);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  rep.add(bound("hessian_symmetry", (h - h.transpose()).cwiseAbs().maxCoeff() / scale, opt.tol));
  if (exponential_family(lat)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    CheckResult pd;
    pd.name = "hessian_min_eigenvalue";
    pd.residual = es.eigenvalues().minCoeff();
    pd.tol = 0.0;
    pd.pass = pd.residual > 0.0;
    rep.add(pd);
  }

  // second differences of h'0 along random directions against d.H.d
  const auto& idx = multi_indices(n);
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(opt.samples), 5);
  std::vector<double> order_fit(count);
  std::vector<double> err_small(count);
  parallel_for(count, [&](std::size_t i) {
    auto rng = indexed_rng(opt.seed ^ 0x4e55ULL, i);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymTensor d(n);
    Eigen::VectorXd x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      d[idx[a]] = u(rng);
      x(static_cast<Eigen::Index>(a)) = d[idx[a]];
    }
    const double exact = x.dot(h * x);
    const double h0 = eval_hprime(lat, l)[0];
    std::vector<double> deltas{1e-2, 5e-3};
    std::vector<double> err;
    for (double delta : deltas) {
      const double fd =
          (eval_hprime(lat, l + delta * d)[0] - 2.0 * h0 + eval_hprime(lat, l - delta * d)[0]) /
          (delta * delta);
      err.push_back(std::abs(fd - exact));
    }
    order_fit[i] = loglog_slope(deltas, err);
    err_small[i] = err.back() / std::max(1.0, std::abs(exact));
  });
  double worst = std::numeric_limits<double>::infinity();
  for (double s : order_fit) {
    worst = std::min(worst, s);
  }
  rep.add(order("hessian_fd_order", max_of(err_small), worst, 1.8));
}

} // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Report verify_lattice(const CoefficientLattice& lat, const VerifyOptions& opt) {
  Report rep;
  for (const auto& [name, residual] : check_recurrences(lat)) {
    rep.add(bound("recurrence." + name, residual, opt.tol));
  }
  if (opt.samples <= 0) {
    return rep;
  }
  const int n = lat.order();
  const auto count = static_cast<std::size_t>(opt.samples);
  const CoefficientLattice sup = supplementary_only(lat);
  std::vector<double> symmetry(count);
  std::vector<double> at_eq(count);
  std::vector<double> sup_res(count);
  parallel_for(count, [&](std::size_t i) {
    const SampledState s = draw(lat, opt.seed, i);
    const SymTensor eq = equilibrium_multipliers(n, s.lam, s.lam_ll);
    const SymTensor l = eq + 0.1 * s.dev;
    symmetry[i] = moment_symmetry_deviation(lat, l);
    at_eq[i] = residual_condition13(lat, eq).max_abs();
    sup_res[i] = residual_condition13(sup, l).max_abs();
  });
  rep.add(bound("moment_symmetry", max_of(symmetry), opt.tol));
  rep.add(bound("galilean_equilibrium", max_of(at_eq), opt.tol));
  rep.add(bound("galilean_supplementary", max_of(sup_res), opt.tol));
  if (opt.eps_sweep.size() >= 2) {
    sweep_checks(lat, opt, rep);
  }
  // below K = 2 the truncated h' is linear in the deviation and has no Hessian
  if (lat.truncation() >= 2) {
    hessian_checks(lat, opt, rep);
  }
  return rep;
}

nlohmann::json report_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"residual", c.residual}, {"tol", c.tol}, {"pass", c.pass}};
    j["order_fit"] = c.order_fit ? nlohmann::json(*c.order_fit) : nlohmann::json(nullptr);
    checks[c.name] = j;
  }
  return {{"checks", checks}, {"pass", r.pass()}};
}

std::string sweeps_csv(const Report& r) {
  std::ostringstream out;
  out.precision(17);
  out << "check,sample,eps,residual\n";
  for (const auto& s : r.sweeps) {
    for (std::size_t i = 0; i < s.eps.size() && i < s.residual.size(); ++i) {
      out << s.check << ',' << s.sample << ',' << s.eps[i] << ',' << s.residual[i] << '\n';
    }
  }
  return out.str();
}

} // namespace mcf
