#include "mcf/galilean.hpp"

#include "mcf/closure.hpp"
#include "mcf/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mcf {

namespace {

double max_abs4(const Vec4& a) {
  double r = 0.0;
  for (double x : a) {
    r = std::max(r, std::abs(x));
  }
  return r;
}

MultiIndex4 time_power(int n) { return MultiIndex4{{n, 0, 0, 0}}; }

double trace_part(const SymTensor& m) {
  double s = 0.0;
  for (int i = 1; i <= 3; ++i) {
    MultiIndex4 idx = time_power(m.rank() - 2);
    idx.n[static_cast<std::size_t>(i)] = 2;
    s += m[idx];
  }
  return s;
}

double scaled_max(const SymTensor& r, double scale) { return r.max_abs() / std::max(1.0, scale); }

// equilibrium (lambda, lambda_ll) whose rest-frame density and trace match m0
SymTensor equilibrium_guess(const CoefficientLattice& lat, const SymTensor& m0) {
  const int n = lat.order();
  const double rho = m0[time_power(n)];
  const double tr = trace_part(m0);
  auto eval = [&](double lam, double log_ll) {
    const SymTensor m = contract_time(
        eval_moments(lat, equilibrium_multipliers(n, lam, std::exp(log_ll))));
    return Eigen::Vector2d(m[time_power(n)] - rho, trace_part(m) - tr);
  };
  double lam = lat.lambda0();
  double log_ll = 0.0;
  Eigen::Vector2d r = eval(lam, log_ll);
  for (int it = 0; it < 50 && r.cwiseAbs().maxCoeff() > 1e-13 * std::max(1.0, std::abs(rho)); ++it) {
    const double h = 1e-6;
    Eigen::Matrix2d j;
    j.col(0) = (eval(lam + h, log_ll) - eval(lam - h, log_ll)) / (2.0 * h);
    j.col(1) = (eval(lam, log_ll + h) - eval(lam, log_ll - h)) / (2.0 * h);
    const Eigen::Vector2d step = j.colPivHouseholderQr().solve(-r);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30 && !accepted; ++k) {
      try {
        accepted = eval(lam + t * step(0), log_ll + t * step(1)).norm() < r.norm();
      } catch (const DomainError&) {
        accepted = false;
      }
      if (!accepted) {
        t *= 0.5;
      }
    }
    if (!accepted) {
      throw ConvergenceError("no equilibrium matches the density and trace of the moments");
    }
    lam += t * step(0);
    log_ll += t * step(1);
    r = eval(lam, log_ll);
  }
  return equilibrium_multipliers(n, lam, std::exp(log_ll));
}

} // namespace

DiagramReport verify_diagram(const CoefficientLattice& lat, const SymTensor& big_l,
                             const BoostVelocity& v) {
  DiagramReport rep;
  const SymTensor l = boost_multipliers(big_l, v);
  rep.lam_ll_shift = std::abs(decompose_state(l).lam_ll - decompose_state(big_l).lam_ll);

  const SymTensor m_direct = eval_moments(lat, big_l);
  const SymTensor m_frame = boost_moments(eval_moments(lat, l), v);
  rep.moments = max_abs_diff(m_direct, m_frame) / std::max(m_direct.max_abs(), 1e-300);

  const Vec4 h_direct = eval_hprime(lat, big_l);
  const Vec4 h_frame = eval_hprime(lat, l);
  const Vec4 u = v.four();
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    worst = std::max(worst, std::abs(h_direct[a] - (u[a] * h_frame[0] + h_frame[a])));
  }
  rep.potential = worst / std::max(max_abs4(h_direct), 1e-300);
  return rep;
}

namespace {

// damped Newton toward one target; returns false if it stalls
bool newton(const CoefficientLattice& lat, const SymTensor& target, SymTensor& l, int max_iter,
            double tol, int& iterations) {
  const auto& idx = multi_indices(lat.order());
  const auto dim = static_cast<Eigen::Index>(idx.size());
  const double scale = target.max_abs();
  auto residual = [&](const SymTensor& x) { return contract_time(eval_moments(lat, x)) - target; };

  SymTensor r = residual(l);
  while (scaled_max(r, scale) > tol) {
    if (iterations >= max_iter) {
      return false;
    }
    ++iterations;
    // central differences of the truncated map itself; off equilibrium the
    // truncated m is not the exact gradient of the truncated h'0, so the
    // second-derivative tensor is only the leading part of this Jacobian
    Eigen::MatrixXd jac(dim, dim);
    Eigen::VectorXd rhs(dim);
    const double h = 1e-6 * std::max(1.0, l.max_abs());
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto& mb = idx[static_cast<std::size_t>(b)];
      SymTensor lp = l;
      SymTensor lm = l;
      lp[mb] += h;
      lm[mb] -= h;
      const SymTensor d = residual(lp) - residual(lm);
      for (Eigen::Index a = 0; a < dim; ++a) {
        jac(a, b) = d[idx[static_cast<std::size_t>(a)]] / (2.0 * h);
      }
    }
    for (Eigen::Index a = 0; a < dim; ++a) {
      rhs(a) = -r[idx[static_cast<std::size_t>(a)]];
    }
    const Eigen::VectorXd dx = jac.colPivHouseholderQr().solve(rhs);
    SymTensor step(lat.order());
    for (Eigen::Index b = 0; b < dim; ++b) {
      step[idx[static_cast<std::size_t>(b)]] = dx(b);
    }
    // backtrack until the residual decreases and lambda_ll stays positive
    double damping = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30 && !accepted; ++k, damping *= 0.5) {
      const SymTensor trial = l + damping * step;
      if (!(decompose_state(trial).lam_ll > 0.0)) {
        continue;
      }
      const SymTensor rt = residual(trial);
      if (rt.max_abs() < r.max_abs()) {
        l = trial;
        r = rt;
        accepted = true;
      }
    }
    if (!accepted) {
      return false;
    }
  }
  return true;
}

} // namespace

SymTensor solve_multipliers(const CoefficientLattice& lat, const SymTensor& m0,
                            const NewtonOptions& opt) {
  const int n = lat.order();
  if (m0.rank() != n) {
    throw InvalidArgument("solve_multipliers: moments must have rank N");
  }
  // continuation from the matching equilibrium: targets move from its moments
  // to m0, and each stage is a short Newton solve from the previous solution
  SymTensor l = equilibrium_guess(lat, m0);
  const SymTensor start = contract_time(eval_moments(lat, l));
  int iterations = 0;
  double t = 0.0;
  double dt = 1.0;
  while (t < 1.0) {
    const double next = std::min(1.0, t + dt);
    const SymTensor target = (1.0 - next) * start + next * m0;
    SymTensor trial = l;
    const bool last = next == 1.0;
    if (newton(lat, target, trial, opt.max_iter, last ? opt.tol : 1e-6, iterations)) {
      l = trial;
      t = next;
      dt *= 2.0;
    } else {
      dt *= 0.25;
      if (dt < 1e-4 || iterations >= opt.max_iter) {
        break;
      }
    }
  }
  if (t == 1.0) {
    return l;
  }
  const SymTensor r = contract_time(eval_moments(lat, l)) - m0;
  throw ConvergenceError("multiplier inversion did not converge within " +
                         std::to_string(opt.max_iter) + " Newton steps (residual " +
                         std::to_string(scaled_max(r, m0.max_abs())) + ")");
}

SymTensor nonconvective_closure(const CoefficientLattice& lat, const SymTensor& f_moments,
                                const NewtonOptions& opt) {
  const int n = lat.order();
  if (f_moments.rank() != n) {
    throw InvalidArgument("nonconvective_closure: moments must have rank N");
  }
  const double density = f_moments[time_power(n)];
  const double reference =
      contract_time(eval_moments(lat, equilibrium_multipliers(n, lat.lambda0(), 1.0)))[time_power(n)];
  if (density == 0.0 || density * reference < 0.0) {
    throw DomainError("mass density is zero or has the wrong sign for this lattice");
  }
  BoostVelocity v;
  for (int i = 1; i <= 3; ++i) {
    MultiIndex4 m = time_power(n - 1);
    m.n[static_cast<std::size_t>(i)] = 1;
    v.v[static_cast<std::size_t>(i - 1)] = f_moments[m] / density;
  }
  const SymTensor m0 = boost_moments(f_moments, -v);
  const SymTensor l = solve_multipliers(lat, m0, opt);
  return boost_moments(eval_moments(lat, l), v);
}

} // namespace mcf
