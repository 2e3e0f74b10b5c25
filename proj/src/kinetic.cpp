#include "mcf/kinetic.hpp"

#include "mcf/closure.hpp"
#include "mcf/error.hpp"
#include "mcf/multi_index.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/Splines>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mcf {

struct Kernel::Table {
  using SplineType = Eigen::Spline<double, 1>;
  double x0 = 0.0;
  double x1 = 0.0;
  int degree = 0;
  SplineType spline;
};

Kernel Kernel::exponential(double a) {
  Kernel k;
  k.a_ = a;
  return k;
}

Kernel Kernel::table(std::vector<double> x, std::vector<double> f) {
  if (x.size() != f.size() || x.size() < 2) {
    throw InvalidArgument("kernel table needs at least two (x, F) samples");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw InvalidArgument("kernel table x values must be strictly increasing");
    }
  }
  auto t = std::make_shared<Table>();
  t->x0 = x.front();
  t->x1 = x.back();
  t->degree = static_cast<int>(std::min<std::size_t>(5, x.size() - 1));
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::RowVectorXd pts(n);
  Eigen::RowVectorXd knots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts(i) = f[static_cast<std::size_t>(i)];
    knots(i) = (x[static_cast<std::size_t>(i)] - t->x0) / (t->x1 - t->x0);
  }
  t->spline = Eigen::SplineFitting<Table::SplineType>::Interpolate(pts, t->degree, knots);
  Kernel k;
  k.a_ = 1.0;
  k.table_ = std::move(t);
  return k;
}

Kernel Kernel::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open kernel table " + path);
  }
  std::vector<double> x;
  std::vector<double> f;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidArgument("malformed kernel table row: " + line);
    }
    first = false;
    x.push_back(a);
    f.push_back(b);
  }
  return table(std::move(x), std::move(f));
}

double Kernel::derivative(int order, double x) const {
  if (!table_) {
    return (order % 2 == 0 ? a_ : -a_) * std::exp(-x);
  }
  const Table& t = *table_;
  if (x < t.x0) {
    throw DomainError("kernel table evaluated below its first sample");
  }
  if (x > t.x1 || order > t.degree) {
    return 0.0;
  }
  const double width = t.x1 - t.x0;
  const double u = (x - t.x0) / width;
  const auto d = t.spline.derivatives(u, order);
  return d(0, order) / std::pow(width, order);
}

double exponential_constant(int s) {
  return std::numbers::pi * std::pow(3.0, (s + 3.0) / 2.0) * std::tgamma((s + 1.0) / 2.0);
}

double kinetic_integral(const Kernel& f, int s, double lambda, int order,
                        const ScalarQuadrature& q) {
  const double norm = 4.0 * std::numbers::pi / (s + 1.0);
  auto integrand = [&](double eta) {
    return f.derivative(order, lambda + eta * eta / 3.0) * std::pow(eta, s + 2);
  };
  // locate the peak and the truncation point on a coarse grid
  const double step = 0.25;
  double peak = 0.0;
  double cut = -1.0;
  int quiet = 0;
  for (double eta = step; eta <= q.eta_limit; eta += step) {
    const double v = std::abs(integrand(eta));
    if (!std::isfinite(v)) {
      throw ConvergenceError("kinetic integrand is not finite");
    }
    peak = std::max(peak, v);
    if (v <= q.tail * peak) {
      if (++quiet == 8) {
        cut = eta;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (peak == 0.0) {
    return 0.0;
  }
  if (cut < 0.0) {
    throw ConvergenceError("kinetic integrand has not decayed by eta = " +
                           std::to_string(q.eta_limit));
  }
  double err = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, cut, 15, q.rel_tol, &err, &l1);
  if (err > 10.0 * q.rel_tol * std::max(l1, 1e-300)) {
    throw ConvergenceError("kinetic quadrature did not reach tolerance (error estimate " +
                           std::to_string(err) + ")");
  }
  return norm * value;
}

GLadder ladder_from_kernel(const Kernel& f, int smax, double lambda0, int d,
                           const ScalarQuadrature& q) {
  if (smax < 0 || d < 1) {
    throw InvalidArgument("ladder_from_kernel needs smax >= 0 and d >= 1");
  }
  std::vector<double> value(static_cast<std::size_t>(smax + 1));
  for (int s = 0; s <= smax; ++s) {
    value[static_cast<std::size_t>(s)] = kinetic_integral(f, s, lambda0, 0, q);
  }
  // derivatives of the two ladder roots G_0 and G_1
  std::array<std::vector<double>, 2> root;
  for (int p = 0; p < 2 && p <= smax; ++p) {
    auto& r = root[static_cast<std::size_t>(p)];
    r.push_back(value[static_cast<std::size_t>(p)]);
    for (int j = 1; j < d; ++j) {
      r.push_back(kinetic_integral(f, p, lambda0, j, q));
    }
  }
  GLadder out;
  out.smax = smax;
  for (int s = 0; s <= smax; ++s) {
    const int half = s / 2;
    const int len = d + half;
    std::vector<double> c(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) {
      // G_s^{(j)} = (-3/2)^m (s-1)(s-3)...(s-2m+1) G_{s-2m}^{(j-m)}, m = min(j, half)
      const int m = std::min(j, half);
      double factor = 1.0;
      for (int i = 0; i < m; ++i) {
        factor *= -1.5 * (s - 1 - 2 * i);
      }
      const double base = m < j ? root[static_cast<std::size_t>(s % 2)][static_cast<std::size_t>(j - m)]
                                : value[static_cast<std::size_t>(s - 2 * m)];
      c[static_cast<std::size_t>(j)] = factor * base / factorial(j);
    }
    out.g.emplace_back(lambda0, std::move(c));
  }
  return out;
}

double ladder_residual(const GLadder& ladder) {
  double worst = 0.0;
  for (int s = 2; s <= ladder.smax; ++s) {
    const Jet lhs = ladder[s].derivative();
    const Jet rhs = (-1.5 * (s - 1)) * ladder[s - 2];
    double scale = 0.0;
    for (double c : lhs.coeffs()) {
      scale = std::max(scale, std::abs(c));
    }
    const double diff = max_coeff_diff(lhs, rhs);
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  return worst;
}

CoefficientLattice kinetic_lattice(const Kernel& f, int n, int k, double lambda0, int d,
                                   const ScalarQuadrature& q) {
  if (n < 3 || k < 0) {
    throw InvalidArgument("kinetic_lattice needs N >= 3 and K >= 0");
  }
  if (d < k + 2) {
    throw InvalidArgument("jet length too short for truncation order");
  }
  const int top = (n * (k + 1) + 1) / 2;
  const GLadder ladder = ladder_from_kernel(f, 2 * top, lambda0, d, q);
  std::vector<std::vector<Jet>> h(static_cast<std::size_t>(k + 2));
  for (int r = 0; r <= k + 1; ++r) {
    const double row = std::pow(-1.5, r);
    for (int s = 0; s <= (n * r + 1) / 2; ++s) {
      h[static_cast<std::size_t>(r)].push_back(
          (1.0 / (row * double_factorial_odd(s))) * ladder[2 * s].derivative(r));
    }
  }
  SeedSpec seed;
  seed.h00 = h[0][0];
  seed.lambda0 = lambda0;
  seed.jet_len = d;
  seed.label = "kinetic_" + f.tag();
  return CoefficientLattice::from_table(n, k, lambda0, std::move(h), {}, std::move(seed));
}

namespace {

// coefficients p_k of l . (1, rho w)^N = sum_k p_k rho^k
std::vector<double> radial_polynomial(const SymTensor& l, const std::array<double, 3>& w) {
  const int n = l.rank();
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  for (const auto& m : multi_indices(n)) {
    const double c = l[m];
    if (c == 0.0) {
      continue;
    }
    double term = c * static_cast<double>(multiset_multiplicity(m));
    for (int i = 1; i <= 3; ++i) {
      term *= std::pow(w[static_cast<std::size_t>(i - 1)], m.n[static_cast<std::size_t>(i)]);
    }
    p[static_cast<std::size_t>(m.spatial())] += term;
  }
  return p;
}

double horner(const std::vector<double>& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

} // namespace

Vec4 eval_hprime_kinetic(const Kernel& f, const SymTensor& l, const SphereQuadrature& q) {
  const auto d = decompose_state(l);
  if (!(d.lam_ll > 0.0)) {
    throw DomainError("kinetic potential needs lambda_ll > 0");
  }
  const double radius = std::sqrt(3.0 * q.decay / d.lam_ll);
  using Radial = boost::math::quadrature::gauss<double, 20>;
  using Polar = boost::math::quadrature::gauss<double, 40>;

  // radial nodes and weights on [0, radius]
  std::vector<double> rho;
  std::vector<double> rw;
  const double panel = radius / q.radial_panels;
  for (int p = 0; p < q.radial_panels; ++p) {
    const double mid = (p + 0.5) * panel;
    for (std::size_t i = 0; i < Radial::abscissa().size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        rho.push_back(mid + sign * 0.5 * panel * Radial::abscissa()[i]);
        rw.push_back(0.5 * panel * Radial::weights()[i]);
      }
    }
  }
  std::vector<double> mu;
  std::vector<double> mw;
  for (std::size_t i = 0; i < Polar::abscissa().size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      mu.push_back(sign * Polar::abscissa()[i]);
      mw.push_back(Polar::weights()[i]);
    }
  }

  const double f_ref = std::abs(f(d.lam));
  Vec4 out{};
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu[a] * mu[a]));
    for (int b = 0; b < q.azimuth; ++b) {
      const double phi = 2.0 * std::numbers::pi * b / q.azimuth;
      const std::array<double, 3> w{sin_t * std::cos(phi), sin_t * std::sin(phi), mu[a]};
      const auto poly = radial_polynomial(l, w);
      if (std::abs(f(horner(poly, radius))) > 1e-12 * std::max(f_ref, 1e-300)) {
        throw ConvergenceError("kinetic integrand has not decayed at the outer radius");
      }
      double s0 = 0.0;
      double s1 = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double r = rho[i];
        const double v = f(horner(poly, r)) * r * r * rw[i];
        s0 += v;
        s1 += v * r;
      }
      const double ang = mw[a] * 2.0 * std::numbers::pi / q.azimuth;
      out[0] += ang * s0;
      for (std::size_t i = 0; i < 3; ++i) {
        out[i + 1] += ang * s1 * w[i];
      }
    }
  }
  return out;
}

void from_json(const nlohmann::json& j, Kernel& k) {
  const std::string kind = j.value("kernel", std::string("exp"));
  if (kind == "exp") {
    k = Kernel::exponential(j.value("a", 1.0));
  } else if (kind == "table") {
    k = Kernel::from_csv(j.at("file").get<std::string>());
  } else {
    throw InvalidArgument("unknown kernel kind '" + kind + "'");
  }
}

} // namespace mcf
