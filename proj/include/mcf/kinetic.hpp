#pragma once

#include "mcf/lattice.hpp"
#include "mcf/sym_tensor.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace mcf {

/// Single-variable kernel F of the kinetic closure.
///
/// The exponential family F(x) = a e^{-x} is analytic. A table kernel is an
/// interpolating spline through (x, F) samples; it is zero above the last
/// sample, undefined below the first, and its derivatives above the spline
/// degree are zero.
class Kernel {
public:
  static Kernel exponential(double a);
  static Kernel table(std::vector<double> x, std::vector<double> f);
  /// Rows "x,F(x)" with increasing x; a non-numeric first row is a header.
  static Kernel from_csv(const std::string& path);

  /// F^{(order)}(x).
  double derivative(int order, double x) const;
  double operator()(double x) const { return derivative(0, x); }

  bool is_exponential() const { return table_ == nullptr; }
  double scale() const { return a_; }
  std::string tag() const { return is_exponential() ? "exp" : "table"; }

private:
  struct Table;
  double a_ = 1.0;
  std::shared_ptr<const Table> table_;
};

/// Jets of the scalar integrals G_s(lambda), s = 0..smax.
struct GLadder {
  int smax = 0;
  std::vector<Jet> g;

  const Jet& operator[](int s) const { return g[static_cast<std::size_t>(s)]; }
};

struct ScalarQuadrature {
  double rel_tol = 1e-13;
  double tail = 1e-16;      // truncate where the integrand falls below tail * peak
  double eta_limit = 1e4;   // give up if the integrand has not decayed by here
};

/// (4 pi/(s+1)) int_0^inf F^{(order)}(lambda + eta^2/3) eta^{s+2} d eta.
double kinetic_integral(const Kernel& f, int s, double lambda, int order = 0,
                        const ScalarQuadrature& q = {});

/// Closed form of the exponential-kernel integral per unit a:
/// C_s = pi 3^{(s+3)/2} Gamma((s+1)/2).
double exponential_constant(int s);

/// G ladder about lambda0; G_s has d + floor(s/2) coefficients. Values at
/// lambda0 come from quadrature, one per s; the remaining coefficients follow
/// from G'_s = -(3/2)(s-1) G_{s-2}, which reduces them to derivatives of G_0
/// and G_1 (also by quadrature, with F^{(j)}).
GLadder ladder_from_kernel(const Kernel& f, int smax, double lambda0, int d,
                           const ScalarQuadrature& q = {});

/// Max coefficient residual of G'_s = -(3/2)(s-1) G_{s-2}, relative to the
/// largest coefficient of G'_s.
double ladder_residual(const GLadder& ladder);

/// Coefficient lattice of the kinetic closure: G_{r,2s} = G_{2s}^{(r)}, no
/// supplementary constants. H jets have length d + s - r as in build_lattice.
CoefficientLattice kinetic_lattice(const Kernel& f, int n, int k, double lambda0, int d,
                                   const ScalarQuadrature& q = {});

struct SphereQuadrature {
  int radial_panels = 24; // 20-point Gauss panels on [0, R]
  int azimuth = 64;       // trapezoid points in phi
  double decay = 40.0;    // R chosen so that the exponent reaches lambda + decay
};

/// h'^alpha = int F(l . c^N) c^alpha d^3c with c = (1, c_1, c_2, c_3), by a
/// spherical product rule with 40 Gauss-Legendre points in cos(theta).
/// Throws ConvergenceError if the integrand has not decayed at the outer
/// radius in every direction.
Vec4 eval_hprime_kinetic(const Kernel& f, const SymTensor& l, const SphereQuadrature& q = {});

void from_json(const nlohmann::json& j, Kernel& k);

} // namespace mcf
