#pragma once

#include "mcf/jet.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mcf {

/// Free data of the closure: the generating function H_{0,0}, the
/// integration constants of the H_{0,p} ladder and, for odd N, the
/// supplementary constants c_{k,Nk+1} (one per odd k = 1, 3, 5, ...).
struct SeedSpec {
  Jet h00;
  std::vector<double> kappas;        // kappa_1, kappa_2, ...; missing entries are 0
  std::vector<double> supplementary; // c_{1,N+1}, c_{3,3N+1}, ...
  double lambda0 = 0.0;
  int jet_len = 0;
  std::string label;

  /// H_{0,0} = a*exp(-lambda) with the integration constants that keep every
  /// H_{0,p} in the same family: H_{0,p} = a (3/2)^p exp(-lambda).
  static SeedSpec exponential(double a, double lambda0, int jet_len, int kappa_count);

  /// Polynomial H_{0,0} given by its Taylor coefficients about lambda0.
  static SeedSpec polynomial(std::vector<double> coeffs, double lambda0, int jet_len);

  double kappa(int p) const;
};

/// Seed matching the exponential kernel F(x) = a*exp(-x): H_{0,0} = a (3 pi)^{3/2} exp(-lambda).
SeedSpec kinetic_exponential_seed(double a, double lambda0, int jet_len, int kappa_count);

/// Closure dataset for order N and expansion order K.
///
/// H(r, s) holds H_{r,s} for 0 <= r <= K+1 and 0 <= s <= floor((N r + 1)/2).
/// G(r, s) holds G_{r,2s} = (-3/2)^r (2s-1)!! H_{r,s}. Rows up to K are
/// needed for evaluation; row K+1 closes the recurrences at order K.
class CoefficientLattice {
public:
  CoefficientLattice() = default;

  /// Lattice from an explicit H table; G is derived, nothing is checked.
  static CoefficientLattice from_table(int n, int k, double lambda0,
                                       std::vector<std::vector<Jet>> h,
                                       std::vector<double> supplementary, SeedSpec seed);

  int order() const { return n_; }
  int truncation() const { return k_; }
  double lambda0() const { return lambda0_; }
  int max_s(int r) const { return (n_ * r + 1) / 2; }

  const Jet& h(int r, int s) const;
  const Jet& g(int r, int s) const;
  Jet& mutable_h(int r, int s);

  const std::vector<std::vector<Jet>>& h_table() const { return h_; }

  /// c_{k,Nk+1}; zero unless N and k are both odd and a constant was given.
  double supplementary(int k) const;
  const std::vector<double>& supplementary_constants() const { return c_; }

  const SeedSpec& seed() const { return seed_; }

  /// Recompute G from H (after editing H).
  void refresh_g();

  std::size_t coefficient_count() const;

private:
  int n_ = 0;
  int k_ = 0;
  double lambda0_ = 0.0;
  std::vector<std::vector<Jet>> h_;
  std::vector<std::vector<Jet>> g_;
  std::vector<double> c_;
  SeedSpec seed_;
};

/// Largest p for which H_{0,p} enters a lattice of order N truncated at K.
int max_kappa_index(int n, int k);

/// Lowest expansion order r at which H_{0,p} enters the order-N closure.
int first_order_using_kappa(int n, int p);

CoefficientLattice build_lattice(const SeedSpec& seed, int n, int k);

/// lambda_ll^{-(2s+3)/2} G_{k,2s}(lambda). Throws DomainError for lambda_ll <= 0.
double g_eval(const CoefficientLattice& lat, int k, int s, double lam, double lam_ll);

void to_json(nlohmann::json& j, const SeedSpec& seed);
void from_json(const nlohmann::json& j, SeedSpec& seed);
void to_json(nlohmann::json& j, const CoefficientLattice& lat);
void from_json(const nlohmann::json& j, CoefficientLattice& lat);

} // namespace mcf
