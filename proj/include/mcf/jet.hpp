#pragma once

#include <json.hpp>

#include <vector>

namespace mcf {

/// Truncated Taylor series of a single-variable function about `base`:
/// f(x) ~ sum_j coeffs[j] (x - base)^j.
class Jet {
public:
  Jet() = default;
  Jet(double base, std::vector<double> coeffs) : base_(base), coeffs_(std::move(coeffs)) {}

  /// Exponential a*exp(-x) expanded about `base`, with `len` coefficients.
  static Jet decaying_exponential(double a, double base, int len);

  static Jet constant(double value, double base, int len);

  double base() const { return base_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }
  double coeff(int j) const { return j < size() ? coeffs_[static_cast<std::size_t>(j)] : 0.0; }

  /// Horner evaluation of the truncated series.
  double operator()(double x) const;

  /// j-th derivative at the base point.
  double derivative_at_base(int j) const;

  Jet derivative() const;
  Jet derivative(int order) const;
  /// Antiderivative whose value at the base point is `constant`.
  Jet antiderivative(double constant) const;

  Jet& operator*=(double a);
  friend Jet operator*(double a, Jet j) { return j *= a; }
  friend Jet operator*(Jet j, double a) { return j *= a; }

private:
  double base_ = 0.0;
  std::vector<double> coeffs_;
};

/// Max |a_j - b_j| over the shared coefficient range.
double max_coeff_diff(const Jet& a, const Jet& b);

/// Max |a_j - b_j| over the union of both ranges (missing coefficients count as 0).
double max_coeff_diff_full(const Jet& a, const Jet& b);

void to_json(nlohmann::json& j, const Jet& jet);

} // namespace mcf
