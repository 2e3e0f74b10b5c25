#include "mcf/jet.hpp"

#include "mcf/error.hpp"
#include "mcf/multi_index.hpp"

#include <algorithm>
#include <cmath>

namespace mcf {

Jet Jet::decaying_exponential(double a, double base, int len) {
  std::vector<double> c(static_cast<std::size_t>(std::max(len, 0)));
  double term = a * std::exp(-base);
  for (int j = 0; j < len; ++j) {
    c[static_cast<std::size_t>(j)] = term;
    term *= -1.0 / (j + 1);
  }
  return Jet(base, std::move(c));
}

Jet Jet::constant(double value, double base, int len) {
  std::vector<double> c(static_cast<std::size_t>(std::max(len, 1)), 0.0);
  c[0] = value;
  return Jet(base, std::move(c));
}

double Jet::operator()(double x) const {
  const double d = x - base_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * d + *it;
  }
  return acc;
}

double Jet::derivative_at_base(int j) const { return coeff(j) * factorial(j); }

Jet Jet::derivative() const {
  if (coeffs_.empty()) {
    return Jet(base_, {});
  }
  std::vector<double> c(coeffs_.size() - 1);
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = coeffs_[j + 1] * static_cast<double>(j + 1);
  }
  return Jet(base_, std::move(c));
}

Jet Jet::derivative(int order) const {
  Jet out = *this;
  for (int i = 0; i < order; ++i) {
    out = out.derivative();
  }
  return out;
}

Jet Jet::antiderivative(double constant) const {
  std::vector<double> c(coeffs_.size() + 1);
  c[0] = constant;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    c[j + 1] = coeffs_[j] / static_cast<double>(j + 1);
  }
  return Jet(base_, std::move(c));
}

Jet& Jet::operator*=(double a) {
  for (double& c : coeffs_) {
    c *= a;
  }
  return *this;
}

double max_coeff_diff(const Jet& a, const Jet& b) {
  const int n = std::min(a.size(), b.size());
  double r = 0.0;
  for (int j = 0; j < n; ++j) {
    r = std::max(r, std::abs(a.coeff(j) - b.coeff(j)));
  }
  return r;
}

double max_coeff_diff_full(const Jet& a, const Jet& b) {
  const int n = std::max(a.size(), b.size());
  double r = 0.0;
  for (int j = 0; j < n; ++j) {
    r = std::max(r, std::abs(a.coeff(j) - b.coeff(j)));
  }
  return r;
}

void to_json(nlohmann::json& j, const Jet& jet) { j = jet.coeffs(); }

} // namespace mcf
