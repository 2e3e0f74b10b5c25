#include "mcf/closure.hpp"

#include "mcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcf {

SymTensor equilibrium_multipliers(int n, double lam, double lam_ll) {
  if (n < 2) {
    throw InvalidArgument("equilibrium multipliers need rank >= 2");
  }
  return lam * iso_basis(0, n) + (lam_ll / 3.0) * iso_basis(1, n - 2);
}

StateDecomposition decompose_state(const SymTensor& l) {
  const int n = l.rank();
  if (n < 2) {
    throw InvalidArgument("decompose_state needs rank >= 2");
  }
  StateDecomposition d;
  d.lam = l[MultiIndex4{{n, 0, 0, 0}}];
  double trace = 0.0;
  for (int i = 1; i <= 3; ++i) {
    MultiIndex4 m{{n - 2, 0, 0, 0}};
    m.n[i] = 2;
    trace += l[m];
  }
  d.lam_ll = static_cast<double>(binomial(n, 2)) * trace;
  d.dev = l - equilibrium_multipliers(n, d.lam, d.lam_ll);
  return d;
}

SymTensor recompose_state(const StateDecomposition& d) {
  return equilibrium_multipliers(d.dev.rank(), d.lam, d.lam_ll) + d.dev;
}

SymTensor assemble_A(const CoefficientLattice& lat, int k, double lam, double lam_ll, Part part) {
  const int rank = lat.order() * k + 1;
  SymTensor a(rank);
  if (part != Part::Supplementary) {
    for (int s = 0; s <= rank / 2; ++s) {
      a += static_cast<double>(binomial(rank, 2 * s)) * g_eval(lat, k, s, lam, lam_ll) *
           iso_basis(s, rank - 2 * s);
    }
  } else if (!(lam_ll > 0.0)) {
    throw DomainError("lambda_ll must be positive");
  }
  if (part != Part::Regular) {
    const double c = lat.supplementary(k);
    if (c != 0.0) {
      a += c * iso_basis(rank / 2, 0);
    }
  }
  return a;
}

std::vector<SymTensor> expansion_tensors(const CoefficientLattice& lat, int kmax, double lam,
                                         double lam_ll, Part part) {
  std::vector<SymTensor> out;
  out.reserve(static_cast<std::size_t>(kmax + 1));
  for (int k = 0; k <= kmax; ++k) {
    out.push_back(assemble_A(lat, k, lam, lam_ll, part));
  }
  return out;
}

namespace {

bool is_zero(const SymTensor& t) {
  return std::all_of(t.components().begin(), t.components().end(),
                     [](double c) { return c == 0.0; });
}

// a contracted `times` times with dev on all of dev's slots
SymTensor contract_power(SymTensor a, const SymTensor& dev, int times) {
  for (int i = 0; i < times; ++i) {
    a = contract(a, dev, dev.rank());
  }
  return a;
}

} // namespace

Vec4 eval_hprime(const CoefficientLattice& lat, const SymTensor& l, Part part) {
  if (l.rank() != lat.order()) {
    throw InvalidArgument("eval_hprime: state rank does not match lattice order");
  }
  const auto d = decompose_state(l);
  const int kmax = is_zero(d.dev) ? 0 : lat.truncation();
  SymTensor acc(1);
  for (int k = 0; k <= kmax; ++k) {
    const SymTensor a = assemble_A(lat, k, d.lam, d.lam_ll, part);
    acc += (1.0 / factorial(k)) * contract_power(a, d.dev, k);
  }
  Vec4 out{};
  for (int a = 0; a < 4; ++a) {
    out[static_cast<std::size_t>(a)] = acc[MultiIndex4::unit(a)];
  }
  return out;
}

Vec4 hprime_term(const CoefficientLattice& lat, const SymTensor& l, int k, Part part) {
  if (l.rank() != lat.order()) {
    throw InvalidArgument("hprime_term: state rank does not match lattice order");
  }
  const auto d = decompose_state(l);
  const SymTensor term =
      (1.0 / factorial(k)) * contract_power(assemble_A(lat, k, d.lam, d.lam_ll, part), d.dev, k);
  Vec4 out{};
  for (int a = 0; a < 4; ++a) {
    out[static_cast<std::size_t>(a)] = term[MultiIndex4::unit(a)];
  }
  return out;
}

SymTensor eval_moments(const CoefficientLattice& lat, const SymTensor& l) {
  if (l.rank() != lat.order()) {
    throw InvalidArgument("eval_moments: state rank does not match lattice order");
  }
  const auto d = decompose_state(l);
  const int kmax = is_zero(d.dev) ? 1 : lat.truncation();
  SymTensor acc(lat.order() + 1);
  for (int k = 1; k <= kmax; ++k) {
    const SymTensor a = assemble_A(lat, k, d.lam, d.lam_ll);
    acc += (1.0 / factorial(k - 1)) * contract_power(a, d.dev, k - 1);
  }
  return acc;
}

double moment_symmetry_deviation(const CoefficientLattice& lat, const SymTensor& l) {
  const SymTensor m = eval_moments(lat, l);
  const auto d = decompose_state(l);
  const int kmax = is_zero(d.dev) ? 1 : lat.truncation();
  std::array<SymTensor, 4> flux;
  for (int a = 0; a < 4; ++a) {
    flux[static_cast<std::size_t>(a)] = SymTensor(lat.order());
  }
  for (int k = 1; k <= kmax; ++k) {
    const SymTensor ak = assemble_A(lat, k, d.lam, d.lam_ll);
    for (int a = 0; a < 4; ++a) {
      flux[static_cast<std::size_t>(a)] +=
          (1.0 / factorial(k - 1)) * contract_power(slice(ak, a), d.dev, k - 1);
    }
  }
  double worst = 0.0;
  for (const auto& mi : multi_indices(lat.order() + 1)) {
    for (int a = 0; a < 4; ++a) {
      if (mi.n[static_cast<std::size_t>(a)] > 0) {
        const double v = flux[static_cast<std::size_t>(a)][mi - MultiIndex4::unit(a)];
        worst = std::max(worst, std::abs(v - m[mi]));
      }
    }
  }
  const double scale = m.max_abs();
  return scale > 0.0 ? worst / scale : worst;
}

double entropy_density(const CoefficientLattice& lat, const SymTensor& l) {
  const Vec4 hp = eval_hprime(lat, l);
  const SymTensor m0 = contract_time(eval_moments(lat, l));
  return -hp[0] + inner(l, m0);
}

double ResidualBlock::max_abs() const {
  double out = 0.0;
  for (const auto& row : r) {
    for (double x : row) {
      out = std::max(out, std::abs(x));
    }
  }
  return out;
}

ResidualBlock residual_condition13(const CoefficientLattice& lat, const SymTensor& l) {
  const int n = lat.order();
  const Vec4 hp = eval_hprime(lat, l);
  const SymTensor m0 = contract_time(eval_moments(lat, l));
  ResidualBlock out;
  for (int j = 1; j <= 3; ++j) {
    const SymTensor lj = slice(l, j);
    for (int alpha = 0; alpha < 4; ++alpha) {
      out.r[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(j - 1)] =
          (alpha == j ? hp[0] : 0.0) + n * inner(slice(m0, alpha), lj);
    }
  }
  return out;
}

SymTensor second_derivative_tensor(const CoefficientLattice& lat, const SymTensor& l) {
  const int n = lat.order();
  const auto d = decompose_state(l);
  SymTensor acc(2 * n);
  const int kmax = is_zero(d.dev) ? std::min(2, lat.truncation()) : lat.truncation();
  for (int k = 2; k <= kmax; ++k) {
    const SymTensor a0 = contract_time(assemble_A(lat, k, d.lam, d.lam_ll));
    acc += (1.0 / factorial(k - 2)) * contract_power(a0, d.dev, k - 2);
  }
  return acc;
}

Eigen::MatrixXd hessian_h0(const CoefficientLattice& lat, const SymTensor& l) {
  const SymTensor t = second_derivative_tensor(lat, l);
  const auto& idx = multi_indices(lat.order());
  const auto dim = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd h(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const auto& ma = idx[static_cast<std::size_t>(a)];
    const double wa = static_cast<double>(multiset_multiplicity(ma));
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto& mb = idx[static_cast<std::size_t>(b)];
      h(a, b) = wa * static_cast<double>(multiset_multiplicity(mb)) * t[ma + mb];
    }
  }
  return h;
}

namespace {

double scale_of(const Jet& j) {
  double s = 1.0;
  for (double c : j.coeffs()) {
    s = std::max(s, std::abs(c));
  }
  return s;
}

// coefficient-wise |a - b| on the shared range, relative to max(1, |a|, |b|)
double scaled_diff(const Jet& a, const Jet& b) {
  return max_coeff_diff(a, b) / std::max(scale_of(a), scale_of(b));
}

// lambda_ll^{-exponent} * jet
struct PowerJet {
  double exponent;
  Jet jet;

  PowerJet d_lambda() const { return {exponent, jet.derivative()}; }
  PowerJet d_lambda_ll() const { return {exponent + 1.0, -exponent * jet}; }
};

double scaled_diff(const PowerJet& a, const PowerJet& b) {
  if (a.exponent != b.exponent) {
    return std::numeric_limits<double>::infinity();
  }
  return scaled_diff(a.jet, b.jet);
}

void record(RecurrenceReport& rep, const std::string& name, double v) {
  auto [it, inserted] = rep.emplace(name, v);
  if (!inserted) {
    it->second = std::max(it->second, v);
  }
}

} // namespace

RecurrenceReport check_recurrences(const CoefficientLattice& lat) {
  const int n = lat.order();
  const int k_top = lat.truncation();
  RecurrenceReport rep;
  for (const char* name : {"g_lambda_step", "g_lambda_ll_step", "g_trace_balance", "G_lambda_step", "G_index_step", "G_from_H",
                           "H_diagonal_shift", "H_lambda_step", "odd_integrability", "odd_top_definition"}) {
    rep[name] = 0.0;
  }
  auto power_g = [&](int r, int s) {
    return PowerJet{(2.0 * s + 3.0) / 2.0, lat.g(r, s)};
  };

  for (int k = 0; k <= k_top; ++k) {
    for (int s = 0; s <= lat.max_s(k); ++s) {
      // g_{k+1,2s} = d/dlambda g_{k,2s}
      record(rep, "g_lambda_step", scaled_diff(power_g(k + 1, s), power_g(k, s).d_lambda()));
      // g_{k+1,2s+2} = 3 (2s+1)/(2s+3) d/dlambda_ll g_{k,2s}
      PowerJet rhs = power_g(k, s).d_lambda_ll();
      rhs.jet *= 3.0 * (2.0 * s + 1.0) / (2.0 * s + 3.0);
      record(rep, "g_lambda_ll_step", scaled_diff(power_g(k + 1, s + 1), rhs));
      // G_{k+1,2s} = G'_{k,2s}
      record(rep, "G_lambda_step", scaled_diff(lat.g(k + 1, s), lat.g(k, s).derivative()));
      // G_{k+1,2s+2} = -3 (2s+1)/2 G_{k,2s}
      record(rep, "G_index_step", scaled_diff(lat.g(k + 1, s + 1), (-1.5 * (2.0 * s + 1.0)) * lat.g(k, s)));
      // H_{r+1,s+1} = H_{r,s};  H'_{r,s} = -3/2 H_{r+1,s}
      record(rep, "H_diagonal_shift", max_coeff_diff_full(lat.h(k + 1, s + 1), lat.h(k, s)) /
                                    std::max(scale_of(lat.h(k + 1, s + 1)), scale_of(lat.h(k, s))));
      record(rep, "H_lambda_step", scaled_diff(lat.h(k, s).derivative(), -1.5 * lat.h(k + 1, s)));
    }
    // g_{r,2s} + (2/3) lambda_ll g_{r+1,2s+2} / (2s+1) = 0 on the lambda_ll-power form
    for (int s = 0; s <= (n * k) / 2; ++s) {
      Jet sum = lat.g(k, s);
      const Jet& up = lat.g(k + 1, s + 1);
      const double w = (2.0 / 3.0) / (2.0 * s + 1.0);
      const int len = std::min(sum.size(), up.size());
      double scale = std::max(scale_of(sum), w * scale_of(up));
      double worst = 0.0;
      for (int j = 0; j < len; ++j) {
        worst = std::max(worst, std::abs(sum.coeff(j) + w * up.coeff(j)));
      }
      record(rep, "g_trace_balance", worst / scale);
    }
    // odd Nr: integrability condition and definition of G_{r,Nr+1}
    if ((n * k) % 2 == 1) {
      const int s_lo = (n * k + 1) / 2; // 2s = Nr+1
      const int s_hi = s_lo + 1;        // 2s = Nr+3
      record(rep, "odd_integrability", scaled_diff(lat.g(k + 1, s_hi).derivative(),
                                    (-1.5 * (n * k + 2.0)) * lat.g(k + 1, s_lo)));
      record(rep, "odd_top_definition", scaled_diff(lat.g(k, s_lo),
                                            (-2.0 / 3.0 / (n * k + 2.0)) * lat.g(k + 1, s_hi)));
    }
  }
  for (int r = 0; r <= k_top + 1; ++r) {
    const double row = std::pow(-1.5, static_cast<double>(r));
    for (int s = 0; s <= lat.max_s(r); ++s) {
      record(rep, "G_from_H", scaled_diff(lat.g(r, s), row * double_factorial_odd(s) * lat.h(r, s)));
    }
  }
  return rep;
}

} // namespace mcf
