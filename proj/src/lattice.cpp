#include "mcf/lattice.hpp"

#include "mcf/error.hpp"
#include "mcf/multi_index.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mcf {

SeedSpec SeedSpec::exponential(double a, double lambda0, int jet_len, int kappa_count) {
  SeedSpec seed;
  seed.h00 = Jet::decaying_exponential(a, lambda0, jet_len);
  seed.lambda0 = lambda0;
  seed.jet_len = jet_len;
  seed.label = "exp";
  double kappa = a * std::exp(-lambda0);
  for (int p = 1; p <= kappa_count; ++p) {
    kappa *= 1.5;
    seed.kappas.push_back(kappa);
  }
  return seed;
}

SeedSpec SeedSpec::polynomial(std::vector<double> coeffs, double lambda0, int jet_len) {
  coeffs.resize(static_cast<std::size_t>(jet_len), 0.0);
  SeedSpec seed;
  seed.h00 = Jet(lambda0, std::move(coeffs));
  seed.lambda0 = lambda0;
  seed.jet_len = jet_len;
  seed.label = "poly";
  return seed;
}

double SeedSpec::kappa(int p) const {
  if (p < 1 || p > static_cast<int>(kappas.size())) {
    return 0.0;
  }
  return kappas[static_cast<std::size_t>(p - 1)];
}

SeedSpec kinetic_exponential_seed(double a, double lambda0, int jet_len, int kappa_count) {
  SeedSpec seed = SeedSpec::exponential(a * std::pow(3.0 * std::numbers::pi, 1.5), lambda0,
                                        jet_len, kappa_count);
  seed.label = "kinetic_exp";
  return seed;
}

CoefficientLattice CoefficientLattice::from_table(int n, int k, double lambda0,
                                                  std::vector<std::vector<Jet>> h,
                                                  std::vector<double> supplementary,
                                                  SeedSpec seed) {
  if (n < 3) {
    throw InvalidArgument("lattice order N must be at least 3");
  }
  if (k < 0) {
    throw InvalidArgument("truncation order K must be non-negative");
  }
  CoefficientLattice lat;
  lat.n_ = n;
  lat.k_ = k;
  lat.lambda0_ = lambda0;
  if (static_cast<int>(h.size()) != k + 2) {
    throw InvalidArgument("H table must have K+2 rows");
  }
  for (int r = 0; r <= k + 1; ++r) {
    if (static_cast<int>(h[static_cast<std::size_t>(r)].size()) != lat.max_s(r) + 1) {
      throw InvalidArgument("H table row " + std::to_string(r) + " has wrong length");
    }
  }
  lat.h_ = std::move(h);
  lat.c_ = std::move(supplementary);
  lat.seed_ = std::move(seed);
  lat.refresh_g();
  return lat;
}

const Jet& CoefficientLattice::h(int r, int s) const {
  if (r < 0 || r > k_ + 1 || s < 0 || s > max_s(r)) {
    throw InvalidArgument("H(" + std::to_string(r) + "," + std::to_string(s) +
                          ") outside the lattice");
  }
  return h_[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
}

Jet& CoefficientLattice::mutable_h(int r, int s) {
  return const_cast<Jet&>(static_cast<const CoefficientLattice&>(*this).h(r, s));
}

const Jet& CoefficientLattice::g(int r, int s) const {
  if (r < 0 || r > k_ + 1 || s < 0 || s > max_s(r)) {
    throw InvalidArgument("G(" + std::to_string(r) + "," + std::to_string(2 * s) +
                          ") outside the lattice");
  }
  return g_[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
}

double CoefficientLattice::supplementary(int k) const {
  if (n_ % 2 == 0 || k % 2 == 0 || k < 1) {
    return 0.0;
  }
  const auto i = static_cast<std::size_t>((k - 1) / 2);
  return i < c_.size() ? c_[i] : 0.0;
}

void CoefficientLattice::refresh_g() {
  g_.assign(h_.size(), {});
  for (std::size_t r = 0; r < h_.size(); ++r) {
    const double row = std::pow(-1.5, static_cast<double>(r));
    for (std::size_t s = 0; s < h_[r].size(); ++s) {
      g_[r].push_back(row * double_factorial_odd(static_cast<int>(s)) * h_[r][s]);
    }
  }
}

std::size_t CoefficientLattice::coefficient_count() const {
  std::size_t n = 0;
  for (const auto& row : h_) {
    for (const auto& jet : row) {
      n += static_cast<std::size_t>(jet.size());
    }
  }
  return n + c_.size();
}

int max_kappa_index(int n, int k) {
  int best = 0;
  for (int r = 0; r <= k + 1; ++r) {
    best = std::max(best, (n * r + 1) / 2 - r);
  }
  return best;
}

int first_order_using_kappa(int n, int p) {
  if (n < 3) {
    throw InvalidArgument("first_order_using_kappa requires N >= 3");
  }
  int r = 0;
  while (p > ((n - 2) * r + 1) / 2) {
    ++r;
  }
  return r;
}

CoefficientLattice build_lattice(const SeedSpec& seed, int n, int k) {
  if (n < 3) {
    throw InvalidArgument("build_lattice requires N >= 3");
  }
  if (k < 0) {
    throw InvalidArgument("build_lattice requires K >= 0");
  }
  if (seed.h00.size() < k + 2) {
    throw InvalidArgument("jet length " + std::to_string(seed.h00.size()) +
                          " too short for truncation order " + std::to_string(k) +
                          " (need at least K+2)");
  }
  bool any_c = false;
  for (double c : seed.supplementary) {
    any_c = any_c || c != 0.0;
  }
  if (n % 2 == 0 && any_c) {
    throw BuildError("supplementary constants only for odd N");
  }

  // H_{0,p}' = -3/2 H_{0,p-1}
  const int pmax = max_kappa_index(n, k);
  std::vector<Jet> ladder{seed.h00};
  for (int p = 1; p <= pmax; ++p) {
    ladder.push_back((-1.5 * ladder.back()).antiderivative(seed.kappa(p)));
  }
  // H_{r,0} = (-2/3)^r d^r H_{0,0}
  std::vector<Jet> column{seed.h00};
  for (int r = 1; r <= k + 1; ++r) {
    column.push_back((-2.0 / 3.0) * column.back().derivative());
  }

  std::vector<std::vector<Jet>> h(static_cast<std::size_t>(k + 2));
  for (int r = 0; r <= k + 1; ++r) {
    for (int s = 0; s <= (n * r + 1) / 2; ++s) {
      h[static_cast<std::size_t>(r)].push_back(r >= s ? column[static_cast<std::size_t>(r - s)]
                                                      : ladder[static_cast<std::size_t>(s - r)]);
    }
  }

  std::vector<double> c;
  if (n % 2 == 1) {
    c.assign(static_cast<std::size_t>((k + 1) / 2), 0.0);
    for (std::size_t i = 0; i < c.size() && i < seed.supplementary.size(); ++i) {
      c[i] = seed.supplementary[i];
    }
  }
  return CoefficientLattice::from_table(n, k, seed.h00.base(), std::move(h), std::move(c), seed);
}

double g_eval(const CoefficientLattice& lat, int k, int s, double lam, double lam_ll) {
  if (!(lam_ll > 0.0)) {
    throw DomainError("lambda_ll must be positive, got " + std::to_string(lam_ll));
  }
  return std::pow(lam_ll, -(2.0 * s + 3.0) / 2.0) * lat.g(k, s)(lam);
}

void to_json(nlohmann::json& j, const SeedSpec& seed) {
  j = nlohmann::json{{"H00", seed.h00.coeffs()},     {"kappas", seed.kappas},
                     {"c_constants", seed.supplementary}, {"lambda0", seed.lambda0},
                     {"jet_len", seed.jet_len},      {"label", seed.label}};
}

void from_json(const nlohmann::json& j, SeedSpec& seed) {
  seed.lambda0 = j.at("lambda0").get<double>();
  seed.h00 = Jet(seed.lambda0, j.at("H00").get<std::vector<double>>());
  seed.kappas = j.value("kappas", std::vector<double>{});
  seed.supplementary = j.value("c_constants", std::vector<double>{});
  seed.jet_len = j.value("jet_len", seed.h00.size());
  seed.label = j.value("label", std::string{});
}

void to_json(nlohmann::json& j, const CoefficientLattice& lat) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : lat.h_table()) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& jet : row) {
      jr.push_back(jet.coeffs());
    }
    rows.push_back(std::move(jr));
  }
  j = nlohmann::json{{"N", lat.order()},
                     {"K", lat.truncation()},
                     {"lambda0", lat.lambda0()},
                     {"H", std::move(rows)},
                     {"c", lat.supplementary_constants()},
                     {"seed", lat.seed()}};
}

void from_json(const nlohmann::json& j, CoefficientLattice& lat) {
  const int n = j.at("N").get<int>();
  const int k = j.at("K").get<int>();
  const double lambda0 = j.at("lambda0").get<double>();
  std::vector<std::vector<Jet>> h;
  for (const auto& row : j.at("H")) {
    std::vector<Jet> hr;
    for (const auto& coeffs : row) {
      hr.emplace_back(lambda0, coeffs.get<std::vector<double>>());
    }
    h.push_back(std::move(hr));
  }
  SeedSpec seed;
  if (j.contains("seed")) {
    seed = j.at("seed").get<SeedSpec>();
  }
  auto c = j.value("c", std::vector<double>{});
  if (n % 2 == 0) {
    for (double ci : c) {
      if (ci != 0.0) {
        throw BuildError("supplementary constants only for odd N");
      }
    }
    c.clear();
  }
  lat = CoefficientLattice::from_table(n, k, lambda0, std::move(h), std::move(c), std::move(seed));
}

} // namespace mcf
