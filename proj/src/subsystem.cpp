#include "mcf/subsystem.hpp"

#include "mcf/closure.hpp"
#include "mcf/error.hpp"
#include "mcf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace mcf {

namespace {

double max_abs4(const Vec4& a) {
  double r = 0.0;
  for (double x : a) {
    r = std::max(r, std::abs(x));
  }
  return r;
}

void check_pair(const CoefficientLattice& lat_n, const CoefficientLattice& lat_nm1) {
  const int n = lat_n.order();
  if (lat_nm1.order() != n - 1) {
    throw InvalidArgument("subsystem lattice must have order N-1");
  }
  if (lat_nm1.truncation() != lat_n.truncation()) {
    throw InvalidArgument("subsystem lattice must share the truncation order");
  }
  for (double c : lat_nm1.supplementary_constants()) {
    if (c != 0.0) {
      throw InvalidArgument("subsystem lattice must have no supplementary constants");
    }
  }
  for (int r = 0; r <= lat_nm1.truncation() + 1; ++r) {
    for (int s = 0; s <= lat_nm1.max_s(r); ++s) {
      const Jet& a = lat_n.h(r, s);
      const Jet& b = lat_nm1.h(r, s);
      double scale = 1.0;
      for (double c : a.coeffs()) {
        scale = std::max(scale, std::abs(c));
      }
      if (a.base() != b.base() || max_coeff_diff_full(a, b) > 1e-12 * scale) {
        throw InvalidArgument("seeds differ: H(" + std::to_string(r) + "," + std::to_string(s) +
                              ") of the two lattices disagree");
      }
    }
  }
}

int lowest_changed_order(const CoefficientLattice& base, const CoefficientLattice& moved,
                         const SymTensor& l) {
  for (int r = 0; r <= base.truncation(); ++r) {
    const Vec4 a = hprime_term(base, l, r);
    const Vec4 b = hprime_term(moved, l, r);
    double diff = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    if (diff > 1e-12 * std::max(1.0, max_abs4(a))) {
      return r;
    }
  }
  return -1;
}

} // namespace

std::vector<SymTensor> multipliers_4d_to_3d(const SymTensor& l) {
  const int n = l.rank();
  std::vector<SymTensor> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (int r = 0; r <= n; ++r) {
    SymTensor lam(r);
    for (const auto& m : multi_indices(r)) {
      if (m.n[0] != 0) {
        continue;
      }
      MultiIndex4 full = m;
      full.n[0] = n - r;
      lam[m] = static_cast<double>(binomial(n, r)) * l[full];
    }
    out.push_back(lam);
  }
  return out;
}

SymTensor multipliers_3d_to_4d(const std::vector<SymTensor>& lambdas) {
  if (lambdas.empty()) {
    throw InvalidArgument("multipliers_3d_to_4d needs lambda_0..lambda_N");
  }
  const int n = static_cast<int>(lambdas.size()) - 1;
  SymTensor l(n);
  for (int r = 0; r <= n; ++r) {
    if (lambdas[static_cast<std::size_t>(r)].rank() != r) {
      throw InvalidArgument("lambda_r must have rank r");
    }
    l += sym_outer(lambdas[static_cast<std::size_t>(r)], vector_power(kTimeVector, n - r));
  }
  return l;
}

SymTensor lift_multipliers(const SymTensor& l_sub) { return sym_outer(l_sub, vector_tensor(kTimeVector)); }

std::vector<SymTensor> subsystem_states(int n_sub, double lambda0, int samples, std::uint64_t seed) {
  std::vector<SymTensor> out(static_cast<std::size_t>(std::max(samples, 0)));
  for (int i = 0; i < samples; ++i) {
    auto rng = indexed_rng(seed, static_cast<std::size_t>(i));
    std::uniform_real_distribution<double> lam(lambda0 - 0.1, lambda0 + 0.1);
    std::uniform_real_distribution<double> lam_ll(0.8, 1.25);
    const double a = lam(rng);
    const double b = lam_ll(rng);
    out[static_cast<std::size_t>(i)] = random_state(n_sub, a, b, 0.05, rng);
  }
  return out;
}

SubsystemReport compare_subsystem(const CoefficientLattice& lat_n, const CoefficientLattice& lat_nm1,
                                  int samples, std::uint64_t seed) {
  check_pair(lat_n, lat_nm1);
  const auto states = subsystem_states(lat_nm1.order(), lat_n.lambda0(), samples, seed);
  std::vector<double> dev(states.size());
  std::vector<double> sup(states.size());
  parallel_for(states.size(), [&](std::size_t i) {
    const SymTensor lifted = lift_multipliers(states[i]);
    const Vec4 direct = eval_hprime(lat_nm1, states[i]);
    const Vec4 via = eval_hprime(lat_n, lifted);
    double worst = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      worst = std::max(worst, std::abs(direct[a] - via[a]));
    }
    dev[i] = worst / std::max(max_abs4(direct), 1e-300);
    sup[i] = max_abs4(eval_hprime(lat_n, lifted, Part::Supplementary));
  });
  SubsystemReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < states.size(); ++i) {
    rep.hprime = std::max(rep.hprime, dev[i]);
    rep.supplementary = std::max(rep.supplementary, sup[i]);
  }
  return rep;
}

double lifted_supplementary(const CoefficientLattice& lat_n, int samples, std::uint64_t seed) {
  const auto states = subsystem_states(lat_n.order() - 1, lat_n.lambda0(), samples, seed);
  std::vector<double> sup(states.size());
  parallel_for(states.size(), [&](std::size_t i) {
    sup[i] = max_abs4(eval_hprime(lat_n, lift_multipliers(states[i]), Part::Supplementary));
  });
  return sup.empty() ? 0.0 : *std::max_element(sup.begin(), sup.end());
}

std::vector<KappaWindow> kappa_windows(const SeedSpec& seed, int n, int k) {
  if (n < 4) {
    throw InvalidArgument("kappa windows need N >= 4 so that the N-1 lattice exists");
  }
  SeedSpec sub_seed = seed;
  sub_seed.supplementary.clear();
  const auto base_n = build_lattice(seed, n, k);
  const auto base_sub = build_lattice(sub_seed, n - 1, k);
  std::mt19937_64 rng(7);
  const SymTensor l_sub = random_state(n - 1, seed.lambda0 + 0.05, 1.1, 0.1, rng);
  const SymTensor lifted = lift_multipliers(l_sub);

  std::vector<KappaWindow> out;
  for (int p = 1; p <= max_kappa_index(n, k); ++p) {
    KappaWindow w;
    w.p = p;
    while (p > ((n - 3) * w.predicted + 1) / 2) {
      ++w.predicted;
    }
    SeedSpec moved = seed;
    SeedSpec moved_sub = sub_seed;
    for (SeedSpec* s : {&moved, &moved_sub}) {
      if (static_cast<int>(s->kappas.size()) < p) {
        s->kappas.resize(static_cast<std::size_t>(p), 0.0);
      }
      s->kappas[static_cast<std::size_t>(p - 1)] += 1e-3;
    }
    w.observed_sub = lowest_changed_order(base_sub, build_lattice(moved_sub, n - 1, k), l_sub);
    w.observed_lift = lowest_changed_order(base_n, build_lattice(moved, n, k), lifted);
    out.push_back(w);
  }
  return out;
}

} // namespace mcf
