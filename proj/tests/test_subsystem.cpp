#include "mcf/closure.hpp"
#include "mcf/error.hpp"
#include "mcf/kinetic.hpp"
#include "mcf/sampling.hpp"
#include "mcf/subsystem.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mcf;

namespace {

SeedSpec exp_seed(int n, int k, double lambda0) {
  return SeedSpec::exponential(1.0, lambda0, k + 6, max_kappa_index(n, k));
}

SeedSpec random_seed(std::mt19937_64& rng, int n, int k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coeffs(9);
  for (double& c : coeffs) {
    c = u(rng);
  }
  SeedSpec seed = SeedSpec::polynomial(coeffs, 0.1, 9);
  for (int p = 1; p <= max_kappa_index(n, k); ++p) {
    seed.kappas.push_back(u(rng));
  }
  if (n % 2 == 1) {
    seed.supplementary = {u(rng), u(rng)};
  }
  return seed;
}

SeedSpec without_supplementary(SeedSpec s) {
  s.supplementary.clear();
  return s;
}

} // namespace

TEST_CASE("3d multipliers round trip") {
  std::mt19937_64 rng(81);
  for (int n = 2; n <= 5; ++n) {
    const SymTensor l = random_state(n, 0.3, 1.1, 0.5, rng);
    const auto lambdas = multipliers_4d_to_3d(l);
    REQUIRE(lambdas.size() == static_cast<std::size_t>(n + 1));
    CHECK(lambdas[0].value() == l[MultiIndex4{{n, 0, 0, 0}}]);
    CHECK(max_abs_diff(multipliers_3d_to_4d(lambdas), l) < 1e-14);
  }
}

TEST_CASE("3d multipliers of an equilibrium") {
  // dense l = lam t^N + (1/3) lam_ll Sym(h t^{N-2}), then C(N,2) l_{ij0..0}
  for (int n = 3; n <= 5; ++n) {
    const double lam_ll = 1.7;
    oracle::Dense tpow = oracle::vec(kTimeVector);
    for (int i = 2; i < n - 1; ++i) {
      tpow = oracle::outer(tpow, oracle::vec(kTimeVector));
    }
    const oracle::Dense dense = oracle::scaled_sum(
        oracle::outer(oracle::outer(tpow, oracle::vec(kTimeVector)), oracle::vec(kTimeVector)), 0.4,
        oracle::symmetrize(oracle::outer(oracle::metric_h(), tpow)), lam_ll / 3.0);
    const auto lambdas = multipliers_4d_to_3d(equilibrium_multipliers(n, 0.4, lam_ll));
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        idx[0] = i;
        idx[1] = j;
        const int ij[2] = {i, j};
        CHECK(lambdas[2].at(ij) ==
              doctest::Approx(static_cast<double>(binomial(n, 2)) * dense(idx)).epsilon(1e-14));
      }
    }
    CHECK(lambdas[1].max_abs() == 0.0);
    CHECK(lambdas[0].value() == 0.4);
  }
}

TEST_CASE("lift keeps the equilibrium scalars") {
  std::mt19937_64 rng(83);
  for (int n = 3; n <= 5; ++n) {
    const SymTensor eq = equilibrium_multipliers(n - 1, 0.3, 1.4);
    CHECK(max_abs_diff(lift_multipliers(eq), equilibrium_multipliers(n, 0.3, 1.4)) < 1e-15);

    const SymTensor l = random_state(n - 1, -0.2, 0.9, 0.3, rng);
    const auto sub = decompose_state(l);
    const auto lifted = decompose_state(lift_multipliers(l));
    CHECK(lifted.lam == sub.lam);
    CHECK(lifted.lam_ll == doctest::Approx(sub.lam_ll).epsilon(1e-15));
    CHECK(max_abs_diff(lifted.dev, lift_multipliers(sub.dev)) < 1e-15);
  }
}

TEST_CASE("lifted forms agree on every velocity") {
  std::mt19937_64 rng(85);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const SymTensor l = random_state(3, 0.1, 1.0, 0.5, rng);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec4 c{1.0, u(rng), u(rng), u(rng)};
    CHECK(evaluate_form(lift_multipliers(l), c) == doctest::Approx(evaluate_form(l, c)).epsilon(1e-14));
  }
}

TEST_CASE("subsystem closure equals the direct closure of order N-1") {
  for (int n = 4; n <= 5; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const SeedSpec seed = exp_seed(n, k, 0.0);
      const auto rep = compare_subsystem(build_lattice(seed, n, k), build_lattice(seed, n - 1, k), 20, 5);
      CHECK_MESSAGE(rep.hprime < 1e-10, "N=" << n << " K=" << k);
      CHECK(rep.supplementary == 0.0);
      CHECK(rep.samples == 20);
    }
  }
  std::mt19937_64 rng(87);
  for (int n = 4; n <= 5; ++n) {
    const SeedSpec seed = random_seed(rng, n, 3);
    const auto lat_n = build_lattice(seed, n, 3);
    const auto lat_sub = build_lattice(without_supplementary(seed), n - 1, 3);
    const auto rep = compare_subsystem(lat_n, lat_sub, 20, 9);
    CHECK_MESSAGE(rep.hprime < 1e-10, "N=" << n);
    CHECK(rep.supplementary == 0.0);
  }
}

TEST_CASE("kinetic lattices satisfy the subsystem identity") {
  const Kernel f = Kernel::exponential(1.0);
  const auto rep = compare_subsystem(kinetic_lattice(f, 4, 2, 0.0, 7), kinetic_lattice(f, 3, 2, 0.0, 7), 20, 3);
  CHECK(rep.hprime < 1e-10);
}

TEST_CASE("supplementary term vanishes at lifted states") {
  SeedSpec seed = exp_seed(3, 3, 0.0);
  seed.supplementary = {0.7, -1.3};
  const auto lat3 = build_lattice(seed, 3, 3);
  CHECK(lifted_supplementary(lat3, 20, 11) == 0.0);
  // not vacuous: away from lifted states the same term is nonzero
  std::mt19937_64 rng(89);
  Vec4 sup = eval_hprime(lat3, random_state(3, 0.0, 1.0, 0.2, rng), Part::Supplementary);
  CHECK(std::abs(sup[0]) + std::abs(sup[1]) + std::abs(sup[2]) + std::abs(sup[3]) > 1e-6);

  SeedSpec seed5 = exp_seed(5, 3, 0.0);
  seed5.supplementary = {0.4, 0.9};
  CHECK(lifted_supplementary(build_lattice(seed5, 5, 3), 20, 13) == 0.0);
}

TEST_CASE("subsystem comparison rejects mismatched lattices") {
  const SeedSpec seed = exp_seed(4, 2, 0.0);
  const auto lat4 = build_lattice(seed, 4, 2);
  CHECK_THROWS_AS(compare_subsystem(lat4, build_lattice(seed, 3, 3), 4, 1), InvalidArgument);
  CHECK_THROWS_AS(compare_subsystem(lat4, build_lattice(seed, 4, 2), 4, 1), InvalidArgument);
  CHECK_THROWS_AS(compare_subsystem(lat4, build_lattice(exp_seed(4, 2, 0.1), 3, 2), 4, 1),
                  InvalidArgument);
  SeedSpec other = seed;
  other.kappas[0] += 1e-6;
  CHECK_THROWS_AS(compare_subsystem(lat4, build_lattice(other, 3, 2), 4, 1), InvalidArgument);
  SeedSpec with_c = seed;
  with_c.supplementary = {0.5};
  CHECK_THROWS_AS(compare_subsystem(lat4, build_lattice(with_c, 3, 2), 4, 1), InvalidArgument);

  SeedSpec seed5 = exp_seed(5, 2, 0.0);
  seed5.supplementary = {0.5};
  CHECK_NOTHROW(compare_subsystem(build_lattice(seed5, 5, 2), build_lattice(exp_seed(5, 2, 0.0), 4, 2), 4, 1));
}

TEST_CASE("sampled states do not depend on thread count") {
  const auto a = subsystem_states(3, 0.0, 6, 42);
  const auto b = subsystem_states(3, 0.0, 6, 42);
  const auto c = subsystem_states(3, 0.0, 6, 43);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(max_abs_diff(a[i], b[i]) == 0.0);
  }
  CHECK(max_abs_diff(a[0], c[0]) > 0.0);
}

TEST_CASE("kappa_p enters the subsystem at the predicted order") {
  std::mt19937_64 rng(91);
  for (int n = 4; n <= 5; ++n) {
    const SeedSpec seed = random_seed(rng, n, 3);
    const auto windows = kappa_windows(seed, n, 3);
    CHECK(windows.size() == static_cast<std::size_t>(max_kappa_index(n, 3)));
    for (const auto& w : windows) {
      const int expect = w.predicted <= 3 ? w.predicted : -1;
      CHECK_MESSAGE(w.observed_sub == expect, "N=" << n << " p=" << w.p);
      CHECK_MESSAGE(w.observed_lift == expect, "N=" << n << " p=" << w.p);
      if (w.predicted <= 3) {
        CHECK(w.predicted == first_order_using_kappa(n - 1, w.p));
      }
    }
  }
  CHECK_THROWS_AS(kappa_windows(exp_seed(3, 2, 0.0), 3, 2), InvalidArgument);
}
