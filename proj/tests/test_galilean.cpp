#include "mcf/closure.hpp"
#include "mcf/error.hpp"
#include "mcf/galilean.hpp"
#include "mcf/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mcf;

namespace {

CoefficientLattice exp_lattice(int n, int k) {
  return build_lattice(SeedSpec::exponential(1.0, 0.0, k + 6, max_kappa_index(n, k)), n, k);
}

// deviation with every spatial count even, so reflections leave it unchanged
SymTensor reflection_even_deviation(int n, std::mt19937_64& rng) {
  SymTensor d = random_deviation(n, rng);
  for (const auto& m : multi_indices(n)) {
    if (m.n[1] % 2 || m.n[2] % 2 || m.n[3] % 2) {
      d[m] = 0.0;
    }
  }
  return decompose_state(d).dev;
}

} // namespace

TEST_CASE("diagram is exact without a boost") {
  const auto lat = exp_lattice(3, 3);
  std::mt19937_64 rng(41);
  const SymTensor big_l = random_state(3, 0.1, 1.0, 0.2, rng);
  const auto rep = verify_diagram(lat, big_l, BoostVelocity{});
  CHECK(rep.moments == 0.0);
  CHECK(rep.potential == 0.0);
}

TEST_CASE("boosts leave lambda_ll of an equilibrium unchanged") {
  std::mt19937_64 rng(43);
  for (int n = 3; n <= 5; ++n) {
    const SymTensor big_l = equilibrium_multipliers(n, 0.1, 1.3);
    const auto lat = exp_lattice(n, 2);
    const auto rep = verify_diagram(lat, big_l, random_velocity(rng, 0.3));
    CHECK(rep.lam_ll_shift < 1e-13);
  }
}

TEST_CASE("diagram mismatch at equilibrium shrinks with the boost at truncation order") {
  std::mt19937_64 rng(47);
  const BoostVelocity dir = random_velocity(rng);
  for (int k : {2, 3}) {
    const auto lat = exp_lattice(3, k);
    const SymTensor big_l = equilibrium_multipliers(3, 0.0, 1.0);
    std::vector<double> speeds{0.1, 0.05, 0.025};
    std::vector<double> dm;
    std::vector<double> dh;
    for (double s : speeds) {
      const BoostVelocity v{{s * dir.v[0], s * dir.v[1], s * dir.v[2]}};
      const auto rep = verify_diagram(lat, big_l, v);
      dm.push_back(rep.moments);
      dh.push_back(rep.potential);
    }
    CHECK(loglog_slope(speeds, dm) >= k - 0.4);
    CHECK(loglog_slope(speeds, dh) >= k + 1 - 0.4);
  }
}

TEST_CASE("diagram mismatch near equilibrium is of truncation order in the deviation") {
  std::mt19937_64 rng(53);
  const SymTensor dev = random_deviation(3, rng);
  const BoostVelocity v = random_velocity(rng, 0.5);
  for (int k : {2, 3}) {
    const auto lat = exp_lattice(3, k);
    // the series is pre-asymptotic above this range for a unit deviation
    std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    std::vector<double> dm;
    for (double e : eps) {
      const BoostVelocity ve{{e * v.v[0], e * v.v[1], e * v.v[2]}};
      const SymTensor big_l = equilibrium_multipliers(3, 0.0, 1.0) + e * dev;
      dm.push_back(verify_diagram(lat, big_l, ve).moments);
    }
    CHECK(loglog_slope(eps, dm) >= k - 0.4);
  }
}

TEST_CASE("boost there and back returns the original moments") {
  const auto lat = exp_lattice(4, 3);
  std::mt19937_64 rng(59);
  const SymTensor big_l = random_state(4, 0.0, 1.0, 0.2, rng);
  const BoostVelocity v = random_velocity(rng, 0.7);
  const SymTensor m = eval_moments(lat, big_l);
  CHECK(max_abs_diff(boost_moments(boost_moments(m, v), -v), m) < 1e-12 * m.max_abs());
  const SymTensor l = boost_multipliers(big_l, v);
  CHECK(max_abs_diff(boost_multipliers(l, -v), big_l) < 1e-13);
}

TEST_CASE("multiplier inversion recovers the state") {
  // the truncated map folds close to equilibrium in the unit max-norm, sooner for larger N
  for (int n = 3; n <= 4; ++n) {
    const auto lat = exp_lattice(n, 3);
    const double eps = n == 3 ? 3e-3 : 3e-4;
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 5; ++trial) {
      const SymTensor l = random_state(n, 0.2, 0.8, eps, rng);
      const SymTensor m0 = contract_time(eval_moments(lat, l));
      const SymTensor back = solve_multipliers(lat, m0);
      CHECK(max_abs_diff(back, l) < 1e-9);
    }
  }
}

TEST_CASE("nonconvective closure round trip") {
  for (int n = 3; n <= 4; ++n) {
    const auto lat = exp_lattice(n, 3);
    const double eps = n == 3 ? 3e-3 : 3e-4;
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 5; ++trial) {
      const SymTensor l = equilibrium_multipliers(n, 0.1, 1.2) + eps * reflection_even_deviation(n, rng);
      const SymTensor m = eval_moments(lat, l);
      const BoostVelocity v = random_velocity(rng, 1.0);
      const SymTensor big_m = boost_moments(m, v);
      const SymTensor f = contract_time(big_m);
      const SymTensor out = nonconvective_closure(lat, f);
      CHECK(max_abs_diff(out, big_m) < 1e-9 * big_m.max_abs());
    }
  }
}

TEST_CASE("nonconvective closure at rest reduces to eval_moments") {
  const auto lat = exp_lattice(3, 2);
  std::mt19937_64 rng(71);
  const SymTensor l = equilibrium_multipliers(3, 0.0, 1.0) + 1e-2 * reflection_even_deviation(3, rng);
  const SymTensor m = eval_moments(lat, l);
  const SymTensor out = nonconvective_closure(lat, contract_time(m));
  CHECK(max_abs_diff(out, m) < 1e-10 * m.max_abs());
}

TEST_CASE("nonconvective closure needs a density of the lattice's sign") {
  const auto lat = exp_lattice(3, 2);
  const SymTensor m = contract_time(eval_moments(lat, equilibrium_multipliers(3, 0.0, 1.0)));
  SymTensor zero = m;
  zero[MultiIndex4{{3, 0, 0, 0}}] = 0.0;
  CHECK_THROWS_AS(nonconvective_closure(lat, zero), DomainError);
  CHECK_THROWS_AS(nonconvective_closure(lat, -1.0 * m), DomainError);
}

TEST_CASE("unreachable moments fail to converge") {
  const auto lat = exp_lattice(3, 2);
  SymTensor m = contract_time(eval_moments(lat, equilibrium_multipliers(3, 0.0, 1.0)));
  m[MultiIndex4{{1, 2, 0, 0}}] += 50.0 * m.max_abs();
  CHECK_THROWS_AS(solve_multipliers(lat, m), ConvergenceError);
}
