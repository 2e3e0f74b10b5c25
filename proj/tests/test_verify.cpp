#include "mcf/lattice.hpp"
#include "mcf/verify.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace mcf;

namespace {

CoefficientLattice exp_lattice(int n, int k) {
  return build_lattice(SeedSpec::exponential(1.0, 0.0, k + 6, max_kappa_index(n, k)), n, k);
}

const CheckResult* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

} // namespace

TEST_CASE("exponential lattices pass the identity suite") {
  for (int n = 3; n <= 4; ++n) {
    for (int k = 2; k <= 3; ++k) {
      const Report r = verify_lattice(exp_lattice(n, k));
      for (const auto& c : r.checks) {
        CHECK_MESSAGE(c.pass, "N=" << n << " K=" << k << " " << c.name << " residual " << c.residual
                                   << " order " << c.order_fit.value_or(-1.0));
      }
      CHECK(find(r, "hessian_min_eigenvalue") != nullptr);
      CHECK(find(r, "galilean_order")->order_fit.has_value());
    }
  }
}

TEST_CASE("polynomial lattice with supplementary constants passes") {
  SeedSpec seed = SeedSpec::polynomial({0.9, -0.4, 0.3, 0.1, -0.2, 0.05, 0.02}, 0.1, 7);
  seed.kappas = {0.3, -0.7};
  seed.supplementary = {0.6, -1.1};
  const Report r = verify_lattice(build_lattice(seed, 3, 3));
  for (const auto& c : r.checks) {
    CHECK_MESSAGE(c.pass, c.name << " residual " << c.residual);
  }
  CHECK(find(r, "hessian_min_eigenvalue") == nullptr);
}

TEST_CASE("a corrupted lattice fails verification") {
  auto lat = exp_lattice(3, 2);
  lat.mutable_h(1, 1).coeffs()[0] += 1e-4;
  lat.refresh_g();
  const Report r = verify_lattice(lat);
  CHECK_FALSE(r.pass());
  CHECK_FALSE(find(r, "galilean_equilibrium")->pass);
}

TEST_CASE("zero samples runs only coefficient checks") {
  VerifyOptions opt;
  opt.samples = 0;
  const Report r = verify_lattice(exp_lattice(3, 2), opt);
  CHECK(r.checks.size() == 10);
  CHECK(r.pass());
  for (const auto& c : r.checks) {
    CHECK(c.name.rfind("recurrence.", 0) == 0);
  }
}

TEST_CASE("reports do not depend on the thread count") {
  VerifyOptions opt;
  opt.samples = 6;
  opt.seed = 99;
  const auto lat = exp_lattice(3, 2);
  setenv("MCF_THREADS", "1", 1);
  const std::string one = report_json(verify_lattice(lat, opt)).dump();
  setenv("MCF_THREADS", "4", 1);
  const std::string four = report_json(verify_lattice(lat, opt)).dump();
  unsetenv("MCF_THREADS");
  CHECK(one == four);
  opt.seed = 100;
  CHECK(report_json(verify_lattice(lat, opt)).dump() != one);
}

TEST_CASE("report layout") {
  VerifyOptions opt;
  opt.samples = 2;
  const Report r = verify_lattice(exp_lattice(3, 2), opt);
  const auto j = report_json(r);
  CHECK(j.at("pass").get<bool>());
  const auto& c = j.at("checks").at("galilean_order");
  CHECK(c.contains("residual"));
  CHECK(c.contains("order_fit"));
  CHECK(c.contains("tol"));
  CHECK(c.contains("pass"));
  CHECK(j.at("checks").at("moment_symmetry").at("order_fit").is_null());
  const std::string csv = sweeps_csv(r);
  CHECK(csv.rfind("check,sample,eps,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
}
