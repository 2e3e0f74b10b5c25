#include "config.hpp"

#include "mcf/closure.hpp"
#include "mcf/error.hpp"
#include "mcf/kinetic.hpp"
#include "mcf/sampling.hpp"
#include "mcf/subsystem.hpp"
#include "mcf/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace mcf;
using mcf::cli::ConfigError;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kMath = 3 };

struct Output {
  std::string path;

  void emit(const nlohmann::json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      cli::write_text(path, text);
    }
  }
};

struct SuiteFlags {
  int samples = 20;
  std::vector<double> eps{1e-1, 1e-2, 1e-3};
  double tol = 1e-10;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--samples", samples, "random states per sampled check")->check(CLI::NonNegativeNumber);
    app->add_option("--eps-sweep", eps, "deviation sizes for order fits")->delimiter(',');
    app->add_option("--tol", tol, "bound for residual checks")->check(CLI::PositiveNumber);
    app->add_option("--rng-seed", seed, "seed for sampled states");
  }

  VerifyOptions options() const { return {samples, eps, tol, seed}; }
};

void summarize(const Report& r) {
  for (const auto& c : r.checks) {
    std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << " residual=" << c.residual;
    if (c.order_fit) {
      std::cerr << " order=" << *c.order_fit;
    }
    std::cerr << " tol=" << c.tol << "\n";
  }
}

int finish(const Report& r, const Output& out, nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json j = report_json(r);
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    j[it.key()] = it.value();
  }
  out.emit(j);
  summarize(r);
  return r.pass() ? kPass : kFail;
}

CheckResult bound(std::string name, double residual, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.tol = tol;
  c.pass = std::isfinite(residual) && residual < tol;
  return c;
}

double rel_diff(const Vec4& a, const Vec4& b) {
  double d = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(a[i]));
  }
  return d / std::max(s, 1e-300);
}

// ---- build ----

int cmd_build(const std::string& config, const Output& out) {
  const auto cfg = cli::parse_config(cli::read_json(config));
  const auto lat = build_lattice(cfg.seed, cfg.n, cfg.k);
  out.emit(lat);
  std::cerr << "N=" << lat.order() << " K=" << lat.truncation()
            << " coefficients=" << lat.coefficient_count() << " seed=" << cli::seed_hash(lat.seed())
            << "\n";
  return kPass;
}

// ---- kinetic ----

struct KineticFlags {
  std::string kernel = "exp";
  double scale = 1.0;
  int n = 3;
  int k = 2;
  double lambda0 = 0.1;
  int jet_len = 7;
};

int cmd_kinetic(const KineticFlags& kf, const SuiteFlags& sf, const Output& out) {
  if (kf.jet_len < kf.k + 2) {
    throw ConfigError("--jet-len must be at least K+2");
  }
  const bool exp_kernel = kf.kernel == "exp";
  const Kernel f = exp_kernel ? Kernel::exponential(kf.scale) : Kernel::from_csv(kf.kernel);
  Report rep;

  if (exp_kernel) {
    double worst = 0.0;
    for (int s = 0; s <= 12; ++s) {
      const double closed = kf.scale * std::exp(-kf.lambda0) * exponential_constant(s);
      worst = std::max(worst, std::abs(kinetic_integral(f, s, kf.lambda0) / closed - 1.0));
    }
    rep.add(bound("scalar_integrals", worst, 1e-8));
    const double ratio = kinetic_integral(f, 2, kf.lambda0) / kinetic_integral(f, 0, kf.lambda0);
    rep.add(bound("c2_over_c0", std::abs(ratio - 1.5), 1e-10));
  }

  const int smax = 2 * ((kf.n * (kf.k + 1) + 1) / 2);
  rep.add(bound("ladder", ladder_residual(ladder_from_kernel(f, smax, kf.lambda0, kf.jet_len)), sf.tol));
  const auto lat = kinetic_lattice(f, kf.n, kf.k, kf.lambda0, kf.jet_len);
  for (const auto& [name, residual] : check_recurrences(lat)) {
    rep.add(bound("recurrence." + name, residual, sf.tol));
  }

  const SymTensor eq = equilibrium_multipliers(kf.n, kf.lambda0, 1.0);
  rep.add(bound("quadrature_equilibrium", rel_diff(eval_hprime_kinetic(f, eq), eval_hprime(lat, eq)), sf.tol));

  if (sf.samples > 0 && exp_kernel) {
    const auto macro = build_lattice(
        kinetic_exponential_seed(kf.scale, kf.lambda0, kf.jet_len, max_kappa_index(kf.n, kf.k)), kf.n, kf.k);
    std::vector<double> dev(static_cast<std::size_t>(sf.samples));
    parallel_for(dev.size(), [&](std::size_t i) {
      auto rng = indexed_rng(sf.seed, i);
      std::uniform_real_distribution<double> lam(kf.lambda0 - 0.1, kf.lambda0 + 0.1);
      std::uniform_real_distribution<double> lam_ll(0.8, 1.25);
      const double a = lam(rng);
      const double b = lam_ll(rng);
      const SymTensor l = random_state(kf.n, a, b, 0.05, rng);
      dev[i] = rel_diff(eval_hprime(macro, l), eval_hprime(lat, l));
    });
    rep.add(bound("macroscopic_match", *std::max_element(dev.begin(), dev.end()), sf.tol));
  }

  // the direct integral converges only for even N with a confining deviation
  if (sf.samples > 0 && kf.n % 2 == 0 && kf.n >= 4) {
    auto rng = indexed_rng(sf.seed ^ 0x9e37ULL, 0);
    const SymTensor dir = random_confining_deviation(kf.n, rng);
    const std::vector<double> eps{1e-3, 5e-4, 2.5e-4};
    std::vector<double> err(eps.size());
    parallel_for(eps.size(), [&](std::size_t i) {
      const SymTensor l = eq + eps[i] * dir;
      err[i] = rel_diff(eval_hprime_kinetic(f, l), eval_hprime(lat, l));
    });
    CheckResult c;
    c.name = "quadrature_order";
    c.residual = err.back();
    c.order_fit = loglog_slope(eps, err);
    c.tol = kf.k + 1;
    c.pass = std::abs(*c.order_fit - (kf.k + 1)) <= 0.4;
    rep.add(c);
  }
  return finish(rep, out);
}

// ---- subsystem ----

struct SubsystemFlags {
  int n = 4;
  int k = 3;
  double lambda0 = 0.0;
  int jet_len = 9;
  std::vector<double> c;
  std::string config;
};

int cmd_subsystem(const SubsystemFlags& flags, const SuiteFlags& sf, const Output& out) {
  SeedSpec seed;
  int n = flags.n;
  int k = flags.k;
  if (!flags.config.empty()) {
    const auto cfg = cli::parse_config(cli::read_json(flags.config));
    seed = cfg.seed;
    n = cfg.n;
    k = cfg.k;
  } else {
    if (flags.jet_len < k + 2) {
      throw ConfigError("--jet-len must be at least K+2");
    }
    seed = SeedSpec::exponential(1.0, flags.lambda0, flags.jet_len, max_kappa_index(n, k));
    seed.supplementary = flags.c;
    if (n % 2 == 1 && flags.c.empty()) {
      seed.supplementary = {0.5, -0.25}; // make the vanishing check non-trivial
    }
  }
  if (n < 3) {
    throw ConfigError("subsystem needs N >= 3");
  }
  const auto lat_n = build_lattice(seed, n, k);
  Report rep;
  auto exactly_zero = [](double residual) {
    CheckResult c;
    c.name = "lifted_supplementary";
    c.residual = residual;
    c.pass = residual == 0.0;
    return c;
  };
  if (n == 3) {
    rep.add(exactly_zero(lifted_supplementary(lat_n, sf.samples, sf.seed)));
    return finish(rep, out);
  }
  SeedSpec sub_seed = seed;
  sub_seed.supplementary.clear();
  const auto lat_sub = build_lattice(sub_seed, n - 1, k);
  const auto cmp = compare_subsystem(lat_n, lat_sub, sf.samples, sf.seed);
  rep.add(bound("hprime_match", cmp.hprime, sf.tol));
  rep.add(exactly_zero(cmp.supplementary));

  nlohmann::json windows = nlohmann::json::array();
  int mismatched = 0;
  for (const auto& w : kappa_windows(seed, n, k)) {
    const int expect = w.predicted <= k ? w.predicted : -1;
    mismatched += (w.observed_sub != expect) + (w.observed_lift != expect);
    windows.push_back({{"p", w.p},
                       {"predicted", w.predicted},
                       {"observed_sub", w.observed_sub},
                       {"observed_lift", w.observed_lift}});
  }
  CheckResult kw;
  kw.name = "kappa_windows";
  kw.residual = mismatched;
  kw.pass = mismatched == 0;
  rep.add(kw);
  return finish(rep, out, {{"kappa_windows", windows}});
}

// ---- moments ----

SymTensor read_state(const std::string& path, int n) {
  const nlohmann::json j = cli::read_json(path);
  SymTensor l;
  try {
    if (j.contains("lambda")) {
      l = equilibrium_multipliers(n, j.at("lambda").get<double>(), j.at("lambda_ll").get<double>());
      if (j.contains("deviation")) {
        l += j.at("deviation").get<SymTensor>();
      }
    } else {
      l = j.get<SymTensor>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": not a state (" + e.what() + ")");
  }
  if (l.rank() != n) {
    throw ConfigError(path + ": state rank differs from lattice order");
  }
  return l;
}

int cmd_moments(const std::string& lattice, const std::string& state, const Output& out) {
  const auto lat = cli::load_lattice(lattice);
  const SymTensor l = read_state(state, lat.order());
  const SymTensor m = eval_moments(lat, l);
  const Vec4 h = eval_hprime(lat, l);
  const int n = lat.order();
  const auto d = decompose_state(l);
  nlohmann::json j{{"moments", m},
                   {"hprime", h},
                   {"density", m[MultiIndex4{{n + 1, 0, 0, 0}}]},
                   {"entropy", entropy_density(lat, l)},
                   {"lambda", d.lam},
                   {"lambda_ll", d.lam_ll}};
  out.emit(j);
  return kPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment closure builder and verifier"};
  app.require_subcommand(1);
  Output out;

  std::string config;
  auto* build = app.add_subcommand("build", "build a lattice from a config");
  build->add_option("config", config, "config JSON")->required();
  build->add_option("-o,--output", out.path, "lattice JSON (default stdout)");

  std::string lattice;
  SuiteFlags vf;
  auto* verify = app.add_subcommand("verify", "run the identity suite on a lattice");
  verify->add_option("lattice", lattice, "lattice or config JSON")->required();
  verify->add_option("-o,--output", out.path, "report JSON (default stdout)");
  vf.attach(verify);

  std::string csv;
  auto* report = app.add_subcommand("report", "identity suite with the eps sweeps as data");
  report->add_option("lattice", lattice, "lattice or config JSON")->required();
  report->add_option("-o,--output", out.path, "report JSON (default stdout)");
  report->add_option("--csv", csv, "write residual-vs-eps rows here");
  vf.attach(report);

  KineticFlags kf;
  SuiteFlags ks;
  auto* kinetic = app.add_subcommand("kinetic", "kinetic closure against its scalar integrals and the macroscopic lattice");
  kinetic->add_option("--kernel", kf.kernel, "\"exp\" or a CSV table x,F(x)");
  kinetic->add_option("--scale", kf.scale, "a in F = a exp(-x)");
  kinetic->add_option("--n", kf.n, "order N")->check(CLI::Range(3, 8));
  kinetic->add_option("--k", kf.k, "truncation K")->check(CLI::Range(1, 6));
  kinetic->add_option("--lambda0", kf.lambda0, "expansion point");
  kinetic->add_option("--jet-len", kf.jet_len, "jet length D");
  kinetic->add_option("-o,--output", out.path, "report JSON (default stdout)");
  ks.attach(kinetic);

  SubsystemFlags sub;
  SuiteFlags ss;
  auto* subsystem = app.add_subcommand("subsystem", "order N closure at lifted states against order N-1");
  subsystem->add_option("--n", sub.n, "order N")->check(CLI::Range(3, 8));
  subsystem->add_option("--k", sub.k, "truncation K")->check(CLI::Range(1, 6));
  subsystem->add_option("--lambda0", sub.lambda0, "expansion point");
  subsystem->add_option("--jet-len", sub.jet_len, "jet length D");
  subsystem->add_option("--c", sub.c, "supplementary constants (odd N)")->delimiter(',');
  subsystem->add_option("--config", sub.config, "take N, K and the seed from a config");
  subsystem->add_option("-o,--output", out.path, "report JSON (default stdout)");
  ss.attach(subsystem);

  std::string state;
  auto* moments = app.add_subcommand("moments", "closing moments at one state");
  moments->add_option("lattice", lattice, "lattice or config JSON")->required();
  moments->add_option("state", state, "SymTensor JSON, or {lambda, lambda_ll, deviation?}")->required();
  moments->add_option("-o,--output", out.path, "result JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*build) {
      return cmd_build(config, out);
    }
    if (*verify) {
      return finish(verify_lattice(cli::load_lattice(lattice), vf.options()), out);
    }
    if (*report) {
      const Report r = verify_lattice(cli::load_lattice(lattice), vf.options());
      nlohmann::json sweeps = nlohmann::json::array();
      for (const auto& s : r.sweeps) {
        sweeps.push_back({{"check", s.check}, {"sample", s.sample}, {"eps", s.eps}, {"residual", s.residual}});
      }
      if (!csv.empty()) {
        cli::write_text(csv, sweeps_csv(r));
      }
      return finish(r, out, {{"sweeps", sweeps}});
    }
    if (*kinetic) {
      return cmd_kinetic(kf, ks, out);
    }
    if (*subsystem) {
      return cmd_subsystem(sub, ss, out);
    }
    if (*moments) {
      return cmd_moments(lattice, state, out);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMath;
  }
  return kUsage;
}
