#pragma once

#include "mcf/sym_tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace mcf {

/// Generator for sample i of a run seeded with seed; independent of threading.
std::mt19937_64 indexed_rng(std::uint64_t seed, std::size_t i);

/// Random rank-n deviation with zero equilibrium part and unit max-norm.
SymTensor random_deviation(int n, std::mt19937_64& rng);

/// Deviation whose purely spatial part is the positive form |c|^n, plus a
/// random part with at least one time index. Keeps l . c^n bounded below in
/// velocity space, as the kinetic integrals need. Requires even n >= 4.
SymTensor random_confining_deviation(int n, std::mt19937_64& rng, double mix = 0.5);

/// Equilibrium at (lam, lam_ll) plus eps times a random deviation.
SymTensor random_state(int n, double lam, double lam_ll, double eps, std::mt19937_64& rng);

/// Velocity uniform in the ball of radius max_speed.
BoostVelocity random_velocity(std::mt19937_64& rng, double max_speed = 1.0);

/// Least-squares slope of log y against log x. Pairs with y == 0 are skipped;
/// returns +inf when fewer than two pairs remain (the quantity vanished).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Number of worker threads: hardware concurrency, capped by MCF_THREADS.
unsigned worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace mcf
