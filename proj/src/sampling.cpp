#include "mcf/sampling.hpp"

#include "mcf/closure.hpp"
#include "mcf/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mcf {

std::mt19937_64 indexed_rng(std::uint64_t seed, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

SymTensor random_deviation(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymTensor l(n);
  for (double& c : l.components()) {
    c = u(rng);
  }
  SymTensor dev = decompose_state(l).dev;
  const double norm = dev.max_abs();
  if (norm > 0.0) {
    dev *= 1.0 / norm;
  }
  return dev;
}

SymTensor random_confining_deviation(int n, std::mt19937_64& rng, double mix) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidArgument("confining deviations need an even rank >= 4");
  }
  SymTensor dev = random_deviation(n, rng);
  for (const auto& m : multi_indices(n)) {
    if (m.n[0] == 0) {
      dev[m] = 0.0;
    }
  }
  return iso_basis(n / 2, 0) + mix * dev;
}

SymTensor random_state(int n, double lam, double lam_ll, double eps, std::mt19937_64& rng) {
  return equilibrium_multipliers(n, lam, lam_ll) + eps * random_deviation(n, rng);
}

BoostVelocity random_velocity(std::mt19937_64& rng, double max_speed) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BoostVelocity out;
  double r2 = 2.0;
  while (r2 > 1.0) {
    r2 = 0.0;
    for (double& c : out.v) {
      c = u(rng);
      r2 += c * c;
    }
  }
  for (double& c : out.v) {
    c *= max_speed;
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (y[i] > 0.0 && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) {
    return std::numeric_limits<double>::infinity();
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MCF_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) {
        n = std::min(n, static_cast<unsigned>(cap));
      }
    } catch (const std::exception&) {
      // unparsable values are ignored
    }
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) {
            first = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first) {
    std::rethrow_exception(first);
  }
}

} // namespace mcf
