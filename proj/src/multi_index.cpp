#include "mcf/multi_index.hpp"

#include "mcf/error.hpp"

#include <deque>
#include <mutex>
#include <string>

namespace mcf {

namespace {

std::vector<MultiIndex4> enumerate_rank(int r) {
  std::vector<MultiIndex4> out;
  out.reserve(component_count(r));
  for (int s = 0; s <= r; ++s) {
    for (int u = 0; u <= s; ++u) {
      for (int n3 = 0; n3 <= u; ++n3) {
        out.push_back(MultiIndex4{{r - s, s - u, u - n3, n3}});
      }
    }
  }
  return out;
}

} // namespace

const std::vector<MultiIndex4>& multi_indices(int r) {
  if (r < 0) {
    throw InvalidArgument("multi_indices: negative rank " + std::to_string(r));
  }
  static std::mutex mutex;
  static std::deque<std::vector<MultiIndex4>> cache;
  std::lock_guard lock(mutex);
  while (static_cast<int>(cache.size()) <= r) {
    cache.push_back(enumerate_rank(static_cast<int>(cache.size())));
  }
  return cache[static_cast<std::size_t>(r)];
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // exact at every step: result * (n-k+i) is divisible by i
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint64_t multiset_multiplicity(const MultiIndex4& m) {
  const int r = m.rank();
  return binomial(r, m.n[0]) * binomial(r - m.n[0], m.n[1]) * binomial(m.n[2] + m.n[3], m.n[2]);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) {
    f *= i;
  }
  return f;
}

double double_factorial_odd(int s) {
  double f = 1.0;
  for (int i = 1; i <= s; ++i) {
    f *= 2 * i - 1;
  }
  return f;
}

} // namespace mcf
