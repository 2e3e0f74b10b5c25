#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mcf {

/// Multiplicity vector of a symmetric tensor slot over indices {0,1,2,3}:
/// n[a] is the number of slots carrying index value a.
struct MultiIndex4 {
  std::array<int, 4> n{0, 0, 0, 0};

  constexpr int rank() const { return n[0] + n[1] + n[2] + n[3]; }
  constexpr int spatial() const { return n[1] + n[2] + n[3]; }
  constexpr int operator[](int a) const { return n[a]; }

  constexpr MultiIndex4 operator+(const MultiIndex4& o) const {
    return {{n[0] + o.n[0], n[1] + o.n[1], n[2] + o.n[2], n[3] + o.n[3]}};
  }
  constexpr MultiIndex4 operator-(const MultiIndex4& o) const {
    return {{n[0] - o.n[0], n[1] - o.n[1], n[2] - o.n[2], n[3] - o.n[3]}};
  }
  constexpr bool contains(const MultiIndex4& o) const {
    return n[0] >= o.n[0] && n[1] >= o.n[1] && n[2] >= o.n[2] && n[3] >= o.n[3];
  }
  constexpr bool valid() const { return n[0] >= 0 && n[1] >= 0 && n[2] >= 0 && n[3] >= 0; }

  friend constexpr bool operator==(const MultiIndex4&, const MultiIndex4&) = default;

  /// Unit multi-index holding a single slot with index value a.
  static constexpr MultiIndex4 unit(int a) {
    MultiIndex4 m;
    m.n[a] = 1;
    return m;
  }
};

/// Canonical position of a multi-index among all those of its rank. The
/// position only depends on the spatial counts, so it is shared by every rank
/// large enough to contain the multi-index.
constexpr std::size_t canonical_position(const MultiIndex4& m) {
  const std::size_t s = static_cast<std::size_t>(m.spatial());
  const std::size_t u = static_cast<std::size_t>(m.n[2] + m.n[3]);
  return s * (s + 1) * (s + 2) / 6 + u * (u + 1) / 2 + static_cast<std::size_t>(m.n[3]);
}

/// Number of distinct multi-indices of rank r: C(r+3, 3).
constexpr std::size_t component_count(int r) {
  const auto q = static_cast<std::size_t>(r);
  return (q + 1) * (q + 2) * (q + 3) / 6;
}

/// All multi-indices of the given rank, in canonical order.
const std::vector<MultiIndex4>& multi_indices(int r);

/// Binomial coefficient C(n, k) as an exact integer (0 when k is out of range).
std::uint64_t binomial(int n, int k);

/// rank! / (n0! n1! n2! n3!): number of ordered index tuples sharing this multiset.
std::uint64_t multiset_multiplicity(const MultiIndex4& m);

double factorial(int n);

/// (2s-1)!! = (2s)! / (2^s s!)
double double_factorial_odd(int s);

} // namespace mcf
