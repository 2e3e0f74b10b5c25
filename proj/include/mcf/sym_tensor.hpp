#pragma once

#include "mcf/multi_index.hpp"

#include <json.hpp>

#include <array>
#include <span>
#include <vector>

namespace mcf {

using Vec4 = std::array<double, 4>;

/// Fully symmetric rank-r tensor over the indices {0,1,2,3}.
///
/// One value is stored per index multiset, in canonical order. The stored
/// value is the tensor entry itself (not pre-multiplied by the multiplicity).
/// The metric is Euclidean, so upper and lower index positions coincide.
class SymTensor {
public:
  SymTensor() : SymTensor(0) {}
  explicit SymTensor(int rank);

  static SymTensor scalar(double value);

  int rank() const { return rank_; }
  std::size_t size() const { return comps_.size(); }

  double operator[](const MultiIndex4& m) const { return comps_[canonical_position(m)]; }
  double& operator[](const MultiIndex4& m) { return comps_[canonical_position(m)]; }

  /// Entry for an ordered index tuple (values in 0..3).
  double at(std::span<const int> indices) const;

  std::span<const double> components() const { return comps_; }
  std::span<double> components() { return comps_; }

  /// Value of a rank-0 tensor.
  double value() const;

  double max_abs() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double a);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

private:
  int rank_;
  std::vector<double> comps_;
};

/// Max over components of |a - b|.
double max_abs_diff(const SymTensor& a, const SymTensor& b);

/// Spatial boost velocity; its four-dimensional lift has zero time component.
struct BoostVelocity {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  Vec4 four() const { return {0.0, v[0], v[1], v[2]}; }
  BoostVelocity operator-() const { return {{-v[0], -v[1], -v[2]}}; }
  BoostVelocity operator+(const BoostVelocity& o) const {
    return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}};
  }
};

inline constexpr Vec4 kTimeVector{1.0, 0.0, 0.0, 0.0};

/// rank-r tensor u ⊗ ... ⊗ u.
SymTensor vector_power(const Vec4& u, int r);

/// rank-1 tensor holding u.
SymTensor vector_tensor(const Vec4& u);

/// Symmetrized (averaged) product h^(..h.. t..t) with s factors of
/// h = diag(0,1,1,1) and m factors of t = (1,0,0,0); rank 2s+m.
SymTensor iso_basis(int s, int m);

/// Contracts the last k slots of a with the last k slots of b and
/// symmetrizes the surviving slots. Throws InvalidArgument when k exceeds
/// either rank.
SymTensor contract(const SymTensor& a, const SymTensor& b, int k);

/// Full contraction of two tensors of equal rank.
double inner(const SymTensor& a, const SymTensor& b);

/// Contraction of one slot with a vector.
SymTensor contract_vector(const SymTensor& a, const Vec4& u);

/// Contraction of `times` slots with t = (1,0,0,0).
SymTensor contract_time(const SymTensor& a, int times = 1);

/// Slice with one slot fixed to index value `index`.
SymTensor slice(const SymTensor& a, int index);

/// a contracted on every slot with u: the homogeneous polynomial a(u,...,u).
double evaluate_form(const SymTensor& a, const Vec4& u);

/// Symmetrized (averaged) outer product.
SymTensor sym_outer(const SymTensor& a, const SymTensor& b);

/// Multiplier transformation between Galilean frames:
///   l = sum_i C(N,i) t_(..t_ v^.. v^ L_..)..
/// i.e. v contracted into L, t placed on the free slots.
SymTensor boost_multipliers(const SymTensor& l, const BoostVelocity& v);

/// Moment transformation c -> c + v on every slot:
///   M = sum_i C(R,i) v^(..v^ m^..)_{..} t.. t
/// i.e. t contracted into m, v placed on the free slots. Works for any rank R.
SymTensor boost_moments(const SymTensor& m, const BoostVelocity& v);

void to_json(nlohmann::json& j, const SymTensor& t);
void from_json(const nlohmann::json& j, SymTensor& t);

} // namespace mcf
