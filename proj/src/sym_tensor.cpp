#include "mcf/sym_tensor.hpp"

#include "mcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcf {

SymTensor::SymTensor(int rank) : rank_(rank) {
  if (rank < 0) {
    throw InvalidArgument("SymTensor: negative rank " + std::to_string(rank));
  }
  comps_.assign(component_count(rank), 0.0);
}

SymTensor SymTensor::scalar(double value) {
  SymTensor t(0);
  t.comps_[0] = value;
  return t;
}

double SymTensor::at(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != rank_) {
    throw InvalidArgument("SymTensor::at: tuple length does not match rank");
  }
  MultiIndex4 m;
  for (int a : indices) {
    m.n[a] += 1;
  }
  return (*this)[m];
}

double SymTensor::value() const {
  if (rank_ != 0) {
    throw InvalidArgument("SymTensor::value: tensor is not a scalar");
  }
  return comps_[0];
}

double SymTensor::max_abs() const {
  double r = 0.0;
  for (double c : comps_) {
    r = std::max(r, std::abs(c));
  }
  return r;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  if (o.rank_ != rank_) {
    throw InvalidArgument("SymTensor: rank mismatch in addition");
  }
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    comps_[i] += o.comps_[i];
  }
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  if (o.rank_ != rank_) {
    throw InvalidArgument("SymTensor: rank mismatch in subtraction");
  }
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    comps_[i] -= o.comps_[i];
  }
  return *this;
}

SymTensor& SymTensor::operator*=(double a) {
  for (double& c : comps_) {
    c *= a;
  }
  return *this;
}

double max_abs_diff(const SymTensor& a, const SymTensor& b) {
  if (a.rank() != b.rank()) {
    throw InvalidArgument("max_abs_diff: rank mismatch");
  }
  double r = 0.0;
  auto ca = a.components();
  auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    r = std::max(r, std::abs(ca[i] - cb[i]));
  }
  return r;
}

SymTensor vector_power(const Vec4& u, int r) {
  SymTensor t(r);
  for (const auto& m : multi_indices(r)) {
    double p = 1.0;
    for (int a = 0; a < 4; ++a) {
      for (int e = 0; e < m.n[a]; ++e) {
        p *= u[a];
      }
    }
    t[m] = p;
  }
  return t;
}

SymTensor vector_tensor(const Vec4& u) { return vector_power(u, 1); }

SymTensor iso_basis(int s, int m) {
  if (s < 0 || m < 0) {
    throw InvalidArgument("iso_basis: negative order");
  }
  SymTensor t(2 * s + m);
  for (const auto& idx : multi_indices(2 * s + m)) {
    if (idx.n[0] != m || idx.n[1] % 2 || idx.n[2] % 2 || idx.n[3] % 2) {
      continue;
    }
    // admissible words / all words of this multiset
    const MultiIndex4 half{{0, idx.n[1] / 2, idx.n[2] / 2, idx.n[3] / 2}};
    t[idx] = static_cast<double>(multiset_multiplicity(half)) /
             static_cast<double>(multiset_multiplicity(idx));
  }
  return t;
}

namespace {

// Calls f(p) for every sub-multiset p of m with rank r.
template <class F>
void for_each_submultiset(const MultiIndex4& m, int r, F&& f) {
  for (int p0 = std::max(0, r - m.spatial()); p0 <= std::min(m.n[0], r); ++p0) {
    const int r1 = r - p0;
    for (int p1 = std::max(0, r1 - m.n[2] - m.n[3]); p1 <= std::min(m.n[1], r1); ++p1) {
      const int r2 = r1 - p1;
      for (int p2 = std::max(0, r2 - m.n[3]); p2 <= std::min(m.n[2], r2); ++p2) {
        f(MultiIndex4{{p0, p1, p2, r2 - p2}});
      }
    }
  }
}

// sum over ordered k-tuples of a[p + tuple] b[q + tuple]
double contracted_sum(const SymTensor& a, const MultiIndex4& p, const SymTensor& b,
                      const MultiIndex4& q, int k) {
  double acc = 0.0;
  for (const auto& mu : multi_indices(k)) {
    acc += static_cast<double>(multiset_multiplicity(mu)) * a[p + mu] * b[q + mu];
  }
  return acc;
}

} // namespace

SymTensor contract(const SymTensor& a, const SymTensor& b, int k) {
  if (k < 0 || k > a.rank() || k > b.rank()) {
    throw InvalidArgument("contract: cannot contract " + std::to_string(k) +
                          " slots of ranks " + std::to_string(a.rank()) + " and " +
                          std::to_string(b.rank()));
  }
  const int ra = a.rank() - k;
  const int rb = b.rank() - k;
  SymTensor out(ra + rb);
  if (rb == 0 || ra == 0) {
    const SymTensor& big = (rb == 0) ? a : b;
    const SymTensor& small = (rb == 0) ? b : a;
    for (const auto& m : multi_indices(ra + rb)) {
      out[m] = contracted_sum(big, m, small, MultiIndex4{}, k);
    }
    return out;
  }
  for (const auto& m : multi_indices(ra + rb)) {
    const double mm = static_cast<double>(multiset_multiplicity(m));
    double acc = 0.0;
    for_each_submultiset(m, ra, [&](const MultiIndex4& p) {
      const MultiIndex4 q = m - p;
      const double w = static_cast<double>(multiset_multiplicity(p)) *
                       static_cast<double>(multiset_multiplicity(q)) / mm;
      acc += w * contracted_sum(a, p, b, q, k);
    });
    out[m] = acc;
  }
  return out;
}

double inner(const SymTensor& a, const SymTensor& b) {
  if (a.rank() != b.rank()) {
    throw InvalidArgument("inner: rank mismatch");
  }
  return contracted_sum(a, MultiIndex4{}, b, MultiIndex4{}, a.rank());
}

SymTensor contract_vector(const SymTensor& a, const Vec4& u) {
  if (a.rank() < 1) {
    throw InvalidArgument("contract_vector: scalar has no slot to contract");
  }
  SymTensor out(a.rank() - 1);
  for (const auto& m : multi_indices(a.rank() - 1)) {
    double acc = 0.0;
    for (int c = 0; c < 4; ++c) {
      if (u[c] != 0.0) {
        acc += u[c] * a[m + MultiIndex4::unit(c)];
      }
    }
    out[m] = acc;
  }
  return out;
}

SymTensor contract_time(const SymTensor& a, int times) {
  if (times < 0 || times > a.rank()) {
    throw InvalidArgument("contract_time: invalid slot count");
  }
  SymTensor out(a.rank() - times);
  const MultiIndex4 shift{{times, 0, 0, 0}};
  for (const auto& m : multi_indices(out.rank())) {
    out[m] = a[m + shift];
  }
  return out;
}

SymTensor slice(const SymTensor& a, int index) {
  if (a.rank() < 1 || index < 0 || index > 3) {
    throw InvalidArgument("slice: invalid slot or index");
  }
  SymTensor out(a.rank() - 1);
  const MultiIndex4 e = MultiIndex4::unit(index);
  for (const auto& m : multi_indices(out.rank())) {
    out[m] = a[m + e];
  }
  return out;
}

double evaluate_form(const SymTensor& a, const Vec4& u) {
  double acc = 0.0;
  for (const auto& m : multi_indices(a.rank())) {
    double p = static_cast<double>(multiset_multiplicity(m)) * a[m];
    if (p == 0.0) {
      continue;
    }
    for (int c = 0; c < 4; ++c) {
      for (int e = 0; e < m.n[c]; ++e) {
        p *= u[c];
      }
    }
    acc += p;
  }
  return acc;
}

SymTensor sym_outer(const SymTensor& a, const SymTensor& b) {
  const int ra = a.rank();
  SymTensor out(ra + b.rank());
  for (const auto& m : multi_indices(out.rank())) {
    const double mm = static_cast<double>(multiset_multiplicity(m));
    double acc = 0.0;
    for_each_submultiset(m, ra, [&](const MultiIndex4& p) {
      const MultiIndex4 q = m - p;
      acc += static_cast<double>(multiset_multiplicity(p)) *
             static_cast<double>(multiset_multiplicity(q)) * a[p] * b[q];
    });
    out[m] = acc / mm;
  }
  return out;
}

SymTensor boost_multipliers(const SymTensor& l, const BoostVelocity& v) {
  const int n = l.rank();
  const Vec4 u = v.four();
  SymTensor out = l;
  SymTensor reduced = l;
  for (int i = 1; i <= n; ++i) {
    reduced = contract_vector(reduced, u);
    out += static_cast<double>(binomial(n, i)) * sym_outer(vector_power(kTimeVector, i), reduced);
  }
  return out;
}

SymTensor boost_moments(const SymTensor& m, const BoostVelocity& v) {
  const int r = m.rank();
  const Vec4 u = v.four();
  SymTensor out = m;
  for (int i = 1; i <= r; ++i) {
    out += static_cast<double>(binomial(r, i)) * sym_outer(vector_power(u, i), contract_time(m, i));
  }
  return out;
}

void to_json(nlohmann::json& j, const SymTensor& t) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& m : multi_indices(t.rank())) {
    if (t[m] != 0.0) {
      comps.push_back({{"idx", {m.n[0], m.n[1], m.n[2], m.n[3]}}, {"val", t[m]}});
    }
  }
  j = nlohmann::json{{"rank", t.rank()}, {"components", std::move(comps)}};
}

void from_json(const nlohmann::json& j, SymTensor& t) {
  const int rank = j.at("rank").get<int>();
  SymTensor out(rank);
  for (const auto& c : j.at("components")) {
    const auto idx = c.at("idx").get<std::array<int, 4>>();
    const MultiIndex4 m{idx};
    if (!m.valid() || m.rank() != rank) {
      throw InvalidArgument("SymTensor JSON: index does not match rank");
    }
    out[m] = c.at("val").get<double>();
  }
  t = std::move(out);
}

} // namespace mcf
