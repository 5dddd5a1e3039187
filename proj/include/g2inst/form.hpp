#pragma once

// Invariant exterior algebra on S^3 x S^3 over the left-invariant coframe
// (eta_1^+, eta_2^+, eta_3^+, eta_1^-, eta_2^-, eta_3^-), stored as bits 0..5
// of a subset mask.  Coefficients are scalars or su(2) triples over {T_1,T_2,T_3}.

#include "g2inst/scalar.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <utility>
#include <vector>

namespace g2inst::calculus {

using Mask = unsigned;
inline constexpr int kCoframeDim = 6;
inline constexpr Mask kFullMask = 0x3F;

/// Coframe position of eta_i^+ for i in {1,2,3}.
constexpr int plus(int i) { return i - 1; }
/// Coframe position of eta_i^- for i in {1,2,3}.
constexpr int minus(int i) { return i + 2; }

constexpr int degree_of(Mask m) { return std::popcount(m); }

/// Sign of eta_I ^ eta_J relative to eta_{I|J} in increasing order; 0 if I and J overlap.
constexpr int wedge_sign(Mask a, Mask b) {
  if ((a & b) != 0U) return 0;
  int swaps = 0;
  for (int j = 0; j < kCoframeDim; ++j) {
    if ((b >> j) & 1U) swaps += std::popcount(a >> (j + 1));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

/// Mask and permutation sign for an ordered list of coframe positions.
inline std::pair<Mask, int> ordered_mask(std::initializer_list<int> idx) {
  Mask m = 0;
  int sign = 1;
  for (int i : idx) {
    if (i < 0 || i >= kCoframeDim) throw std::domain_error("coframe index out of range");
    const Mask bit = Mask{1} << i;
    const int s = wedge_sign(m, bit);
    if (s == 0) return {0, 0};
    sign *= s;
    m |= bit;
  }
  return {m, sign};
}

enum class ValueKind { Scalar, Su2 };

template <class S>
struct LieValue {
  ValueKind kind = ValueKind::Scalar;
  std::array<S, 3> c{S(0), S(0), S(0)};

  static LieValue scalar(S x) { return LieValue{ValueKind::Scalar, {x, S(0), S(0)}}; }
  static LieValue su2(S x, S y, S z) { return LieValue{ValueKind::Su2, {x, y, z}}; }
  /// Basis element T_i, i in {1,2,3}.
  static LieValue T(int i) {
    LieValue v{ValueKind::Su2, {S(0), S(0), S(0)}};
    v.c[static_cast<std::size_t>(i - 1)] = S(1);
    return v;
  }

  bool is_zero() const {
    return g2inst::is_zero(c[0]) && g2inst::is_zero(c[1]) && g2inst::is_zero(c[2]);
  }
  friend LieValue operator+(LieValue a, const LieValue& b) {
    for (std::size_t k = 0; k < 3; ++k) a.c[k] += b.c[k];
    if (b.kind == ValueKind::Su2) a.kind = ValueKind::Su2;
    return a;
  }
  friend LieValue operator-(LieValue a, const LieValue& b) {
    for (std::size_t k = 0; k < 3; ++k) a.c[k] -= b.c[k];
    if (b.kind == ValueKind::Su2) a.kind = ValueKind::Su2;
    return a;
  }
  friend LieValue operator*(const S& s, LieValue a) {
    for (auto& x : a.c) x = s * x;
    return a;
  }
  friend bool operator==(const LieValue& a, const LieValue& b) { return a.c == b.c; }
};

/// Lie bracket with [T_i, T_j] = 2 eps_ijk T_k; zero whenever a scalar is involved.
template <class S>
LieValue<S> bracket(const LieValue<S>& a, const LieValue<S>& b) {
  if (a.kind == ValueKind::Scalar || b.kind == ValueKind::Scalar) return LieValue<S>::su2(S(0), S(0), S(0));
  const auto& u = a.c;
  const auto& v = b.c;
  return LieValue<S>::su2(S(2) * (u[1] * v[2] - u[2] * v[1]), S(2) * (u[2] * v[0] - u[0] * v[2]),
                          S(2) * (u[0] * v[1] - u[1] * v[0]));
}

template <class S>
class InvariantForm {
 public:
  InvariantForm() : InvariantForm(0, ValueKind::Scalar) {}
  InvariantForm(int degree, ValueKind kind) : degree_(degree), kind_(kind) {
    if (degree < 0 || degree > kCoframeDim) throw std::domain_error("form degree must lie in 0..6");
    for (auto& v : coef_) v = {S(0), S(0), S(0)};
  }

  /// Scalar basis form coef * eta_I for an increasing mask I.
  static InvariantForm basis(Mask m, const S& coef = S(1)) {
    InvariantForm f(degree_of(m), ValueKind::Scalar);
    f.coef_[m][0] = coef;
    return f;
  }
  /// Scalar 1-form eta at coframe position idx.
  static InvariantForm eta(int idx) { return basis(Mask{1} << idx); }
  /// Scalar form coef * eta_{i1} ^ ... ^ eta_{ik} for an arbitrary ordered index list.
  static InvariantForm wedge_of(std::initializer_list<int> idx, const S& coef = S(1)) {
    auto [m, s] = ordered_mask(idx);
    InvariantForm f(static_cast<int>(idx.size()), ValueKind::Scalar);
    if (s != 0) f.coef_[m][0] = S(s) * coef;
    return f;
  }
  /// su(2)-valued form value (x) eta_I.
  static InvariantForm valued(Mask m, const LieValue<S>& value) {
    InvariantForm f(degree_of(m), value.kind);
    f.coef_[m] = value.c;
    return f;
  }
  /// Assemble an su(2)-valued form from three scalar component forms of equal degree.
  static InvariantForm from_components(const InvariantForm& f1, const InvariantForm& f2, const InvariantForm& f3) {
    if (f1.degree_ != f2.degree_ || f2.degree_ != f3.degree_) throw std::domain_error("component degrees differ");
    InvariantForm f(f1.degree_, ValueKind::Su2);
    for (Mask m = 0; m <= kFullMask; ++m) f.coef_[m] = {f1.coef_[m][0], f2.coef_[m][0], f3.coef_[m][0]};
    return f;
  }

  int degree() const { return degree_; }
  ValueKind kind() const { return kind_; }
  bool is_su2() const { return kind_ == ValueKind::Su2; }

  LieValue<S> value(Mask m) const { return LieValue<S>{kind_, coef_[m]}; }
  const S& scalar(Mask m) const { return coef_[m][0]; }
  const std::array<S, 3>& coefficients(Mask m) const { return coef_[m]; }

  void add(Mask m, const LieValue<S>& v) {
    check_mask(m);
    if (v.kind == ValueKind::Su2) kind_ = ValueKind::Su2;
    for (std::size_t k = 0; k < 3; ++k) coef_[m][k] += v.c[k];
  }
  void set(Mask m, const LieValue<S>& v) {
    check_mask(m);
    if (v.kind == ValueKind::Su2) kind_ = ValueKind::Su2;
    coef_[m] = v.c;
  }

  /// Scalar form holding the T_a component (a in {1,2,3}).
  InvariantForm component(int a) const {
    InvariantForm f(degree_, ValueKind::Scalar);
    for (Mask m = 0; m <= kFullMask; ++m) f.coef_[m][0] = coef_[m][static_cast<std::size_t>(a - 1)];
    return f;
  }

  bool is_zero() const {
    for (const auto& v : coef_)
      for (const auto& x : v)
        if (!g2inst::is_zero(x)) return false;
    return true;
  }

  /// Largest absolute coefficient.
  double max_abs() const {
    double r = 0.0;
    for (const auto& v : coef_)
      for (const auto& x : v) r = std::max(r, abs_value(x));
    return r;
  }

  InvariantForm& operator+=(const InvariantForm& o) {
    check_same_degree(o);
    if (o.kind_ == ValueKind::Su2) kind_ = ValueKind::Su2;
    for (Mask m = 0; m <= kFullMask; ++m)
      for (std::size_t k = 0; k < 3; ++k) coef_[m][k] += o.coef_[m][k];
    return *this;
  }
  InvariantForm& operator-=(const InvariantForm& o) {
    check_same_degree(o);
    if (o.kind_ == ValueKind::Su2) kind_ = ValueKind::Su2;
    for (Mask m = 0; m <= kFullMask; ++m)
      for (std::size_t k = 0; k < 3; ++k) coef_[m][k] -= o.coef_[m][k];
    return *this;
  }
  friend InvariantForm operator+(InvariantForm a, const InvariantForm& b) { return a += b; }
  friend InvariantForm operator-(InvariantForm a, const InvariantForm& b) { return a -= b; }
  friend InvariantForm operator-(InvariantForm a) {
    for (auto& v : a.coef_)
      for (auto& x : v) x = -x;
    return a;
  }
  friend InvariantForm operator*(const S& s, InvariantForm a) {
    for (auto& v : a.coef_)
      for (auto& x : v) x = s * x;
    return a;
  }
  friend bool operator==(const InvariantForm& a, const InvariantForm& b) {
    return a.degree_ == b.degree_ && a.coef_ == b.coef_;
  }

  /// Replace every coefficient by f(coefficient); used to change scalar type.
  template <class T, class Fn>
  InvariantForm<T> map(Fn&& fn) const {
    InvariantForm<T> out(degree_, kind_);
    for (Mask m = 0; m <= kFullMask; ++m) {
      if (degree_of(m) != degree_) continue;
      LieValue<T> v{kind_, {fn(coef_[m][0]), fn(coef_[m][1]), fn(coef_[m][2])}};
      out.set(m, v);
    }
    return out;
  }

 private:
  void check_mask(Mask m) const {
    if (m > kFullMask || degree_of(m) != degree_) throw std::domain_error("mask does not match form degree");
  }
  void check_same_degree(const InvariantForm& o) const {
    if (o.degree_ != degree_) throw std::domain_error("cannot add forms of different degree");
  }

  int degree_;
  ValueKind kind_;
  std::array<std::array<S, 3>, 64> coef_{};
};

/// Exterior product; at most one operand may be su(2)-valued.
template <class S>
InvariantForm<S> wedge(const InvariantForm<S>& a, const InvariantForm<S>& b) {
  const int deg = a.degree() + b.degree();
  if (deg > kCoframeDim) throw std::domain_error("wedge degree exceeds 6");
  if (a.is_su2() && b.is_su2()) throw std::domain_error("wedge of two su(2)-valued forms; use bracket_wedge");
  const bool su2 = a.is_su2() || b.is_su2();
  InvariantForm<S> out(deg, su2 ? ValueKind::Su2 : ValueKind::Scalar);
  for (Mask ma = 0; ma <= kFullMask; ++ma) {
    if (degree_of(ma) != a.degree()) continue;
    const auto& ca = a.coefficients(ma);
    if (!a.is_su2() && g2inst::is_zero(ca[0])) continue;
    for (Mask mb = 0; mb <= kFullMask; ++mb) {
      if (degree_of(mb) != b.degree()) continue;
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      const auto& cb = b.coefficients(mb);
      LieValue<S> v{out.kind(), {S(0), S(0), S(0)}};
      if (a.is_su2()) {
        for (std::size_t k = 0; k < 3; ++k) v.c[k] = S(s) * ca[k] * cb[0];
      } else if (b.is_su2()) {
        for (std::size_t k = 0; k < 3; ++k) v.c[k] = S(s) * ca[0] * cb[k];
      } else {
        v.c[0] = S(s) * ca[0] * cb[0];
      }
      out.add(ma | mb, v);
    }
  }
  return out;
}

/// [a ^ b]: exterior product on the form part with the Lie bracket on values.
template <class S>
InvariantForm<S> bracket_wedge(const InvariantForm<S>& a, const InvariantForm<S>& b) {
  if (!a.is_su2() || !b.is_su2()) throw std::domain_error("bracket_wedge needs su(2)-valued forms");
  const int deg = a.degree() + b.degree();
  if (deg > kCoframeDim) throw std::domain_error("wedge degree exceeds 6");
  InvariantForm<S> out(deg, ValueKind::Su2);
  for (Mask ma = 0; ma <= kFullMask; ++ma) {
    if (degree_of(ma) != a.degree()) continue;
    const auto va = a.value(ma);
    if (va.is_zero()) continue;
    for (Mask mb = 0; mb <= kFullMask; ++mb) {
      if (degree_of(mb) != b.degree()) continue;
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      out.add(ma | mb, S(s) * bracket(va, b.value(mb)));
    }
  }
  return out;
}

namespace detail {

struct Term {
  Mask mask;
  int coef;
};

/// d of each coframe element from the Maurer-Cartan relations, as sorted 2-form terms.
inline const std::array<std::vector<Term>, kCoframeDim>& coframe_differentials() {
  static const std::array<std::vector<Term>, kCoframeDim> table = [] {
    std::array<std::vector<Term>, kCoframeDim> t;
    const int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
    auto push = [](std::vector<Term>& v, int p, int q) {
      auto [m, s] = ordered_mask({p, q});
      v.push_back({m, -2 * s});
    };
    for (const auto& c : cyc) {
      const int i = c[0], j = c[1], k = c[2];
      push(t[static_cast<std::size_t>(plus(i))], plus(j), plus(k));
      push(t[static_cast<std::size_t>(plus(i))], minus(j), minus(k));
      push(t[static_cast<std::size_t>(minus(i))], minus(j), plus(k));
      push(t[static_cast<std::size_t>(minus(i))], plus(j), minus(k));
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// Exterior derivative on invariant forms, extended as a graded derivation.
template <class S>
InvariantForm<S> d_invariant(const InvariantForm<S>& a) {
  if (a.degree() == kCoframeDim) return InvariantForm<S>(kCoframeDim, a.kind());
  InvariantForm<S> out(a.degree() + 1, a.kind());
  const auto& dt = detail::coframe_differentials();
  for (Mask m = 0; m <= kFullMask; ++m) {
    if (degree_of(m) != a.degree()) continue;
    const auto v = a.value(m);
    if (v.is_zero()) continue;
    int pos = 0;
    for (int i = 0; i < kCoframeDim; ++i) {
      if (!((m >> i) & 1U)) continue;
      const Mask before = m & ((Mask{1} << i) - 1);
      const Mask after = m & ~((Mask{2} << i) - 1);
      const int ps = (pos % 2 == 0) ? 1 : -1;
      for (const auto& term : dt[static_cast<std::size_t>(i)]) {
        const int s1 = wedge_sign(before, term.mask);
        if (s1 == 0) continue;
        const int s2 = wedge_sign(before | term.mask, after);
        if (s2 == 0) continue;
        out.add(before | term.mask | after, S(ps * s1 * s2 * term.coef) * v);
      }
      ++pos;
    }
  }
  return out;
}

}  // namespace g2inst::calculus
