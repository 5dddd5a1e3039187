#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <ostream>

namespace g2inst {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Forward-mode dual number carrying one directional derivative.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(T value) : v(value), d(T(0)) {}  // NOLINT(google-explicit-constructor)
  Dual(int value) : v(T(value)), d(T(0)) {}  // NOLINT(google-explicit-constructor)
  Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.v, -a.d); }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
  friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }
};

using DualD = Dual<double>;

template <class S>
inline bool is_zero(const S& x) { return x == S(0); }

inline bool is_zero(const DualD& x) { return x.v == 0.0 && x.d == 0.0; }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return static_cast<double>(x); }
inline double to_double(const DualD& x) { return x.v; }

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Rational& x) { return std::abs(static_cast<double>(x)); }
inline double abs_value(const DualD& x) { return std::abs(x.v) + std::abs(x.d); }

}  // namespace g2inst
