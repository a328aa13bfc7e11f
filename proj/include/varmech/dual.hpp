#pragma once

#include <cmath>

namespace varmech {

// Forward-mode dual numbers. Dual<double> carries one directional derivative;
// Dual<Dual<double>> nests to second order, which is as deep as the engine
// needs (velocity Hessians and gradients of gradients).

template <class T>
struct Dual {
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v), der(0.0) {}  // NOLINT: implicit constants
  constexpr Dual(T v, T d) : val(std::move(v)), der(std::move(d)) {}

  constexpr Dual operator-() const { return {-val, -der}; }

  constexpr Dual operator+(const Dual& o) const { return {val + o.val, der + o.der}; }
  constexpr Dual operator-(const Dual& o) const { return {val - o.val, der - o.der}; }
  constexpr Dual operator*(const Dual& o) const {
    return {val * o.val, der * o.val + val * o.der};
  }
  constexpr Dual operator/(const Dual& o) const {
    return {val / o.val, (der * o.val - val * o.der) / (o.val * o.val)};
  }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

// Mixed arithmetic with plain doubles.
template <class T> constexpr Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T> constexpr Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T> constexpr Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <class T> constexpr Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <class T> constexpr Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.val); }

inline bool all_zero(double x) { return x == 0.0; }
template <class T>
bool all_zero(const Dual<T>& x) { return all_zero(x.val) && all_zero(x.der); }

/// True when the derivative parts at every nesting level vanish, i.e. the
/// quantity is a constant of the differentiation.
inline bool is_constant(double) { return true; }
template <class T>
bool is_constant(const Dual<T>& x) { return all_zero(x.der) && is_constant(x.val); }

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.val), cos(x.val) * x.der};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.val), T(0.0) - sin(x.val) * x.der};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.val);
  return {e, e * x.der};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.val);
  return {s, x.der / (2.0 * s)};
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.val), x.der / x.val};
}

inline double pow_const(double u, double c) { return std::pow(u, c); }
template <class T>
Dual<T> pow_const(const Dual<T>& u, double c) {
  if (c == 0.0) return Dual<T>(1.0);
  if (c == 1.0) return u;
  return {pow_const(u.val, c), c * pow_const(u.val, c - 1.0) * u.der};
}

/// u^v. When the exponent carries no derivative (the usual literal-exponent
/// case) the constant-exponent rule applies and negative bases with integer
/// exponents work; otherwise the general exp(v log u) form is used, which
/// requires u > 0.
template <class T>
Dual<T> pow(const Dual<T>& u, const Dual<T>& v) {
  if (is_constant(v)) return pow_const(u, value_of(v));
  return exp(v * log(u));
}

inline bool dual_finite(double x) { return std::isfinite(x); }
template <class T>
bool dual_finite(const Dual<T>& x) { return dual_finite(x.val) && dual_finite(x.der); }

}  // namespace varmech
