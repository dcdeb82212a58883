#pragma once

/// Forward-mode dual numbers with a vector of partials.
///
/// `Dual<double>` carries a value and its gradient; nesting gives higher
/// derivatives: `Dual<Dual<double>>` holds value, gradient and Hessian, and
/// so on. All geometric operations in the library are written against a
/// generic scalar `T` and obtain derivatives by lifting their inputs one
/// level (`Dual<T>`), so an operation that needs first derivatives of a
/// field can itself be differentiated by calling it with `T = Dual<...>`.
///
/// Invariant: partial slots at index >= count() are zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>

namespace haantjes {

/// Largest chart dimension supported by the fixed-capacity partial storage.
inline constexpr int kMaxDim = 6;

template <class T>
class Dual {
 public:
  using value_type = T;

  Dual() = default;
  Dual(double c) : value_(c) {}  // NOLINT(google-explicit-constructor): constants

  static Dual constant(const T& v) {
    Dual r;
    r.value_ = v;
    return r;
  }

  /// Independent variable number `index` out of `count`.
  static Dual variable(const T& v, int index, int count) {
    Dual r;
    r.value_ = v;
    r.count_ = count;
    r.partials_[index] = T(1.0);
    return r;
  }

  const T& value() const { return value_; }
  int count() const { return count_; }
  const T& partial(int i) const { return partials_[i]; }

  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  Dual& operator/=(const Dual& b) { return *this = *this / b; }

  friend Dual operator-(const Dual& a) {
    Dual r;
    r.value_ = -a.value_;
    r.count_ = a.count_;
    for (int i = 0; i < r.count_; ++i) r.partials_[i] = -a.partials_[i];
    return r;
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.value_ = a.value_ + b.value_;
    r.count_ = std::max(a.count_, b.count_);
    for (int i = 0; i < r.count_; ++i) r.partials_[i] = a.partials_[i] + b.partials_[i];
    return r;
  }

  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.value_ = a.value_ - b.value_;
    r.count_ = std::max(a.count_, b.count_);
    for (int i = 0; i < r.count_; ++i) r.partials_[i] = a.partials_[i] - b.partials_[i];
    return r;
  }

  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.value_ = a.value_ * b.value_;
    r.count_ = std::max(a.count_, b.count_);
    for (int i = 0; i < r.count_; ++i) {
      r.partials_[i] = a.value_ * b.partials_[i] + a.partials_[i] * b.value_;
    }
    return r;
  }

  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.value_;
    const T quotient = a.value_ * inv;
    Dual r;
    r.value_ = quotient;
    r.count_ = std::max(a.count_, b.count_);
    for (int i = 0; i < r.count_; ++i) {
      r.partials_[i] = (a.partials_[i] - quotient * b.partials_[i]) * inv;
    }
    return r;
  }

  friend Dual operator+(const Dual& a, double c) {
    Dual r = a;
    r.value_ = a.value_ + c;
    return r;
  }
  friend Dual operator+(double c, const Dual& a) { return a + c; }
  friend Dual operator-(const Dual& a, double c) { return a + (-c); }
  friend Dual operator-(double c, const Dual& a) { return -a + c; }

  friend Dual operator*(const Dual& a, double c) {
    Dual r;
    r.value_ = a.value_ * c;
    r.count_ = a.count_;
    for (int i = 0; i < r.count_; ++i) r.partials_[i] = a.partials_[i] * c;
    return r;
  }
  friend Dual operator*(double c, const Dual& a) { return a * c; }
  friend Dual operator/(const Dual& a, double c) { return a * (1.0 / c); }

  friend Dual exp(const Dual& a) {
    using std::exp;
    const T e = exp(a.value_);
    return chain(a, e, e);
  }
  friend Dual log(const Dual& a) {
    using std::log;
    return chain(a, log(a.value_), T(1.0) / a.value_);
  }
  friend Dual sin(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, sin(a.value_), cos(a.value_));
  }
  friend Dual cos(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, cos(a.value_), -sin(a.value_));
  }
  friend Dual sqrt(const Dual& a) {
    using std::sqrt;
    const T s = sqrt(a.value_);
    return chain(a, s, T(0.5) / s);
  }

 private:
  static Dual chain(const Dual& a, const T& f, const T& df) {
    Dual r;
    r.value_ = f;
    r.count_ = a.count_;
    for (int i = 0; i < r.count_; ++i) r.partials_[i] = df * a.partials_[i];
    return r;
  }

  T value_{};
  std::array<T, kMaxDim> partials_{};
  int count_ = 0;
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Number of nested derivative levels carried by a scalar type.
template <class T>
struct derivative_depth : std::integral_constant<int, 0> {};
template <class T>
struct derivative_depth<Dual<T>> : std::integral_constant<int, 1 + derivative_depth<T>::value> {};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

/// Deepest scalar type that type-erased fields can be evaluated with.
inline constexpr int kMaxDepth = 4;

inline double primal(double x) { return x; }

template <class T>
double primal(const Dual<T>& x) {
  return primal(x.value());
}

/// x^k for integer k by repeated squaring; k < 0 inverts.
template <class T>
T ipow(const T& x, int k) {
  if (k < 0) return T(1.0) / ipow(x, -k);
  T result(1.0);
  T base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace haantjes
