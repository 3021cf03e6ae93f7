#pragma once

// Scalar types and the small arithmetic vocabulary shared by all modules.
//
// Model data (paths, payoffs, prices) is always held as exact rationals.
// Solvers are templated on the scalar: `Rational` for exact work, `double`
// for large instances, with the tolerance passed explicitly.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <string>
#include <string_view>

namespace rip {

using Rational = mpq_class;

enum class NumericMode { kRational, kFloat };

/// Default tolerances for float mode.
inline constexpr double kSolverTolerance = 1e-9;
inline constexpr double kLabelTolerance = 1e-12;
inline constexpr double kDualityTolerance = 1e-7;

/// Parses "p/q", integers and decimals ("0.25", "-1.5e-3") exactly.
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q" or "p".
std::string to_string(const Rational& value);

template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  static constexpr bool kExact = true;
  static int sign(const Rational& x, double /*tol*/ = 0.0) { return sgn(x); }
  static Rational from(const Rational& x) { return x; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct Arith<double> {
  static constexpr bool kExact = false;
  static int sign(double x, double tol = kSolverTolerance) {
    return x > tol ? 1 : (x < -tol ? -1 : 0);
  }
  static double from(const Rational& x) { return x.get_d(); }
  static double to_double(double x) { return x; }
  static std::string str(double x);
};

template <class T>
bool approx_equal(const T& a, const T& b, double tol) {
  return Arith<T>::sign(T(a - b), tol) == 0;
}

/// A value in R ∪ {−∞}. Superhedging costs and model prices use −∞ for
/// arbitrage atoms and empty measure classes respectively.
template <class T>
class Extended {
 public:
  Extended() : neg_inf_(true), value_() {}
  Extended(T value) : neg_inf_(false), value_(std::move(value)) {}  // NOLINT

  static Extended neg_infinity() { return Extended(); }

  bool is_neg_inf() const { return neg_inf_; }
  bool is_finite() const { return !neg_inf_; }
  const T& value() const { return value_; }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (b.neg_inf_) return false;
    if (a.neg_inf_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }

  std::string str() const { return neg_inf_ ? std::string("-inf") : Arith<T>::str(value_); }

 private:
  bool neg_inf_;
  T value_;
};

template <class T>
Extended<T> max(const Extended<T>& a, const Extended<T>& b) {
  return a < b ? b : a;
}

/// Equality of extended values up to `tol` on the finite part.
template <class T>
bool extended_equal(const Extended<T>& a, const Extended<T>& b, double tol) {
  if (a.is_neg_inf() || b.is_neg_inf()) return a.is_neg_inf() == b.is_neg_inf();
  return approx_equal(a.value(), b.value(), tol);
}

}  // namespace rip
