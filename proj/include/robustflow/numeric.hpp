#pragma once

// Scalar types shared by every solver: exact rationals, binary floating point,
// and an extended-real wrapper that carries an explicit +infinity sentinel.

#include <compare>
#include <gmpxx.h>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace robustflow {

using Rational = mpq_class;

/// Arithmetic-mode policy. Exact mode compares with zero slack, float mode
/// with an absolute tolerance.
template <class T>
struct NumericTraits;

template <>
struct NumericTraits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-9; }
  static const char* name() { return "float"; }
};

template <>
struct NumericTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return Rational(0); }
  static const char* name() { return "exact"; }
};

template <class T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, Rational>;

template <Scalar T>
bool is_positive(const T& x) {
  return x > NumericTraits<T>::tolerance();
}

template <Scalar T>
bool is_negative(const T& x) {
  return x < -NumericTraits<T>::tolerance();
}

template <Scalar T>
bool is_zero(const T& x) {
  return !is_positive(x) && !is_negative(x);
}

template <Scalar T>
bool approx_equal(const T& a, const T& b) {
  return is_zero(T(a - b));
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <Scalar To>
To scalar_cast(const Rational& x) {
  if constexpr (std::is_same_v<To, double>) {
    return x.get_d();
  } else {
    return x;
  }
}

template <Scalar To>
To scalar_cast(double x) {
  return To(x);
}

/// Nonnegative-or-infinite quantity. Infinity is a flag, never a large number.
template <Scalar T>
class Extended {
 public:
  Extended() : value_(0) {}
  Extended(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Extended(int value) : value_(value) {}            // NOLINT(google-explicit-constructor)

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const T& value() const {
    if (infinite_) throw std::logic_error("value() of infinite quantity");
    return value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Extended(T(a.value_ + b.value_));
  }

  /// Product of nonnegative quantities with 0 * inf = 0.
  friend Extended operator*(const Extended& a, const Extended& b) {
    if (a.is_zero() || b.is_zero()) return Extended();
    if (a.infinite_ || b.infinite_) return infinity();
    return Extended(T(a.value_ * b.value_));
  }

  bool is_zero() const { return !infinite_ && value_ == 0; }

 private:
  T value_;
  bool infinite_ = false;
};

template <Scalar T>
Extended<T> min(const Extended<T>& a, const Extended<T>& b) {
  return b < a ? b : a;
}

template <Scalar T>
Extended<T> max(const Extended<T>& a, const Extended<T>& b) {
  return a < b ? b : a;
}

/// Exact conversion between extended scalars of different modes.
template <Scalar To, Scalar From>
Extended<To> extended_cast(const Extended<From>& x) {
  if (x.is_infinite()) return Extended<To>::infinity();
  return Extended<To>(scalar_cast<To>(x.value()));
}

/// Parses an integer, a decimal ("1.25"), or a ratio ("3/2"), optionally
/// signed. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view token);

/// Like parse_rational but also accepts "inf".
Extended<Rational> parse_extended(std::string_view token);

/// Canonical text: "3", "3/2", "-1/4", "inf".
std::string format_rational(const Rational& x);
std::string format_extended(const Extended<Rational>& x);

/// Numeric text for reports. Exact values print canonically, floats with
/// enough digits to round-trip.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

template <Scalar T>
std::string format_scalar(const Extended<T>& x) {
  return x.is_infinite() ? std::string("inf") : format_scalar(x.value());
}

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const Extended<T>& x) {
  return os << format_scalar(x);
}

}  // namespace robustflow
