#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace onshell {

using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws Error on bad input.
Rational parse_rational(std::string_view text);

/// Canonical text of a rational: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Gaussian rational re + im*i with exact GMP rationals.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& re, const Rational& im) : re_(re), im_(im) {}

  static Scalar imaginary_unit() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] const Rational& re() const { return re_; }
  [[nodiscard]] const Rational& im() const { return im_; }

  [[nodiscard]] bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  [[nodiscard]] bool is_real() const { return sgn(im_) == 0; }
  [[nodiscard]] Scalar conj() const { return {re_, Rational(-im_)}; }
  /// |z|^2, always a non-negative rational.
  [[nodiscard]] Rational norm2() const { return re_ * re_ + im_ * im_; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return {Rational(-a.re_), Rational(-a.im_)}; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Total order (re first, then im). Only used for canonical keys.
  friend std::strong_ordering compare(const Scalar& a, const Scalar& b);

  /// "3/2", "-i", "1/2 + 3*i" (no surrounding parentheses).
  [[nodiscard]] std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

}  // namespace onshell
