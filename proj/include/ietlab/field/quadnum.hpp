#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace ietlab {

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonicalizes the results of every arithmetic operation).
using Rational = mpq_class;
using Integer = mpz_class;

/// Radicand used when none is given explicitly.
inline constexpr long kDefaultRadicand = 2;

/// Exact element a + b*sqrt(D) of the real quadratic field Q(sqrt(D)).
///
/// D is carried by each value. A value with b == 0 is a plain rational and
/// combines freely with any field; combining two irrational values whose
/// radicands differ throws FieldMismatch. The order is the real order and is
/// decided with integer arithmetic only.
class QuadNum {
 public:
  QuadNum() = default;
  QuadNum(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  QuadNum(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QuadNum(Rational a, Rational b, long radicand = kDefaultRadicand);

  /// p/q as a rational QuadNum.
  static QuadNum fraction(long p, long q);
  /// sqrt(D) itself.
  static QuadNum sqrt(long radicand = kDefaultRadicand);

  const Rational& rational_part() const noexcept { return a_; }
  const Rational& irrational_part() const noexcept { return b_; }
  long radicand() const noexcept { return d_; }
  bool is_rational() const noexcept { return sgn(b_) == 0; }
  bool is_zero() const noexcept { return sgn(a_) == 0 && sgn(b_) == 0; }

  /// Sign of the real number a + b*sqrt(D).
  int sign() const;

  QuadNum operator-() const;
  QuadNum& operator+=(const QuadNum& other);
  QuadNum& operator-=(const QuadNum& other);
  QuadNum& operator*=(const QuadNum& other);
  /// Throws InvalidArgument on division by zero.
  QuadNum& operator/=(const QuadNum& other);

  friend QuadNum operator+(QuadNum lhs, const QuadNum& rhs) { return lhs += rhs; }
  friend QuadNum operator-(QuadNum lhs, const QuadNum& rhs) { return lhs -= rhs; }
  friend QuadNum operator*(QuadNum lhs, const QuadNum& rhs) { return lhs *= rhs; }
  friend QuadNum operator/(QuadNum lhs, const QuadNum& rhs) { return lhs /= rhs; }

  friend bool operator==(const QuadNum& lhs, const QuadNum& rhs);
  friend std::strong_ordering operator<=>(const QuadNum& lhs, const QuadNum& rhs);

  /// Largest integer n with n <= value.
  Integer floor() const;
  /// value - modulus * floor(value / modulus), in [0, modulus). modulus > 0.
  QuadNum mod(const QuadNum& modulus) const;

  double to_double() const;

  /// Canonical literal: "a" or "a+b*sqrt(D)" / "a-b*sqrt(D)", rationals as
  /// "n" or "n/d" in lowest terms, no spaces.
  std::string str() const;

  /// Parses the literal grammar
  ///   literal := [sign] rat [ ws* ('+'|'-') ws* rat '*sqrt(' int ')' ]
  ///            | [sign] rat '*sqrt(' int ')'
  ///   rat     := int [ '/' int ]
  /// The whole string must be consumed (surrounding whitespace allowed).
  static QuadNum parse(std::string_view text);

  /// Parses one literal at the front of `text`, advancing `pos`. Returns
  /// nullopt (with `pos` untouched) when no literal starts there.
  static std::optional<QuadNum> parse_prefix(std::string_view text, std::size_t& pos);

  std::size_t hash() const;

 private:
  static long common_radicand(const QuadNum& x, const QuadNum& y);

  Rational a_{0};
  Rational b_{0};
  long d_ = kDefaultRadicand;
};

/// Sign of x as a real number, computed with integer arithmetic.
int quad_sign(const QuadNum& x);

QuadNum abs(const QuadNum& x);
const QuadNum& min(const QuadNum& x, const QuadNum& y);
const QuadNum& max(const QuadNum& x, const QuadNum& y);

std::ostream& operator<<(std::ostream& os, const QuadNum& x);

/// True iff `radicand` is an integer > 1 that is not a perfect square.
bool is_valid_radicand(long radicand);

struct QuadNumHash {
  std::size_t operator()(const QuadNum& x) const { return x.hash(); }
};

}  // namespace ietlab
