#include "ietlab/field/quadnum.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <ostream>

#include "ietlab/errors.hpp"

namespace ietlab {

bool is_valid_radicand(long radicand) {
  if (radicand <= 1) return false;
  Integer d(radicand);
  return !mpz_perfect_square_p(d.get_mpz_t());
}

QuadNum::QuadNum(Rational a, Rational b, long radicand) : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  a_.canonicalize();
  b_.canonicalize();
  if (radicand != kDefaultRadicand && !is_valid_radicand(radicand))
    throw InvalidArgument("radicand must be a positive non-square integer, got " + std::to_string(radicand));
}

QuadNum QuadNum::fraction(long p, long q) {
  if (q == 0) throw InvalidArgument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return QuadNum(r);
}

QuadNum QuadNum::sqrt(long radicand) { return QuadNum(Rational(0), Rational(1), radicand); }

long QuadNum::common_radicand(const QuadNum& x, const QuadNum& y) {
  if (x.d_ == y.d_) return x.d_;
  if (x.is_rational()) return y.d_;
  if (y.is_rational()) return x.d_;
  throw FieldMismatch("cannot combine elements of Q(sqrt(" + std::to_string(x.d_) + ")) and Q(sqrt(" +
                      std::to_string(y.d_) + "))");
}

int QuadNum::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with b^2 D.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * d_;
  const int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // unreachable for non-square D, kept for completeness
  return c > 0 ? sa : sb;
}

int quad_sign(const QuadNum& x) { return x.sign(); }

QuadNum QuadNum::operator-() const {
  QuadNum r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadNum& QuadNum::operator+=(const QuadNum& other) {
  d_ = common_radicand(*this, other);
  a_ += other.a_;
  b_ += other.b_;
  return *this;
}

QuadNum& QuadNum::operator-=(const QuadNum& other) {
  d_ = common_radicand(*this, other);
  a_ -= other.a_;
  b_ -= other.b_;
  return *this;
}

QuadNum& QuadNum::operator*=(const QuadNum& other) {
  const long d = common_radicand(*this, other);
  if (other.is_rational()) {
    a_ *= other.a_;
    b_ *= other.a_;
  } else {
    Rational a = a_ * other.a_ + b_ * other.b_ * d;
    Rational b = a_ * other.b_ + b_ * other.a_;
    a_ = std::move(a);
    b_ = std::move(b);
  }
  d_ = d;
  return *this;
}

QuadNum& QuadNum::operator/=(const QuadNum& other) {
  if (other.is_zero()) throw InvalidArgument("division by zero");
  const long d = common_radicand(*this, other);
  if (other.is_rational()) {
    a_ /= other.a_;
    b_ /= other.a_;
  } else {
    // (a + b s)/(c + e s) = (a + b s)(c - e s)/(c^2 - e^2 D)
    Rational norm = other.a_ * other.a_ - other.b_ * other.b_ * d;
    Rational a = (a_ * other.a_ - b_ * other.b_ * d) / norm;
    Rational b = (b_ * other.a_ - a_ * other.b_) / norm;
    a_ = std::move(a);
    b_ = std::move(b);
  }
  d_ = d;
  return *this;
}

bool operator==(const QuadNum& lhs, const QuadNum& rhs) {
  if (lhs.a_ != rhs.a_ || lhs.b_ != rhs.b_) return false;
  return lhs.is_rational() || lhs.d_ == rhs.d_;
}

std::strong_ordering operator<=>(const QuadNum& lhs, const QuadNum& rhs) {
  const int s = (lhs - rhs).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double QuadNum::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_)); }

Integer QuadNum::floor() const {
  Integer n;
  if (is_rational()) {
    mpz_fdiv_q(n.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
    return n;
  }
  n = std::floor(to_double());
  while (*this < QuadNum(Rational(n))) n -= 1;
  while (!(*this < QuadNum(Rational(n + 1)))) n += 1;
  return n;
}

QuadNum QuadNum::mod(const QuadNum& modulus) const {
  if (modulus.sign() <= 0) throw InvalidArgument("modulus must be positive");
  if (*this >= QuadNum(0) && *this < modulus) return *this;
  const Integer k = (*this / modulus).floor();
  return *this - modulus * QuadNum(Rational(k));
}

std::string QuadNum::str() const {
  if (is_rational()) return a_.get_str();
  // A zero rational part is dropped: "-1/4*sqrt(2)", not "0-1/4*sqrt(2)".
  std::string out = sgn(a_) == 0 ? "" : a_.get_str();
  if (sgn(b_) < 0) out += "-";
  else if (!out.empty()) out += "+";
  out += Rational(abs(b_)).get_str();
  out += "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

std::size_t QuadNum::hash() const {
  std::hash<std::string> h;
  return h(a_.get_str()) * 1000003u ^ h(b_.get_str());
}

namespace {

void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

bool read_digits(std::string_view s, std::size_t& i, std::string& out) {
  const std::size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) return false;
  out.assign(s.substr(start, i - start));
  return true;
}

// rat := int ['/' int], unsigned. Leaves i untouched on failure.
std::optional<Rational> read_unsigned_rational(std::string_view s, std::size_t& i) {
  std::size_t j = i;
  std::string num;
  if (!read_digits(s, j, num)) return std::nullopt;
  std::string den = "1";
  if (j < s.size() && s[j] == '/') {
    std::size_t k = j + 1;
    if (!read_digits(s, k, den)) throw ParseError("expected denominator after '/'", 1, j + 2);
    j = k;
  }
  Integer n(num), d(den);
  if (d == 0) throw ParseError("zero denominator in number literal", 1, i + 1);
  Rational r(n, d);
  r.canonicalize();
  i = j;
  return r;
}

// Matches "*sqrt(<int>)" at i; returns the radicand.
std::optional<long> read_sqrt_suffix(std::string_view s, std::size_t& i) {
  constexpr std::string_view tag = "*sqrt(";
  if (s.substr(i, tag.size()) != tag) return std::nullopt;
  std::size_t j = i + tag.size();
  std::string digits;
  if (!read_digits(s, j, digits)) throw ParseError("expected radicand in sqrt(...)", 1, j + 1);
  if (j >= s.size() || s[j] != ')') throw ParseError("expected ')' after radicand", 1, j + 1);
  const long d = std::stol(digits);
  if (!is_valid_radicand(d)) throw ParseError("radicand must be a positive non-square integer", 1, i + 1);
  i = j + 1;
  return d;
}

}  // namespace

std::optional<QuadNum> QuadNum::parse_prefix(std::string_view text, std::size_t& pos) {
  std::size_t i = pos;
  skip_ws(text, i);
  int sign = 1;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    if (text[i] == '-') sign = -1;
    ++i;
  }
  auto first = read_unsigned_rational(text, i);
  if (!first) return std::nullopt;
  Rational lead = sign * *first;
  if (auto d = read_sqrt_suffix(text, i)) {
    pos = i;
    return QuadNum(Rational(0), lead, *d);
  }
  // Optional irrational tail; only taken when the "*sqrt(" suffix is present.
  std::size_t j = i;
  skip_ws(text, j);
  if (j < text.size() && (text[j] == '+' || text[j] == '-')) {
    const int tail_sign = text[j] == '-' ? -1 : 1;
    std::size_t k = j + 1;
    skip_ws(text, k);
    std::size_t probe = k;
    if (auto coeff = read_unsigned_rational(text, probe)) {
      if (auto d = read_sqrt_suffix(text, probe)) {
        pos = probe;
        return QuadNum(lead, tail_sign * *coeff, *d);
      }
    }
  }
  pos = i;
  return QuadNum(lead);
}

QuadNum QuadNum::parse(std::string_view text) {
  std::size_t pos = 0;
  auto value = parse_prefix(text, pos);
  if (!value) throw ParseError("expected a number literal, got '" + std::string(text) + "'", 1, 1);
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing characters in number literal '" + std::string(text) + "'", 1, pos + 1);
  return *value;
}

QuadNum abs(const QuadNum& x) { return x.sign() < 0 ? -x : x; }
const QuadNum& min(const QuadNum& x, const QuadNum& y) { return y < x ? y : x; }
const QuadNum& max(const QuadNum& x, const QuadNum& y) { return x < y ? y : x; }

std::ostream& operator<<(std::ostream& os, const QuadNum& x) { return os << x.str(); }

}  // namespace ietlab
