#include <mpfr.h>

#include <random>

#include "doctest.h"
#include "ietlab/errors.hpp"
#include "ietlab/field/quadnum.hpp"

using namespace ietlab;

namespace {

QuadNum q(long a, long b) { return QuadNum(Rational(a), Rational(b)); }

// Encloses a + b*sqrt(D) in [lo, hi] with 128-bit directed rounding and
// returns its sign, or 2 when the enclosure straddles zero.
int mpfr_sign(const QuadNum& x) {
  mpfr_t lo, hi, r_lo, r_hi, a;
  mpfr_inits2(128, lo, hi, r_lo, r_hi, a, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(r_lo, x.radicand(), MPFR_RNDN);
  mpfr_sqrt(r_hi, r_lo, MPFR_RNDU);
  mpfr_sqrt(r_lo, r_lo, MPFR_RNDD);
  const Rational& b = x.irrational_part();
  if (sgn(b) >= 0) {
    mpfr_mul_q(lo, r_lo, b.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, r_hi, b.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(lo, r_hi, b.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, r_lo, b.get_mpq_t(), MPFR_RNDU);
  }
  mpfr_set_q(a, x.rational_part().get_mpq_t(), MPFR_RNDD);
  mpfr_add(lo, lo, a, MPFR_RNDD);
  mpfr_set_q(a, x.rational_part().get_mpq_t(), MPFR_RNDU);
  mpfr_add(hi, hi, a, MPFR_RNDU);
  int out = 2;
  if (mpfr_sgn(lo) > 0) out = 1;
  else if (mpfr_sgn(hi) < 0) out = -1;
  else if (mpfr_zero_p(lo) && mpfr_zero_p(hi)) out = 0;
  mpfr_clears(lo, hi, r_lo, r_hi, a, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

TEST_CASE("quad_sign on hand-checked values") {
  CHECK(quad_sign(q(0, 0)) == 0);
  CHECK(quad_sign(q(-1, 1)) == 1);
  CHECK(quad_sign(q(3, -2)) == 1);
  CHECK(quad_sign(q(-3, 2)) == -1);
  CHECK(quad_sign(q(1, -1)) == -1);
  // 99^2 = 9801 < 2 * 70^2 = 9800 + 1: 99 - 70 sqrt 2 is a tiny positive number.
  CHECK(quad_sign(q(99, -70)) == 1);
  CHECK(quad_sign(q(-99, 70)) == -1);
}

TEST_CASE("quad_sign agrees with a 128-bit enclosure on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 50);
  const long radicands[] = {2, 3, 5, 7};
  int decided = 0;
  for (int i = 0; i < 1000; ++i) {
    const long d = radicands[i % 4];
    QuadNum x(Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)), d);
    QuadNum y(Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)), d);
    const int expected = mpfr_sign(x - y);
    if (expected == 2) continue;
    ++decided;
    CHECK(quad_sign(x - y) == expected);
    CHECK(((x < y) == (expected < 0)));
  }
  CHECK(decided > 990);
}

TEST_CASE("arithmetic is exact") {
  const QuadNum r2 = QuadNum::sqrt();
  CHECK(r2 * r2 == QuadNum(2));
  CHECK((r2 - 1) * (r2 + 1) == QuadNum(1));
  CHECK(QuadNum(1) / (r2 - 1) == r2 + 1);
  CHECK_THROWS_AS(r2 / QuadNum(0), InvalidArgument);
  CHECK_THROWS_AS(QuadNum::sqrt(2) + QuadNum::sqrt(3), FieldMismatch);
  CHECK(QuadNum::sqrt(3) + QuadNum(1) > QuadNum(2));
}

TEST_CASE("floor and mod") {
  const QuadNum r2 = QuadNum::sqrt();
  CHECK(r2.floor() == 1);
  CHECK((-r2).floor() == -2);
  CHECK(QuadNum(3).floor() == 3);
  CHECK((r2 * 5).mod(QuadNum(1)) == r2 * 5 - 7);
  CHECK(QuadNum(-1).mod(QuadNum::fraction(1, 3)) == QuadNum(0));
  CHECK(QuadNum::fraction(-1, 4).mod(QuadNum(1)) == QuadNum::fraction(3, 4));
}

TEST_CASE("literal grammar round-trips") {
  CHECK(QuadNum::parse("1/2") == QuadNum::fraction(1, 2));
  CHECK(QuadNum::parse("-3/6") == QuadNum::fraction(-1, 2));
  CHECK(QuadNum::parse("1/2 + 3/4*sqrt(2)") == QuadNum(Rational(1, 2), Rational(3, 4)));
  CHECK(QuadNum::parse("-1-1*sqrt(2)") == q(-1, -1));
  CHECK(QuadNum::parse("1*sqrt(5)") == QuadNum::sqrt(5));
  CHECK(QuadNum::parse("  7 ") == QuadNum(7));
  CHECK_THROWS_AS(QuadNum::parse("1/0"), ParseError);
  CHECK_THROWS_AS(QuadNum::parse("abc"), ParseError);
  CHECK_THROWS_AS(QuadNum::parse("1 + 2"), ParseError);
  CHECK_THROWS_AS(QuadNum::parse("1*sqrt(4)"), ParseError);
  for (const auto& x : {q(0, 0), q(-1, 1), QuadNum(Rational(-5, 3), Rational(7, 11)), QuadNum::sqrt(3)})
    CHECK(QuadNum::parse(x.str()) == x);
  CHECK(q(-1, 1).str() == "-1+1*sqrt(2)");
  CHECK(QuadNum::fraction(6, 4).str() == "3/2");
}

TEST_CASE("hash is consistent with equality") {
  CHECK(QuadNum::fraction(2, 4).hash() == QuadNum::fraction(1, 2).hash());
  CHECK(QuadNum(Rational(1), Rational(0), 3).hash() == QuadNum(1).hash());
  CHECK(QuadNum(Rational(1), Rational(0), 3) == QuadNum(1));
}
