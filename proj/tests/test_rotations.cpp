#include "doctest.h"
#include "ietlab/errors.hpp"
#include "ietlab/rotations/rotations.hpp"
#include "support/random_iet.hpp"

using namespace ietlab;
using ietlab::testing::Rng;

namespace {

QuadNum fr(long p, long q) { return QuadNum::fraction(p, q); }
const QuadNum kR2 = QuadNum::sqrt();
const QuadNum kA = kR2 - 1;

// Rotation by tau on [start, start + l) of [0,1), identity elsewhere.
Iet rolled(const QuadNum& l, const QuadNum& tau, const QuadNum& start = QuadNum(0)) {
  Domain d = Domain::interval();
  std::vector<Piece> pieces{Piece{0, start, l - tau, 0, start + tau}, Piece{0, start + l - tau, tau, 0, start}};
  if (start.sign() > 0) pieces.push_back(Piece{0, QuadNum(0), start, 0, QuadNum(0)});
  if (start + l < QuadNum(1)) pieces.push_back(Piece{0, start + l, 1 - start - l, 0, start + l});
  return Iet(d, d, std::move(pieces));
}

Domain two_circles() {
  return Domain({Component{ComponentKind::kCircle, QuadNum(1), "A"}, Component{ComponentKind::kCircle, QuadNum(1), "B"}});
}

Iet multi(const Domain& d, std::vector<QuadNum> angles) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < d.size(); ++i)
    pieces.push_back(Piece{i, QuadNum(0), d.length(i), i, angles[i].mod(d.length(i))});
  return Iet(d, d, std::move(pieces));
}

bool commute(const Iet& a, const Iet& b) { return compose(a, b) == compose(b, a); }

}  // namespace

TEST_CASE("is_virtual_multi_rotation") {
  auto f = is_virtual_multi_rotation(Iet::circle_rotation(kA));
  CHECK(f.virtual_multi_rotation);
  CHECK(f.multi_rotation);
  CHECK_FALSE(is_virtual_multi_rotation(Iet::interval_rotation(kA)).virtual_multi_rotation);
  CHECK(is_virtual_multi_rotation(Iet()).virtual_multi_rotation);
  CHECK(is_virtual_multi_rotation(Iet()).multi_rotation);
  // Exchanging two circles of equal length is continuous but not a multi-rotation.
  Domain d = two_circles();
  Iet swap(d, d, {Piece{0, QuadNum(0), QuadNum(1), 1, QuadNum(0)}, Piece{1, QuadNum(0), QuadNum(1), 0, QuadNum(0)}});
  CHECK(is_virtual_multi_rotation(swap).virtual_multi_rotation);
  CHECK_FALSE(is_virtual_multi_rotation(swap).multi_rotation);
}

TEST_CASE("verify_irrational_circle on the rolled-up example") {
  Iet h = rolled(fr(3, 4), kR2 / 4);
  auto cert = roll_up_two_interval(h, Arc{0, QuadNum(0), fr(3, 4)});
  REQUIRE(cert);
  CHECK(cert->angle == kR2 / 4);
  CHECK(verify_irrational_circle(h, *cert));

  Iet g = rolled(fr(3, 4), fr(1, 4));
  CHECK_FALSE(roll_up_two_interval(g, Arc{0, QuadNum(0), fr(3, 4)}));
  // h|C has order 3, so a forged certificate with its rational angle fails.
  Subdomain part(g.source(), {Arc{0, QuadNum(0), fr(3, 4)}});
  CHECK(power(restrict(g, part), 3).is_identity());
  IrrationalCircleCert forged{part, Iet(restriction_domain(part), Domain::circle(fr(3, 4)),
                                        {Piece{0, QuadNum(0), fr(3, 4), 0, QuadNum(0)}}),
                              fr(1, 4)};
  CHECK_FALSE(verify_irrational_circle(g, forged));
  CHECK_FALSE(verify_irrational_circle(Iet(), IrrationalCircleCert{Subdomain::whole(Domain::interval()),
                                                                   Iet(restriction_domain(Subdomain::whole(Domain::interval())),
                                                                       Domain::circle(), {Piece{0, QuadNum(0), QuadNum(1), 0, QuadNum(0)}}),
                                                                   kA}));
}

TEST_CASE("verify_irrational_circle rejects a wrong conjugator domain") {
  Iet h = rolled(fr(3, 4), kR2 / 4);
  auto cert = roll_up_two_interval(h, Arc{0, QuadNum(0), fr(3, 4)});
  REQUIRE(cert);
  cert->conjugator = Iet::circle_rotation(QuadNum(0), fr(3, 4));
  CHECK_THROWS_AS(verify_irrational_circle(h, *cert), DomainMismatch);
}

TEST_CASE("roll_up_two_interval on the whole interval") {
  Iet h = Iet::interval_rotation(kA);
  auto cert = roll_up_two_interval(h, Arc{0, QuadNum(0), QuadNum(1)});
  REQUIRE(cert);
  CHECK(cert->angle == kA);
  CHECK(conjugate(cert->conjugator, restrict(h, cert->subdomain)) == Iet::circle_rotation(kA));
  CHECK(verify_irrational_circle(h, *cert));
  CHECK_THROWS_AS(roll_up_two_interval(Iet(), Arc{0, QuadNum(0), QuadNum(1)}), InvalidArgument);
  CHECK_THROWS_AS(roll_up_two_interval(h, Arc{0, QuadNum(0), fr(1, 2)}), InvalidArgument);
}

TEST_CASE("decompose_multi_rotation") {
  Domain d = two_circles();
  auto dec = decompose_multi_rotation(multi(d, {kA, kR2 / 2 - fr(1, 2)}));
  REQUIRE(dec);
  CHECK(dec->circles.size() == 2);
  for (const auto& c : dec->circles) CHECK(verify_irrational_circle(multi(d, {kA, kR2 / 2 - fr(1, 2)}), c));
  auto triv = decompose_multi_rotation(Iet());
  REQUIRE(triv);
  CHECK(triv->circles.empty());
  CHECK(support(Iet()).empty());
  const std::vector<QuadNum> l{fr(1, 4), fr(1, 4), fr(1, 2)};
  CHECK_FALSE(decompose_multi_rotation(from_lengths(Permutation({3, 2, 1}), l)));
  auto mixed = decompose_multi_rotation(multi(d, {kA, fr(2, 3)}));
  REQUIRE(mixed);
  CHECK(mixed->circles.size() == 1);
  CHECK(mixed->power == 3);
}

TEST_CASE("restriction to a wrapping arc of a circle") {
  Domain c = Domain::circle();
  // Rotation by 1/8 of the arc [3/4, 1/4) (length 1/2), identity elsewhere.
  Iet h(c, c, {Piece{0, fr(3, 4), fr(3, 8), 0, fr(7, 8)}, Piece{0, fr(1, 8), fr(1, 8), 0, fr(3, 4)},
               Piece{0, fr(1, 4), fr(1, 2), 0, fr(1, 4)}});
  Subdomain part(c, {Arc{0, fr(3, 4), fr(1, 2)}});
  Iet r = restrict(h, part);
  CHECK(r.source().size() == 1);
  CHECK(r == Iet::interval_rotation(fr(1, 8), fr(1, 2), "C@3/4"));
  CHECK_THROWS_AS(restrict(h, Subdomain(c, {Arc{0, fr(3, 4), fr(1, 4)}})), InvalidArgument);
}

TEST_CASE("elements commuting with an irrational circle rotation are continuous") {
  Rng rng(21);
  const Iet r = Iet::circle_rotation(kA);
  int commuting = 0;
  for (int i = 0; i < 200; ++i) {
    Iet g = i % 3 == 0 ? testing::random_multi_rotation(rng, Domain::circle())
                       : testing::random_iet_on(rng, Domain::circle(), 4);
    if (commute(g, r)) {
      ++commuting;
      CHECK(discontinuity_count(g) == 0);
    }
  }
  CHECK(commuting > 0);
}

TEST_CASE("commuting conjugates imply commuting") {
  // S ranges over conjugates of irrational multi-rotations, T over irrational
  // multi-rotations; whenever S^n T S^-n commutes with T for n <= 6, S and T commute.
  Rng rng(22);
  Domain d = two_circles();
  int premises = 0;
  for (int i = 0; i < 40; ++i) {
    Iet t = multi(d, {kA, i % 2 ? QuadNum(0) : kR2 / 3});
    Iet g = i % 4 == 0 ? Iet::identity(d) : testing::random_iet_on(rng, d, 3);
    Iet s = conjugate(g, multi(d, {kR2 / 5, kR2 / 7}));
    bool all = true;
    for (int n = 1; n <= 6 && all; ++n) all = commute(conjugate(power(s, n), t), t);
    if (all) {
      ++premises;
      CHECK(commute(s, t));
    }
  }
  CHECK(premises > 0);
}

TEST_CASE("irrational circles of one map are disjoint or equal") {
  // Two disjoint rolled-up circles inside [0,1), plus a conjugated copy.
  Domain d = Domain::interval();
  Iet a = rolled(fr(1, 4), kR2 / 8);
  Iet b = rolled(fr(1, 2), kR2 / 5, fr(1, 2));
  Iet t = compose(a, b);
  std::vector<IrrationalCircleCert> certs;
  for (const Arc& arc : {Arc{0, QuadNum(0), fr(1, 4)}, Arc{0, fr(1, 2), fr(1, 2)}}) {
    auto c = roll_up_two_interval(t, arc);
    REQUIRE(c);
    REQUIRE(verify_irrational_circle(t, *c));
    certs.push_back(*c);
  }
  certs.push_back(certs[0]);
  for (std::size_t i = 0; i < certs.size(); ++i)
    for (std::size_t j = 0; j < certs.size(); ++j) {
      const Subdomain inter = certs[i].subdomain.intersect(certs[j].subdomain);
      CHECK((inter.empty() || certs[i].subdomain == certs[j].subdomain));
    }
}
