#include <random>

#include "doctest.h"
#include "ietlab/core/iet.hpp"
#include "ietlab/errors.hpp"
#include "support/random_iet.hpp"

using namespace ietlab;
using ietlab::testing::Rng;

namespace {

QuadNum fr(long p, long q) { return QuadNum::fraction(p, q); }
const QuadNum kA = QuadNum::sqrt() - 1;

Point at(const QuadNum& x, std::size_t c = 0) { return Point{c, x}; }

Iet swap_quarters() {
  Domain d = Domain::interval();
  return Iet(d, d, {Piece{0, fr(0, 1), fr(1, 4), 0, fr(1, 4)}, Piece{0, fr(1, 4), fr(1, 4), 0, fr(0, 1)},
                    Piece{0, fr(1, 2), fr(1, 2), 0, fr(1, 2)}});
}

// Rotation by tau on [0,l), identity on [l,1).
Iet rolled(const QuadNum& l, const QuadNum& tau) {
  Domain d = Domain::interval();
  return Iet(d, d, {Piece{0, QuadNum(0), l - tau, 0, tau}, Piece{0, l - tau, tau, 0, QuadNum(0)},
                    Piece{0, l, 1 - l, 0, l}});
}

// Independent evaluation of h^n as a left-to-right chain of compositions.
Iet chain(const Iet& h, int n) {
  Iet out = Iet::identity(h.source());
  for (int i = 0; i < n; ++i) out = compose(h, out);
  return out;
}

}  // namespace

TEST_CASE("from_lengths examples") {
  const std::vector<QuadNum> halves{fr(1, 2), fr(1, 2)};
  Iet h = from_lengths(Permutation({2, 1}), halves);
  CHECK(equals(h, Iet::interval_rotation(fr(1, 2))));
  REQUIRE(discontinuities(h).size() == 1);
  CHECK(discontinuities(h)[0] == at(fr(1, 2)));

  const std::vector<QuadNum> irr{1 - kA, kA};
  Iet r = from_lengths(Permutation({2, 1}), irr);
  CHECK(r.pieces().size() == 2);
  CHECK(equals(r, Iet::interval_rotation(kA)));
  CHECK(interval_coding(r).lengths == irr);

  const std::vector<QuadNum> rev{fr(1, 4), fr(1, 4), fr(1, 2)};
  Iet t = from_lengths(Permutation({3, 2, 1}), rev);
  CHECK(t.apply(at(0)) == at(fr(3, 4)));
  CHECK(t.apply(at(fr(1, 4))) == at(fr(1, 2)));
  CHECK(t.apply(at(fr(1, 2))) == at(0));
  CHECK(interval_coding(t).sigma == Permutation({3, 2, 1}));
  CHECK(interval_coding(t).lengths == rev);
}

TEST_CASE("from_lengths rejects bad input") {
  const std::vector<QuadNum> halves{fr(1, 2), fr(1, 2)};
  CHECK_THROWS_AS(from_lengths(Permutation({1, 2}), halves), InvalidArgument);
  const std::vector<QuadNum> bad_sum{fr(1, 2), fr(1, 3)};
  CHECK_THROWS_AS(from_lengths(Permutation({2, 1}), bad_sum), InvalidArgument);
  const std::vector<QuadNum> neg{fr(3, 2), fr(-1, 2)};
  CHECK_THROWS_AS(from_lengths(Permutation({2, 1}), neg), InvalidArgument);
}

TEST_CASE("constructor validates partitions") {
  Domain d = Domain::interval();
  CHECK_THROWS_AS(Iet(d, d, {Piece{0, fr(0, 1), fr(1, 2), 0, fr(0, 1)}, Piece{0, fr(1, 4), fr(3, 4), 0, fr(1, 4)}}),
                  InvalidArgument);
  CHECK_THROWS_AS(Iet(d, d, {Piece{0, fr(0, 1), fr(1, 2), 0, fr(0, 1)}, Piece{0, fr(1, 2), fr(1, 2), 0, fr(0, 1)}}),
                  InvalidArgument);
  CHECK_THROWS_AS(Iet(d, Domain::interval(QuadNum(2)), {Piece{0, fr(0, 1), fr(1, 1), 0, fr(0, 1)}}), InvalidArgument);
}

TEST_CASE("compose") {
  Rng rng(1);
  Iet h = testing::random_interval_iet(rng);
  CHECK(equals(compose(Iet::identity(h.source()), h), h));
  Iet r3 = Iet::interval_rotation(fr(1, 3));
  Iet r33 = compose(r3, r3);
  CHECK(equals(r33, Iet::interval_rotation(fr(2, 3))));
  CHECK(discontinuity_count(r33) == 1);
  CHECK(compose(h, invert(h)).is_identity());
  CHECK(discontinuity_count(compose(h, invert(h))) == 0);
  CHECK_THROWS_AS(compose(h, Iet::circle_rotation(kA)), DomainMismatch);
}

TEST_CASE("invert") {
  CHECK(invert(Iet()).is_identity());
  CHECK(equals(invert(Iet::interval_rotation(kA)), Iet::interval_rotation(1 - kA)));
  CHECK(equals(invert(Iet::circle_rotation(kA)), Iet::circle_rotation(1 - kA)));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    Iet h = testing::random_interval_iet(rng);
    CHECK(invert(invert(h)) == h);
  }
}

TEST_CASE("apply") {
  CHECK(Iet().apply(at(fr(2, 7))) == at(fr(2, 7)));
  CHECK(Iet::interval_rotation(fr(1, 3)).apply(at(0)) == at(fr(1, 3)));
  const std::vector<QuadNum> halves{fr(1, 2), fr(1, 2)};
  CHECK(from_lengths(Permutation({2, 1}), halves).apply(at(fr(3, 4))) == at(fr(1, 4)));
  CHECK_THROWS_AS(Iet().apply(at(1)), InvalidArgument);
  CHECK(Iet::circle_rotation(fr(1, 3)).apply(at(fr(5, 6))) == at(fr(1, 6)));
  CHECK(Iet::circle_rotation(fr(1, 3)).apply(at(fr(11, 6))) == at(fr(1, 6)));
}

TEST_CASE("left limits") {
  Iet r = Iet::interval_rotation(fr(1, 3));
  CHECK(r.left_limit(at(fr(2, 3))) == at(1));
  CHECK(r.left_limit(at(1)) == at(fr(1, 3)));
  CHECK(r.left_limit(at(fr(1, 2))) == at(fr(5, 6)));
  CHECK_THROWS_AS(r.left_limit(at(0)), InvalidArgument);
  Iet c = Iet::circle_rotation(fr(1, 3));
  CHECK(c.left_limit(at(0)) == at(fr(1, 3)));
}

TEST_CASE("discontinuities") {
  CHECK(discontinuities(Iet()).empty());
  auto d = discontinuities(Iet::interval_rotation(kA));
  REQUIRE(d.size() == 1);
  CHECK(d[0] == at(1 - kA));
  CHECK(discontinuities(Iet::circle_rotation(kA)).empty());
  CHECK(discontinuity_count(swap_quarters()) == 2);
  // The swap of two arcs of a circle is discontinuous at three points.
  Domain c = Domain::circle();
  Iet cs(c, c, {Piece{0, fr(0, 1), fr(1, 4), 0, fr(1, 4)}, Piece{0, fr(1, 4), fr(1, 4), 0, fr(0, 1)},
                Piece{0, fr(1, 2), fr(1, 2), 0, fr(1, 2)}});
  CHECK(discontinuity_count(cs) == 3);
}

TEST_CASE("support") {
  CHECK(support(Iet()).empty());
  CHECK(support(rolled(fr(3, 4), fr(1, 4))) == Subdomain(Domain::interval(), {Arc{0, fr(0, 1), fr(3, 4)}}));
  CHECK(support(swap_quarters()) == Subdomain(Domain::interval(), {Arc{0, fr(0, 1), fr(1, 2)}}));
  CHECK(support(Iet::circle_rotation(kA)) == Subdomain::whole(Domain::circle()));
}

TEST_CASE("power") {
  Rng rng(3);
  Iet h = testing::random_interval_iet(rng);
  CHECK(power(h, 0).is_identity());
  CHECK(power(Iet::interval_rotation(fr(1, 3)), 3).is_identity());
  CHECK(power(h, -1) == invert(h));
  for (int i = 0; i < 20; ++i) {
    Iet g = testing::random_interval_iet(rng);
    for (int n = 1; n <= 8; ++n) CHECK(power(g, n) == chain(g, n));
    CHECK(power(g, -3) == invert(chain(g, 3)));
  }
}

TEST_CASE("translation_vector") {
  const std::vector<QuadNum> halves{fr(1, 2), fr(1, 2)};
  CHECK(translation_vector(from_lengths(Permutation({2, 1}), halves)) == std::vector<QuadNum>{fr(1, 2), fr(-1, 2)});
  CHECK(translation_vector(Iet()) == std::vector<QuadNum>{QuadNum(0)});
  const std::vector<QuadNum> rev{fr(1, 4), fr(1, 4), fr(1, 2)};
  // t_1 = l_3 + l_2, t_2 = -l_1 + l_3, t_3 = -l_1 - l_2.
  CHECK(translation_vector(from_lengths(Permutation({3, 2, 1}), rev)) ==
        std::vector<QuadNum>{fr(3, 4), fr(1, 4), fr(-1, 2)});
}

TEST_CASE("is_q_rational") {
  Iet r = Iet::interval_rotation(fr(1, 3));
  CHECK(is_q_rational(r, 3));
  CHECK(power(r, 6).is_identity());
  for (long q = 1; q <= 12; ++q) CHECK_FALSE(is_q_rational(Iet::interval_rotation(kA), q));
  CHECK(is_q_rational(Iet(), 1));
  CHECK_FALSE(is_q_rational(r, 2));
  CHECK(lcm_up_to(6) == 60);
  CHECK(lcm_up_to(1) == 1);
}

TEST_CASE("equals and canonicalization") {
  Rng rng(4);
  Iet g = testing::random_interval_iet(rng);
  CHECK(equals(g, compose(g, Iet::identity(g.source()))));
  CHECK_FALSE(equals(Iet::interval_rotation(fr(1, 3)), Iet::interval_rotation(fr(2, 3))));
  Domain d = Domain::interval();
  Iet split(d, d, {Piece{0, fr(0, 1), fr(1, 5), 0, fr(1, 3)}, Piece{0, fr(1, 5), fr(7, 15), 0, fr(8, 15)},
                   Piece{0, fr(2, 3), fr(1, 3), 0, fr(0, 1)}});
  CHECK(equals(split, Iet::interval_rotation(fr(1, 3))));
  CHECK(split.pieces().size() == 2);
  CHECK_THROWS_AS(equals(Iet(), Iet::circle_rotation(kA)), DomainMismatch);
  // A rotation split at several points of a circle collapses to one piece.
  Domain c = Domain::circle(QuadNum(2));
  Iet cr(c, c, {Piece{0, fr(1, 2), fr(3, 2), 0, fr(1, 1)}, Piece{0, fr(0, 1), fr(1, 2), 0, fr(1, 2)}});
  CHECK(cr == Iet::circle_rotation(fr(1, 2), QuadNum(2)));
}

TEST_CASE("subadditivity on random pairs") {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    Iet g = testing::random_interval_iet(rng);
    Iet h = testing::random_interval_iet(rng);
    CHECK(discontinuity_count(compose(g, h)) <= discontinuity_count(g) + discontinuity_count(h));
  }
}

TEST_CASE("multi-component IETs") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    Domain d = testing::random_domain(rng);
    Iet g = testing::random_iet_on(rng, d);
    Iet h = testing::random_iet_on(rng, d);
    CHECK(discontinuity_count(compose(g, h)) <= discontinuity_count(g) + discontinuity_count(h));
    CHECK(compose(g, invert(g)).is_identity());
    // supp(g h g^-1) = g(supp h)
    CHECK(support(conjugate(g, h)) == g.image(support(h)));
  }
}

TEST_CASE("conjugation moves d(h^n) by at most d(g) + d(g^-1)") {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    Iet g = testing::random_interval_iet(rng, 5);
    Iet h = testing::random_interval_iet(rng, 5);
    const long bound = static_cast<long>(discontinuity_count(g) + discontinuity_count(invert(g)));
    Iet c = conjugate(g, h);
    Iet cn = Iet::identity(h.source()), hn = cn;
    for (int n = 1; n <= 10; ++n) {
      cn = compose(c, cn);
      hn = compose(h, hn);
      const long diff = static_cast<long>(discontinuity_count(cn)) - static_cast<long>(discontinuity_count(hn));
      CHECK(std::abs(diff) <= bound);
    }
  }
}

TEST_CASE("translation vector agrees with piece amplitudes") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Iet h = testing::random_interval_iet(rng);
    CHECK(translation_vector(h) == piece_amplitudes(h));
  }
}

TEST_CASE("bijectivity on random points") {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    Domain d = testing::random_domain(rng);
    Iet h = testing::random_iet_on(rng, d);
    Iet inv = invert(h);
    for (int k = 0; k < 100; ++k) {
      const std::size_t c = rng() % d.size();
      Point x{c, (testing::random_weight(rng) / QuadNum(40)).mod(d.length(c))};
      CHECK(inv.apply(h.apply(x)) == x);
      CHECK(compose(inv, h).apply(x) == x);
    }
  }
}

TEST_CASE("subdomain algebra") {
  Domain c = Domain::circle();
  Subdomain a(c, {Arc{0, fr(3, 4), fr(1, 2)}});
  CHECK(a.parts().size() == 2);
  CHECK(a.maximal_arcs().size() == 1);
  CHECK(a.measure() == fr(1, 2));
  Subdomain b(c, {Arc{0, fr(0, 1), fr(1, 2)}});
  CHECK(a.intersect(b) == Subdomain(c, {Arc{0, fr(0, 1), fr(1, 4)}}));
  CHECK(a.unite(b).measure() == fr(3, 4));
  CHECK(a.subtract(b) == Subdomain(c, {Arc{0, fr(3, 4), fr(1, 4)}}));
  CHECK(a.contains(at(fr(9, 10))));
  CHECK_FALSE(a.contains(at(fr(1, 2))));
  CHECK(a.str() == "C:[3/4, 1/4)");
  CHECK_THROWS_AS(a.unite(Subdomain::whole(Domain::interval())), DomainMismatch);
}
