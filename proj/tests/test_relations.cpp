#include <cmath>

#include "doctest.h"
#include "ietlab/errors.hpp"
#include "ietlab/relations/relations.hpp"
#include "support/random_iet.hpp"

using namespace ietlab;
using ietlab::testing::Rng;

namespace {

QuadNum fr(long p, long q) { return QuadNum::fraction(p, q); }
const QuadNum kR2 = QuadNum::sqrt();
const QuadNum kA = kR2 - 1;

Word w(std::string_view text) { return Word::parse(text); }

// Common amplitude of h on the arc [a, b) of an interval domain, if any.
std::optional<QuadNum> translation_on(const Iet& h, const QuadNum& a, const QuadNum& b) {
  std::optional<QuadNum> amp;
  for (const auto& p : h.elementary_pieces()) {
    if (p.src_start + p.length <= a || p.src_start >= b) continue;
    QuadNum t = p.dst_start - p.src_start;
    if (amp && *amp != t) return std::nullopt;
    amp = t;
  }
  return amp;
}

// Product of rotations of consecutive blocks of [0,1), block i rotated by shift[i] <= its length.
Iet block_rotations(const std::vector<QuadNum>& blocks, const std::vector<QuadNum>& shift) {
  std::vector<Piece> pieces;
  QuadNum b;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (shift[i].is_zero()) {
      pieces.push_back(Piece{0, b, blocks[i], 0, b});
    } else {
      pieces.push_back(Piece{0, b, blocks[i] - shift[i], 0, b + shift[i]});
      pieces.push_back(Piece{0, b + blocks[i] - shift[i], shift[i], 0, b});
    }
    b += blocks[i];
  }
  Domain d = Domain::interval();
  return Iet(d, d, std::move(pieces));
}

Iet near_identity(Rng& rng, const QuadNum& eps) {
  const std::size_t k = 1 + rng() % 5;
  auto blocks = testing::random_lengths(rng, k);
  std::vector<QuadNum> shift;
  for (const auto& len : blocks) {
    QuadNum s = eps * fr(static_cast<long>(rng() % 11), 10);
    if (rng() % 3 == 0) s = s * kR2 / 2;
    shift.push_back(min(s, len / 2));
  }
  return block_rotations(blocks, shift);
}

Iet swap_quarters_on_circle() {
  Domain d = Domain::circle(QuadNum(1));
  return Iet(d, d, {Piece{0, QuadNum(0), fr(1, 4), 0, fr(1, 4)}, Piece{0, fr(1, 4), fr(1, 4), 0, QuadNum(0)},
                    Piece{0, fr(1, 2), fr(1, 2), 0, fr(1, 2)}});
}

}  // namespace

TEST_CASE("free_reduce examples") {
  CHECK(free_reduce(w("s t t^-1 s^-1")).empty());
  Word c = commutator(w("s^2"), w("t s^2 t^-1"));
  CHECK(c.size() == 12);
  CHECK(free_reduce(c) == c);
  CHECK(c.str() == "s^-2 t s^-2 t^-1 s^2 t s^2 t^-1");

  Word u = commutator(commutator(w("t"), w("s")), w("s"));
  for (long k = 1; k <= 4; ++k) {
    Word r = free_reduce(commutator(u, conjugate(Word::power_of(1, k), u)));
    CHECK_FALSE(r.empty());
    CHECK(free_reduce(r) == r);
  }
}

TEST_CASE("word parsing and printing") {
  CHECK(w("S T s t") == w("s^-1 t^-1 s t"));
  CHECK(w("1").empty());
  CHECK(w("s^3 t^-2").str() == "s^3 t^-2");
  CHECK(w("s^0").empty());
  CHECK_THROWS_AS(w("s x"), ParseError);
  CHECK_THROWS_AS(w("s^"), ParseError);
  CHECK(w("s t").inverse() == w("t^-1 s^-1"));
}

TEST_CASE("evaluate composes right to left") {
  Iet s = Iet::interval_rotation(fr(1, 3));
  Iet t = from_lengths(Permutation({2, 1, 3}), std::vector<QuadNum>{fr(1, 4), fr(1, 4), fr(1, 2)});
  const Iet gens[] = {s, t};
  CHECK(evaluate(w("s t"), gens) == compose(s, t));
  CHECK(evaluate(w("s^3"), gens).is_identity());
  CHECK(evaluate(w("s^-1 t^2"), gens) == invert(s));
  CHECK(evaluate(Word(), gens).is_identity());
  CHECK_THROWS_AS(evaluate(Word::power_of(2, 1), gens), InvalidArgument);
}

TEST_CASE("free_ball sizes") {
  // 1 + 2k sum_{j<R} (2k-1)^j reduced words.
  CHECK(free_ball(2, 0).size() == 1);
  CHECK(free_ball(2, 4).size() == 161);
  CHECK(free_ball(1, 5).size() == 11);
  CHECK(free_ball(3, 2).size() == 1 + 6 + 30);
  for (const auto& x : free_ball(2, 4)) CHECK(free_reduce(x) == x);
}

TEST_CASE("small_rotation_power examples") {
  CHECK(small_rotation_power(Iet::identity(Domain::circle(QuadNum(1))), fr(1, 1000)) == 1);
  CHECK(small_rotation_power(Iet::circle_rotation(kA), fr(1, 100)) == 169);
  CHECK(small_rotation_power(Iet::circle_rotation(fr(1, 5)), fr(1, 2)) == 1);
  CHECK(small_rotation_power(Iet::circle_rotation(fr(1, 5)), fr(1, 100)) == 5);
  CHECK_THROWS_AS(small_rotation_power(Iet::circle_rotation(kA), fr(1, 100), 100), CapExceeded);
  CHECK_THROWS_AS(small_rotation_power(Iet::interval_rotation(fr(1, 2)), fr(1, 2)), InvalidArgument);
}

TEST_CASE("small_rotation_power against a floating-point scan") {
  // Oracle: n * (sqrt 2 - 1) in doubles, far from the eps/2 threshold for n <= 169.
  const double a = std::sqrt(2.0) - 1.0;
  long first = 0;
  for (long n = 1; n <= 1000 && !first; ++n) {
    const double frac = n * a - std::floor(n * a);
    if (std::min(frac, 1 - frac) <= 0.005) first = n;
  }
  CHECK(first == 169);
  // Two circles need a simultaneous return.
  Domain d({Component{ComponentKind::kCircle, QuadNum(1), "A"}, Component{ComponentKind::kCircle, QuadNum(2), "B"}});
  Iet r(d, d, {Piece{0, QuadNum(0), QuadNum(1), 0, fr(1, 3)}, Piece{1, QuadNum(0), QuadNum(2), 1, fr(1, 2)}});
  CHECK(small_rotation_power(r, fr(1, 10)) == 12);
}

TEST_CASE("shrink_support examples") {
  SUBCASE("continuous S on a circle") {
    auto res = shrink_support(Iet::circle_rotation(kA), Iet::circle_rotation(fr(1, 7)));
    CHECK(res.centers.empty());
    CHECK(res.u.is_identity());
  }
  SUBCASE("swap of two quarters") {
    Iet s = swap_quarters_on_circle();
    auto res = shrink_support(Iet::circle_rotation(kA), s, ShrinkConfig{fr(1, 100), 1000});
    CHECK(res.n == 169);
    CHECK_FALSE(res.u.is_identity());
    CHECK(res.support.subset_of(closed_neighbourhood(s.source(), res.centers, fr(1, 100))));
    // d(S) = 3: Delta(S) = Delta(S^-1) = {0, 1/4, 1/2}, so at most 6 balls.
    CHECK(discontinuity_count(s) == 3);
    CHECK(res.centers.size() <= 6);
    CHECK(res.support.maximal_arcs().size() <= 6);
  }
  SUBCASE("interval ends count as centers") {
    auto res = shrink_support(Iet::identity(Domain::interval()), Iet::interval_rotation(fr(1, 3)));
    CHECK(res.centers.size() == 4);
  }
}

TEST_CASE("closed_neighbourhood shapes") {
  Domain c = Domain::circle(QuadNum(1));
  auto n = closed_neighbourhood(c, {Point{0, QuadNum(0)}}, fr(1, 10));
  CHECK(n.contains(Point{0, fr(19, 20)}));
  CHECK(n.contains(Point{0, fr(1, 20)}));
  CHECK(n.measure() == fr(1, 5));
  CHECK(closed_neighbourhood(c, {Point{0, QuadNum(0)}}, fr(1, 2)) == Subdomain::whole(c));
  Domain i = Domain::interval();
  auto m = closed_neighbourhood(i, {Point{0, QuadNum(1)}}, fr(1, 10));
  CHECK(m.measure() == fr(1, 10));
}

TEST_CASE("shrink_support on random pairs") {
  Rng rng(404);
  const QuadNum eps = fr(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    Domain d = testing::random_domain(rng, 2);
    Iet r = testing::random_multi_rotation(rng, d);
    Iet s = testing::random_iet_on(rng, d, 5);
    ShrinkResult res;
    REQUIRE_NOTHROW(res = shrink_support(r, s, ShrinkConfig{eps, 100000}));
    CHECK(res.support.subset_of(closed_neighbourhood(d, res.centers, eps)));
    CHECK(res.u == commutator(commutator(s, power(r, res.n)), power(r, res.n)));
  }
}

TEST_CASE("shrink_support on two circles rotated at different speeds") {
  // S carries pieces between circles, so [S,R^n] is a small translation rather
  // than the identity off Delta(S); n must make R^n move points by eps/4.
  Rng rng(4711);
  const QuadNum eps = fr(1, 100);
  int checked = 0;
  while (checked < 25) {
    Domain d = testing::random_domain(rng, 2, true);
    if (d.size() < 2) continue;
    ++checked;
    Iet r = testing::random_multi_rotation(rng, d);
    Iet s = testing::random_iet_on(rng, d, 5);
    ShrinkResult res;
    REQUIRE_NOTHROW(res = shrink_support(r, s, ShrinkConfig{eps, 1000000}));
    CHECK(res.support.subset_of(closed_neighbourhood(d, shrink_centers(s), eps)));
  }
}

TEST_CASE("commutator of small translations moves points by at most 2 eps") {
  Rng rng(2024);
  const QuadNum eps = fr(1, 40);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
    Iet g = testing::random_interval_iet(rng, 6);
    Iet h = near_identity(rng, eps);
    const auto& piece = g.pieces()[rng() % g.pieces().size()];
    const QuadNum a = piece.src_start + piece.length * fr(static_cast<long>(rng() % 5), 10);
    const QuadNum b = a + piece.length * fr(static_cast<long>(5 + rng() % 5), 10) / 2;
    auto tg = translation_on(g, a, b);
    auto th = translation_on(h, a, b);
    if (!tg || !th) continue;
    auto thg = translation_on(h, a + *tg, b + *tg);
    if (!thg || abs(*th) > eps || abs(*thg) > eps) continue;
    if (b - a <= eps * 4) continue;
    ++checked;
    auto tc = translation_on(commutator(g, h), a + eps * 2, b - eps * 2);
    REQUIRE(tc);
    CHECK(abs(*tc) <= eps * 2);
    CHECK(*tc == *th - *thg);
  }
  CHECK(checked >= 50);
}

TEST_CASE("commuting small translations give the identity inside") {
  Rng rng(77);
  const QuadNum eps = fr(1, 40);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
    Iet g = near_identity(rng, eps);
    Iet h = near_identity(rng, eps);
    const QuadNum a = fr(static_cast<long>(rng() % 80), 100);
    const QuadNum b = a + fr(static_cast<long>(6 + rng() % 15), 100);
    auto tg = translation_on(g, a, b);
    auto th = translation_on(h, a, b);
    if (!tg || !th || abs(*tg) > eps || abs(*th) > eps) continue;
    ++checked;
    auto tc = translation_on(commutator(g, h), a + eps, b - eps);
    REQUIRE(tc);
    CHECK(tc->is_zero());
  }
  CHECK(checked >= 50);
}

TEST_CASE("is_admissible examples") {
  CHECK(is_admissible(Permutation({2, 1})));
  CHECK_FALSE(is_admissible(Permutation({1, 3, 2})));
  CHECK(is_admissible(Permutation({3, 2, 1})));
  CHECK_FALSE(is_admissible(Permutation({2, 1, 3})));
  CHECK_FALSE(is_admissible(Permutation({1})));
  CHECK(is_admissible(Permutation({2, 3, 1})));
}

TEST_CASE("drift_direction examples") {
  auto a = drift_direction(Permutation({2, 1}));
  REQUIRE(a.drift);
  CHECK(a.drift->dl == std::vector<QuadNum>{QuadNum(-1), QuadNum(1)});
  CHECK(a.drift->dr == std::vector<QuadNum>{QuadNum(1), QuadNum(1)});

  auto b = drift_direction(Permutation({3, 2, 1}));
  REQUIRE(b.drift);
  CHECK(b.drift->dl == std::vector<QuadNum>{QuadNum(-2), QuadNum(0), QuadNum(2)});
  CHECK(b.drift->dr == std::vector<QuadNum>{QuadNum(2), QuadNum(4), QuadNum(2)});
  CHECK(b.drift->dr_min == QuadNum(2));
  CHECK(b.drift->dr_max == QuadNum(4));

  auto c = drift_direction(Permutation({1, 3, 2}));
  CHECK_FALSE(c.drift);
  REQUIRE(c.vanishing_coordinate);
  CHECK(*c.vanishing_coordinate == 1);
}

TEST_CASE("drift_direction exhaustively for n <= 6") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& sigma : Permutation::all(n)) {
      auto out = drift_direction(sigma);
      CHECK(out.drift.has_value() == is_admissible(sigma));
      if (out.drift) {
        QuadNum sum;
        for (const auto& x : out.drift->dl) sum += x;
        CHECK(sum.is_zero());
        for (const auto& x : out.drift->dr) CHECK(x >= QuadNum(1));
        // dr agrees with the length-to-translation map used for IETs.
        CHECK(out.drift->dr == translations_from_lengths(sigma, out.drift->dl));
        continue;
      }
      // Oracle: Phi_sigma on a random vector of the hyperplane, coordinate m.
      const std::size_t m = static_cast<std::size_t>(*out.vanishing_coordinate);
      std::vector<QuadNum> v(n);
      QuadNum total;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        v[i] = QuadNum(static_cast<long>(3 * i + 1)) - kR2 * QuadNum(static_cast<long>(i * i));
        total += v[i];
      }
      v[n - 1] = -total;
      CHECK(phi(sigma, v)[m - 1].is_zero());
    }
  }
}

TEST_CASE("drifted examples") {
  const Permutation rev({3, 2, 1});
  const auto dd = *drift_direction(rev).drift;
  const std::vector<QuadNum> l0{fr(1, 4), fr(1, 4), fr(1, 2)};
  const Iet t0 = from_lengths(rev, l0);

  CHECK(drifted(t0, QuadNum(0), dd) == t0);

  const QuadNum theta = fr(1, 100);
  const Iet t = drifted(t0, theta, dd);
  auto coding = interval_coding(t);
  CHECK(coding.sigma == rev);
  CHECK(coding.lengths == std::vector<QuadNum>{fr(1, 4) - fr(1, 50), fr(1, 4), fr(1, 2) + fr(1, 50)});
  auto before = piece_amplitudes(t0);
  auto after = piece_amplitudes(t);
  CHECK(after[0] - before[0] == theta * 2);
  CHECK(after[1] - before[1] == theta * 4);
  CHECK(after[2] - before[2] == theta * 2);

  CHECK_THROWS_AS(drifted(t0, fr(1, 8), dd), InvalidArgument);
  CHECK_THROWS_AS(drifted(Iet::interval_rotation(fr(1, 3)), theta, dd), InvalidArgument);
}

TEST_CASE("relation_certificate for commuting rotations") {
  Iet r = Iet::interval_rotation(fr(1, 2));
  auto cert = relation_certificate(r, r, 2);
  REQUIRE(cert);
  CHECK(cert->u.is_identity());
  CHECK(cert->k == 0);
  CHECK(cert->exponent == 2);
  CHECK(cert->word == commutator(w("s^2"), w("t s^2 t^-1")));
  CHECK(free_reduce(cert->word).size() == 12);
}

TEST_CASE("relation_certificate near the half-swap with q = 2") {
  // Every transformation of IET_(2,1) is a rotation, so S and T commute and U
  // is already trivial.
  const Permutation p({2, 1});
  const auto dd = *drift_direction(p).drift;
  const Iet t = drifted(from_lengths(p, std::vector<QuadNum>{fr(1, 2), fr(1, 2)}), fr(1, 64), dd);
  const Iet s = from_lengths(p, std::vector<QuadNum>{fr(1, 2) + kR2 / 1000, fr(1, 2) - kR2 / 1000});
  RelationOptions opts;
  opts.drift = dd;
  auto cert = relation_certificate(s, t, 2, opts);
  REQUIRE(cert);
  CHECK(cert->k == 0);
  CHECK(cert->epsilon == fr(1, 200));
  const Iet gens[] = {s, t};
  CHECK(evaluate(cert->word, gens).is_identity());
  CHECK_FALSE(free_reduce(cert->word).empty());
}

TEST_CASE("relation_certificate with a nontrivial U") {
  // S near the swap of [0,1/4) and [1/4,1/2); T a drifted 4-rational reversal.
  const Permutation rev({3, 2, 1});
  const auto dd = *drift_direction(rev).drift;
  const Iet t = drifted(from_lengths(rev, std::vector<QuadNum>{fr(1, 4), fr(1, 4), fr(1, 2)}), fr(1, 4096), dd);
  const QuadNum eta = kR2 / 100000;
  const Iet s = from_lengths(Permutation({2, 1, 3}), std::vector<QuadNum>{fr(1, 4) + eta, fr(1, 4), fr(1, 2) - eta});
  RelationOptions opts;
  opts.drift = dd;
  opts.k_cap = 100;
  auto cert = relation_certificate(s, t, 4, opts);
  REQUIRE(cert);
  CHECK(cert->exponent == 12);
  CHECK(cert->epsilon == fr(1, 800));
  CHECK(cert->k >= 1);
  CHECK_FALSE(cert->u.is_identity());
  CHECK(cert->support_near_grid);
  Iet tk = power(t, cert->k);
  CHECK(support(conjugate(tk, cert->u)).intersect(cert->support_u).empty());
  const Iet gens[] = {s, t};
  CHECK(evaluate(cert->word, gens).is_identity());
  CHECK_FALSE(free_reduce(cert->word).empty());
  // The bare commutator U is not a relation.
  CHECK_FALSE(evaluate(commutator(w("s^12"), w("t s^12 t^-1")), gens).is_identity());
}

TEST_CASE("relation_certificate may fail softly") {
  const Iet s = from_lengths(Permutation({3, 2, 1}), std::vector<QuadNum>{kA / 2, fr(1, 3), 1 - kA / 2 - fr(1, 3)});
  const Iet t = from_lengths(Permutation({2, 1}), std::vector<QuadNum>{kA, 1 - kA});
  RelationOptions opts;
  opts.k_cap = 3;
  std::optional<RelationCertificate> cert;
  CHECK_NOTHROW(cert = relation_certificate(s, t, 3, opts));
  if (cert) {
    const Iet gens[] = {s, t};
    CHECK(evaluate(cert->word, gens).is_identity());
  }
  CHECK_THROWS_AS(relation_certificate(s, t, 1), InvalidArgument);
}
