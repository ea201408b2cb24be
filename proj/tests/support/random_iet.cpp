#include "random_iet.hpp"

#include <algorithm>
#include <numeric>

namespace ietlab::testing {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

QuadNum random_weight(Rng& rng, int max_u, int max_v) {
  return QuadNum(Rational(uniform(rng, 1, max_u)), Rational(uniform(rng, 0, max_v)));
}

std::vector<QuadNum> random_lengths(Rng& rng, std::size_t n, const QuadNum& total) {
  std::vector<QuadNum> w(n);
  QuadNum sum;
  for (auto& x : w) {
    x = random_weight(rng);
    sum += x;
  }
  const QuadNum scale = total / sum;
  for (auto& x : w) x *= scale;
  return w;
}

std::vector<QuadNum> random_q_lengths(Rng& rng, std::size_t n, long q) {
  // n - 1 distinct cut points among 1..q-1.
  std::vector<long> cells(static_cast<std::size_t>(q - 1));
  std::iota(cells.begin(), cells.end(), 1);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::vector<long> cuts(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(n - 1));
  cuts.push_back(0);
  cuts.push_back(q);
  std::sort(cuts.begin(), cuts.end());
  std::vector<QuadNum> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back(QuadNum::fraction(cuts[i + 1] - cuts[i], q));
  return out;
}

Permutation random_realizable(Rng& rng, std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  for (;;) {
    std::shuffle(v.begin(), v.end(), rng);
    Permutation p(v);
    if (p.is_realizable()) return p;
  }
}

Iet random_interval_iet(Rng& rng, std::size_t max_pieces) {
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_pieces)));
  const auto lengths = random_lengths(rng, n);
  return from_lengths(random_realizable(rng, n), lengths);
}

Iet random_q_rational_iet(Rng& rng, long q, std::size_t max_pieces) {
  const auto cap = static_cast<int>(std::min<std::size_t>(max_pieces, static_cast<std::size_t>(q)));
  const auto n = static_cast<std::size_t>(uniform(rng, 1, cap));
  const auto lengths = random_q_lengths(rng, n, q);
  return from_lengths(random_realizable(rng, n), lengths);
}

Iet concatenation(const Domain& domain) {
  std::vector<Piece> pieces;
  QuadNum offset;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    pieces.push_back(Piece{i, QuadNum(0), domain.length(i), 0, offset});
    offset += domain.length(i);
  }
  return Iet(domain, Domain::interval(offset, "line"), std::move(pieces));
}

Iet random_iet_on(Rng& rng, const Domain& domain, std::size_t max_pieces) {
  const Iet p = concatenation(domain);
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_pieces)));
  const auto lengths = random_lengths(rng, n, domain.total_length());
  Iet f = from_lengths_any_total(random_realizable(rng, n), lengths);
  f = Iet(p.target(), p.target(), f.pieces());
  return compose(invert(p), compose(f, p));
}

Domain random_domain(Rng& rng, std::size_t max_components, bool circles_only) {
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_components)));
  std::vector<Component> comps;
  for (std::size_t i = 0; i < n; ++i) {
    const bool circle = circles_only || uniform(rng, 0, 1) == 1;
    comps.push_back(Component{circle ? ComponentKind::kCircle : ComponentKind::kInterval,
                              random_weight(rng, 4, 2) / QuadNum(4), (circle ? "C" : "I") + std::to_string(i)});
  }
  return Domain(std::move(comps));
}

Iet random_multi_rotation(Rng& rng, const Domain& domain) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    QuadNum start;
    if (domain.is_circle(i)) start = (random_weight(rng) / QuadNum(7)).mod(domain.length(i));
    pieces.push_back(Piece{i, QuadNum(0), domain.length(i), i, start});
  }
  return Iet(domain, domain, std::move(pieces));
}

}  // namespace ietlab::testing
