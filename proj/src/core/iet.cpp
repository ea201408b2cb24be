#include "ietlab/core/iet.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ietlab/errors.hpp"

namespace ietlab {

namespace {

bool piece_less(const Piece& x, const Piece& y) {
  if (x.src_component != y.src_component) return x.src_component < y.src_component;
  return x.src_start < y.src_start;
}

QuadNum reduce(const Domain& d, std::size_t comp, const QuadNum& x) {
  return d.is_circle(comp) ? x.mod(d.length(comp)) : x;
}

// Splits p at `offset` (0 < offset < length) into two pieces.
std::pair<Piece, Piece> split_piece(const Domain& src, const Domain& dst, const Piece& p, const QuadNum& offset) {
  Piece first = p;
  first.length = offset;
  Piece second = p;
  second.length = p.length - offset;
  second.src_start = reduce(src, p.src_component, p.src_start + offset);
  second.dst_start = reduce(dst, p.dst_component, p.dst_start + offset);
  return {first, second};
}

// Appends the non-wrapping parts of p.
void push_elementary(const Domain& src, const Domain& dst, const Piece& p, std::vector<Piece>& out) {
  std::vector<Piece> stage;
  const QuadNum& slen = src.length(p.src_component);
  if (src.is_circle(p.src_component) && p.src_start + p.length > slen) {
    auto [a, b] = split_piece(src, dst, p, slen - p.src_start);
    stage.push_back(a);
    stage.push_back(b);
  } else {
    stage.push_back(p);
  }
  const QuadNum& dlen = dst.length(p.dst_component);
  for (const auto& q : stage) {
    if (dst.is_circle(q.dst_component) && q.dst_start + q.length > dlen) {
      auto [a, b] = split_piece(src, dst, q, dlen - q.dst_start);
      out.push_back(a);
      out.push_back(b);
    } else {
      out.push_back(q);
    }
  }
}

// Checks that the non-wrapping arcs (component, start, length) tile `domain`.
void check_tiling(const Domain& domain, std::vector<Arc> arcs, const char* side) {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
    if (x.component != y.component) return x.component < y.component;
    return x.start < y.start;
  });
  std::size_t i = 0;
  for (std::size_t c = 0; c < domain.size(); ++c) {
    QuadNum cursor(0);
    while (i < arcs.size() && arcs[i].component == c) {
      if (arcs[i].start != cursor)
        throw InvalidArgument(std::string(side) + " pieces do not partition component '" + domain[c].id + "' near " +
                              cursor.str() + (arcs[i].start < cursor ? " (overlap)" : " (gap)"));
      cursor += arcs[i].length;
      ++i;
    }
    if (cursor != domain.length(c))
      throw InvalidArgument(std::string(side) + " pieces cover " + cursor.str() + " of component '" + domain[c].id +
                            "' of length " + domain.length(c).str());
  }
}

QuadNum dst_end(const Domain& dst, const Piece& p) { return reduce(dst, p.dst_component, p.dst_start + p.length); }

bool images_contiguous(const Domain& dst, const Piece& p, const Piece& q) {
  return p.dst_component == q.dst_component && dst_end(dst, p) == q.dst_start;
}

}  // namespace

Iet::Iet() : Iet(identity(Domain::interval())) {}

Iet::Iet(Domain source, Domain target, std::vector<Piece> pieces) : source_(std::move(source)), target_(std::move(target)) {
  canonicalize(std::move(pieces));
}

void Iet::canonicalize(std::vector<Piece> raw) {
  if (source_.total_length() != target_.total_length())
    throw InvalidArgument("source and target domains have different total lengths");
  std::vector<Piece> elem;
  elem.reserve(raw.size() + 4);
  for (auto& p : raw) {
    if (p.src_component >= source_.size() || p.dst_component >= target_.size())
      throw InvalidArgument("piece refers to a component index out of range");
    if (p.length.sign() <= 0) throw InvalidArgument("piece with non-positive length " + p.length.str());
    if (p.src_start.sign() < 0 || p.dst_start.sign() < 0) throw InvalidArgument("piece with negative start");
    p.src_start = reduce(source_, p.src_component, p.src_start);
    p.dst_start = reduce(target_, p.dst_component, p.dst_start);
    push_elementary(source_, target_, p, elem);
  }
  std::vector<Arc> src_arcs, dst_arcs;
  for (const auto& p : elem) {
    src_arcs.push_back(Arc{p.src_component, p.src_start, p.length});
    dst_arcs.push_back(Arc{p.dst_component, p.dst_start, p.length});
  }
  check_tiling(source_, std::move(src_arcs), "source");
  check_tiling(target_, std::move(dst_arcs), "image");

  std::sort(elem.begin(), elem.end(), piece_less);
  std::vector<Piece> out;
  std::size_t i = 0;
  while (i < elem.size()) {
    const std::size_t comp = elem[i].src_component;
    std::vector<Piece> merged;
    for (; i < elem.size() && elem[i].src_component == comp; ++i) {
      if (!merged.empty() && images_contiguous(target_, merged.back(), elem[i])) {
        merged.back().length += elem[i].length;
      } else {
        merged.push_back(elem[i]);
      }
    }
    if (source_.is_circle(comp)) {
      if (merged.size() > 1 && images_contiguous(target_, merged.back(), merged.front())) {
        Piece last = merged.back();
        merged.pop_back();
        last.length += merged.front().length;
        merged.front() = last;
      }
      if (merged.size() == 1 && images_contiguous(target_, merged.front(), merged.front())) {
        // Continuous on the whole circle: a rotation, anchored at 0.
        Piece& p = merged.front();
        p.dst_start = (p.dst_start - p.src_start).mod(target_.length(p.dst_component));
        p.src_start = QuadNum(0);
      }
    }
    out.insert(out.end(), merged.begin(), merged.end());
  }
  std::sort(out.begin(), out.end(), piece_less);
  pieces_ = std::move(out);
}

Iet Iet::identity(const Domain& domain) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < domain.size(); ++i) pieces.push_back(Piece{i, QuadNum(0), domain.length(i), i, QuadNum(0)});
  return Iet(domain, domain, std::move(pieces));
}

Iet Iet::circle_rotation(const QuadNum& angle, const QuadNum& length, std::string id) {
  Domain d = Domain::circle(length, std::move(id));
  return Iet(d, d, {Piece{0, QuadNum(0), length, 0, angle.mod(length)}});
}

Iet Iet::interval_rotation(const QuadNum& angle, const QuadNum& length, std::string id) {
  Domain d = Domain::interval(length, std::move(id));
  const QuadNum a = angle.mod(length);
  if (a.is_zero()) return identity(d);
  return Iet(d, d, {Piece{0, QuadNum(0), length - a, 0, a}, Piece{0, length - a, a, 0, QuadNum(0)}});
}

std::vector<Piece> Iet::elementary_pieces() const {
  std::vector<Piece> out;
  out.reserve(pieces_.size() + 4);
  for (const auto& p : pieces_) push_elementary(source_, target_, p, out);
  std::sort(out.begin(), out.end(), piece_less);
  return out;
}

bool Iet::is_identity() const {
  if (!is_automorphism()) return false;
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
    return p.src_component == p.dst_component && p.src_start == p.dst_start;
  });
}

namespace {

// Index of the canonical piece whose (possibly wrapping) arc contains x, or
// for `from_left` the one containing x - eps.
std::size_t locate(const Domain& src, const std::vector<Piece>& pieces, const Point& x, bool from_left) {
  auto lo = std::lower_bound(pieces.begin(), pieces.end(), x.component,
                             [](const Piece& p, std::size_t c) { return p.src_component < c; });
  auto hi = std::upper_bound(lo, pieces.end(), x.component,
                             [](std::size_t c, const Piece& p) { return c < p.src_component; });
  if (lo == hi) throw InvalidArgument("point outside domain");
  auto it = std::upper_bound(lo, hi, x.coord, [from_left](const QuadNum& v, const Piece& p) {
    return from_left ? v <= p.src_start : v < p.src_start;
  });
  if (it == lo) {
    if (!src.is_circle(x.component)) throw InvalidArgument("point outside domain");
    it = hi;  // wraps around: last piece of the circle
  }
  return static_cast<std::size_t>(std::distance(pieces.begin(), it - 1));
}

}  // namespace

Point Iet::apply(const Point& x0) const {
  const Point x = normalize_point(source_, x0);
  const Piece& p = pieces_[locate(source_, pieces_, x, false)];
  const QuadNum offset = reduce(source_, x.component, x.coord - p.src_start);
  if (!(offset < p.length)) throw VerificationFailure("apply: point not covered by located piece");
  return Point{p.dst_component, reduce(target_, p.dst_component, p.dst_start + offset)};
}

Point Iet::left_limit(const Point& x) const {
  if (x.component >= source_.size()) throw InvalidArgument("point component index out of range");
  const QuadNum& len = source_.length(x.component);
  if (source_.is_circle(x.component)) {
    if (x.coord.sign() < 0 || x.coord >= len) throw InvalidArgument("circle coordinate not reduced");
  } else if (x.coord.sign() <= 0 || x.coord > len) {
    throw InvalidArgument("left limit undefined at " + point_str(source_, x));
  }
  const Piece& p = pieces_[locate(source_, pieces_, x, true)];
  QuadNum offset = source_.is_circle(x.component) ? (x.coord - p.src_start).mod(len) : x.coord - p.src_start;
  if (offset.is_zero()) offset = len;
  if (offset.sign() <= 0 || offset > p.length) throw VerificationFailure("left_limit: located piece does not end at point");
  QuadNum y = p.dst_start + offset;
  if (target_.is_circle(p.dst_component)) y = y.mod(target_.length(p.dst_component));
  return Point{p.dst_component, y};
}

Subdomain Iet::image(const Subdomain& part) const {
  if (!(part.domain() == source_)) throw DomainMismatch("image: subdomain of a different domain");
  std::vector<Arc> arcs;
  const auto elem = elementary_pieces();
  for (const auto& a : part.parts())
    for (const auto& p : elem) {
      if (p.src_component != a.component) continue;
      QuadNum lo = max(a.start, p.src_start);
      QuadNum hi = min(a.start + a.length, p.src_start + p.length);
      if (lo < hi) arcs.push_back(Arc{p.dst_component, p.dst_start + (lo - p.src_start), hi - lo});
    }
  return Subdomain(target_, arcs);
}

namespace {

std::string domain_key(const Domain& d) {
  std::string out;
  for (const auto& c : d.components()) {
    out += c.is_circle() ? "circle " : "interval ";
    out += c.id + " " + c.length.str() + ";";
  }
  return out;
}

}  // namespace

std::string Iet::key() const {
  std::string out = domain_key(source_);
  out += "|";
  if (!(source_ == target_)) out += domain_key(target_);
  out += "|";
  for (const auto& p : pieces_) {
    out += std::to_string(p.src_component) + " " + p.src_start.str() + " " + p.length.str() + " " +
           std::to_string(p.dst_component) + " " + p.dst_start.str() + ";";
  }
  return out;
}

bool operator==(const Iet& lhs, const Iet& rhs) {
  return lhs.source_ == rhs.source_ && lhs.target_ == rhs.target_ && lhs.pieces_ == rhs.pieces_;
}

Iet compose(const Iet& g, const Iet& h) {
  if (!(h.target() == g.source())) throw DomainMismatch("compose: target of h differs from source of g");
  const auto g_elem = g.elementary_pieces();
  const auto h_elem = h.elementary_pieces();
  std::vector<Piece> out;
  out.reserve(g_elem.size() + h_elem.size());
  const Domain& mid = g.source();
  for (const auto& p : h_elem) {
    const QuadNum lo = p.dst_start;
    const QuadNum hi = p.dst_start + p.length;
    // First g piece in p's image component whose end exceeds lo.
    auto it = std::lower_bound(g_elem.begin(), g_elem.end(), p, [](const Piece& q, const Piece& key) {
      if (q.src_component != key.dst_component) return q.src_component < key.dst_component;
      return q.src_start + q.length <= key.dst_start;
    });
    for (; it != g_elem.end() && it->src_component == p.dst_component && it->src_start < hi; ++it) {
      const QuadNum a = max(lo, it->src_start);
      const QuadNum b = min(hi, it->src_start + it->length);
      if (!(a < b)) continue;
      out.push_back(Piece{p.src_component, p.src_start + (a - lo), b - a, it->dst_component,
                          it->dst_start + (a - it->src_start)});
    }
  }
  (void)mid;
  return Iet(h.source(), g.target(), std::move(out));
}

Iet invert(const Iet& h) {
  std::vector<Piece> out;
  for (const auto& p : h.elementary_pieces())
    out.push_back(Piece{p.dst_component, p.dst_start, p.length, p.src_component, p.src_start});
  return Iet(h.target(), h.source(), std::move(out));
}

Iet power(const Iet& h, long long n) {
  if (!h.is_automorphism()) throw DomainMismatch("power of a map between different domains");
  Iet base = n < 0 ? invert(h) : h;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  Iet result = Iet::identity(h.source());
  while (e > 0) {
    if (e & 1u) result = compose(result, base);
    e >>= 1u;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

Iet commutator(const Iet& g, const Iet& h) { return compose(invert(g), compose(invert(h), compose(g, h))); }

Iet conjugate(const Iet& g, const Iet& h) { return compose(g, compose(h, invert(g))); }

std::vector<Point> discontinuities(const Iet& h) {
  std::vector<Point> out;
  const Domain& src = h.source();
  const auto& pieces = h.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (!src.is_circle(p.src_component)) {
      if (!p.src_start.is_zero()) out.push_back(Point{p.src_component, p.src_start});
      continue;
    }
    const bool alone = (i == 0 || pieces[i - 1].src_component != p.src_component) &&
                       (i + 1 == pieces.size() || pieces[i + 1].src_component != p.src_component);
    const bool rotation = alone && h.target().is_circle(p.dst_component) &&
                          h.target().length(p.dst_component) == p.length;
    if (!rotation) out.push_back(Point{p.src_component, p.src_start});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t discontinuity_count(const Iet& h) { return discontinuities(h).size(); }

Subdomain support(const Iet& h) {
  if (!h.is_automorphism()) throw DomainMismatch("support of a map between different domains");
  std::vector<Arc> arcs;
  for (const auto& p : h.elementary_pieces())
    if (p.src_component != p.dst_component || p.src_start != p.dst_start)
      arcs.push_back(Arc{p.src_component, p.src_start, p.length});
  return Subdomain(h.source(), arcs);
}

bool equals(const Iet& g, const Iet& h) {
  if (!(g.source() == h.source()) || !(g.target() == h.target())) throw DomainMismatch("equals: different domains");
  return g.pieces() == h.pieces();
}

Iet from_lengths_any_total(const Permutation& sigma, std::span<const QuadNum> lengths) {
  const std::size_t n = sigma.size();
  if (lengths.size() != n) throw InvalidArgument("need one length per continuity interval");
  if (n == 0) throw InvalidArgument("empty permutation");
  if (!sigma.is_realizable())
    throw InvalidArgument("permutation " + sigma.str() + " has sigma(i+1) = sigma(i)+1; pieces would merge");
  QuadNum total;
  for (const auto& l : lengths) {
    if (l.sign() <= 0) throw InvalidArgument("non-positive length " + l.str());
    total += l;
  }
  const Permutation inv = sigma.inverse();
  // Start of J_k in the target: sum of the lengths of the intervals landing before it.
  std::vector<QuadNum> target_start(n + 1);
  for (std::size_t k = 1; k <= n; ++k) target_start[k] = k == 1 ? QuadNum(0) : target_start[k - 1] + lengths[inv(k - 1) - 1];
  std::vector<Piece> pieces;
  QuadNum cursor;
  for (std::size_t i = 1; i <= n; ++i) {
    pieces.push_back(Piece{0, cursor, lengths[i - 1], 0, target_start[sigma(i)]});
    cursor += lengths[i - 1];
  }
  Domain d = Domain::interval(total);
  return Iet(d, d, std::move(pieces));
}

Iet from_lengths(const Permutation& sigma, std::span<const QuadNum> lengths) {
  QuadNum total;
  for (const auto& l : lengths) total += l;
  if (total != QuadNum(1)) throw InvalidArgument("lengths sum to " + total.str() + ", expected 1");
  return from_lengths_any_total(sigma, lengths);
}

IntervalCoding interval_coding(const Iet& h) {
  if (h.source().size() != 1 || h.target().size() != 1 || h.source().is_circle(0) || h.target().is_circle(0))
    throw InvalidArgument("interval coding needs an IET between single intervals");
  const auto& pieces = h.pieces();
  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pieces[a].dst_start < pieces[b].dst_start; });
  std::vector<int> images(pieces.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) images[order[rank]] = static_cast<int>(rank + 1);
  IntervalCoding coding{Permutation(std::move(images)), {}};
  for (const auto& p : pieces) coding.lengths.push_back(p.length);
  return coding;
}

std::vector<QuadNum> translations_from_lengths(const Permutation& sigma, std::span<const QuadNum> lengths) {
  const std::size_t n = sigma.size();
  if (lengths.size() != n) throw InvalidArgument("need one length per continuity interval");
  const Permutation inv = sigma.inverse();
  std::vector<QuadNum> t(n);
  QuadNum before;  // sum_{j<i} l_j
  for (std::size_t i = 1; i <= n; ++i) {
    QuadNum landing;
    for (int j = 1; j < sigma(i); ++j) landing += lengths[inv(j) - 1];
    t[i - 1] = landing - before;
    before += lengths[i - 1];
  }
  return t;
}

std::vector<QuadNum> translation_vector(const Iet& h) {
  const IntervalCoding coding = interval_coding(h);
  return translations_from_lengths(coding.sigma, coding.lengths);
}

std::vector<QuadNum> piece_amplitudes(const Iet& h) {
  std::vector<QuadNum> out;
  for (const auto& p : h.pieces()) out.push_back(p.dst_start - p.src_start);
  return out;
}

bool is_q_rational(const Iet& h, long q) {
  if (q < 1) throw InvalidArgument("q must be >= 1");
  for (const auto& x : discontinuities(h)) {
    if (!x.coord.is_rational()) return false;
    Rational scaled = x.coord.rational_part() * q;
    if (scaled.get_den() != 1) return false;
  }
  return true;
}

long long lcm_up_to(long q) {
  if (q < 1) throw InvalidArgument("q must be >= 1");
  long long l = 1;
  for (long k = 2; k <= q; ++k) {
    const long long g = std::gcd(l, static_cast<long long>(k));
    if (l / g > std::numeric_limits<long long>::max() / k) throw CapExceeded("lcm(1.." + std::to_string(q) + ") overflows");
    l = l / g * k;
  }
  return l;
}

std::string iet_str(const Iet& h) {
  std::string out;
  for (const auto& p : h.pieces()) {
    out += h.source()[p.src_component].id + ":[" + p.src_start.str() + ", +" + p.length.str() + ") -> " +
           h.target()[p.dst_component].id + ":" + p.dst_start.str() + "\n";
  }
  return out;
}

}  // namespace ietlab
