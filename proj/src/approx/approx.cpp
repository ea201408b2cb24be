#include "ietlab/approx/approx.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "ietlab/errors.hpp"

namespace ietlab {

std::vector<Point> orbit_ball(std::span<const Iet> generators, const Point& x, int radius) {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  std::vector<Iet> moves;
  for (const auto& g : generators) {
    if (!g.is_automorphism() || !(g.source() == generators.front().source()))
      throw DomainMismatch("orbit_ball generators must share one domain");
    moves.push_back(g);
    moves.push_back(invert(g));
  }
  const Point start = generators.empty() ? x : normalize_point(generators.front().source(), x);
  std::unordered_set<Point, PointHash> seen{start};
  std::vector<Point> frontier{start};
  for (int r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<Point> next;
    for (const auto& p : frontier)
      for (const auto& m : moves) {
        Point y = m.apply(p);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  std::vector<Point> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    return a.component != b.component ? a.component < b.component : a.coord < b.coord;
  });
  return out;
}

std::size_t translation_amplitude_count(std::span<const Iet> generators) {
  std::vector<QuadNum> amps;
  for (const auto& g : generators)
    for (const auto& p : g.elementary_pieces()) amps.push_back(p.dst_start - p.src_start);
  std::sort(amps.begin(), amps.end());
  return static_cast<std::size_t>(std::unique(amps.begin(), amps.end()) - amps.begin());
}

namespace {

// Affine form over the length unknowns, carried with its value at the
// realized point.
struct Val {
  std::vector<Rational> coef;
  Rational constant;
  QuadNum value;

  bool same_form(const Val& o) const { return coef == o.coef && constant == o.constant; }
};

Val operator+(const Val& a, const Val& b) {
  Val out{a.coef, a.constant + b.constant, a.value + b.value};
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] += b.coef[i];
  return out;
}

Val operator-(const Val& a, const Val& b) {
  Val out{a.coef, a.constant - b.constant, a.value - b.value};
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] -= b.coef[i];
  return out;
}

struct SymPiece {
  Val src, len, dst;
};

// Pieces sorted by source; tiles [0,1) at the realized point.
using Sym = std::vector<SymPiece>;

class Tracer {
 public:
  explicit Tracer(std::size_t dimension) : system_(dimension), dim_(dimension) {}

  Val constant(const Rational& c) const { return Val{std::vector<Rational>(dim_), c, QuadNum(c)}; }

  Val unknown(std::size_t i, const QuadNum& value) const {
    Val v = constant(Rational(0));
    v.coef[i] = 1;
    v.value = value;
    return v;
  }

  void record_equal(const Val& a, const Val& b) {
    if (a.same_form(b)) return;
    const Val d = a - b;
    system_.add_equal(d.coef, d.constant);
  }

  // a < b at the realized point.
  void record_less(const Val& a, const Val& b) {
    const Val d = b - a;
    system_.add_positive(d.coef, d.constant);
  }

  // Fixes the relative order of every breakpoint of g and every image
  // endpoint of h, which determines the combinatorics of g o h.
  Sym compose(const Sym& g, const Sym& h) {
    std::vector<Val> marks;
    auto add_mark = [&](Val v) {
      for (const auto& m : marks)
        if (m.same_form(v)) return;
      marks.push_back(std::move(v));
    };
    for (const auto& p : h) {
      add_mark(p.dst);
      add_mark(p.dst + p.len);
    }
    for (const auto& p : g) {
      add_mark(p.src);
      add_mark(p.src + p.len);
    }
    std::stable_sort(marks.begin(), marks.end(), [](const Val& a, const Val& b) { return a.value < b.value; });
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
      if (marks[i].value == marks[i + 1].value)
        record_equal(marks[i], marks[i + 1]);
      else
        record_less(marks[i], marks[i + 1]);
    }

    Sym out;
    for (const auto& hp : h) {
      const Val end = hp.dst + hp.len;
      for (const auto& gp : g) {
        const Val g_end = gp.src + gp.len;
        if (!(gp.src.value < end.value) || !(g_end.value > hp.dst.value)) continue;
        const Val& lo = gp.src.value > hp.dst.value ? gp.src : hp.dst;
        const Val& hi = g_end.value < end.value ? g_end : end;
        if (!(lo.value < hi.value)) continue;
        out.push_back(SymPiece{hp.src + (lo - hp.dst), hi - lo, gp.dst + (lo - gp.src)});
      }
    }
    std::sort(out.begin(), out.end(), [](const SymPiece& a, const SymPiece& b) { return a.src.value < b.src.value; });
    return out;
  }

  ConstraintSystem& system() { return system_; }

 private:
  ConstraintSystem system_;
  std::size_t dim_;
};

Sym inverse_sym(const Sym& s) {
  Sym out;
  for (const auto& p : s) out.push_back(SymPiece{p.dst, p.len, p.src});
  std::sort(out.begin(), out.end(), [](const SymPiece& a, const SymPiece& b) { return a.src.value < b.src.value; });
  return out;
}

bool is_unit_interval_iet(const Iet& g) {
  const Domain& d = g.source();
  return g.is_automorphism() && d.size() == 1 && !d.is_circle(0) && d.length(0) == QuadNum(1);
}

}  // namespace

PlTrace pl_trace(std::span<const Iet> generators, int radius) {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  PlTrace trace;
  trace.offsets.push_back(0);
  std::vector<IntervalCoding> codings;
  for (const auto& g : generators) {
    if (!is_unit_interval_iet(g)) throw InvalidArgument("pl_trace needs IETs of the unit interval [0,1)");
    codings.push_back(interval_coding(g));
    trace.permutations.push_back(codings.back().sigma);
    trace.offsets.push_back(trace.offsets.back() + codings.back().lengths.size());
    for (const auto& l : codings.back().lengths) trace.realized_point.push_back(l);
  }
  const std::size_t dim = trace.realized_point.size();
  Tracer tracer(dim);

  // Simplex constraints and the symbolic generators.
  std::vector<Sym> letters;
  for (std::size_t a = 0; a < generators.size(); ++a) {
    const Permutation& sigma = trace.permutations[a];
    const std::size_t n = sigma.size();
    std::vector<Val> lam;
    Val total = tracer.constant(Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      lam.push_back(tracer.unknown(trace.offsets[a] + i, trace.realized_point[trace.offsets[a] + i]));
      tracer.record_less(tracer.constant(Rational(0)), lam.back());
      total = total + lam.back();
    }
    tracer.record_equal(total, tracer.constant(Rational(1)));
    const Permutation inv = sigma.inverse();
    Sym s;
    Val src = tracer.constant(Rational(0));
    for (std::size_t i = 1; i <= n; ++i) {
      Val dst = tracer.constant(Rational(0));
      for (int j = 1; j < sigma(i); ++j) dst = dst + lam[inv(j) - 1];
      s.push_back(SymPiece{src, lam[i - 1], dst});
      src = src + lam[i - 1];
    }
    letters.push_back(s);
    letters.push_back(inverse_sym(s));
  }

  const auto ball = free_ball(static_cast<int>(generators.size()), radius);
  std::map<Word, std::size_t> index;
  std::vector<Sym> syms(ball.size());
  for (std::size_t w = 0; w < ball.size(); ++w) {
    const Word& word = ball[w];
    index.emplace(word, w);
    if (word.empty()) {
      syms[w] = Sym{SymPiece{tracer.constant(Rational(0)), tracer.constant(Rational(1)), tracer.constant(Rational(0))}};
    } else {
      const Letter last = word.letters().back();
      const Sym& letter = letters[2 * static_cast<std::size_t>(last.generator) + (last.exponent < 0 ? 1 : 0)];
      std::vector<Letter> prefix(word.letters().begin(), word.letters().end() - 1);
      const std::size_t parent = index.at(Word(std::move(prefix)));
      // word = parent * last acts as parent o last.
      syms[w] = ball[parent].empty() ? letter : tracer.compose(syms[parent], letter);
    }

    WordPattern pattern{word, true, std::nullopt};
    for (std::size_t i = 0; i < syms[w].size(); ++i) {
      const Val shift = syms[w][i].dst - syms[w][i].src;
      if (!shift.value.is_zero()) {
        pattern.trivial = false;
        pattern.witness_piece = i;
        if (shift.value.sign() > 0)
          tracer.record_less(tracer.constant(Rational(0)), shift);
        else
          tracer.record_less(shift, tracer.constant(Rational(0)));
        break;
      }
    }
    if (pattern.trivial)
      for (const auto& p : syms[w]) tracer.record_equal(p.dst, p.src);
    if (pattern.trivial != evaluate(word, generators).is_identity())
      throw VerificationFailure("symbolic trace of " + word.str() + " disagrees with direct evaluation");
    trace.word_pattern.push_back(std::move(pattern));
  }
  trace.system = tracer.system().deduplicated();
  if (!trace.system.satisfied_by(std::span<const QuadNum>(trace.realized_point)))
    throw VerificationFailure("realized point violates its own trace");
  return trace;
}

std::vector<Iet> generators_at(const PlTrace& trace, std::span<const Rational> point) {
  if (point.size() != trace.realized_point.size()) throw InvalidArgument("point has the wrong dimension");
  std::vector<Iet> out;
  for (std::size_t a = 0; a < trace.permutations.size(); ++a) {
    std::vector<QuadNum> lengths;
    for (std::size_t i = trace.offsets[a]; i < trace.offsets[a + 1]; ++i) lengths.emplace_back(point[i]);
    out.push_back(from_lengths(trace.permutations[a], lengths));
  }
  return out;
}

namespace {

using Perm = std::vector<std::uint32_t>;

void fold_denominator(Integer& lcm, const QuadNum& x) {
  if (!x.is_rational()) throw InvalidArgument("value " + x.str() + " is irrational; no finite grid exists");
  mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.rational_part().get_den_mpz_t());
}

Perm compose_perm(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

Perm invert_perm(const Perm& a) {
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[a[x]] = static_cast<std::uint32_t>(x);
  return out;
}

bool is_identity_perm(const Perm& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != x) return false;
  return true;
}

// One level of a stabilizer chain with a Schreier tree for the basic orbit.
struct Level {
  std::uint32_t base = 0;
  std::vector<Perm> gens, invs;
  // -1: outside the orbit, -2: the base point, else gens[label] maps the
  // parent onto this point.
  std::vector<std::int32_t> label;
  std::vector<std::uint32_t> orbit;

  void add(Perm g) {
    invs.push_back(invert_perm(g));
    gens.push_back(std::move(g));
  }

  void rebuild() {
    std::fill(label.begin(), label.end(), -1);
    label[base] = -2;
    orbit.assign(1, base);
    for (std::size_t k = 0; k < orbit.size(); ++k)
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const std::uint32_t y = gens[gi][orbit[k]];
        if (label[y] == -1) {
          label[y] = static_cast<std::int32_t>(gi);
          orbit.push_back(y);
        }
      }
  }

  // u with u(base) = beta.
  Perm transversal(std::uint32_t beta) const {
    std::vector<std::size_t> path;
    while (label[beta] != -2) {
      path.push_back(static_cast<std::size_t>(label[beta]));
      beta = invs[path.back()][beta];
    }
    Perm u(label.size());
    std::iota(u.begin(), u.end(), 0u);
    for (auto it = path.rbegin(); it != path.rend(); ++it) u = compose_perm(gens[*it], u);
    return u;
  }

  // Replaces h by u_beta^-1 h where beta = h(base); false if beta is outside
  // the orbit.
  bool sift(Perm& h) const {
    std::uint32_t beta = h[base];
    if (label[beta] == -1) return false;
    while (label[beta] != -2) {
      const auto& inv = invs[static_cast<std::size_t>(label[beta])];
      h = compose_perm(inv, h);
      beta = inv[beta];
    }
    return true;
  }
};

std::uint32_t first_moved(const Perm& g) {
  for (std::size_t x = 0; x < g.size(); ++x)
    if (g[x] != x) return static_cast<std::uint32_t>(x);
  return 0;
}

}  // namespace

Integer permutation_group_order(const std::vector<Perm>& generators) {
  if (generators.empty()) return 1;
  const std::size_t n = generators.front().size();
  for (const auto& g : generators)
    if (g.size() != n) throw InvalidArgument("permutations of different degrees");
  std::vector<Level> levels;
  auto new_level = [&](std::uint32_t base) {
    Level l;
    l.base = base;
    l.label.assign(n, -1);
    levels.push_back(std::move(l));
  };
  for (const auto& g : generators) {
    if (is_identity_perm(g)) continue;
    std::size_t i = 0;
    while (i < levels.size() && g[levels[i].base] == levels[i].base) ++i;
    if (i == levels.size()) new_level(first_moved(g));
    for (std::size_t l = 0; l <= i; ++l) levels[l].add(g);
  }
  for (auto& l : levels) l.rebuild();

  auto strip = [&](Perm h, std::size_t from) {
    std::size_t j = from;
    while (j < levels.size() && levels[j].sift(h)) ++j;
    return std::make_pair(std::move(h), j);
  };

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels.size()) - 1;
  while (i >= 0) {
    bool restart = false;
    const Level& level = levels[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < level.orbit.size() && !restart; ++k) {
      const Perm u = level.transversal(level.orbit[k]);
      for (std::size_t gi = 0; gi < level.gens.size() && !restart; ++gi) {
        auto [r, j] = strip(compose_perm(level.gens[gi], u), static_cast<std::size_t>(i));
        if (is_identity_perm(r)) continue;
        if (j == levels.size()) new_level(first_moved(r));
        for (std::size_t l = static_cast<std::size_t>(i) + 1; l <= j; ++l) {
          levels[l].add(r);
          levels[l].rebuild();
        }
        i = static_cast<std::ptrdiff_t>(j);
        restart = true;
      }
    }
    if (!restart) --i;
  }
  Integer order = 1;
  for (const auto& l : levels) order *= static_cast<unsigned long>(l.orbit.size());
  return order;
}

long long common_grid(std::span<const Iet> generators) {
  Integer lcm = 1;
  for (const auto& g : generators) {
    const Domain& d = g.source();
    for (std::size_t c = 0; c < d.size(); ++c) fold_denominator(lcm, d.length(c));
    for (const auto& p : g.pieces()) {
      fold_denominator(lcm, p.src_start);
      fold_denominator(lcm, p.length);
      fold_denominator(lcm, p.dst_start);
    }
  }
  if (!lcm.fits_slong_p()) throw CapExceeded("grid denominator " + lcm.get_str() + " is too large");
  return lcm.get_si();
}

FiniteQuotient finite_quotient(std::span<const Iet> generators, const QuotientOptions& options,
                               std::vector<std::string>* warnings) {
  FiniteQuotient out;
  if (generators.empty()) {
    out.group_size = Integer(1);
    return out;
  }
  const Domain& d = generators.front().source();
  for (const auto& g : generators)
    if (!g.is_automorphism() || !(g.source() == d)) throw DomainMismatch("generators must share one domain");
  out.grid = common_grid(generators);
  std::vector<long long> cell_offset{0};
  for (std::size_t c = 0; c < d.size(); ++c) {
    const Integer cells = (d.length(c) * QuadNum(out.grid)).rational_part().get_num();
    if (cells > static_cast<long>(options.cell_cap) || cell_offset.back() + cells.get_si() > options.cell_cap)
      throw CapExceeded("grid 1/" + std::to_string(out.grid) + " needs more than " + std::to_string(options.cell_cap) +
                        " cells");
    cell_offset.push_back(cell_offset.back() + cells.get_si());
  }
  const long long cells = cell_offset.back();
  if (cells > 1000000 && warnings)
    warnings->push_back("finite quotient acts on " + std::to_string(cells) + " cells");
  for (const auto& g : generators) {
    Perm perm(static_cast<std::size_t>(cells));
    for (std::size_t c = 0; c < d.size(); ++c)
      for (long long j = 0; j < cell_offset[c + 1] - cell_offset[c]; ++j) {
        const Point y = g.apply(Point{c, QuadNum::fraction(j, out.grid)});
        const long long cell = (y.coord * QuadNum(out.grid)).rational_part().get_num().get_si();
        perm[static_cast<std::size_t>(cell_offset[c] + j)] = static_cast<std::uint32_t>(cell_offset[y.component] + cell);
      }
    out.generators.push_back(std::move(perm));
  }
  if (cells <= options.order_cell_limit) out.group_size = permutation_group_order(out.generators);
  return out;
}

Rationalization rationalize(std::span<const Iet> generators, int radius, const RationalizeOptions& options) {
  Rationalization out;
  out.trace = pl_trace(generators, radius);
  const auto point = lp_rational_point(out.trace.system, options.lp);
  if (!point) throw VerificationFailure("trace system has no rational point although the realized point satisfies it");
  out.generators = generators_at(out.trace, *point);
  for (const auto& pattern : out.trace.word_pattern)
    if (evaluate(pattern.word, out.generators).is_identity() != pattern.trivial)
      throw VerificationFailure("rational generators change the status of " + pattern.word.str());
  out.quotient = finite_quotient(out.generators, options.quotient, &out.warnings);
  return out;
}

FiniteGroup enumerate_finite_group(std::span<const Iet> generators, const FiniteGroupOptions& options) {
  QuotientOptions qopts = options.quotient;
  qopts.order_cell_limit = qopts.cell_cap;
  const FiniteQuotient q = finite_quotient(generators, qopts);
  FiniteGroup out;
  out.grid = q.grid;
  out.order = q.group_size.value_or(Integer(1));
  if (out.order > static_cast<long>(options.cap))
    throw CapExceeded("group order " + out.order.get_str() + " exceeds the cap " + std::to_string(options.cap));
  if (!options.list_elements && !options.multiplication_table) return out;

  const std::size_t degree = q.generators.empty() ? 0 : q.generators.front().size();
  struct PermHash {
    std::size_t operator()(const Perm& p) const {
      std::size_t h = 1469598103934665603ull;
      for (auto v : p) h = (h ^ v) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<Perm, std::uint32_t, PermHash> index;
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0u);
  out.elements.push_back(id);
  index.emplace(id, 0);
  for (std::size_t k = 0; k < out.elements.size(); ++k)
    for (const auto& g : q.generators) {
      Perm next = compose_perm(g, out.elements[k]);
      if (index.emplace(next, static_cast<std::uint32_t>(out.elements.size())).second) out.elements.push_back(std::move(next));
    }
  if (Integer(static_cast<unsigned long>(out.elements.size())) != out.order)
    throw VerificationFailure("breadth-first closure found " + std::to_string(out.elements.size()) +
                              " elements, Schreier-Sims " + out.order.get_str());
  if (options.multiplication_table) {
    out.table.assign(out.elements.size(), std::vector<std::uint32_t>(out.elements.size()));
    for (std::size_t i = 0; i < out.elements.size(); ++i)
      for (std::size_t j = 0; j < out.elements.size(); ++j)
        out.table[i][j] = index.at(compose_perm(out.elements[i], out.elements[j]));
  }
  return out;
}

}  // namespace ietlab
