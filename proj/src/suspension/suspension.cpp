#include "ietlab/suspension/suspension.hpp"

#include <algorithm>
#include <set>

namespace ietlab {

namespace {

std::string fresh_id(const std::vector<Component>& comps, const std::string& base) {
  for (int k = 1;; ++k) {
    std::string id = base + "." + std::to_string(k);
    if (std::none_of(comps.begin(), comps.end(), [&](const Component& c) { return c.id == id; })) return id;
  }
}

bool contains(const std::vector<Point>& sorted, const Point& p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

// Conjugate of h by s (s maps h's domain onto the new one).
Conjugated conjugated_by(const Iet& h, const Iet& s) { return Conjugated{conjugate(s, h), s}; }

bool is_origin(const Domain& d, const Point& p) { return !d.is_circle(p.component) && p.coord.is_zero(); }

bool is_closure_point(const Domain& d, const Point& p) {
  return !d.is_circle(p.component) && p.coord == d.length(p.component);
}

// Each old component is carried isometrically into new component index[c] at
// offset[c] (reduced on circles).
struct Embedding {
  Domain to;
  std::vector<std::size_t> index;
  std::vector<QuadNum> offset;

  Point map(const Point& p) const {
    QuadNum y = p.coord + offset[p.component];
    const std::size_t c = index[p.component];
    if (to.is_circle(c)) y = y.mod(to.length(c));
    return Point{c, y};
  }
};

// Glues the end of interval a to the origin of interval b.
Embedding glue_domain(const Domain& d, std::size_t a, std::size_t b) {
  Embedding e;
  std::vector<Component> comps;
  e.index.resize(d.size());
  e.offset.assign(d.size(), QuadNum(0));
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (c == b && a != b) continue;
    Component comp = d[c];
    if (c == a) {
      if (a == b) comp.kind = ComponentKind::kCircle;
      else comp.length = d.length(a) + d.length(b);
    }
    e.index[c] = comps.size();
    comps.push_back(comp);
  }
  if (a != b) {
    e.index[b] = e.index[a];
    e.offset[b] = d.length(a);
  }
  e.to = Domain(std::move(comps));
  return e;
}

Iet embedding_map(const Domain& from, const Embedding& e) {
  std::vector<Piece> pieces;
  for (std::size_t c = 0; c < from.size(); ++c)
    pieces.push_back(Piece{c, QuadNum(0), from.length(c), e.index[c], e.offset[c]});
  return Iet(from, e.to, std::move(pieces));
}

// x_1.. and y_1.. for x in Delta(h), until they meet or the right track leaves
// the interval origins. Returns nullopt when x is not a fake boundary vertex.
std::optional<FakeBoundary> track_fake(const Iet& h, const Point& x, int cap) {
  const Domain& d = h.source();
  FakeBoundary fb;
  fb.x = x;
  Point right = x;
  Point left = x;
  for (int i = 1;; ++i) {
    if (i > cap) throw CapExceeded("fake boundary track longer than " + std::to_string(cap));
    right = h.apply(right);
    left = h.left_limit(left);
    if (right == left) {
      if (i < 2) return std::nullopt;
      fb.k = i;
      return fb;
    }
    if (!is_origin(d, right) || !is_closure_point(d, left)) return std::nullopt;
    fb.right_track.push_back(right);
    fb.left_track.push_back(left);
  }
}

}  // namespace

Conjugated split_at(const Iet& h, const Point& x0) {
  if (!h.is_automorphism()) throw DomainMismatch("split_at needs an automorphism");
  const Domain& d = h.source();
  const Point x = normalize_point(d, x0);
  if (!is_interior(d, x)) throw InvalidArgument("cannot split at the boundary point " + point_str(d, x));
  std::vector<Component> comps;
  std::vector<Piece> pieces;
  for (std::size_t c = 0; c < d.size(); ++c) {
    const std::size_t at = comps.size();
    if (c != x.component) {
      comps.push_back(d[c]);
      pieces.push_back(Piece{c, QuadNum(0), d.length(c), at, QuadNum(0)});
      continue;
    }
    const QuadNum& len = d.length(c);
    if (d.is_circle(c)) {
      comps.push_back(Component{ComponentKind::kInterval, len, d[c].id});
      pieces.push_back(Piece{c, x.coord, len - x.coord, at, QuadNum(0)});
      if (x.coord.sign() > 0) pieces.push_back(Piece{c, QuadNum(0), x.coord, at, len - x.coord});
    } else {
      comps.push_back(Component{ComponentKind::kInterval, x.coord, d[c].id});
      pieces.push_back(Piece{c, QuadNum(0), x.coord, at, QuadNum(0)});
      pieces.push_back(Piece{c, x.coord, len - x.coord, at + 1, QuadNum(0)});
      comps.push_back(Component{ComponentKind::kInterval, len - x.coord, ""});
    }
  }
  for (auto& comp : comps)
    if (comp.id.empty()) comp.id = fresh_id(comps, d[x.component].id);
  const Iet s(d, Domain(std::move(comps)), std::move(pieces));
  return conjugated_by(h, s);
}

Conjugated split_at(const Iet& h, const std::vector<Point>& xs) {
  Conjugated cur{h, Iet::identity(h.source())};
  std::vector<Point> pending;
  for (const auto& x : xs) pending.push_back(normalize_point(h.source(), x));
  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (pending[j] == pending[i]) throw InvalidArgument("split points must be distinct");
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    Conjugated step = split_at(cur.map, pending[i]);
    for (std::size_t j = i + 1; j < pending.size(); ++j) pending[j] = step.conjugator.apply(pending[j]);
    cur = Conjugated{std::move(step.map), compose(step.conjugator, cur.conjugator)};
  }
  return cur;
}

SuspensionReport analyze_suspension(const Iet& h, int depth) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  if (!h.is_automorphism()) throw DomainMismatch("suspension needs an automorphism");
  SuspensionReport r;
  r.search_depth = depth;
  r.delta_h = discontinuities(h);
  r.delta_hinv = discontinuities(invert(h));
  std::set_intersection(r.delta_h.begin(), r.delta_h.end(), r.delta_hinv.begin(), r.delta_hinv.end(),
                        std::back_inserter(r.sing));
  for (const auto& x : r.delta_hinv) {
    Point y = x;
    for (int k = 0; k <= depth; ++k) {
      if (contains(r.delta_h, y)) {
        r.boundary_connections.push_back(BoundaryConnection{x, k});
        break;
      }
      if (k > 0 && contains(r.delta_hinv, y)) break;
      y = h.apply(y);
    }
  }
  const int cap = static_cast<int>(h.source().size() + r.delta_h.size() + 1);
  for (const auto& x : r.delta_h)
    if (auto fb = track_fake(h, x, cap)) r.fake_boundaries.push_back(std::move(*fb));
  return r;
}

Conjugated glue_fake_boundary(const Iet& h, const FakeBoundary& fb) {
  if (!h.is_automorphism()) throw DomainMismatch("gluing needs an automorphism");
  const Domain& d = h.source();
  if (fb.x.component >= d.size() || !contains(discontinuities(h), fb.x))
    throw InvalidArgument("fake boundary record: x is not a discontinuity");
  const int cap = static_cast<int>(d.size() + discontinuity_count(h) + 1);
  const auto actual = track_fake(h, fb.x, cap);
  if (!actual || actual->k != fb.k || actual->left_track != fb.left_track || actual->right_track != fb.right_track)
    throw InvalidArgument("record is not a fake boundary of this map");
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i < fb.left_track.size(); ++i) pairs.emplace_back(fb.left_track[i], fb.right_track[i]);
  Iet conj = Iet::identity(d);
  Domain cur = d;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [y, x] = pairs[i];
    if (!is_closure_point(cur, y) || !is_origin(cur, x)) throw VerificationFailure("gluing: track point moved off the boundary");
    const Embedding e = glue_domain(cur, y.component, x.component);
    conj = compose(embedding_map(cur, e), conj);
    for (std::size_t j = i + 1; j < pairs.size(); ++j) pairs[j] = {e.map(pairs[j].first), e.map(pairs[j].second)};
    cur = e.to;
  }
  return conjugated_by(h, conj);
}

namespace {

// Runs the three surgery stages at a fixed depth.
Conjugated surgery(const Iet& h, int depth) {
  Conjugated cur{h, Iet::identity(h.source())};
  auto advance = [&cur](Conjugated step) {
    cur = Conjugated{std::move(step.map), compose(step.conjugator, cur.conjugator)};
  };
  for (;;) {
    const auto delta = discontinuities(cur.map);
    const auto delta_inv = discontinuities(invert(cur.map));
    std::vector<Point> sing;
    std::set_intersection(delta.begin(), delta.end(), delta_inv.begin(), delta_inv.end(), std::back_inserter(sing));
    if (sing.empty()) break;
    advance(split_at(cur.map, sing.front()));
  }
  for (;;) {
    const SuspensionReport r = analyze_suspension(cur.map, depth);
    if (r.boundary_connections.empty()) break;
    const BoundaryConnection& bc = r.boundary_connections.front();
    std::vector<Point> orbit{bc.x};
    for (int i = 0; i < bc.k; ++i) orbit.push_back(cur.map.apply(orbit.back()));
    advance(split_at(cur.map, orbit));
  }
  for (;;) {
    const SuspensionReport r = analyze_suspension(cur.map, depth);
    if (r.fake_boundaries.empty()) break;
    advance(glue_fake_boundary(cur.map, r.fake_boundaries.front()));
  }
  return cur;
}

// First n <= n_check with d(h^n) != n d(h), or 0.
int first_growth_failure(const Iet& h, int n_check) {
  const std::size_t d1 = discontinuity_count(h);
  Iet hn = h;
  for (int n = 2; n <= n_check; ++n) {
    hn = compose(h, hn);
    if (discontinuity_count(hn) != static_cast<std::size_t>(n) * d1) return n;
  }
  return 0;
}

}  // namespace

NormCertificate minimal_model(const Iet& h, const MinimalModelOptions& options) {
  if (options.depth < 1) throw InvalidArgument("depth must be >= 1");
  if (options.n_check < 2) throw InvalidArgument("n_check must be >= 2");
  if (!h.is_automorphism()) throw DomainMismatch("minimal model needs an automorphism");
  int depth = options.depth;
  for (int attempt = 0;; ++attempt) {
    Conjugated model = surgery(h, depth);
    if (!(conjugate(model.conjugator, h) == model.map)) throw VerificationFailure("minimal model: conjugator mismatch");
    const int failing = first_growth_failure(model.map, options.n_check);
    if (failing == 0) {
      return NormCertificate{model.map, model.conjugator, static_cast<long>(discontinuity_count(model.map)),
                             options.n_check, depth};
    }
    if (attempt >= options.max_retries) {
      throw ModelVerificationFailure("minimal model: d(h_m^" + std::to_string(failing) + ") != " +
                                         std::to_string(failing) + " d(h_m) at depth " + std::to_string(depth),
                                     failing, model.map);
    }
    depth *= 2;
  }
}

NormBounds norm_bounds(const Iet& h, int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  NormBounds b;
  Iet hn = Iet::identity(h.source());
  for (int n = 1; n <= n_max; ++n) {
    hn = compose(h, hn);
    const Rational slope(static_cast<long>(discontinuity_count(hn)), n);
    if (n == 1 || slope < b.slope_upper) b.slope_upper = slope;
  }
  b.slope_upper.canonicalize();
  const Integer fl = b.slope_upper.get_num() / b.slope_upper.get_den();
  b.upper = fl.get_si();
  try {
    MinimalModelOptions opt;
    opt.n_check = std::max(2, n_max);
    const NormCertificate cert = minimal_model(h, opt);
    if (cert.norm <= b.upper) {
      b.lower = cert.norm;
      b.certified = true;
    }
  } catch (const ModelVerificationFailure&) {
    b.lower = 0;
  }
  return b;
}

OrbitCheck centralizer_orbit_check(const Iet& h_m, const Iet& g) {
  if (!(compose(g, h_m) == compose(h_m, g))) throw InvalidArgument("centralizer check: g does not commute with h_m");
  const auto delta = discontinuities(h_m);
  const long bound = 2 * static_cast<long>(discontinuity_count(g)) + 1;
  // h_m^k(Delta) for |k| <= bound.
  std::set<Point> orbit(delta.begin(), delta.end());
  std::vector<Point> fwd = delta, back = delta;
  const Iet inv = invert(h_m);
  for (long k = 1; k <= bound; ++k) {
    for (auto& p : fwd) {
      p = h_m.apply(p);
      orbit.insert(p);
    }
    for (auto& p : back) {
      p = inv.apply(p);
      orbit.insert(p);
    }
  }
  OrbitCheck out;
  for (const auto& x : delta) {
    if (!orbit.count(g.apply(x))) {
      out.holds = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

}  // namespace ietlab
