#include "ietlab/rotations/rotations.hpp"

#include <numeric>

#include "ietlab/errors.hpp"

namespace ietlab {

RotationFlags is_virtual_multi_rotation(const Iet& h) {
  if (!h.is_automorphism()) throw DomainMismatch("multi-rotation test needs an automorphism");
  RotationFlags flags;
  flags.virtual_multi_rotation = discontinuity_count(h) == 0;
  if (!flags.virtual_multi_rotation) return flags;
  const Domain& d = h.source();
  flags.multi_rotation = true;
  for (const auto& p : h.pieces()) {
    if (p.src_component != p.dst_component) flags.multi_rotation = false;
    else if (!d.is_circle(p.src_component) && p.src_start != p.dst_start) flags.multi_rotation = false;
  }
  return flags;
}

namespace {

struct LocalArc {
  Arc arc;
  bool full_circle = false;
};

std::vector<LocalArc> local_arcs(const Subdomain& part) {
  std::vector<LocalArc> out;
  const Domain& d = part.domain();
  for (const auto& a : part.maximal_arcs())
    out.push_back(LocalArc{a, d.is_circle(a.component) && a.length == d.length(a.component)});
  return out;
}

// Index of the local arc containing (c, x) and the offset of x in it.
std::pair<std::size_t, QuadNum> locate(const Domain& d, const std::vector<LocalArc>& arcs, std::size_t c,
                                       const QuadNum& x) {
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i].arc;
    if (a.component != c) continue;
    QuadNum off = d.is_circle(c) ? (x - a.start).mod(d.length(c)) : x - a.start;
    if (off.sign() >= 0 && off < a.length) return {i, off};
  }
  throw InvalidArgument("point " + x.str() + " is not in the subdomain");
}

}  // namespace

Domain restriction_domain(const Subdomain& part) {
  std::vector<Component> comps;
  const Domain& d = part.domain();
  for (const auto& la : local_arcs(part)) {
    comps.push_back(Component{la.full_circle ? ComponentKind::kCircle : ComponentKind::kInterval, la.arc.length,
                              d[la.arc.component].id + "@" + la.arc.start.str()});
  }
  return Domain(std::move(comps));
}

Iet restrict(const Iet& h, const Subdomain& part) {
  if (!(part.domain() == h.source()) || !h.is_automorphism()) throw DomainMismatch("restrict: subdomain of another domain");
  if (!(h.image(part) == part)) throw InvalidArgument("restrict: subdomain " + part.str() + " is not invariant");
  const Domain& d = h.source();
  const auto arcs = local_arcs(part);
  const Domain local = restriction_domain(part);
  std::vector<Piece> pieces;
  for (const auto& p : part.parts())
    for (const auto& e : h.elementary_pieces()) {
      if (e.src_component != p.component) continue;
      const QuadNum lo = max(p.start, e.src_start);
      const QuadNum hi = min(p.start + p.length, e.src_start + e.length);
      if (!(lo < hi)) continue;
      auto [si, soff] = locate(d, arcs, p.component, lo);
      auto [ti, toff] = locate(d, arcs, e.dst_component, e.dst_start + (lo - e.src_start));
      pieces.push_back(Piece{si, soff, hi - lo, ti, toff});
    }
  return Iet(local, local, std::move(pieces));
}

bool is_irrational_ratio(const QuadNum& angle, const QuadNum& length) { return !(angle / length).is_rational(); }

bool verify_irrational_circle(const Iet& t, const IrrationalCircleCert& cert) {
  const Domain local = restriction_domain(cert.subdomain);
  if (!(cert.conjugator.source() == local))
    throw DomainMismatch("certificate conjugator does not start on the restricted subdomain");
  if (cert.subdomain.empty() || !(cert.subdomain.domain() == t.source())) return false;
  if (!(t.image(cert.subdomain) == cert.subdomain)) return false;
  const Domain& circle = cert.conjugator.target();
  if (circle.size() != 1 || !circle.is_circle(0)) return false;
  const Iet conj = conjugate(cert.conjugator, restrict(t, cert.subdomain));
  if (discontinuity_count(conj) != 0) return false;
  const QuadNum& len = circle.length(0);
  const auto& pieces = conj.pieces();
  if (pieces.size() != 1 || pieces[0].dst_start != cert.angle.mod(len)) return false;
  return is_irrational_ratio(cert.angle, len);
}

std::optional<IrrationalCircleCert> roll_up_two_interval(const Iet& h, const Arc& interval) {
  const Domain& d = h.source();
  if (interval.component >= d.size() || d.is_circle(interval.component))
    throw InvalidArgument("roll-up needs an arc of an interval component");
  Subdomain part(d, {interval});
  const Iet local = restrict(h, part);
  const auto& pieces = local.pieces();
  if (pieces.size() != 2 || local.source().size() != 1)
    throw InvalidArgument("restriction to " + part.str() + " is not a two-piece exchange");
  const QuadNum& l = interval.length;
  const QuadNum tau = pieces[0].dst_start;
  if (!(pieces[1].dst_start.is_zero()) || pieces[1].src_start != l - tau)
    throw VerificationFailure("two-piece exchange with unexpected layout");
  if (!is_irrational_ratio(tau, l)) return std::nullopt;
  const Domain circle = Domain::circle(l, "C");
  Iet conj(local.source(), circle, {Piece{0, QuadNum(0), l, 0, QuadNum(0)}});
  return IrrationalCircleCert{part, std::move(conj), tau};
}

std::optional<MultiRotationDecomposition> decompose_multi_rotation(const Iet& h) {
  if (!h.is_automorphism() || !is_virtual_multi_rotation(h).multi_rotation) return std::nullopt;
  const Domain& d = h.source();
  MultiRotationDecomposition out;
  for (const auto& p : h.pieces()) {
    if (!d.is_circle(p.src_component) || p.dst_start.is_zero()) continue;
    const QuadNum& len = d.length(p.src_component);
    if (is_irrational_ratio(p.dst_start, len)) {
      Subdomain part(d, {Arc{p.src_component, QuadNum(0), len}});
      const Domain local = restriction_domain(part);
      Iet conj(local, Domain::circle(len, "C"), {Piece{0, QuadNum(0), len, 0, QuadNum(0)}});
      out.circles.push_back(IrrationalCircleCert{std::move(part), std::move(conj), p.dst_start});
    } else {
      const Rational ratio = (p.dst_start / len).rational_part();
      const Integer den = ratio.get_den();
      if (!den.fits_slong_p()) throw CapExceeded("rotation order does not fit in a machine integer");
      out.power = std::lcm(out.power, static_cast<long long>(den.get_si()));
    }
  }
  return out;
}

}  // namespace ietlab
