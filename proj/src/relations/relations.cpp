#include "ietlab/relations/relations.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"
#include "ietlab/rotations/rotations.hpp"

namespace ietlab {

namespace {

// Rotation angle of every circle component, in [0, length); intervals get 0.
std::vector<QuadNum> circle_angles(const Iet& r) {
  const Domain& d = r.source();
  std::vector<QuadNum> angles(d.size());
  for (const auto& p : r.pieces())
    if (d.is_circle(p.src_component)) angles[p.src_component] = (p.dst_start - p.src_start).mod(d.length(p.src_component));
  return angles;
}

}  // namespace

long small_rotation_power(const Iet& r, const QuadNum& eps, long cap) {
  if (eps.sign() <= 0) throw InvalidArgument("eps must be positive");
  if (!r.is_automorphism() || !is_virtual_multi_rotation(r).multi_rotation)
    throw InvalidArgument("small_rotation_power needs a multi-rotation");
  const Domain& d = r.source();
  const auto angles = circle_angles(r);
  const QuadNum half = eps / QuadNum(2);
  std::vector<QuadNum> position(d.size());
  for (long n = 1; n <= cap; ++n) {
    bool small = true;
    for (std::size_t c = 0; c < d.size(); ++c) {
      if (!d.is_circle(c)) continue;
      position[c] = (position[c] + angles[c]).mod(d.length(c));
      if (small && min(position[c], d.length(c) - position[c]) > half) small = false;
    }
    if (small) return n;
  }
  throw CapExceeded("no power n <= " + std::to_string(cap) + " moves points by at most " + half.str());
}

std::vector<Point> shrink_centers(const Iet& s) {
  const Domain& d = s.source();
  std::vector<Point> out;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (!d.is_circle(c)) {
      out.push_back(Point{c, QuadNum(0)});
      out.push_back(Point{c, d.length(c)});
    }
  for (auto& p : discontinuities(s)) out.push_back(std::move(p));
  for (auto& p : discontinuities(invert(s))) out.push_back(std::move(p));
  return out;
}

Subdomain closed_neighbourhood(const Domain& domain, const std::vector<Point>& centers, const QuadNum& eps) {
  if (eps.sign() < 0) throw InvalidArgument("negative neighbourhood radius");
  std::vector<Arc> arcs;
  const QuadNum width = eps * QuadNum(2);
  for (const auto& p : centers) {
    const QuadNum& len = domain.length(p.component);
    if (domain.is_circle(p.component)) {
      arcs.push_back(width >= len ? Arc{p.component, QuadNum(0), len} : Arc{p.component, p.coord - eps, width});
      continue;
    }
    const QuadNum lo = max(QuadNum(0), p.coord - eps);
    const QuadNum hi = min(len, p.coord + eps);
    if (lo < hi) arcs.push_back(Arc{p.component, lo, hi - lo});
  }
  return Subdomain(domain, arcs);
}

ShrinkResult shrink_support(const Iet& r, const Iet& s, const ShrinkConfig& cfg) {
  if (cfg.epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive");
  if (!(r.source() == s.source()) || !s.is_automorphism()) throw DomainMismatch("R and S must act on one domain");
  ShrinkResult out;
  // R^n moving points by eps/4 leaves [S,R^n] a translation of amplitude at
  // most eps/2 off X_{eps/2}, so U is the identity off X_eps.
  out.n = small_rotation_power(r, cfg.epsilon / 2, cfg.n_cap);
  const Iet rn = power(r, out.n);
  out.u = commutator(commutator(s, rn), rn);
  out.support = support(out.u);
  out.centers = shrink_centers(s);
  const Subdomain allowed = closed_neighbourhood(s.source(), out.centers, cfg.epsilon);
  if (!out.support.subset_of(allowed))
    throw VerificationFailure("supp([[S,R^n],R^n]) = " + out.support.str() + " leaves the closed " +
                              cfg.epsilon.str() + "-neighbourhood " + allowed.str());
  return out;
}

bool is_admissible(const Permutation& sigma) {
  int prefix_max = 0;
  for (std::size_t m = 1; m <= sigma.size(); ++m) {
    // sigma({1..m-1}) = {1..m-1} exactly when its maximum is m-1.
    if (prefix_max == static_cast<int>(m) - 1 && sigma(m) == static_cast<int>(m)) return false;
    prefix_max = std::max(prefix_max, sigma(m));
  }
  return true;
}

std::vector<QuadNum> phi(const Permutation& sigma, std::span<const QuadNum> v) {
  if (v.size() != sigma.size()) throw InvalidArgument("phi: vector size differs from permutation size");
  const std::size_t n = sigma.size();
  const Permutation inv = sigma.inverse();
  std::vector<QuadNum> prefix(n + 1), target_prefix(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    prefix[j] = prefix[j - 1] + v[j - 1];
    target_prefix[j] = target_prefix[j - 1] + v[inv(j) - 1];
  }
  std::vector<QuadNum> t(n);
  for (std::size_t i = 1; i <= n; ++i) t[i - 1] = target_prefix[sigma(i) - 1] - prefix[i - 1];
  return t;
}

DriftOutcome drift_direction(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  DriftOutcome out;
  if (!is_admissible(sigma)) {
    int prefix_max = 0;
    for (std::size_t m = 1; m <= n; ++m) {
      if (prefix_max == static_cast<int>(m) - 1 && sigma(m) == static_cast<int>(m)) {
        out.vanishing_coordinate = static_cast<int>(m);
        break;
      }
      prefix_max = std::max(prefix_max, sigma(m));
    }
    const std::size_t m = static_cast<std::size_t>(*out.vanishing_coordinate);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::vector<QuadNum> v(n);
      v[i] = QuadNum(1);
      v[n - 1] = QuadNum(-1);
      if (!phi(sigma, v)[m - 1].is_zero())
        throw VerificationFailure("coordinate " + std::to_string(m) + " of Phi_" + sigma.str() + " does not vanish");
    }
    return out;
  }
  DriftData dd{sigma, std::vector<QuadNum>(n), {}, {}, {}};
  for (std::size_t i1 = 1; i1 <= n; ++i1)
    for (std::size_t i2 = i1 + 1; i2 <= n; ++i2)
      if (sigma(i1) > sigma(i2)) {
        dd.dl[i2 - 1] += QuadNum(1);
        dd.dl[i1 - 1] -= QuadNum(1);
      }
  dd.dr = phi(sigma, dd.dl);
  dd.dr_min = *std::min_element(dd.dr.begin(), dd.dr.end());
  dd.dr_max = *std::max_element(dd.dr.begin(), dd.dr.end());
  if (dd.dr_min < QuadNum(1))
    throw VerificationFailure("drift vector of admissible " + sigma.str() + " has a coordinate below 1");
  out.drift = std::move(dd);
  return out;
}

Iet drifted(const Iet& t0, const QuadNum& theta, const DriftData& dd) {
  const IntervalCoding coding = interval_coding(t0);
  if (!(coding.sigma == dd.sigma))
    throw InvalidArgument("T0 has permutation " + coding.sigma.str() + ", drift data is for " + dd.sigma.str());
  std::vector<QuadNum> lengths = coding.lengths;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    lengths[i] += theta * dd.dl[i];
    if (lengths[i].sign() <= 0)
      throw InvalidArgument("theta = " + theta.str() + " makes length " + std::to_string(i + 1) + " non-positive");
  }
  const Iet shaped = from_lengths_any_total(dd.sigma, lengths);
  Iet out(t0.source(), t0.target(), shaped.pieces());
  const auto t_before = translations_from_lengths(coding.sigma, coding.lengths);
  const auto t_after = piece_amplitudes(out);
  for (std::size_t i = 0; i < t_after.size(); ++i)
    if (t_after[i] != t_before[i] + theta * dd.dr[i])
      throw VerificationFailure("drifted translation " + std::to_string(i + 1) + " is not phi(T0) + theta dr");
  return out;
}

std::optional<RelationCertificate> relation_certificate(const Iet& s, const Iet& t, long q,
                                                        const RelationOptions& options) {
  if (q < 2) throw InvalidArgument("relation_certificate needs q >= 2");
  if (!s.is_automorphism() || !(s.source() == t.source()) || !t.is_automorphism())
    throw DomainMismatch("S and T must be automorphisms of one domain");
  const Domain& domain = s.source();

  RelationCertificate cert;
  cert.q = q;
  cert.exponent = lcm_up_to(q);
  if (!options.epsilon.is_zero()) {
    cert.epsilon = options.epsilon;
  } else if (options.drift) {
    const QuadNum rho = options.drift->dr_max / options.drift->dr_min;
    cert.epsilon = QuadNum(1) / (QuadNum(100 * q) * rho);
  } else {
    cert.epsilon = QuadNum::fraction(1, 10 * q);
  }

  const Iet se = power(s, cert.exponent);
  cert.u = commutator(se, conjugate(t, se));
  cert.support_u = support(cert.u);
  std::vector<Point> grid;
  for (std::size_t c = 0; c < domain.size(); ++c)
    for (long j = 0; QuadNum::fraction(j, q) <= domain.length(c); ++j) grid.push_back(Point{c, QuadNum::fraction(j, q)});
  cert.support_near_grid = cert.support_u.subset_of(closed_neighbourhood(domain, grid, cert.epsilon));

  const Word s_e = Word::power_of(0, static_cast<long>(cert.exponent));
  const Word u_word = commutator(s_e, conjugate(Word::power_of(1, 1), s_e));
  if (cert.u.is_identity()) {
    cert.word = u_word;
  } else {
    Iet tk = Iet::identity(domain);
    for (long k = 1; k <= options.k_cap; ++k) {
      tk = compose(t, tk);
      if (!tk.image(cert.support_u).intersect(cert.support_u).empty()) continue;
      cert.k = k;
      cert.word = commutator(conjugate(Word::power_of(1, k), u_word), u_word);
      break;
    }
    if (cert.k == 0) return std::nullopt;
  }

  const Iet generators[] = {s, t};
  if (!evaluate(cert.word, generators).is_identity())
    throw VerificationFailure("relator " + cert.word.str() + " does not evaluate to the identity");
  if (free_reduce(cert.word).empty()) throw VerificationFailure("relator " + cert.word.str() + " is freely trivial");
  return cert;
}

}  // namespace ietlab
