#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ietlab/core/domain.hpp"
#include "ietlab/core/permutation.hpp"
#include "ietlab/core/subdomain.hpp"

namespace ietlab {

/// The arc [src_start, src_start + length) of component src_component is
/// translated onto [dst_start, dst_start + length) of dst_component. Arcs on
/// circles may wrap; starts are reduced to [0, component length).
struct Piece {
  std::size_t src_component = 0;
  QuadNum src_start;
  QuadNum length;
  std::size_t dst_component = 0;
  QuadNum dst_start;

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Interval exchange transformation between two domains of equal total length:
/// a right-continuous, orientation preserving piecewise translation bijection.
///
/// Always held in canonical form: consecutive pieces (cyclically on circles)
/// whose images are contiguous in one target component are merged, so every
/// piece start is either a component origin of an interval or a genuine
/// discontinuity. A continuous rotation of a circle is one piece starting at 0.
class Iet {
 public:
  /// Identity of the single interval [0, 1).
  Iet();
  /// Validates that `pieces` partition both domains, then canonicalizes.
  /// Throws InvalidArgument describing the first violation.
  Iet(Domain source, Domain target, std::vector<Piece> pieces);

  static Iet identity(const Domain& domain);
  /// x -> x + angle on the circle of the given length (single-circle domain).
  static Iet circle_rotation(const QuadNum& angle, const QuadNum& length = QuadNum(1), std::string id = "C");
  /// x -> x + angle mod length on the interval [0, length).
  static Iet interval_rotation(const QuadNum& angle, const QuadNum& length = QuadNum(1), std::string id = "I");

  const Domain& source() const noexcept { return source_; }
  const Domain& target() const noexcept { return target_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  /// Pieces cut so that neither source nor image arcs wrap, sorted by source.
  std::vector<Piece> elementary_pieces() const;

  bool is_automorphism() const { return source_ == target_; }
  bool is_identity() const;

  /// Image of a point of the source. Throws InvalidArgument when outside.
  Point apply(const Point& x) const;
  /// lim h(y) as y -> x from the left. x may be an interior point or the
  /// closure point `length` of an interval; the result may be a closure point
  /// of a target interval. Throws InvalidArgument at interval origins.
  Point left_limit(const Point& x) const;

  /// Image of a subdomain of the source.
  Subdomain image(const Subdomain& part) const;

  /// Deterministic text key of the canonical form (domains included).
  std::string key() const;

  friend bool operator==(const Iet& lhs, const Iet& rhs);

 private:
  void canonicalize(std::vector<Piece> raw);

  Domain source_;
  Domain target_;
  std::vector<Piece> pieces_;
};

/// g o h. Throws DomainMismatch unless h.target() == g.source().
Iet compose(const Iet& g, const Iet& h);
Iet invert(const Iet& h);
/// h^n by binary powering; negative n inverts first. h must be an automorphism.
Iet power(const Iet& h, long long n);
/// [g, h] = g^-1 h^-1 g h.
Iet commutator(const Iet& g, const Iet& h);
/// g h g^-1.
Iet conjugate(const Iet& g, const Iet& h);

/// Points of the interior where h is discontinuous, sorted.
std::vector<Point> discontinuities(const Iet& h);
std::size_t discontinuity_count(const Iet& h);

/// {x : h(x) != x} as a subdomain. h must be an automorphism.
Subdomain support(const Iet& h);

/// Canonical structural equality. Throws DomainMismatch when domains differ.
bool equals(const Iet& g, const Iet& h);

/// The IET of [0,1) with continuity intervals of the given lengths and
/// T(I_i) = J_sigma(i). Lengths must be positive and sum to 1; sigma must be
/// realizable.
Iet from_lengths(const Permutation& sigma, std::span<const QuadNum> lengths);
/// Same on [0, total) where total is the sum of the lengths.
Iet from_lengths_any_total(const Permutation& sigma, std::span<const QuadNum> lengths);

/// Underlying permutation and continuity-interval lengths of an IET of a
/// single interval.
struct IntervalCoding {
  Permutation sigma;
  std::vector<QuadNum> lengths;
};
IntervalCoding interval_coding(const Iet& h);

/// t_i = -sum_{j<i} l_j + sum_{j<sigma(i)} l_{sigma^-1(j)}.
std::vector<QuadNum> translations_from_lengths(const Permutation& sigma, std::span<const QuadNum> lengths);
/// Translation amplitudes of the continuity intervals of an IET of an interval,
/// computed with the linear formula from its coding.
std::vector<QuadNum> translation_vector(const Iet& h);
/// Amplitudes read directly off the pieces (dst_start - src_start).
std::vector<QuadNum> piece_amplitudes(const Iet& h);

/// Every discontinuity point is a multiple of 1/q. q >= 1.
bool is_q_rational(const Iet& h, long q);

/// lcm(1, ..., q).
long long lcm_up_to(long q);

std::string iet_str(const Iet& h);

}  // namespace ietlab
