#pragma once

#include <optional>
#include <vector>

#include "ietlab/core/iet.hpp"

namespace ietlab {

struct RotationFlags {
  /// d(h) == 0.
  bool virtual_multi_rotation = false;
  /// Preserves each component, rotates circles, fixes intervals pointwise.
  bool multi_rotation = false;
};

/// h must be an automorphism.
RotationFlags is_virtual_multi_rotation(const Iet& h);

/// Domain whose components are the maximal arcs of `part`, in order: a full
/// circle stays a circle, every other arc becomes an interval. Ids are
/// "<component id>@<arc start>".
Domain restriction_domain(const Subdomain& part);

/// h restricted to the h-invariant subdomain `part`, as an automorphism of
/// restriction_domain(part). Throws InvalidArgument unless h(part) == part.
Iet restrict(const Iet& h, const Subdomain& part);

/// Witness that T restricted to `subdomain` is conjugate to the rotation by
/// `angle` of a single circle, with angle / circle length irrational.
/// `conjugator` maps restriction_domain(subdomain) onto that circle.
struct IrrationalCircleCert {
  Subdomain subdomain;
  Iet conjugator;
  QuadNum angle;
};

/// True iff angle / length is irrational (non-zero sqrt coefficient).
bool is_irrational_ratio(const QuadNum& angle, const QuadNum& length);

/// Checks invariance, that conjugator o T|C o conjugator^-1 is the rotation by
/// cert.angle of one circle, and irrationality. Throws DomainMismatch when the
/// conjugator does not start on the restriction domain.
bool verify_irrational_circle(const Iet& t, const IrrationalCircleCert& cert);

/// For h acting on `interval` (an arc of an interval component, h-invariant)
/// as a two-piece exchange x -> x + tau on [0, l - tau), x -> x + tau - l on
/// [l - tau, l) in local coordinates: the certificate that glues the ends of
/// the arc into a circle of length l. Empty when tau / l is rational.
/// Throws InvalidArgument when the restriction has another form.
std::optional<IrrationalCircleCert> roll_up_two_interval(const Iet& h, const Arc& interval);

struct MultiRotationDecomposition {
  /// One certificate per circle component rotated by an irrational angle.
  std::vector<IrrationalCircleCert> circles;
  /// Least power p >= 1 killing every rational circle rotation, so that the
  /// support of h^p is exactly the union of the certified circles.
  long long power = 1;
};

/// Empty unless h is a multi-rotation. Irrational circles of general IETs are
/// not searched for.
std::optional<MultiRotationDecomposition> decompose_multi_rotation(const Iet& h);

}  // namespace ietlab
