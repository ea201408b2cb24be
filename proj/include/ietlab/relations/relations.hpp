#pragma once

#include <optional>
#include <vector>

#include "ietlab/core/iet.hpp"
#include "ietlab/relations/word.hpp"

namespace ietlab {

/// Smallest n in [1, cap] such that R^n moves every point by at most eps / 2
/// (circle distance). R must be a multi-rotation. Throws CapExceeded past cap.
long small_rotation_power(const Iet& r, const QuadNum& eps, long cap = 1000000);

/// (component ends) u Delta(s) u Delta(s^-1). Component ends are the origin
/// and the closure point of every interval.
std::vector<Point> shrink_centers(const Iet& s);

/// The closed eps-neighbourhood of `centers`, as a subdomain (the half-open
/// representation has the same half-open subsets).
Subdomain closed_neighbourhood(const Domain& domain, const std::vector<Point>& centers, const QuadNum& eps);

struct ShrinkConfig {
  QuadNum epsilon = QuadNum::fraction(1, 100);
  long n_cap = 1000000;
};

struct ShrinkResult {
  long n = 0;
  Iet u;
  Subdomain support;
  std::vector<Point> centers;
};

/// n = small_rotation_power(R, eps/2) and U = [[S, R^n], R^n], checked to have
/// support inside the closed eps-neighbourhood of shrink_centers(S). Throws
/// VerificationFailure if the inclusion fails.
ShrinkResult shrink_support(const Iet& r, const Iet& s, const ShrinkConfig& cfg = {});

/// No m with sigma(m) = m and sigma({1..m-1}) = {1..m-1}.
bool is_admissible(const Permutation& sigma);

/// Phi_sigma(v): t_i = -sum_{j<i} v_j + sum_{j<sigma(i)} v_{sigma^-1(j)}.
std::vector<QuadNum> phi(const Permutation& sigma, std::span<const QuadNum> v);

struct DriftData {
  Permutation sigma;
  std::vector<QuadNum> dl;
  std::vector<QuadNum> dr;
  QuadNum dr_min;
  QuadNum dr_max;
};

struct DriftOutcome {
  std::optional<DriftData> drift;
  /// For non-admissible sigma: the first m with sigma(m) = m fixing {1..m-1};
  /// coordinate m of Phi_sigma was checked to vanish on e_i - e_n, i < n.
  std::optional<int> vanishing_coordinate;
};

/// dl = sum over inverted pairs i1 < i2 of e_i2 - e_i1 and dr = Phi_sigma(dl)
/// when sigma is admissible (every dr_i >= 1 is checked).
DriftOutcome drift_direction(const Permutation& sigma);

/// T0 with lengths shifted by theta * dl; translation vector checked to be
/// phi(T0) + theta * dr. Throws InvalidArgument when a length becomes <= 0
/// or T0 does not have permutation dd.sigma.
Iet drifted(const Iet& t0, const QuadNum& theta, const DriftData& dd);

struct RelationOptions {
  long k_cap = 64;
  /// Radius of the grid neighbourhood reported in the certificate. Zero means
  /// 1 / (100 q rho) when drift data is given, else 1 / (10 q).
  QuadNum epsilon;
  std::optional<DriftData> drift;
};

struct RelationCertificate {
  /// Word over s (generator 0) and t (generator 1).
  Word word;
  long q = 0;
  long long exponent = 0;
  QuadNum epsilon;
  /// 0 when U is the identity.
  long k = 0;
  Iet u;
  Subdomain support_u;
  /// supp(U) lies in the closed epsilon-neighbourhood of (1/q)Z.
  bool support_near_grid = false;
};

/// e = lcm(1..q), U = [S^e, T S^e T^-1]; finds the least k <= k_cap with
/// supp(T^k U T^-k) disjoint from supp(U) and returns w = [t^k u t^-k, u].
/// Each certificate has been checked: w(S, T) = id exactly and w is not
/// freely trivial. Empty when the search fails.
std::optional<RelationCertificate> relation_certificate(const Iet& s, const Iet& t, long q,
                                                        const RelationOptions& options = {});

}  // namespace ietlab
