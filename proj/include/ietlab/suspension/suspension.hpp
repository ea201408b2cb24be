#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ietlab/core/iet.hpp"
#include "ietlab/errors.hpp"

namespace ietlab {

/// An automorphism together with the map carrying the original domain onto
/// its domain: `conjugator o original o conjugator^-1 == map`.
struct Conjugated {
  Iet map;
  Iet conjugator;
};

/// Splits the component of the interior point x at x: an interval [0,l)
/// becomes [0,x) and [x,l) (the second gets a fresh id), a circle becomes the
/// interval starting at x. Throws InvalidArgument unless x is interior.
Conjugated split_at(const Iet& h, const Point& x);
/// Splits at every point of `xs` (interior and pairwise distinct).
Conjugated split_at(const Iet& h, const std::vector<Point>& xs);

/// x in Delta(h^-1) with h^k(x) in Delta(h), k minimal; h^1(x) .. h^(k-1)(x)
/// avoid Delta(h) and Delta(h^-1).
struct BoundaryConnection {
  Point x;
  int k = 0;
};

/// x in Delta(h) whose two one-sided orbits x_i = h^i(x), y_i = h^i(x^-)
/// first meet at i = k >= 2, every intermediate x_i being the origin of an
/// interval and every y_i the closure point at the end of an interval.
struct FakeBoundary {
  Point x;
  int k = 0;
  /// y_1 .. y_(k-1).
  std::vector<Point> left_track;
  /// x_1 .. x_(k-1).
  std::vector<Point> right_track;
};

struct SuspensionReport {
  std::vector<Point> delta_h;
  std::vector<Point> delta_hinv;
  std::vector<Point> sing;
  std::vector<BoundaryConnection> boundary_connections;
  std::vector<FakeBoundary> fake_boundaries;
  int search_depth = 0;
};

/// Exact Delta sets, boundary connections with k <= depth, and fake
/// boundaries (tracks capped at #components + #Delta(h) + 1, CapExceeded past
/// it). depth >= 1.
SuspensionReport analyze_suspension(const Iet& h, int depth);

/// Identifies each y_i with x_i. An interval glued end to start becomes a
/// circle; otherwise the two intervals are concatenated under the first id.
/// Throws InvalidArgument when `fb` is not a fake boundary of h.
Conjugated glue_fake_boundary(const Iet& h, const FakeBoundary& fb);

struct MinimalModelOptions {
  int depth = 64;
  int n_check = 20;
  /// Depth doublings tried after a failed verification.
  int max_retries = 3;
};

struct NormCertificate {
  Iet h_m;
  /// conjugator o h o conjugator^-1 == h_m.
  Iet conjugator;
  long norm = 0;
  int verified_up_to = 0;
  int search_depth = 0;
};

/// Raised when d(h_m^n) == n d(h_m) still fails at the last retry.
class ModelVerificationFailure : public VerificationFailure {
 public:
  ModelVerificationFailure(const std::string& what, int failing_n, Iet model)
      : VerificationFailure(what), failing_n_(failing_n), model_(std::move(model)) {}
  int failing_n() const noexcept { return failing_n_; }
  const Iet& model() const noexcept { return model_; }

 private:
  int failing_n_;
  Iet model_;
};

/// Splits at Sing(h), splits along boundary connections, glues fake
/// boundaries, then checks d(h_m^n) == n d(h_m) for n <= n_check, doubling
/// the depth on failure.
NormCertificate minimal_model(const Iet& h, const MinimalModelOptions& options = {});

struct NormBounds {
  /// min over 1 <= n <= n_max of d(h^n) / n.
  Rational slope_upper;
  /// floor(slope_upper); an upper bound since the norm is an integer.
  long upper = 0;
  /// Certified norm when minimal_model verifies with n_check = n_max, else 0.
  long lower = 0;
  bool certified = false;
};

NormBounds norm_bounds(const Iet& h, int n_max);

struct OrbitCheck {
  bool holds = true;
  /// A point x of Delta(h_m) whose image g(x) was not found.
  std::optional<Point> witness;
};

/// For each x in Delta(h_m), looks for g(x) in h_m^k(Delta(h_m)) with
/// |k| <= 2 d(g) + 1. Throws InvalidArgument when g and h_m do not commute.
OrbitCheck centralizer_orbit_check(const Iet& h_m, const Iet& g);

}  // namespace ietlab
