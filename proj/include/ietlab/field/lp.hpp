#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ietlab/field/quadnum.hpp"

namespace ietlab {

enum class Relation { kEqualZero, kStrictlyPositive };

/// Affine form coefficients . x + constant, constrained to be = 0 or > 0.
struct LinConstraint {
  std::vector<Rational> coefficients;
  Rational constant;
  Relation relation = Relation::kEqualZero;

  Rational evaluate(std::span<const Rational> point) const;
  QuadNum evaluate(std::span<const QuadNum> point) const;
  bool satisfied_by(std::span<const Rational> point) const;
  bool satisfied_by(std::span<const QuadNum> point) const;

  /// Scales to coprime integer coefficients (positive scale only, so the
  /// relation is preserved). Used to deduplicate constraints.
  LinConstraint normalized() const;

  std::string str() const;

  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

/// Equalities and strict inequalities over `dimension` rational unknowns.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t dimension = 0) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<LinConstraint>& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return constraints_.size(); }

  /// Throws InvalidArgument when the coefficient count differs from dimension().
  void add(LinConstraint constraint);
  void add_equal(std::vector<Rational> coefficients, Rational constant);
  void add_positive(std::vector<Rational> coefficients, Rational constant);

  /// Every constraint holds exactly (equalities) or strictly (inequalities).
  bool satisfied_by(std::span<const Rational> point) const;
  bool satisfied_by(std::span<const QuadNum> point) const;

  /// Copy with normalized, duplicate-free constraints. Trivially true
  /// constraints (zero form, positive constant) are dropped.
  ConstraintSystem deduplicated() const;

 private:
  std::size_t dimension_;
  std::vector<LinConstraint> constraints_;
};

struct LpOptions {
  /// When non-empty (size == dimension), after the strict-feasibility stage the
  /// solver maximizes secondary . x while keeping the slack at least half its
  /// optimum. Falls back to the first-stage point if that stage is unbounded.
  std::vector<Rational> secondary_objective;
};

/// Rational point satisfying every equality exactly and every strict
/// inequality strictly, or nullopt when the system has no real solution.
///
/// Introduces a slack t, maximizes t subject to each strict form >= t and
/// t <= 1 with an exact two-phase simplex (Bland's rule); the system is
/// feasible iff the optimum is positive.
std::optional<std::vector<Rational>> lp_rational_point(const ConstraintSystem& system, const LpOptions& options = {});

namespace lp_detail {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> solution;
  Rational objective;
};

/// maximize objective . y subject to matrix y = rhs, y >= 0 (dense, exact).
LpResult solve_standard_form(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs,
                             const std::vector<Rational>& objective);

}  // namespace lp_detail

}  // namespace ietlab
