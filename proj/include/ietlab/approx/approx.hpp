#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ietlab/core/iet.hpp"
#include "ietlab/field/lp.hpp"
#include "ietlab/relations/word.hpp"

namespace ietlab {

/// {w(x) : |w| <= radius} over the generators and their inverses, sorted by
/// (component, coordinate).
std::vector<Point> orbit_ball(std::span<const Iet> generators, const Point& x, int radius);

/// Number of distinct values dst_start - src_start over the elementary pieces
/// of all generators.
std::size_t translation_amplitude_count(std::span<const Iet> generators);

struct WordPattern {
  Word word;
  bool trivial = false;
  /// Piece of the traced evaluation whose translation is recorded non-zero.
  std::optional<std::size_t> witness_piece;
};

/// Record of evaluating every word of the free ball at the given generators.
///
/// Unknowns are the continuity-interval lengths of all generators,
/// concatenated: generator a owns coordinates offsets[a] .. offsets[a+1]-1.
/// Any rational point satisfying `system` yields generators with the same
/// permutations on which every traced word is trivial exactly when recorded so.
struct PlTrace {
  ConstraintSystem system;
  std::vector<QuadNum> realized_point;
  std::vector<Permutation> permutations;
  std::vector<std::size_t> offsets;
  std::vector<WordPattern> word_pattern;
};

/// Generators must be IETs of the unit interval.
PlTrace pl_trace(std::span<const Iet> generators, int radius);

/// Generators of [0,1) with the permutations of `trace` and the lengths at
/// `point` (one coordinate per unknown).
std::vector<Iet> generators_at(const PlTrace& trace, std::span<const Rational> point);

/// Action of q'-rational generators on the cells [j/q', (j+1)/q'), numbered
/// component by component.
struct FiniteQuotient {
  long long grid = 1;
  std::vector<std::vector<std::uint32_t>> generators;
  std::optional<Integer> group_size;
};

struct QuotientOptions {
  /// More cells than this is an error; more than 10^6 only warns.
  long long cell_cap = 10000000;
  /// Compute the group order (Schreier-Sims) when the grid has at most this
  /// many cells.
  long long order_cell_limit = 200000;
};

/// Least q' such that every generator is q'-rational and every component
/// length is a multiple of 1/q'. Throws InvalidArgument for irrational data.
long long common_grid(std::span<const Iet> generators);

/// Cell permutations of rational generators on their common grid.
FiniteQuotient finite_quotient(std::span<const Iet> generators, const QuotientOptions& options,
                               std::vector<std::string>* warnings = nullptr);

struct Rationalization {
  std::vector<Iet> generators;
  FiniteQuotient quotient;
  PlTrace trace;
  std::vector<std::string> warnings;
};

struct RationalizeOptions {
  QuotientOptions quotient;
  LpOptions lp;
};

/// Rational generators with the same marked ball of radius R as the input,
/// plus the finite group they generate. Throws VerificationFailure if the LP
/// is infeasible or the patterns differ (both would be bugs).
Rationalization rationalize(std::span<const Iet> generators, int radius, const RationalizeOptions& options = {});

/// Order of the permutation group generated by `generators` (all of one
/// degree), by Schreier-Sims.
Integer permutation_group_order(const std::vector<std::vector<std::uint32_t>>& generators);

struct FiniteGroup {
  long long grid = 1;
  Integer order;
  /// Elements in breadth-first discovery order (generator order fixed), as
  /// cell permutations; filled when requested.
  std::vector<std::vector<std::uint32_t>> elements;
  /// table[i][j] = index of elements[i] o elements[j].
  std::vector<std::vector<std::uint32_t>> table;
};

struct FiniteGroupOptions {
  /// Orders above this are an error.
  long long cap = 1000000;
  bool list_elements = false;
  bool multiplication_table = false;
  QuotientOptions quotient;
};

/// The group generated by q-rational IETs. Throws InvalidArgument when a
/// generator is not rational and CapExceeded past the cap.
FiniteGroup enumerate_finite_group(std::span<const Iet> generators, const FiniteGroupOptions& options = {});

}  // namespace ietlab
