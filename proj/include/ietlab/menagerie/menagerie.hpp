#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ietlab/core/iet.hpp"
#include "ietlab/relations/word.hpp"

namespace ietlab {

/// The IET of [0,1) that rotates [0,l) by tau (x -> x + tau on [0, l - tau),
/// x -> x + tau - l on [l - tau, l)) and is the identity on [l,1).
/// Requires 0 < tau < l < 1.
Iet example_2_3(const QuadNum& l, const QuadNum& tau);

/// Circle C of length 2 (component 0) and interval J = [0,1) (component 1).
/// r rotates C by lambda and fixes J; s exchanges I = [0,1) of C with J by
/// x -> x and fixes [1,2) of C.
struct ExampleGroup {
  Domain domain;
  Iet r;
  Iet s;
  QuadNum lambda;
};

/// Throws InvalidArgument unless lambda is irrational and in (0,1).
ExampleGroup build_example_group(const QuadNum& lambda);

/// (sqrt 2 - 1) / 2^k for the least k with the result below 1 / (10 n).
QuadNum default_lambda(int n = 1);

/// Words use generator 0 for r and 1 for s.
inline constexpr std::string_view kExampleAlphabet = "rs";

/// The intermediate elements leading to the involution sigma, each with the
/// word in r, s that produced it.
struct SigmaConstruction {
  Iet r1;  // r' = s r s
  Iet r2;  // r'' = r^-1 r' r
  Iet t;   // r'^-1 r''
  Iet t1;  // t' = r^2 t r^-2
  Iet t2;  // t'' = r'^-1 t' r'
  Iet sigma;
  Word sigma_word;
  Subdomain e;  // [1 - 2 lambda, 1) in J
  Subdomain f;  // [1, 1 + 2 lambda) in C
};

/// Builds sigma = t' t'' and checks sigma^2 = id, sigma(E) = F by x -> x + 2 lambda,
/// and supp(sigma) = E u F. Throws VerificationFailure on any failed check and
/// InvalidArgument unless lambda < 1/10.
SigmaConstruction sigma_involution(const ExampleGroup& g);

struct SymmetricEmbedding {
  /// r^{2k} sigma r^{-2k} for k = 0..n.
  std::vector<Iet> generators;
  std::vector<Word> words;
  /// E, F, r^2 F, ..., r^{2n} F.
  std::vector<Subdomain> blocks;
  /// Action of each generator on block indices.
  std::vector<std::vector<std::uint32_t>> block_permutations;
  /// Orders of the group of block permutations and of the group of IETs,
  /// both by exhaustive enumeration.
  long long permutation_group_order = 0;
  long long iet_group_order = 0;
};

/// Throws InvalidArgument when the blocks overlap (lambda too large) or
/// lambda >= 1/10, VerificationFailure when a generator does not permute the
/// blocks by translations or moves a point outside them.
SymmetricEmbedding symmetric_embedding(const ExampleGroup& g, int n);

struct FreeSemigroupReport {
  bool distinct = false;
  std::size_t words = 0;
  /// W(p) = p exactly for the powers of r', p the origin of C.
  bool fixed_point_criterion = false;
};

/// All 2^{L+1} - 2 non-empty positive words in r (letter 0) and r' (letter 1)
/// of length <= L, evaluated exactly.
FreeSemigroupReport free_semigroup_check(const ExampleGroup& g, int max_length);

}  // namespace ietlab
