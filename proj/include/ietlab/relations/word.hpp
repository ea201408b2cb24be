#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ietlab/core/iet.hpp"

namespace ietlab {

/// One letter g_index^(+-1).
struct Letter {
  int generator = 0;
  int exponent = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Element of the free group on generators 0, 1, ..., written left to right.
/// Evaluation follows composition order: the word a b acts as a o b.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  /// g^n (n may be negative or zero).
  static Word power_of(int generator, long n);
  /// "s", "t", "s^-1", "s^3 t s^-3" style text; letters are single lowercase
  /// characters mapped through `alphabet` (default "st").
  static Word parse(std::string_view text, std::string_view alphabet = "st");

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  Word inverse() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  /// Run-length text such as "s^-2 t s^2 t^-1"; "1" for the empty word.
  std::string str(std::string_view alphabet = "st") const;

 private:
  std::vector<Letter> letters_;
};

/// [a, b] = a^-1 b^-1 a b.
Word commutator(const Word& a, const Word& b);
/// a b a^-1.
Word conjugate(const Word& a, const Word& b);

/// Cancels adjacent g g^-1 pairs until none remain.
Word free_reduce(const Word& w);

/// w evaluated at the given generators (which share one domain). Runs of one
/// letter are evaluated with binary powering. The empty word is the identity
/// of `domain`.
Iet evaluate(const Word& w, std::span<const Iet> generators);

/// All words of length <= radius over generators^(+-1) in shortlex order,
/// freely reduced and without repetition (the ball of the free group).
std::vector<Word> free_ball(int generators, int radius);

}  // namespace ietlab
