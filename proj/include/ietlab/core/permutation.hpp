#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ietlab {

/// Bijection of {1, ..., n}, stored as its image list (1-based values).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidArgument unless `images` is a bijection of {1..n}.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(std::size_t n);
  /// Parses "3,2,1" (whitespace tolerated).
  static Permutation parse(std::string_view text);
  /// All permutations of {1..n} in lexicographic order.
  static std::vector<Permutation> all(std::size_t n);

  std::size_t size() const noexcept { return images_.size(); }
  /// sigma(i) for 1-based i.
  int operator()(std::size_t i) const { return images_[i - 1]; }
  const std::vector<int>& images() const noexcept { return images_; }

  Permutation inverse() const;

  /// No i < n with sigma(i+1) = sigma(i) + 1, i.e. sigma underlies some IET.
  bool is_realizable() const;

  std::string str() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

}  // namespace ietlab
