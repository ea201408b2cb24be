#include "ietlab/core/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "ietlab/errors.hpp"

namespace ietlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 1 || v > n || seen[v - 1]) throw InvalidArgument("not a permutation of {1.." + std::to_string(n) + "}: " + str());
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> values;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw ParseError("expected a positive integer in permutation '" + std::string(text) + "'", 1, i + 1);
    values.push_back(std::stoi(std::string(text.substr(i, j - i))));
    i = j;
  }
  if (values.empty()) throw ParseError("empty permutation", 1, 1);
  return Permutation(std::move(values));
}

std::vector<Permutation> Permutation::all(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i] - 1] = static_cast<int>(i + 1);
  return Permutation(std::move(inv));
}

bool Permutation::is_realizable() const {
  for (std::size_t i = 0; i + 1 < images_.size(); ++i)
    if (images_[i + 1] == images_[i] + 1) return false;
  return true;
}

std::string Permutation::str() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(images_[i]);
  }
  return out;
}

}  // namespace ietlab
