#include "ietlab/relations/word.hpp"

#include <cctype>
#include <cstdlib>

#include "ietlab/errors.hpp"

namespace ietlab {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (const auto& l : letters_)
    if (l.generator < 0 || (l.exponent != 1 && l.exponent != -1))
      throw InvalidArgument("letters are (generator >= 0, exponent +-1)");
}

Word Word::power_of(int generator, long n) {
  std::vector<Letter> out(static_cast<std::size_t>(std::labs(n)), Letter{generator, n < 0 ? -1 : 1});
  return Word(std::move(out));
}

Word Word::parse(std::string_view text, std::string_view alphabet) {
  std::vector<Letter> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*' || text[i] == '.')) ++i;
  };
  skip();
  if (text.substr(i) == "1") return Word();
  while (i < text.size()) {
    const char c = text[i];
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto g = alphabet.find(lower);
    if (g == std::string_view::npos) throw ParseError(std::string("unknown letter '") + c + "' in word", 1, i + 1);
    long exponent = (c == lower) ? 1 : -1;  // upper case is the inverse
    ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      const std::size_t digits = j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == digits) throw ParseError("expected an exponent after '^'", 1, i + 1);
      exponent *= std::stol(std::string(text.substr(i, j - i)));
      i = j;
    }
    const auto run = power_of(static_cast<int>(g), exponent);
    out.insert(out.end(), run.letters_.begin(), run.letters_.end());
    skip();
  }
  return Word(std::move(out));
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  return Word(std::move(out));
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> out = lhs.letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

std::string Word::str(std::string_view alphabet) const {
  if (letters_.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += ' ';
    const int g = letters_[i].generator;
    out += static_cast<std::size_t>(g) < alphabet.size() ? std::string(1, alphabet[g]) : "g" + std::to_string(g);
    const long run = static_cast<long>(j - i) * letters_[i].exponent;
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

Word commutator(const Word& a, const Word& b) { return a.inverse() * b.inverse() * a * b; }

Word conjugate(const Word& a, const Word& b) { return a * b * a.inverse(); }

Word free_reduce(const Word& w) {
  std::vector<Letter> stack;
  for (const auto& l : w.letters()) {
    if (!stack.empty() && stack.back().generator == l.generator && stack.back().exponent == -l.exponent)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return Word(std::move(stack));
}

Iet evaluate(const Word& w, std::span<const Iet> generators) {
  if (generators.empty()) throw InvalidArgument("evaluate needs at least one generator");
  Iet acc = Iet::identity(generators.front().source());
  const auto& letters = w.letters();
  // Right to left: the rightmost letter acts first.
  std::size_t j = letters.size();
  while (j > 0) {
    std::size_t i = j - 1;
    while (i > 0 && letters[i - 1] == letters[j - 1]) --i;
    const Letter l = letters[j - 1];
    if (static_cast<std::size_t>(l.generator) >= generators.size())
      throw InvalidArgument("word uses generator " + std::to_string(l.generator) + " but only " +
                            std::to_string(generators.size()) + " were given");
    acc = compose(power(generators[l.generator], static_cast<long long>(j - i) * l.exponent), acc);
    j = i;
  }
  return acc;
}

std::vector<Word> free_ball(int generators, int radius) {
  if (generators < 0 || radius < 0) throw InvalidArgument("free_ball needs generators >= 0 and radius >= 0");
  std::vector<Letter> alphabet;
  for (int g = 0; g < generators; ++g) {
    alphabet.push_back(Letter{g, 1});
    alphabet.push_back(Letter{g, -1});
  }
  std::vector<Word> out{Word()};
  std::size_t layer_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& l : alphabet) {
        const auto& base = out[i].letters();
        if (!base.empty() && base.back().generator == l.generator && base.back().exponent == -l.exponent) continue;
        std::vector<Letter> next = base;
        next.push_back(l);
        out.emplace_back(std::move(next));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

}  // namespace ietlab
