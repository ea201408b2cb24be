#include "ietlab/menagerie/menagerie.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ietlab/errors.hpp"

namespace ietlab {

Iet example_2_3(const QuadNum& l, const QuadNum& tau) {
  if (!(tau.sign() > 0 && tau < l && l < QuadNum(1)))
    throw InvalidArgument("example_2_3 needs 0 < tau < l < 1, got l = " + l.str() + ", tau = " + tau.str());
  Domain d = Domain::interval();
  return Iet(d, d, {Piece{0, QuadNum(0), l - tau, 0, tau}, Piece{0, l - tau, tau, 0, QuadNum(0)},
                    Piece{0, l, 1 - l, 0, l}});
}

ExampleGroup build_example_group(const QuadNum& lambda) {
  if (lambda.is_rational()) throw InvalidArgument("lambda = " + lambda.str() + " must be irrational");
  if (!(lambda.sign() > 0 && lambda < QuadNum(1))) throw InvalidArgument("lambda must lie in (0,1)");
  Domain d({Component{ComponentKind::kCircle, QuadNum(2), "C"}, Component{ComponentKind::kInterval, QuadNum(1), "J"}});
  Iet r(d, d, {Piece{0, QuadNum(0), QuadNum(2), 0, lambda}, Piece{1, QuadNum(0), QuadNum(1), 1, QuadNum(0)}});
  Iet s(d, d, {Piece{0, QuadNum(0), QuadNum(1), 1, QuadNum(0)}, Piece{1, QuadNum(0), QuadNum(1), 0, QuadNum(0)},
               Piece{0, QuadNum(1), QuadNum(1), 0, QuadNum(1)}});
  return ExampleGroup{d, std::move(r), std::move(s), lambda};
}

QuadNum default_lambda(int n) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const QuadNum bound = QuadNum::fraction(1, 10L * n);
  QuadNum lambda = QuadNum::sqrt() - 1;
  while (!(lambda < bound)) lambda = lambda / QuadNum(2);
  return lambda;
}

SigmaConstruction sigma_involution(const ExampleGroup& g) {
  if (!(g.lambda < QuadNum::fraction(1, 10))) throw InvalidArgument("sigma_involution needs lambda < 1/10");
  const Iet gens[] = {g.r, g.s};
  const Word r = Word::power_of(0, 1), s = Word::power_of(1, 1), r_sq = Word::power_of(0, 2);
  const Word r1 = s * r * s;
  const Word r2 = r.inverse() * r1 * r;
  const Word t = r1.inverse() * r2;
  const Word t1 = r_sq * t * r_sq.inverse();
  const Word t2 = r1.inverse() * t1 * r1;

  SigmaConstruction out{evaluate(r1, gens), evaluate(r2, gens), evaluate(t, gens), evaluate(t1, gens),
                        evaluate(t2, gens), {}, t1 * t2, {}, {}};
  out.sigma = compose(out.t1, out.t2);
  if (!(evaluate(out.sigma_word, gens) == out.sigma)) throw VerificationFailure("sigma word does not evaluate to sigma");

  const QuadNum two_l = g.lambda * QuadNum(2);
  out.e = Subdomain(g.domain, {Arc{1, 1 - two_l, two_l}});
  out.f = Subdomain(g.domain, {Arc{0, QuadNum(1), two_l}});
  if (!power(out.sigma, 2).is_identity()) throw VerificationFailure("sigma is not an involution");
  if (!(support(out.sigma) == out.e.unite(out.f)))
    throw VerificationFailure("supp(sigma) = " + support(out.sigma).str() + " differs from E u F");
  // sigma(E) = F by one translation.
  for (const auto& p : out.sigma.elementary_pieces()) {
    if (p.src_component != 1 || p.src_start < 1 - two_l) continue;
    if (p.dst_component != 0 || p.dst_start != p.src_start + two_l)
      throw VerificationFailure("sigma does not carry E onto F by x -> x + 2 lambda");
  }
  return out;
}

namespace {

using Perm = std::vector<std::uint32_t>;

long long closure_order(const std::vector<Perm>& gens, std::size_t degree) {
  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);
  std::vector<Perm> elements{id};
  std::unordered_set<std::string> seen{std::string(id.begin(), id.end())};
  for (std::size_t k = 0; k < elements.size(); ++k)
    for (const auto& gperm : gens) {
      Perm next(degree);
      for (std::size_t x = 0; x < degree; ++x) next[x] = gperm[elements[k][x]];
      if (seen.insert(std::string(next.begin(), next.end())).second) elements.push_back(std::move(next));
    }
  return static_cast<long long>(elements.size());
}

}  // namespace

SymmetricEmbedding symmetric_embedding(const ExampleGroup& g, int n) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const SigmaConstruction sc = sigma_involution(g);
  const Iet r_sq = power(g.r, 2);
  SymmetricEmbedding out;
  out.blocks.push_back(sc.e);
  Subdomain block = sc.f;
  for (int k = 0; k <= n; ++k) {
    out.blocks.push_back(block);
    block = r_sq.image(block);
  }
  for (std::size_t i = 0; i < out.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < out.blocks.size(); ++j)
      if (!out.blocks[i].intersect(out.blocks[j]).empty())
        throw InvalidArgument("blocks " + std::to_string(i) + " and " + std::to_string(j) + " overlap; lambda is too large");
  Subdomain all(g.domain);
  for (const auto& b : out.blocks) all = all.unite(b);

  Iet conj = Iet::identity(g.domain);
  Word conj_word;
  for (int k = 0; k <= n; ++k) {
    out.generators.push_back(conjugate(conj, sc.sigma));
    out.words.push_back(conjugate(conj_word, sc.sigma_word));
    conj = compose(r_sq, conj);
    conj_word = conj_word * Word::power_of(0, 2);
  }

  const Iet rs[] = {g.r, g.s};
  for (std::size_t k = 0; k < out.generators.size(); ++k) {
    const Iet& gen = out.generators[k];
    if (!(evaluate(out.words[k], rs) == gen)) throw VerificationFailure("generator word does not evaluate to the generator");
    if (!support(gen).subset_of(all)) throw VerificationFailure("generator moves points outside the blocks");
    Perm perm(out.blocks.size());
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
      const Arc a = out.blocks[i].parts().front();
      const Point image = gen.apply(Point{a.component, a.start});
      bool found = false;
      for (std::size_t j = 0; j < out.blocks.size() && !found; ++j) {
        const Arc b = out.blocks[j].parts().front();
        if (image == Point{b.component, b.start} && gen.image(out.blocks[i]) == out.blocks[j]) {
          perm[i] = static_cast<std::uint32_t>(j);
          found = true;
        }
      }
      if (!found) throw VerificationFailure("generator does not permute the blocks");
      // A translation from block to block: the block meets one elementary piece.
      std::size_t pieces = 0;
      for (const auto& p : gen.elementary_pieces())
        if (p.src_component == a.component && p.src_start < a.start + a.length && a.start < p.src_start + p.length) ++pieces;
      if (pieces != 1) throw VerificationFailure("generator cuts a block");
    }
    out.block_permutations.push_back(std::move(perm));
  }
  out.permutation_group_order = closure_order(out.block_permutations, out.blocks.size());

  std::unordered_set<std::string> seen{Iet::identity(g.domain).key()};
  std::vector<Iet> elements{Iet::identity(g.domain)};
  for (std::size_t k = 0; k < elements.size(); ++k)
    for (const auto& gen : out.generators) {
      Iet next = compose(gen, elements[k]);
      if (seen.insert(next.key()).second) elements.push_back(std::move(next));
    }
  out.iet_group_order = static_cast<long long>(elements.size());
  return out;
}

FreeSemigroupReport free_semigroup_check(const ExampleGroup& g, int max_length) {
  if (max_length < 1) throw InvalidArgument("word length bound must be at least 1");
  const Iet r1 = compose(compose(g.s, g.r), g.s);
  const Iet letters[] = {g.r, r1};
  const Point p{0, QuadNum(0)};
  FreeSemigroupReport out;
  out.distinct = true;
  out.fixed_point_criterion = true;
  std::unordered_set<std::string> seen;
  // Layer of words of the current length, each with "is a power of r'".
  std::vector<std::pair<Iet, bool>> layer{{Iet::identity(g.domain), true}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<std::pair<Iet, bool>> next;
    for (const auto& [w, only_r1] : layer)
      for (int letter = 0; letter < 2; ++letter) {
        Iet word = compose(w, letters[letter]);
        const bool power_of_r1 = only_r1 && letter == 1;
        if (!seen.insert(word.key()).second) out.distinct = false;
        if ((word.apply(p) == p) != power_of_r1) out.fixed_point_criterion = false;
        ++out.words;
        next.emplace_back(std::move(word), power_of_r1);
      }
    layer = std::move(next);
  }
  return out;
}

}  // namespace ietlab
