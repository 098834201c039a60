#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "commsol/error.hpp"
#include "commsol/stallings.hpp"

using namespace commsol;

namespace {

std::vector<Word> words(std::initializer_list<const char *> texts, int rank = 2) {
  std::vector<Word> out;
  for (const char *t : texts) {
    out.push_back(parse_word(t, rank));
  }
  return out;
}

long exponent_sum(const Word &w, int gen) {
  long s = 0;
  for (Letter l : w.letters()) {
    if (l == gen) {
      ++s;
    } else if (l == -gen) {
      --s;
    }
  }
  return s;
}

// Oracle: count pairs of permutations of {0..m-1} generating a transitive
// group; subgroups of index m correspond to these divided by (m-1)!.
long transitive_pairs(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  long count = 0;
  for (const auto &x : perms) {
    for (const auto &y : perms) {
      std::vector<bool> seen(static_cast<std::size_t>(m), false);
      std::vector<int> stack{0};
      seen[0] = true;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : {x[static_cast<std::size_t>(v)], y[static_cast<std::size_t>(v)]}) {
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = true;
            stack.push_back(w);
          }
        }
      }
      if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        ++count;
      }
    }
  }
  return count;
}

long factorial(int m) {
  long f = 1;
  for (int i = 2; i <= m; ++i) {
    f *= i;
  }
  return f;
}

} // namespace

TEST_CASE("folding an index-two subgroup") {
  const SubgroupGraph h = from_generators(words({"aa", "b", "abA"}), 2);
  CHECK(h.complete());
  CHECK(index(h) == 2);
  CHECK(contains(h, parse_word("aa", 2)));
  CHECK(contains(h, parse_word("aba", 2)));
  CHECK_FALSE(contains(h, parse_word("ab", 2)));
  CHECK(contains(h, parse_word("bab", 2)) == false);
  for (const Word &w : ball(2, 5)) {
    CHECK(contains(h, w) == (exponent_sum(w, 1) % 2 == 0));
  }
}

TEST_CASE("infinite index is detected") {
  const SubgroupGraph h = from_generators(words({"a"}), 2);
  CHECK_FALSE(h.complete());
  CHECK_THROWS_AS(index(h), InfiniteIndexError);
  CHECK_THROWS_AS(require_finite_index(h), InfiniteIndexError);
  CHECK(index(SubgroupGraph::whole(3)) == 1);
}

TEST_CASE("generating sets of the same subgroup give equal graphs") {
  const SubgroupGraph a = from_generators(words({"aa", "b", "abA"}), 2);
  const SubgroupGraph b = from_generators(words({"b", "aba", "aa", "AbA"}), 2);
  CHECK(a == b);
  CHECK(from_generators(words({"a", "b"}), 2) == SubgroupGraph::whole(2));
  CHECK(from_generators(words({"ab", "b"}), 2) == SubgroupGraph::whole(2));
}

TEST_CASE("schreier bases have rank 1 + m(k-1)") {
  for (const auto &h : enumerate_subgroups(2, 3)) {
    CHECK(basis(h).size() == 1 + index(h));
    for (const Word &g : basis(h)) {
      CHECK(contains(h, g));
    }
    CHECK(from_generators(basis(h), 2) == h);
  }
  CHECK(basis(SubgroupGraph::whole(2)).size() == 2);
  CHECK(basis(profinite_kernel(2, 2)).size() == 5);
  CHECK(basis(enumerate_subgroups(2, 2)[1]).size() == 3);
}

TEST_CASE("basis coordinates rewrite subgroup elements") {
  const SubgroupGraph h = from_generators(words({"aa", "b", "abA"}), 2);
  std::mt19937 rng(29);
  for (const Word &w : ball(2, 5)) {
    if (!contains(h, w)) {
      CHECK_THROWS_AS(h.basis_coordinates(w), PreconditionError);
      continue;
    }
    const Word c = h.basis_coordinates(w);
    CHECK(substitute(c, basis(h), 2) == w);
  }
}

TEST_CASE("enumeration counts match transitive permutation pairs") {
  const auto all = enumerate_subgroups(2, 3);
  std::vector<long> by_index(4, 0);
  for (const auto &h : all) {
    ++by_index[index(h)];
  }
  CHECK(by_index[1] == transitive_pairs(1) / factorial(0));
  CHECK(by_index[2] == transitive_pairs(2) / factorial(1));
  CHECK(by_index[3] == transitive_pairs(3) / factorial(2));
  CHECK(by_index[1] == 1);
  CHECK(by_index[2] == 3);
  CHECK(by_index[3] == 13);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(enumerate_subgroups(1, 4).size() == 4);
}

TEST_CASE("intersection of the two mod-two kernels") {
  const SubgroupGraph ka = from_generators(words({"aa", "b", "abA"}), 2);
  const SubgroupGraph kb = from_generators(words({"a", "bb", "baB"}), 2);
  const SubgroupGraph both = intersect(ka, kb);
  CHECK(index(both) == 4);
  CHECK(is_subgroup(both, ka));
  CHECK(is_subgroup(both, kb));
  CHECK_FALSE(is_subgroup(ka, kb));
  for (const Word &w : ball(2, 5)) {
    CHECK(contains(both, w) == (contains(ka, w) && contains(kb, w)));
  }
}

TEST_CASE("profinite kernels") {
  const SubgroupGraph k2 = profinite_kernel(2, 2);
  CHECK(index(k2) == 4);
  for (const Word &w : ball(2, 4)) {
    const bool even = exponent_sum(w, 1) % 2 == 0 && exponent_sum(w, 2) % 2 == 0;
    CHECK(contains(k2, w) == even);
  }
  CHECK(index(profinite_kernel(1, 3)) == 6);
  CHECK(index(profinite_kernel(2, 1)) == 1);
}

TEST_CASE("labelled folding expresses elements in the generators") {
  const auto gens = words({"aa", "b", "abA"});
  const GeneratorExpression ex(gens, 2);
  CHECK(ex.free_basis());
  CHECK(index(ex.graph()) == 2);
  for (const Word &w : ball(2, 5)) {
    const auto e = ex.express(w);
    CHECK(e.has_value() == contains(ex.graph(), w));
    if (e) {
      CHECK(substitute(*e, gens, 2) == w);
    }
  }
  const GeneratorExpression dependent(words({"a", "b", "ab"}), 2);
  CHECK_FALSE(dependent.free_basis());
  const GeneratorExpression nielsen(words({"ab", "b"}), 2);
  CHECK(nielsen.free_basis());
  const auto a = nielsen.express(parse_word("a", 2));
  REQUIRE(a.has_value());
  CHECK(to_string(*a) == "aB");
}

TEST_CASE("permutation and text forms") {
  const SubgroupGraph h = SubgroupGraph::from_permutations(2, {{1, 0}, {0, 1}});
  CHECK(h == from_generators(words({"aa", "b", "abA"}), 2));
  CHECK_THROWS(SubgroupGraph::from_permutations(2, {{0, 1}, {0, 1}}));
  CHECK(parse_subgroup(to_text(h)) == h);
  CHECK(parse_subgroup("F 2\naa\nb\nabA\n") == h);
  CHECK(parse_subgroup("F 2 graph 2\n2 1\n1 2\n") == h);
  CHECK(parse_subgroup(to_generator_text(h)) == h);
  CHECK_THROWS_AS(parse_subgroup("F 2\nac\n"), ParseError);
}
