#include <doctest.h>

#include "commsol/error.hpp"
#include "commsol/prosystems.hpp"

using namespace commsol;

namespace {

using FSystem = TruncatedSystem<FreeGroup>;
using ZSystem = TruncatedSystem<FreeAbelianGroup>;

std::shared_ptr<const FSystem> fsys(long n) { return std::make_shared<const FSystem>(2, n); }
std::shared_ptr<const ZSystem> zsys(int dim, long n) {
  return std::make_shared<const ZSystem>(dim, n);
}

Word w2(const char *s) { return parse_word(s, 2); }

ZComm times(long m) {
  RationalMatrix a(1);
  a(0, 0) = m;
  return from_matrix(a);
}

// Oracle: bond relation closed under composition of inclusions.
template <class S> bool bonds_transitive(const S &s) {
  auto has = [&](std::size_t a, std::size_t b) {
    for (const Bond &x : s.bonds()) {
      if (x.from == a && x.to == b) {
        return true;
      }
    }
    return false;
  };
  for (const Bond &x : s.bonds()) {
    for (const Bond &y : s.bonds()) {
      if (x.to == y.from && !has(x.from, y.to)) {
        return false;
      }
    }
  }
  return true;
}

} // namespace

TEST_CASE("building systems") {
  const auto z1 = zsys(1, 3);
  REQUIRE(z1->objects().size() == 3);
  CHECK(z1->object(0) == Lattice::whole(1));
  CHECK(z1->object(1) == Lattice::scaled(1, 2));
  CHECK(z1->object(2) == Lattice::scaled(1, 3));
  CHECK(z1->bonds() == std::vector<Bond>{{1, 0}, {2, 0}});
  CHECK(z1->overflow().size() == 1);

  const auto f2 = fsys(2);
  CHECK(f2->objects().size() == 4);
  CHECK(f2->bonds().size() == 3);
  for (const Bond &b : f2->bonds()) {
    CHECK(b.to == 0);
  }
  CHECK(f2->overflow().size() == 3);

  const auto z2 = zsys(2, 1);
  CHECK(z2->objects().size() == 1);
  CHECK(z2->bonds().empty());

  CHECK(bonds_transitive(*fsys(4)));
  CHECK(bonds_transitive(*zsys(2, 6)));
  CHECK(bonds_transitive(*zsys(3, 4)));
  CHECK_THROWS_AS(FSystem(2, 0), PreconditionError);
}

TEST_CASE("zeta of the identity is componentwise identity") {
  const auto s = fsys(3);
  const auto m = zeta<FreeGroup>(FComm::identity(2), s);
  CHECK(m.strictly_commutes());
  CHECK(m.deep_sources().empty());
  for (std::size_t j = 0; j < s->objects().size(); ++j) {
    CHECK(m.components()[j].source == s->object(j));
    CHECK(m.components()[j].source_index == j);
  }
  CHECK(equivalent(reconstruct(m), FComm::identity(2)));
}

TEST_CASE("zeta of doubling on Z") {
  const auto s = zsys(1, 2);
  const auto m = zeta<FreeAbelianGroup>(times(2), s);
  CHECK(m.strictly_commutes());
  CHECK(m.components()[0].source == Lattice::whole(1));
  CHECK(m.components()[1].source == Lattice::whole(1));
  CHECK(m.components()[0].map.codomain() == Lattice::scaled(1, 2));
  CHECK(to_matrix(m.components()[1].map) == to_matrix(times(2)));
  CHECK(equivalent(reconstruct(zeta<FreeAbelianGroup>(times(2), zsys(1, 4))), times(2)));
  const auto half = zeta<FreeAbelianGroup>(invert(times(2)), zsys(1, 3));
  CHECK(half.components()[2].source == Lattice::scaled(1, 6));
  CHECK(half.deep_sources() == (std::vector<std::size_t>{1, 2}));
}

TEST_CASE("zeta of an inner automorphism conjugates objects") {
  const auto s = fsys(2);
  const FComm c = inner(w2("a"));
  const auto m = zeta<FreeGroup>(c, s);
  CHECK(m.strictly_commutes());
  for (std::size_t j = 0; j < s->objects().size(); ++j) {
    const auto &comp = m.components()[j];
    std::vector<Word> conjugated;
    for (const Word &b : comp.source.basis()) {
      conjugated.push_back(conjugate(w2("a"), b));
    }
    CHECK(from_generators(conjugated, 2) == s->object(j));
    CHECK(comp.map.codomain() == s->object(j));
  }
}

TEST_CASE("zeta round trips and functoriality over the catalog") {
  const auto cat = f2_catalog();
  for (long n : {2L, 3L}) {
    const auto s = fsys(n);
    std::vector<SystemMorphism<FreeGroup>> zs;
    for (const auto &f : cat) {
      zs.push_back(zeta<FreeGroup>(f, s));
      CHECK(zs.back().strictly_commutes());
      CHECK(equivalent(reconstruct(zs.back()), f));
    }
    for (std::size_t i = 0; i < cat.size(); ++i) {
      for (std::size_t j = 0; j < cat.size(); ++j) {
        const auto composed = compose_morphisms(zs[i], zs[j]);
        CHECK(composed.strictly_commutes());
        CHECK(morphisms_equivalent(composed, zeta<FreeGroup>(compose(cat[i], cat[j]), s)));
        CHECK(morphisms_equivalent(zs[i], zs[j]) == equivalent(cat[i], cat[j]));
      }
    }
  }
}

TEST_CASE("zeta is well defined on restrictions") {
  const auto s = fsys(3);
  const FComm swap = FComm::automorphism({w2("b"), w2("a")});
  const auto r = restriction(swap, profinite_kernel(2, 2));
  CHECK(morphisms_equivalent(zeta<FreeGroup>(swap, s), zeta<FreeGroup>(r, s)));
  CHECK(equivalent(reconstruct(zeta<FreeGroup>(swap, fsys(2))), swap));
  const auto id = identity_morphism<FreeGroup>(s);
  const auto m = zeta<FreeGroup>(swap, s);
  CHECK(morphisms_equivalent(compose_morphisms(m, id), m));
  CHECK(morphisms_equivalent(compose_morphisms(id, m), m));
}

TEST_CASE("matrix zeta is functorial") {
  const auto s = zsys(2, 4);
  RationalMatrix a(2), b(2);
  a(0, 0) = mpq_class(1, 2);
  a(1, 1) = 3;
  b(0, 1) = 1;
  b(1, 0) = 2;
  const ZComm fa = from_matrix(a), fb = from_matrix(b);
  const auto za = zeta<FreeAbelianGroup>(fa, s);
  const auto zb = zeta<FreeAbelianGroup>(fb, s);
  CHECK(za.strictly_commutes());
  CHECK(morphisms_equivalent(compose_morphisms(za, zb),
                             zeta<FreeAbelianGroup>(compose(fa, fb), s)));
  CHECK(equivalent(reconstruct(za), fa));
  CHECK_FALSE(morphisms_equivalent(za, zb));
}

TEST_CASE("index predicates") {
  CHECK(IndexPredicate("all")(7));
  CHECK(IndexPredicate("index >= 4")(4));
  CHECK_FALSE(IndexPredicate("index>=4")(3));
  CHECK(IndexPredicate("index<=2")(2));
  CHECK(IndexPredicate("index%3==1")(4));
  CHECK(IndexPredicate("even")(6));
  CHECK(IndexPredicate("index in 2,3")(3));
  CHECK_FALSE(IndexPredicate("index in 2,3")(4));
  CHECK_THROWS_AS(IndexPredicate("prime"), ParseError);
  CHECK_THROWS_AS(IndexPredicate("index%0==1"), ParseError);
}

TEST_CASE("cofinal restrictions") {
  const auto s = zsys(1, 6);
  const auto r = cofinal_restrict<FreeAbelianGroup>(s, IndexPredicate("index>=4"));
  CHECK(r.subsystem->objects().size() == 3);
  const auto back = compose_morphisms(r.inverse, r.restrict);
  const auto forth = compose_morphisms(r.restrict, r.inverse);
  CHECK(back.strictly_commutes());
  CHECK(forth.strictly_commutes());
  CHECK(r.inverse.strictly_commutes());
  CHECK(r.restrict.strictly_commutes());
  CHECK(morphisms_equivalent(back, identity_morphism<FreeAbelianGroup>(s)));
  CHECK(morphisms_equivalent(forth, identity_morphism<FreeAbelianGroup>(r.subsystem)));

  const auto all = cofinal_restrict<FreeAbelianGroup>(s, IndexPredicate("all"));
  CHECK(all.subsystem->objects() == s->objects());
  CHECK(morphisms_equivalent(all.restrict, identity_morphism<FreeAbelianGroup>(s)));

  CHECK_THROWS_WITH_AS(cofinal_restrict<FreeAbelianGroup>(s, IndexPredicate("even")),
                       doctest::Contains("index 5"), PreconditionError);
  CHECK_THROWS_WITH_AS(cofinal_restrict<FreeAbelianGroup>(zsys(1, 4), IndexPredicate("index in 3")),
                       doctest::Contains("index 2"), PreconditionError);

  const auto f = fsys(4);
  CHECK_THROWS_AS(cofinal_restrict<FreeGroup>(f, IndexPredicate("index>=4")),
                  PreconditionError);
  const auto rf = cofinal_restrict<FreeGroup>(f, IndexPredicate("index>=3"));
  CHECK(rf.inverse.strictly_commutes());
  CHECK(morphisms_equivalent(compose_morphisms(rf.inverse, rf.restrict),
                             identity_morphism<FreeGroup>(f)));
}

TEST_CASE("dump format") {
  const auto s = zsys(1, 2);
  CHECK(to_text(*s) == "idx=0 index=1 subgroup=<(1)>\nidx=1 index=2 subgroup=<(2)>\nbond 1 0\n");
  const auto m = zeta<FreeAbelianGroup>(times(2), s);
  CHECK(to_text(m) == "comp 0: (1) -> (2)\ncomp 1: (1) -> (2)\n");
  const auto f = zeta<FreeGroup>(FComm::identity(2), fsys(1));
  CHECK(to_text(f) == "comp 0: a -> a\ncomp 0: b -> b\n");
}
