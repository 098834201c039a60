#include <doctest.h>

#include <set>

#include "commsol/error.hpp"
#include "commsol/geometry.hpp"

using namespace commsol;

namespace {

Word w2(const char *s) { return parse_word(s, 2); }

IntVector v1(long x) { return IntVector{mpz_class(x)}; }

ZComm scale(long p, long q) { return from_matrix(RationalMatrix(1, {mpq_class(p, q)})); }

// Oracle: nearest domain point by scanning a ball large enough to contain
// every candidate; ties go to the shortlex-least d.
Word nearest_by_scan(const SubgroupGraph &d, const Word &g) {
  const auto candidates = ball(g.rank(), g.size() + index(d));
  std::optional<Word> best;
  std::size_t best_len = 0;
  for (const Word &c : candidates) {
    if (!d.contains(c)) {
      continue;
    }
    const std::size_t len = (g.inverse() * c).size();
    if (!best || len < best_len || (len == best_len && ShortlexLess{}(c, *best))) {
      best = c;
      best_len = len;
    }
  }
  return *best;
}

// Oracle: the first n letters of the reduced word g^30.
Word iterate_prefix(const Word &g, std::size_t n) { return g.power(30).subword(0, n); }

} // namespace

TEST_CASE("baseleaf map on Z") {
  const BaseleafMap<FreeAbelianGroup> twice(scale(2, 1));
  CHECK(twice.evaluate(v1(5)) == v1(10));
  const BaseleafMap<FreeAbelianGroup> half(scale(1, 2));
  CHECK(half.evaluate(v1(4)) == v1(2));
  CHECK(half.evaluate(v1(5)) == v1(2));
  CHECK(half.evaluate(v1(-3)) == v1(-2));
}

TEST_CASE("baseleaf map agrees with a scanning nearest-point oracle") {
  const auto cat = f2_catalog();
  for (std::size_t i : {7u, 8u, 9u, 10u, 13u}) {
    const BaseleafMap<FreeGroup> m(cat[i]);
    for (const Word &g : ball(2, 3)) {
      CHECK(m.evaluate(g) == cat[i].apply(nearest_by_scan(cat[i].domain(), g)));
    }
  }
  // transvection on the even a-exponent subgroup: a goes to 1 (tie with aa),
  // ab goes to aba (tie with abA), then a -> ab
  const BaseleafMap<FreeGroup> m(cat[7]);
  CHECK(to_literal(m.evaluate(w2("b"))) == "b");
  CHECK(to_literal(m.evaluate(w2("a"))) == "1");
  CHECK(to_literal(m.evaluate(w2("ab"))) == "abbab");
}

TEST_CASE("quasi-isometry constants") {
  const auto id = qi_estimate(BaseleafMap<FreeGroup>(FComm::identity(2)), 3);
  CHECK(id.multiplicative == 1);
  CHECK(id.additive == 0);
  CHECK(id.pairs == 53 * 52 / 2);

  const auto twice = qi_estimate(BaseleafMap<FreeAbelianGroup>(scale(2, 1)), 10);
  CHECK(twice.multiplicative == 2);
  CHECK(twice.additive == 0);
  CHECK(twice.min_ratio == 2);
}

TEST_CASE("estimated constants certify every sampled pair") {
  const auto cat = f2_catalog();
  const auto pts = ball(2, 3);
  for (const FComm &phi : cat) {
    const BaseleafMap<FreeGroup> m(phi);
    const auto q = qi_estimate(m, 3);
    CHECK(q.multiplicative >= 1);
    CHECK(q.additive >= 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        CHECK(q.certifies(word_distance(pts[i], pts[j]),
                          word_distance(m.evaluate(pts[i]), m.evaluate(pts[j]))));
      }
    }
  }
}

TEST_CASE("large radius hits the work cap") {
  CHECK_THROWS_AS(qi_estimate(BaseleafMap<FreeGroup>(FComm::identity(2)), 7),
                  ResourceLimitError);
  CHECK_THROWS_AS(qi_estimate(BaseleafMap<FreeGroup>(FComm::identity(2)), -1),
                  PreconditionError);
}

TEST_CASE("equivalent commensurations stay a bounded distance apart") {
  const auto cat = f2_catalog();
  const std::pair<std::size_t, std::size_t> equivalent_pairs[] = {{5, 7}, {1, 8}, {2, 13}};
  for (auto [i, j] : equivalent_pairs) {
    REQUIRE(equivalent(cat[i], cat[j]));
    const auto p = bounded_distance(BaseleafMap<FreeGroup>(cat[i]), BaseleafMap<FreeGroup>(cat[j]), 8);
    CHECK(p.stable_between(6, 8));
    CHECK(p.stable_from <= 6);
  }
  // swap against the identity: d(ab.., ba..) grows with the radius
  const auto p = bounded_distance(BaseleafMap<FreeGroup>(cat[0]), BaseleafMap<FreeGroup>(cat[1]), 8);
  CHECK(p.profile[8] == 16);
  CHECK(p.stable_from == 8);

  const auto z = bounded_distance(BaseleafMap<FreeAbelianGroup>(scale(2, 1)),
                                  BaseleafMap<FreeAbelianGroup>(scale(2, 1)), 5);
  CHECK(z.bound() == 0);
  CHECK(z.stable_from == 0);
}

TEST_CASE("baseleaf map factors through the covers") {
  for (const FComm &phi : f2_catalog()) {
    const auto r = factorization_check(phi, 2, 5);
    CHECK(r.components == 4);
    CHECK(r.points > 0);
    CHECK_MESSAGE(r.passed(), (r.mismatches.empty() ? "" : r.mismatches.front()));
  }
  for (const ZComm &phi : {scale(2, 1), scale(1, 2), scale(3, 2)}) {
    const auto r = factorization_check(phi, 4, 12);
    CHECK(r.components == 4);
    CHECK(r.passed());
  }
}

TEST_CASE("fixed points") {
  CHECK(to_text(fixed_point(w2("ab"))) == "u=1 c=ab");
  CHECK(to_text(fixed_point(w2("Aba"))) == "u=A c=b");
  CHECK(to_text(fixed_point(w2("a"), -1)) == "u=1 c=A");
  CHECK(to_text(fixed_point(w2("aab"))) == "u=1 c=aab");
  CHECK(to_text(fixed_point(w2("abab"))) == "u=1 c=ab");
  CHECK(to_text(fixed_point(w2("bAbaB"))) == "u=bA c=b");
  CHECK(to_text(fixed_point(w2("abaBA"))) == "u=ab c=a");
  CHECK_THROWS_AS(fixed_point(Word(2)), PreconditionError);
}

TEST_CASE("fixed points match long powers") {
  for (const Word &g : ball(2, 4)) {
    if (g.empty()) {
      continue;
    }
    CHECK(fixed_point(g).prefix(20) == iterate_prefix(g, 20));
    CHECK(fixed_point(g, -1).prefix(20) == iterate_prefix(g.inverse(), 20));
  }
}

TEST_CASE("boundary points parse back") {
  for (const Word &g : ball(2, 3)) {
    if (g.empty()) {
      continue;
    }
    const auto p = fixed_point(g);
    CHECK(parse_boundary_point(to_text(p), 2) == p);
  }
  CHECK_THROWS_AS(parse_boundary_point("u=a", 2), ParseError);
  CHECK_THROWS_AS(parse_boundary_point("u=a c=1", 2), ParseError);
}

TEST_CASE("boundary action") {
  const auto cat = f2_catalog();
  CHECK(to_text(boundary_action(FComm::inner(w2("a")), fixed_point(w2("b")))) == "u=a c=b");
  CHECK(power_into(cat[7].domain(), w2("a")) == 2);
  CHECK(power_into(cat[7].domain(), w2("b")) == 1);

  const auto words = ball(2, 3);
  for (const FComm &phi : cat) {
    for (const Word &g : words) {
      if (g.empty()) {
        continue;
      }
      const auto p = fixed_point(g);
      const auto q = boundary_action(phi, p);
      const long m = power_into(phi.domain(), g);
      // m versus 2m
      CHECK(fixed_point(phi.apply(g.power(2 * m))) == q);
      // the same point from a different source element
      CHECK(boundary_action(phi, BoundaryPoint{p.u, p.c, std::nullopt}) == q);
      // equivariance under domain elements
      for (const Word &hd : ball(2, 2)) {
        if (!phi.domain().contains(hd)) {
          continue;
        }
        const auto moved = boundary_action(phi, fixed_point(hd * g * hd.inverse()));
        const Word ph = phi.apply(hd);
        CHECK(moved == fixed_point(ph * q.u * q.c * q.u.inverse() * ph.inverse()));
      }
    }
  }
}

TEST_CASE("boundary action is injective on sampled points") {
  const auto cat = f2_catalog();
  std::vector<BoundaryPoint> pts;
  std::set<std::string> seen;
  for (const Word &g : ball(2, 4)) {
    if (!g.empty() && seen.insert(to_text(fixed_point(g))).second) {
      pts.push_back(fixed_point(g));
    }
  }
  for (const FComm &phi : cat) {
    std::set<std::string> images;
    for (const auto &p : pts) {
      images.insert(to_text(boundary_action(phi, p)));
    }
    CHECK(images.size() == pts.size());
  }
}

TEST_CASE("iterates of g push every short word toward g+") {
  for (const Word &g : ball(2, 3)) {
    if (g.empty()) {
      continue;
    }
    const Word target = fixed_point(g).prefix(20);
    for (const Word &w : ball(2, 3)) {
      CHECK((g.power(30) * w).subword(0, 20) == target);
    }
  }
}

TEST_CASE("boundary action of a composite") {
  const auto cat = f2_catalog();
  for (const Word &g : ball(2, 2)) {
    if (g.empty()) {
      continue;
    }
    const auto p = fixed_point(g);
    CHECK(boundary_action(FComm::identity(2), p) == p);
    for (const FComm &phi : cat) {
      for (const FComm &psi : cat) {
        CHECK(boundary_action(compose(phi, psi), p) ==
              boundary_action(phi, boundary_action(psi, p)));
      }
    }
  }
}

TEST_CASE("inequivalent catalog entries move some fixed point differently") {
  const auto cat = f2_catalog();
  std::vector<BoundaryPoint> pts;
  for (const Word &g : ball(2, 4)) {
    if (!g.empty()) {
      pts.push_back(fixed_point(g));
    }
  }
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i + 1; j < cat.size(); ++j) {
      if (equivalent(cat[i], cat[j])) {
        continue;
      }
      bool separated = false;
      for (const auto &p : pts) {
        if (!(boundary_action(cat[i], p) == boundary_action(cat[j], p))) {
          separated = true;
          break;
        }
      }
      CHECK_MESSAGE(separated, "pair " << i << ", " << j);
    }
  }
}

TEST_CASE("quasi-isometry constants compose") {
  const auto cat = f2_catalog();
  std::vector<QIEstimate> q;
  for (const FComm &phi : cat) {
    q.push_back(qi_estimate(BaseleafMap<FreeGroup>(phi), 3));
  }
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = 0; j < cat.size(); ++j) {
      const auto c = qi_estimate(BaseleafMap<FreeGroup>(compose(cat[i], cat[j])), 3);
      CHECK(c.multiplicative <= q[i].multiplicative * q[j].multiplicative);
    }
  }
}
