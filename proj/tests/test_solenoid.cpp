#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "commsol/error.hpp"
#include "commsol/solenoid.hpp"

using namespace commsol;

namespace {

Word w2(const char *s) { return parse_word(s, 2); }

IntVector v1(long x) { return IntVector{mpz_class(x)}; }

// Oracle: lcm(1..n) by direct iteration.
long lcm_upto(long n) {
  long l = 1;
  for (long i = 1; i <= n; ++i) {
    l = std::lcm(l, i);
  }
  return l;
}

// Oracle: d_pro on Z by scanning lcm levels; returns the exponent or 0.
long z_level(long diff, long depth) {
  long best = 1;
  for (long n = 1; n <= depth; ++n) {
    if (diff % lcm_upto(n) == 0) {
      best = n;
    }
  }
  return best == depth ? 0 : best;
}

long exponent_sum(const Word &w, int gen) {
  long s = 0;
  for (Letter l : w.letters()) {
    s += l == gen ? 1 : (l == -gen ? -1 : 0);
  }
  return s;
}

// Oracle: sample the open r-ball of the tree on a grid and look for two
// points with the same image in the rose.
bool sampled_ball_injective(const mpq_class &r) {
  std::set<std::pair<int, mpq_class>> seen;
  for (int l : {1, -1, 2, -2}) {
    for (int step = 1; step < 200; ++step) {
      const mpq_class t(step, 200);
      if (t >= r) {
        break;
      }
      const std::pair<int, mpq_class> image =
          l > 0 ? std::make_pair(l, t) : std::make_pair(-l, mpq_class(1 - t));
      if (!seen.insert(image).second) {
        return false;
      }
    }
  }
  return true;
}

} // namespace

TEST_CASE("metric values") {
  CHECK(MetricValue().exact() == "0");
  CHECK(MetricValue::exp_neg(4).exact() == "exp(-4)");
  CHECK(MetricValue::exp_neg(4).to_string().rfind("exp(-4) = 0.0183156", 0) == 0);
  CHECK(MetricValue::sqrt_of(mpq_class(1, 4)) == MetricValue::rational(mpq_class(1, 2)));
  CHECK(MetricValue::sqrt_of(2).exact() == "sqrt(2)");
  CHECK(MetricValue::exp_neg(2) < MetricValue::exp_neg(1));
  CHECK(MetricValue::exp_neg(1) < MetricValue::rational(mpq_class(1, 2)));
  CHECK(MetricValue::rational(1) < MetricValue::sqrt_of(2));
  CHECK(MetricValue() < MetricValue::exp_neg(30));
  CHECK(parse_decimal("0.1") == mpq_class(1, 10));
  CHECK(parse_decimal("3/8") == mpq_class(3, 8));
  CHECK(parse_decimal("-2.50") == mpq_class(-5, 2));
  CHECK_THROWS_AS(parse_decimal("1e3"), ParseError);
}

TEST_CASE("tree distances") {
  const Word e(2);
  const TreePoint a_quarter{e, 1, mpq_class(1, 4)};
  CHECK(tree_distance(a_quarter, TreePoint{e, -1, mpq_class(1, 4)}) == mpq_class(1, 2));
  CHECK(tree_distance(a_quarter, TreePoint{e, 2, mpq_class(1, 4)}) == mpq_class(1, 2));
  CHECK(tree_distance(TreePoint{e, 1, mpq_class(1, 2)}, TreePoint{w2("a"), -1, mpq_class(1, 2)}) == 0);
  CHECK(tree_distance(tree_vertex(w2("ab")), tree_vertex(w2("aB"))) == 2);
  CHECK(tree_distance(TreePoint{w2("a"), 2, mpq_class(1, 3)}, tree_vertex(e)) == mpq_class(4, 3));
  CHECK(distance_to_base(TreePoint{w2("a"), -1, mpq_class(1, 3)}) == mpq_class(2, 3));

  std::mt19937 rng(2);
  const auto words = ball(2, 3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> letter(0, 4);
  std::uniform_int_distribution<int> frac(0, 7);
  auto random_point = [&] {
    const int l = letter(rng);
    const Letter ls[] = {0, 1, -1, 2, -2};
    return TreePoint{words[pick(rng)], ls[l], l == 0 ? mpq_class(0) : mpq_class(frac(rng), 8)};
  };
  for (int trial = 0; trial < 300; ++trial) {
    const TreePoint p = random_point(), q = random_point(), r = random_point();
    const Word g = words[pick(rng)];
    CHECK(tree_distance(p, q) == tree_distance(q, p));
    CHECK(tree_distance(p, r) <= tree_distance(p, q) + tree_distance(q, r));
    CHECK(tree_distance(translate(g, p), translate(g, q)) == tree_distance(p, q));
  }
}

TEST_CASE("injectivity radius") {
  CHECK(injectivity_radius() == mpq_class(1, 2));
  CHECK(ball_projects_isometrically(mpq_class(49, 100)));
  CHECK_FALSE(ball_projects_isometrically(mpq_class(51, 100)));
  CHECK(sampled_ball_injective(mpq_class(49, 100)));
  CHECK_FALSE(sampled_ball_injective(mpq_class(51, 100)));
}

TEST_CASE("covers and covering maps") {
  const SubgroupGraph whole = SubgroupGraph::whole(2);
  CHECK(cover_of(whole).size() == 1);
  const SubgroupGraph ka = from_generators({w2("aa"), w2("b"), w2("abA")}, 2);
  const CoveringMap p = covering_map(ka, whole);
  CHECK(p.is_covering());
  CHECK(p.vertex_map == std::vector<int>{0, 0});
  const CoveringMap id = covering_map(ka, ka);
  CHECK(id.vertex_map == std::vector<int>{0, 1});
  CHECK_THROWS_AS(covering_map(whole, ka), PreconditionError);
  CHECK_THROWS_AS(cover_of(from_generators({w2("a")}, 2)), InfiniteIndexError);

  const auto subs = enumerate_subgroups(2, 3);
  for (const auto &h : subs) {
    for (const auto &k : subs) {
      if (!is_subgroup(h, k)) {
        continue;
      }
      const CoveringMap hk = covering_map(h, k);
      CHECK(hk.is_covering());
      for (const auto &l : subs) {
        if (is_subgroup(k, l)) {
          CHECK(compose(covering_map(k, l), hk).vertex_map == covering_map(h, l).vertex_map);
        }
      }
    }
  }
}

TEST_CASE("covers biject with subgroups up to based isomorphism") {
  const auto subs = enumerate_subgroups(2, 3);
  std::mt19937 rng(9);
  std::vector<CoverGraph> covers;
  for (const auto &h : subs) {
    std::vector<int> perm(h.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    const CoverGraph shuffled = relabel(cover_of(h), perm);
    CHECK(based_isomorphic(shuffled, cover_of(h)));
    CHECK(subgroup_of(shuffled) == h);
    covers.push_back(shuffled);
  }
  for (std::size_t i = 0; i < covers.size(); ++i) {
    for (std::size_t j = i + 1; j < covers.size(); ++j) {
      CHECK_FALSE(based_isomorphic(covers[i], covers[j]));
    }
  }
}

TEST_CASE("closest points") {
  const SubgroupGraph ka = from_generators({w2("aa"), w2("b"), w2("abA")}, 2);
  CHECK(closest_point(ka, w2("b")) == w2("b"));
  CHECK(closest_point(ka, w2("a")).empty());
  CHECK(to_string(closest_point(ka, w2("ab"))) == "aba");
  const Lattice two = Lattice::scaled(2, 2);
  CHECK(closest_point(two, IntVector{1, 1}) == (IntVector{0, 0}));
  CHECK(closest_point(Lattice::scaled(1, 3), v1(4)) == v1(3));
}

TEST_CASE("lifting through covers") {
  const SubgroupGraph ka = from_generators({w2("aa"), w2("b"), w2("abA")}, 2);
  const SubgroupGraph kb = from_generators({w2("a"), w2("bb"), w2("baB")}, 2);

  const GraphLift id = lift_through_covers(FComm::identity(2), ka, ka);
  CHECK(id.vertex_image == std::vector<int>{0, 1});
  CHECK(id.label_equivariant);
  CHECK(id.consistent());
  CHECK(id.unique());

  const FComm t = FComm::automorphism({w2("ab"), w2("b")});
  for (const Word &b : ka.basis()) {
    CHECK(exponent_sum(t.apply(b), 1) % 2 == 0);
  }
  const GraphLift lt = lift_through_covers(t, ka, ka);
  CHECK(lt.consistent());
  CHECK(lt.unique());
  CHECK(lt.label_equivariant);

  const FComm swap = FComm::automorphism({w2("b"), w2("a")});
  const GraphLift ls = lift_through_covers(swap, ka, kb);
  CHECK(ls.consistent());
  CHECK(ls.unique());
  CHECK(ls.vertex_image == std::vector<int>{0, 1});
  CHECK(ls.edge_image[0][0] == w2("b"));

  CHECK_THROWS_WITH_AS(lift_through_covers(swap, ka, ka), doctest::Contains("not in K"),
                       PreconditionError);

  const auto cat = f2_catalog();
  const auto s = std::make_shared<const TruncatedSystem<FreeGroup>>(2, 2);
  std::size_t lifted = 0;
  for (const auto &f : cat) {
    for (const auto &h : s->objects()) {
      if (!is_subgroup(h, f.domain())) {
        continue;
      }
      for (const auto &k : s->objects()) {
        if (!is_subgroup(push_forward(f, h), k)) {
          continue;
        }
        const GraphLift g = lift_through_covers(f, h, k);
        CHECK(g.consistent());
        CHECK(g.unique());
        ++lifted;
      }
    }
  }
  CHECK(lifted > cat.size());

  RationalMatrix two(1);
  two(0, 0) = 2;
  const TorusLift tl = lift_through_covers(from_matrix(two), Lattice::whole(1), Lattice::scaled(1, 2));
  CHECK(tl.target == Lattice::scaled(1, 2));
  CHECK_THROWS_AS(lift_through_covers(from_matrix(two), Lattice::whole(1), Lattice::scaled(1, 4)),
                  PreconditionError);
}

TEST_CASE("profinite distance on Z") {
  const TorusSolenoid s(1, 5);
  CHECK(s.kernel() == Lattice::scaled(1, 60));
  CHECK(s.d_pro(v1(0), v1(12)) == MetricValue::exp_neg(4));
  CHECK(s.d_pro(v1(0), v1(12)).exact() == "exp(-4)");
  CHECK(s.d_pro(v1(7), v1(7)) == MetricValue());
  for (long a = -30; a <= 30; ++a) {
    for (long b = -30; b <= 30; b += 7) {
      const long lvl = z_level(a - b, 5);
      CHECK(s.d_pro(v1(a), v1(b)) == (lvl == 0 ? MetricValue() : MetricValue::exp_neg(lvl)));
    }
  }
  const TorusSolenoid one(1, 1);
  CHECK(one.d_pro(v1(0), v1(1)) == MetricValue());
}

TEST_CASE("sigma on the Z solenoid") {
  const TorusSolenoid s(1, 5);
  const auto p0 = s.baseleaf(v1(0));
  const auto p12 = s.baseleaf(v1(12));
  const TorusSigma sg = s.sigma(p0, p12);
  CHECK(sg.value == MetricValue::exp_neg(4));
  // Oracle: exhaustive search over g in [-20, 20].
  MetricValue best = MetricValue::rational(1000);
  for (long g = -20; g <= 20; ++g) {
    const MetricValue leaf = MetricValue::rational(abs(mpq_class(g)));
    const long lvl = z_level(0 - (12 - g), 5);
    const MetricValue pro = lvl == 0 ? MetricValue() : MetricValue::exp_neg(lvl);
    const MetricValue v = max(pro, leaf);
    if (v < best) {
      best = v;
    }
  }
  CHECK(best == sg.value);
  const auto half = s.point(v1(3), {mpq_class(7, 4)});
  CHECK(half.coordinate == v1(5));
  CHECK(half.leaf[0] == mpq_class(-1, 4));
  CHECK(s.to_text(p12) == "solpoint N=5 cosets=[(0),(0),(0),(0),(2)] leaf=(0)");
}

TEST_CASE("free solenoid basics") {
  const FreeSolenoid s(2, 2);
  CHECK(s.sheets() == 4);
  CHECK(s.level(1).size() == 1);
  const auto base = s.baseleaf(Word(2));
  CHECK(base.coordinate == 0);
  CHECK(s.coset_family(0) == std::vector<int>(4, 0));
  const auto ab = s.baseleaf(w2("ab"));
  const auto fam = s.coset_family(ab.coordinate);
  for (std::size_t i = 0; i < s.system().objects().size(); ++i) {
    CHECK(fam[i] == s.system().object(i).trace(0, w2("ab")));
  }
  CHECK(s.baseleaf_path(w2("ab")).size() == 3);
  CHECK(s.d_pro(w2("a"), w2("a")) == MetricValue());
  CHECK(s.d_pro(w2("a"), Word(2)) == MetricValue::exp_neg(1));
  CHECK(s.d_pro(w2("aa"), Word(2)) == MetricValue());
  const auto p = s.point(0, TreePoint{Word(2), 1, mpq_class(3, 4)});
  CHECK(p.letter == -1);
  CHECK(p.t == mpq_class(1, 4));
  CHECK(p.coordinate == s.baseleaf(w2("a")).coordinate);
  const auto tie = s.point(0, TreePoint{Word(2), -1, mpq_class(1, 2)});
  CHECK(tie.letter == 1);
  CHECK(s.to_text(base) == "solpoint N=2 cosets=[0,0,0,0] leaf=1");
}

TEST_CASE("profinite pseudometric is an ultrametric and right invariant") {
  const FreeSolenoid s(2, 3);
  std::mt19937 rng(13);
  const auto words = ball(2, 4);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const Word x = words[pick(rng)], y = words[pick(rng)], z = words[pick(rng)];
    CHECK(s.d_pro(x, y) == s.d_pro(y, x));
    CHECK(s.d_pro(x, z) <= max(s.d_pro(x, y), s.d_pro(y, z)));
    CHECK(s.d_pro(x * z, y * z) == s.d_pro(x, y));
    CHECK(s.d_pro(x, y) <= MetricValue::exp_neg(1));
  }
}

TEST_CASE("sigma is a pseudometric") {
  const FreeSolenoid s(2, 2);
  std::mt19937 rng(17);
  const auto words = ball(2, 3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> letter(0, 4);
  std::uniform_int_distribution<int> frac(0, 7);
  const Letter ls[] = {0, 1, -1, 2, -2};
  auto random_point = [&] {
    const int l = letter(rng);
    return s.point(static_cast<int>(s.baseleaf(words[pick(rng)]).coordinate),
                   TreePoint{words[pick(rng)], ls[l], l == 0 ? mpq_class(0) : mpq_class(frac(rng), 8)});
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_point(), q = random_point(), r = random_point();
    const auto pq = s.sigma(p, q).value, qp = s.sigma(q, p).value;
    CHECK(pq == qp);
    CHECK(s.sigma(p, p).value == MetricValue());
    CHECK(s.sigma(p, r).value.value() <=
          s.sigma(p, q).value.value() + s.sigma(q, r).value.value() + 1e-12L);
    CHECK(s.sigma(p, q).value <= s.d_inf(p, q));
  }
}

TEST_CASE("ball structure") {
  const FreeSolenoid s2(2, 2);
  const auto base = s2.baseleaf(Word(2));
  for (const char *e : {"0.05", "0.1"}) {
    const BallReport r = s2.ball_structure(base, parse_decimal(e));
    CHECK(r.components == 1);
    CHECK(r.isometric);
    CHECK_FALSE(r.degenerate);
  }
  const auto off = s2.point(1, TreePoint{Word(2), 2, mpq_class(1, 2)});
  CHECK(s2.ball_structure(off, mpq_class(1, 10)).isometric);
  const FreeSolenoid s1(2, 1);
  const BallReport d = s1.ball_structure(s1.baseleaf(Word(2)), mpq_class(1, 10));
  CHECK(d.components == 1);
  CHECK(d.degenerate);
  CHECK_THROWS_AS(s2.ball_structure(base, mpq_class(4, 10)), PreconditionError);
  CHECK_THROWS_AS(s2.ball_structure(base, mpq_class(1, 8)), PreconditionError);

  const TorusSolenoid z(1, 4);
  const BallReport zr = z.ball_structure(z.baseleaf(v1(0)), mpq_class(1, 10));
  long expected = 0;
  for (long c = 0; c < 12; ++c) {
    expected += c % 6 == 0 ? 1 : 0;
  }
  CHECK(zr.components == static_cast<std::size_t>(expected));
  CHECK(zr.isometric);
}

TEST_CASE("baseleaf density and sheet counts") {
  for (long n : {1L, 2L, 3L}) {
    const FreeSolenoid s(2, n);
    std::set<int> coords;
    for (const Word &g : ball(2, 12)) {
      coords.insert(s.baseleaf(g).coordinate);
      if (coords.size() == s.sheets()) {
        break;
      }
    }
    CHECK(coords.size() == s.sheets());
    CHECK(s.sheets() == index(profinite_kernel(2, n)));
    for (const auto &obj : s.system().objects()) {
      std::set<int> hit;
      for (int c : coords) {
        hit.insert(obj.trace(0, s.kernel().tree_path(c)));
      }
      CHECK(hit.size() == obj.size());
    }
  }
  CHECK(FreeSolenoid(2, 2).sheets() == 4);
  for (long n = 1; n <= 5; ++n) {
    const TorusSolenoid s(1, n);
    std::set<IntVector> coords;
    for (long g = 0; g < lcm_upto(n); ++g) {
      coords.insert(s.baseleaf(v1(g)).coordinate);
    }
    CHECK(mpz_class(static_cast<long>(coords.size())) == s.sheets());
    CHECK(s.sheets() == lcm_upto(n));
  }
}

TEST_CASE("metric values and points parse back") {
  for (const MetricValue &v : {MetricValue(), MetricValue::exp_neg(4), MetricValue::rational(mpq_class(3, 2)),
                               MetricValue::sqrt_of(mpq_class(5, 4))}) {
    CHECK(parse_metric_value(v.to_string()) == v);
    CHECK(parse_metric_value(v.exact()) == v);
  }
  CHECK(parse_metric_value("sqrt(9/4)") == MetricValue::rational(mpq_class(3, 2)));
  CHECK_THROWS_AS(parse_metric_value("exp(4)"), ParseError);
  CHECK_THROWS_AS(parse_metric_value("e"), ParseError);

  const FreeSolenoid f(2, 2);
  for (const Word &g : ball(2, 3)) {
    for (Letter l : {0, 1, -2}) {
      const auto p = f.point(f.baseleaf(g).coordinate, TreePoint{Word(2), l, mpq_class(1, 3)});
      CHECK(f.parse_point(f.to_text(p)) == p);
    }
  }
  CHECK_THROWS_AS(f.parse_point("solpoint N=2 cosets=[0,0,0,0] leaf=a@3/4"), ParseError);
  CHECK_THROWS_AS(f.parse_point("solpoint N=3 cosets=[0,0,0,0] leaf=1"), MismatchError);

  const TorusSolenoid z(2, 3);
  for (const IntVector &g : l1_ball(2, 4)) {
    const auto p = z.point(g, {mpq_class(1, 2), mpq_class(-1, 3)});
    CHECK(z.parse_point(z.to_text(p)) == p);
  }
  const TorusSolenoid z1(1, 5);
  CHECK(z1.parse_point(z1.to_text(z1.baseleaf(v1(12)))) == z1.baseleaf(v1(12)));
}
