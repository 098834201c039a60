#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "commsol/error.hpp"
#include "commsol/geometry.hpp"

namespace commsol::acceptance {

namespace {

class Tally {
public:
  void expect(bool ok, const std::string &what) {
    ++checks_;
    if (!ok) {
      throw CheckFailed(what);
    }
  }
  std::string summary(const std::string &extra = "") const {
    return std::to_string(checks_) + " checks" + (extra.empty() ? "" : ", " + extra);
  }

private:
  std::size_t checks_ = 0;
};

long lcm_upto(long n) {
  long l = 1;
  for (long i = 1; i <= n; ++i) {
    l = std::lcm(l, i);
  }
  return l;
}

// exponent n of d_pro(a, b) on Z at the given depth, 0 when it vanishes
long z_level(long diff, long depth) {
  long best = 1;
  for (long n = 1; n <= depth; ++n) {
    if (diff % lcm_upto(n) == 0) {
      best = n;
    }
  }
  return best == depth ? 0 : best;
}

MetricValue z_dpro(long diff, long depth) {
  const long lvl = z_level(diff, depth);
  return lvl == 0 ? MetricValue() : MetricValue::exp_neg(lvl);
}

// --- 1 ---------------------------------------------------------------------

RationalMatrix naive_product(const RationalMatrix &a, const RationalMatrix &b) {
  const std::size_t n = a.dim();
  RationalMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class s = 0;
      for (std::size_t k = 0; k < n; ++k) {
        s += a(i, k) * b(k, j);
      }
      out(i, j) = s;
    }
  }
  return out;
}

std::string gl_realization() {
  Tally t;
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 3), num(-2, 2), den(1, 3);
  auto random_matrix = [&](std::size_t n) {
    while (true) {
      RationalMatrix m(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          mpq_class q(num(rng), den(rng));
          q.canonicalize();
          m(i, j) = q;
        }
      }
      if (m.invertible()) {
        return m;
      }
    }
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const RationalMatrix a = random_matrix(n), b = random_matrix(n);
    const ZComm phi = from_matrix(a), psi = from_matrix(b);
    const ZComm c = compose(phi, psi);
    t.expect(to_matrix(c) == naive_product(a, b),
             "to_matrix(compose) differs from the product at trial " + std::to_string(trial));
    t.expect(equivalent(from_matrix(to_matrix(c)), c),
             "from_matrix(to_matrix) not equivalent at trial " + std::to_string(trial));
    t.expect(to_matrix(phi) == a, "to_matrix(from_matrix(a)) != a");
  }
  return t.summary("200 random pairs");
}

// --- 2 ---------------------------------------------------------------------

std::string group_axioms() {
  Tally t;
  const auto cat = f2_catalog();
  t.expect(cat.size() >= 12, "catalog has fewer than 12 entries");
  const FComm id = FComm::identity(2);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto &f = cat[i];
    const std::string tag = "entry " + std::to_string(i);
    t.expect(index(f.domain()) <= 4, tag + ": domain index above 4");
    t.expect(equivalent(compose(f, id), f) && equivalent(compose(id, f), f), tag + ": identity");
    t.expect(equivalent(compose(f, invert(f)), id) && equivalent(compose(invert(f), f), id),
             tag + ": inverse");
  }
  std::size_t triples = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = 0; j < cat.size(); ++j) {
      const FComm fg = compose(cat[i], cat[j]);
      for (std::size_t k = 0; k < cat.size(); ++k) {
        t.expect(equivalent(compose(fg, cat[k]), compose(cat[i], compose(cat[j], cat[k]))),
                 "associativity fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                     std::to_string(k) + ")");
        ++triples;
      }
    }
  }
  // equivalence is a congruence
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = 0; j < cat.size(); ++j) {
      if (!equivalent(cat[i], cat[j])) {
        continue;
      }
      for (const auto &h : cat) {
        t.expect(equivalent(compose(cat[i], h), compose(cat[j], h)) &&
                     equivalent(compose(h, cat[i]), compose(h, cat[j])),
                 "equivalence is not a congruence at (" + std::to_string(i) + "," +
                     std::to_string(j) + ")");
      }
    }
  }
  return t.summary(std::to_string(triples) + " triples");
}

// --- 3 ---------------------------------------------------------------------

std::string zeta_correspondence() {
  Tally t;
  const auto cat = f2_catalog();
  for (long n : {2L, 3L}) {
    const auto s = std::make_shared<const TruncatedSystem<FreeGroup>>(2, n);
    std::vector<SystemMorphism<FreeGroup>> zs;
    for (std::size_t i = 0; i < cat.size(); ++i) {
      zs.push_back(zeta<FreeGroup>(cat[i], s));
      t.expect(zs.back().strictly_commutes(), "zeta not strictly commuting, entry " + std::to_string(i));
      t.expect(equivalent(reconstruct(zs.back()), cat[i]),
               "reconstruct(zeta) differs, entry " + std::to_string(i) + ", N=" + std::to_string(n));
    }
    for (std::size_t i = 0; i < cat.size(); ++i) {
      for (std::size_t j = 0; j < cat.size(); ++j) {
        t.expect(morphisms_equivalent(zeta<FreeGroup>(compose(cat[i], cat[j]), s),
                                      compose_morphisms(zs[i], zs[j])),
                 "functoriality fails at (" + std::to_string(i) + "," + std::to_string(j) +
                     "), N=" + std::to_string(n));
        if (n == 3) {
          t.expect(morphisms_equivalent(zs[i], zs[j]) == equivalent(cat[i], cat[j]),
                   "zeta is not injective at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }
  return t.summary("N in {2,3}");
}

// --- 4 ---------------------------------------------------------------------

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool transitive(const std::vector<int> &x, const std::vector<int> &y) {
  std::vector<bool> seen(x.size(), false);
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
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::string galois_counts() {
  Tally t;
  const auto subs = enumerate_subgroups(2, 3);
  const long expected[] = {1, 3, 13};
  std::vector<CoverGraph> brute_covers;
  for (int m = 1; m <= 3; ++m) {
    long pairs = 0;
    std::vector<CoverGraph> covers;
    for (const auto &x : all_permutations(m)) {
      for (const auto &y : all_permutations(m)) {
        if (!transitive(x, y)) {
          continue;
        }
        ++pairs;
        const CoverGraph c{2, {x, y}};
        if (std::none_of(covers.begin(), covers.end(),
                         [&](const CoverGraph &d) { return based_isomorphic(c, d); })) {
          covers.push_back(c);
        }
      }
    }
    long fact = 1;
    for (int i = 2; i < m; ++i) {
      fact *= i;
    }
    const auto found = std::count_if(subs.begin(), subs.end(),
                                     [&](const SubgroupGraph &h) { return h.size() == static_cast<std::size_t>(m); });
    t.expect(pairs / fact == expected[m - 1], "transitive pair count at index " + std::to_string(m));
    t.expect(found == expected[m - 1], "enumeration count at index " + std::to_string(m));
    t.expect(static_cast<long>(covers.size()) == expected[m - 1],
             "based-isomorphism classes at index " + std::to_string(m));
    brute_covers.insert(brute_covers.end(), covers.begin(), covers.end());
  }
  // covers <-> subgroups
  std::set<SubgroupGraph> from_covers;
  for (const auto &c : brute_covers) {
    from_covers.insert(subgroup_of(c));
  }
  t.expect(from_covers == std::set<SubgroupGraph>(subs.begin(), subs.end()),
           "subgroups of the brute-force covers differ from the enumeration");
  for (const auto &h : subs) {
    t.expect(subgroup_of(cover_of(h)) == h, "cover_of does not invert subgroup_of");
  }
  return t.summary("counts 1:1 2:3 3:13");
}

// --- 5 ---------------------------------------------------------------------

std::string profinite_kernel_check() {
  Tally t;
  for (long n = 1; n <= 8; ++n) {
    const Lattice k = profinite_kernel(std::size_t{1}, n);
    t.expect(k.index() == lcm_upto(n), "index of the depth-" + std::to_string(n) + " kernel");
    for (long x = -10000; x <= 10000; ++x) {
      bool in_all = true;
      for (long m = 1; m <= n && in_all; ++m) {
        in_all = x % m == 0;
      }
      t.expect(k.contains(IntVector{mpz_class(x)}) == in_all,
               "membership of " + std::to_string(x) + " at depth " + std::to_string(n));
    }
  }
  const TorusSolenoid s(1, 5);
  const MetricValue d = s.d_pro(IntVector{mpz_class(0)}, IntVector{mpz_class(12)});
  t.expect(d.exact() == "exp(-4)", "d_pro(0, 12) at depth 5 is " + d.exact());
  return t.summary("d_pro(0,12) = " + d.exact());
}

// --- 6 ---------------------------------------------------------------------

std::string ultrametric_sigma() {
  Tally t;
  std::mt19937 rng(6);
  {
    const TorusSolenoid s(1, 5);
    std::uniform_int_distribution<long> pick(-200, 200);
    std::uniform_int_distribution<int> frac(-3, 4);
    for (int trial = 0; trial < 500; ++trial) {
      const long x = pick(rng), y = pick(rng), z = pick(rng), g = pick(rng);
      auto v = [](long a) { return IntVector{mpz_class(a)}; };
      t.expect(s.d_pro(v(x), v(y)) == z_dpro(x - y, 5), "Z d_pro against the lcm oracle");
      t.expect(s.d_pro(v(x), v(z)) <= max(s.d_pro(v(x), v(y)), s.d_pro(v(y), v(z))),
               "Z ultrametric inequality");
      t.expect(s.d_pro(v(x + g), v(y + g)) == s.d_pro(v(x), v(y)), "Z right invariance");
      const auto p = s.point(v(x), {mpq_class(frac(rng), 8)});
      const auto q = s.point(v(y), {mpq_class(frac(rng), 8)});
      const auto r = s.point(v(z), {mpq_class(frac(rng), 8)});
      const auto pq = s.sigma(p, q).value;
      t.expect(pq == s.sigma(q, p).value, "Z sigma symmetry");
      t.expect(s.sigma(p, r).value.value() <= pq.value() + s.sigma(q, r).value.value() + 1e-12L,
               "Z sigma triangle inequality");
    }
    const auto p0 = s.baseleaf(IntVector{mpz_class(0)});
    const auto p12 = s.baseleaf(IntVector{mpz_class(12)});
    MetricValue best = MetricValue::rational(1000);
    for (long g = -20; g <= 20; ++g) {
      // g.(12, 0) = (12 - g, g)
      best = std::min(best, max(z_dpro(0 - (12 - g), 5), MetricValue::rational(abs(mpq_class(g)))));
    }
    const auto sg = s.sigma(p0, p12).value;
    t.expect(sg == best && best == MetricValue::exp_neg(4),
             "sigma(0, 12) = " + sg.exact() + ", exhaustive " + best.exact());
  }
  {
    const FreeSolenoid s(2, 2);
    const auto words = ball(2, 4);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> letter(0, 4), frac(0, 7);
    const Letter ls[] = {0, 1, -1, 2, -2};
    auto random_point = [&] {
      const int l = letter(rng);
      return s.point(s.baseleaf(words[pick(rng)]).coordinate,
                     TreePoint{Word(2), ls[l], l == 0 ? mpq_class(0) : mpq_class(frac(rng), 8)});
    };
    for (int trial = 0; trial < 500; ++trial) {
      const Word x = words[pick(rng)], y = words[pick(rng)], z = words[pick(rng)], g = words[pick(rng)];
      t.expect(s.d_pro(x, z) <= max(s.d_pro(x, y), s.d_pro(y, z)), "F ultrametric inequality");
      t.expect(s.d_pro(x * g, y * g) == s.d_pro(x, y), "F right invariance");
      const auto p = random_point(), q = random_point(), r = random_point();
      const auto pq = s.sigma(p, q).value;
      t.expect(pq == s.sigma(q, p).value, "F sigma symmetry");
      t.expect(s.sigma(p, r).value.value() <= pq.value() + s.sigma(q, r).value.value() + 1e-12L,
               "F sigma triangle inequality");
    }
  }
  return t.summary("500 triples per group");
}

// --- 7 ---------------------------------------------------------------------

std::string ball_structure_check() {
  Tally t;
  const FreeSolenoid s(2, 2);
  std::size_t balls = 0;
  for (const char *e : {"0.05", "0.1"}) {
    const mpq_class eps = parse_decimal(e);
    t.expect(eps < injectivity_radius() / 4, "epsilon not below 1/8");
    // every sheet, centred at a vertex and at an edge midpoint
    for (int c = 0; c < static_cast<int>(s.sheets()); ++c) {
      for (const FreeSolenoidPoint &p : {FreeSolenoidPoint{c, 0, 0}, s.point(c, TreePoint{Word(2), 2, mpq_class(1, 2)})}) {
        const BallReport r = s.ball_structure(p, eps);
        // coordinates within eps: those sharing every coset with c
        std::size_t near = 0;
        for (int d = 0; d < static_cast<int>(s.sheets()); ++d) {
          const long double pro =
              s.coset_family(d) == s.coset_family(c) ? 0.0L : std::exp(-1.0L);
          near += pro < eps.get_d() ? 1 : 0;
        }
        t.expect(r.isometric, "component not isometric to the leaf ball at sheet " + std::to_string(c));
        t.expect(r.components == near, "component count at sheet " + std::to_string(c));
        ++balls;
      }
    }
  }
  return t.summary(std::to_string(balls) + " balls");
}

// --- 8 ---------------------------------------------------------------------

std::string density_and_sheets() {
  Tally t;
  for (long n = 1; n <= 3; ++n) {
    const FreeSolenoid s(2, n);
    std::set<int> coords;
    std::size_t radius = 0;
    for (; radius <= 12 && coords.size() < s.sheets(); ++radius) {
      for (const Word &g : words_of_length(2, radius)) {
        coords.insert(s.baseleaf(g).coordinate);
      }
    }
    t.expect(coords.size() == s.sheets(), "F baseleaf misses sheets at depth " + std::to_string(n));
    t.expect(s.sheets() == index(profinite_kernel(2, n)), "F sheet count at depth " + std::to_string(n));
    for (const auto &obj : s.system().objects()) {
      std::set<int> hit;
      for (int c : coords) {
        hit.insert(obj.trace(0, s.kernel().tree_path(c)));
      }
      t.expect(hit.size() == obj.size(), "F baseleaf misses a coset of a finite stage");
    }
  }
  for (long n = 1; n <= 5; ++n) {
    const TorusSolenoid s(1, n);
    std::set<IntVector> coords;
    for (long g = -lcm_upto(n); g < lcm_upto(n); ++g) {
      coords.insert(s.baseleaf(IntVector{mpz_class(g)}).coordinate);
    }
    t.expect(mpz_class(static_cast<long>(coords.size())) == s.sheets(), "Z baseleaf misses sheets");
    t.expect(s.sheets() == lcm_upto(n) && s.sheets() == profinite_kernel(std::size_t{1}, n).index(),
             "Z sheet count at depth " + std::to_string(n));
  }
  return t.summary("F2 sheets 1,4,972 ; Z sheets 1,2,6,12,60");
}

// --- 9 ---------------------------------------------------------------------

std::string lift_and_factor() {
  Tally t;
  const auto cat = f2_catalog();
  const TruncatedSystem<FreeGroup> s(2, 2);
  std::size_t lifts = 0, points = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto &f = cat[i];
    for (const auto &h : s.objects()) {
      if (!is_subgroup(h, f.domain())) {
        continue;
      }
      for (const auto &k : s.objects()) {
        bool maps_in = true;
        for (const Word &b : h.basis()) {
          maps_in = maps_in && k.contains(f.apply(b));
        }
        if (!maps_in) {
          continue;
        }
        const GraphLift g = lift_through_covers(f, h, k);
        t.expect(g.consistent() && g.unique(), "lift not consistent or not unique, entry " + std::to_string(i));
        ++lifts;
      }
    }
    const auto r = factorization_check(f, 2, 5);
    t.expect(r.passed(), "factorization fails for entry " + std::to_string(i) + ": " +
                             (r.mismatches.empty() ? "" : r.mismatches.front()));
    points += r.points;
  }
  return t.summary(std::to_string(lifts) + " lifts, " + std::to_string(points) + " points");
}

// --- 10 --------------------------------------------------------------------

std::string qi_layer() {
  Tally t;
  const auto q = qi_estimate(BaseleafMap<FreeGroup>(FComm::identity(2)), 4);
  t.expect(q.multiplicative == 1 && q.additive == 0, "qi_estimate(identity) is not (1, 0)");
  const auto cat = f2_catalog();
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i + 1; j < cat.size(); ++j) {
      if (!equivalent(cat[i], cat[j])) {
        continue;
      }
      const auto p = bounded_distance(BaseleafMap<FreeGroup>(cat[i]), BaseleafMap<FreeGroup>(cat[j]), 8);
      t.expect(p.stable_between(6, 8),
               "distance not stable on [6, 8] for (" + std::to_string(i) + "," + std::to_string(j) + ")");
      ++pairs;
    }
  }
  // witness: swap against the identity, grows on a^n b^n style words
  const auto w = bounded_distance(BaseleafMap<FreeGroup>(cat[0]), BaseleafMap<FreeGroup>(cat[1]), 8);
  t.expect(w.profile[4] < w.profile[6] && w.profile[6] < w.profile[8], "witness distance does not grow");
  return t.summary(std::to_string(pairs) + " equivalent pairs, witness profile " +
                   w.profile[4].get_str() + "," + w.profile[6].get_str() + "," + w.profile[8].get_str());
}

// --- 11 --------------------------------------------------------------------

std::string boundary() {
  Tally t;
  std::vector<BoundaryPoint> pts;
  for (const Word &g : ball(2, 4)) {
    if (g.empty()) {
      continue;
    }
    // iteration oracle: reduce g^30 directly
    t.expect(fixed_point(g).prefix(20) == g.power(30).subword(0, 20),
             "fixed point of " + to_literal(g) + " disagrees with iteration");
    t.expect(fixed_point(g, -1).prefix(20) == g.inverse().power(30).subword(0, 20),
             "repelling point of " + to_literal(g) + " disagrees with iteration");
    pts.push_back(fixed_point(g));
  }
  const auto cat = f2_catalog();
  for (const Word &g : ball(2, 2)) {
    if (g.empty()) {
      continue;
    }
    const auto p = fixed_point(g);
    for (const auto &f : cat) {
      for (const auto &h : cat) {
        t.expect(boundary_action(compose(f, h), p) == boundary_action(f, boundary_action(h, p)),
                 "equivariance fails at " + to_literal(g));
      }
    }
  }
  std::size_t separated = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i + 1; j < cat.size(); ++j) {
      if (equivalent(cat[i], cat[j])) {
        continue;
      }
      const bool apart = std::any_of(pts.begin(), pts.end(), [&](const BoundaryPoint &p) {
        return !(boundary_action(cat[i], p) == boundary_action(cat[j], p));
      });
      t.expect(apart, "pair (" + std::to_string(i) + "," + std::to_string(j) + ") not separated");
      ++separated;
    }
  }
  return t.summary(std::to_string(separated) + " inequivalent pairs separated");
}

} // namespace

const std::vector<Criterion> &criteria() {
  static const std::vector<Criterion> all = {
      {1, "GL_n(Q) realization", 5, gl_realization},
      {2, "Comm group axioms", 60, group_axioms},
      {3, "zeta correspondence", 60, zeta_correspondence},
      {4, "Galois correspondence counts", 10, galois_counts},
      {5, "profinite kernel", 10, profinite_kernel_check},
      {6, "ultrametric and sigma", 30, ultrametric_sigma},
      {7, "ball structure", 30, ball_structure_check},
      {8, "baseleaf density and leaf count", 30, density_and_sheets},
      {9, "lift and factorization", 60, lift_and_factor},
      {10, "QI layer", 120, qi_layer},
      {11, "boundary action", 60, boundary},
  };
  return all;
}

Result run(const Criterion &c) {
  Result r{c.id, c.title, false, 0, c.limit_seconds, ""};
  const auto start = std::chrono::steady_clock::now();
  try {
    r.detail = c.check();
    r.passed = true;
  } catch (const CheckFailed &e) {
    r.detail = e.what();
  } catch (const Error &e) {
    r.detail = std::string("error: ") + e.what();
  } catch (const std::exception &e) {
    r.detail = std::string("unexpected exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.passed && r.seconds > r.limit_seconds) {
    r.passed = false;
    r.detail = "over the time limit; " + r.detail;
  }
  return r;
}

std::string format(const Result &r) {
  char timing[64];
  std::snprintf(timing, sizeof timing, "(%.2f s, limit %.0f s)", r.seconds, r.limit_seconds);
  std::string id = std::to_string(r.id);
  id.insert(0, 2 - std::min<std::size_t>(2, id.size()), ' ');
  return std::string(r.passed ? "PASS" : "FAIL") + " " + id + "  " + r.title + "  " + timing +
         "  " + r.detail;
}

std::vector<Result> run_all(std::ostream &out) {
  std::vector<Result> failures;
  for (const auto &c : criteria()) {
    const Result r = run(c);
    out << format(r) << std::endl;
    if (!r.passed) {
      failures.push_back(r);
    }
  }
  return failures;
}

} // namespace commsol::acceptance
