#include "commsol/solenoid.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <queue>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

bool perfect_square(const mpz_class &z, mpz_class &root) {
  if (z < 0) {
    return false;
  }
  root = sqrt(z);
  return root * root == z;
}

int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

const mpq_class half(1, 2);

} // namespace

MetricValue MetricValue::exp_neg(long n) {
  MetricValue m;
  m.kind_ = Kind::exp;
  m.exponent_ = n;
  return m;
}

MetricValue MetricValue::rational(const mpq_class &q) {
  if (q < 0) {
    throw PreconditionError("distances are nonnegative");
  }
  MetricValue m;
  if (q != 0) {
    m.kind_ = Kind::rational;
    m.q_ = q;
  }
  return m;
}

MetricValue MetricValue::sqrt_of(const mpq_class &q) {
  if (q < 0) {
    throw PreconditionError("square root of a negative number");
  }
  mpz_class rn, rd;
  if (perfect_square(q.get_num(), rn) && perfect_square(q.get_den(), rd)) {
    return rational(mpq_class(rn, rd));
  }
  MetricValue m;
  m.kind_ = Kind::root;
  m.q_ = q;
  return m;
}

long double MetricValue::value() const {
  switch (kind_) {
  case Kind::zero:
    return 0.0L;
  case Kind::exp:
    return std::exp(-static_cast<long double>(exponent_));
  case Kind::rational:
    return static_cast<long double>(q_.get_d());
  case Kind::root:
    return std::sqrt(static_cast<long double>(q_.get_d()));
  }
  return 0.0L;
}

std::string MetricValue::exact() const {
  switch (kind_) {
  case Kind::zero:
    return "0";
  case Kind::exp:
    return "exp(-" + std::to_string(exponent_) + ")";
  case Kind::rational:
    return q_.get_str();
  case Kind::root:
    return "sqrt(" + q_.get_str() + ")";
  }
  return "";
}

std::string MetricValue::to_string() const {
  std::ostringstream out;
  out << exact() << " = " << std::setprecision(12) << static_cast<double>(value());
  return out.str();
}

bool MetricValue::operator==(const MetricValue &other) const {
  if (kind_ != other.kind_) {
    return false;
  }
  switch (kind_) {
  case Kind::zero:
    return true;
  case Kind::exp:
    return exponent_ == other.exponent_;
  default:
    return q_ == other.q_;
  }
}

bool MetricValue::operator<(const MetricValue &other) const {
  if (kind_ == Kind::zero || other.kind_ == Kind::zero) {
    return kind_ == Kind::zero && other.kind_ != Kind::zero;
  }
  if (kind_ == other.kind_) {
    if (kind_ == Kind::exp) {
      return exponent_ > other.exponent_;
    }
    return q_ < other.q_;
  }
  if (kind_ == Kind::rational && other.kind_ == Kind::root) {
    return q_ * q_ < other.q_;
  }
  if (kind_ == Kind::root && other.kind_ == Kind::rational) {
    return q_ < other.q_ * other.q_;
  }
  return value() < other.value();
}

MetricValue max(const MetricValue &a, const MetricValue &b) { return a < b ? b : a; }

TreePoint tree_vertex(const Word &g) { return TreePoint{g, 0, 0}; }

TreePoint translate(const Word &g, const TreePoint &p) {
  return TreePoint{g * p.vertex, p.letter, p.t};
}

namespace {

struct EdgeSpot {
  bool vertex;
  Word a; // vertex, or the endpoint from which the positive letter leaves
  Letter letter;
  mpq_class pos; // distance from a
};

EdgeSpot spot(const TreePoint &p) {
  if (p.letter == 0 || p.t == 0) {
    return EdgeSpot{true, p.vertex, 0, 0};
  }
  if (p.t < 0 || p.t >= 1) {
    throw PreconditionError("edge parameter must lie in [0, 1)");
  }
  if (p.letter > 0) {
    return EdgeSpot{false, p.vertex, p.letter, p.t};
  }
  return EdgeSpot{false, p.vertex * Word(p.vertex.rank(), {p.letter}), -p.letter, 1 - p.t};
}

mpq_class word_distance(const Word &u, const Word &v) {
  return mpq_class(static_cast<long>((u.inverse() * v).size()));
}

} // namespace

mpq_class tree_distance(const TreePoint &p, const TreePoint &q) {
  const EdgeSpot s = spot(p);
  const EdgeSpot r = spot(q);
  if (!s.vertex && !r.vertex && s.letter == r.letter && s.a == r.a) {
    return abs(s.pos - r.pos);
  }
  std::vector<std::pair<Word, mpq_class>> ends_s, ends_r;
  auto ends = [](const EdgeSpot &e, std::vector<std::pair<Word, mpq_class>> &out) {
    out.emplace_back(e.a, e.pos);
    if (!e.vertex) {
      out.emplace_back(e.a * Word::generator(e.a.rank(), e.letter), 1 - e.pos);
    }
  };
  ends(s, ends_s);
  ends(r, ends_r);
  mpq_class best = -1;
  for (const auto &[u, du] : ends_s) {
    for (const auto &[v, dv] : ends_r) {
      const mpq_class d = du + word_distance(u, v) + dv;
      if (best < 0 || d < best) {
        best = d;
      }
    }
  }
  return best;
}

mpq_class distance_to_base(const TreePoint &p) {
  return tree_distance(p, tree_vertex(Word(p.vertex.rank())));
}

int CoverGraph::target(int v, Letter l) const {
  if (l > 0) {
    return out[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(v)];
  }
  const auto &row = out[static_cast<std::size_t>(-l - 1)];
  for (std::size_t u = 0; u < row.size(); ++u) {
    if (row[u] == v) {
      return static_cast<int>(u);
    }
  }
  return -1;
}

CoverGraph cover_of(const SubgroupGraph &h) {
  require_finite_index(h);
  return CoverGraph{h.rank(), h.out_table()};
}

CoverGraph relabel(const CoverGraph &c, const std::vector<int> &perm) {
  if (perm.size() != c.size() || perm.empty() || perm[0] != 0) {
    throw PreconditionError("relabelling must fix the base vertex");
  }
  CoverGraph out{c.rank, c.out};
  for (std::size_t l = 0; l < c.out.size(); ++l) {
    for (std::size_t v = 0; v < c.size(); ++v) {
      out.out[l][static_cast<std::size_t>(perm[v])] = perm[static_cast<std::size_t>(c.out[l][v])];
    }
  }
  return out;
}

bool based_isomorphic(const CoverGraph &a, const CoverGraph &b) {
  if (a.rank != b.rank || a.size() != b.size()) {
    return false;
  }
  std::vector<int> fwd(a.size(), -1), back(b.size(), -1);
  fwd[0] = 0;
  back[0] = 0;
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int i = 1; i <= a.rank; ++i) {
      for (Letter l : {i, -i}) {
        const int x = a.target(v, l);
        const int y = b.target(fwd[static_cast<std::size_t>(v)], l);
        auto &fx = fwd[static_cast<std::size_t>(x)];
        auto &by = back[static_cast<std::size_t>(y)];
        if (fx == -1 && by == -1) {
          fx = y;
          by = x;
          todo.push(x);
        } else if (fx != y || by != x) {
          return false;
        }
      }
    }
  }
  return true;
}

SubgroupGraph subgroup_of(const CoverGraph &c) {
  return SubgroupGraph::canonical(c.rank, c.out, 0);
}

bool CoveringMap::is_covering() const {
  if (vertex_map.size() != source.size() || vertex_map.empty() || vertex_map[0] != 0) {
    return false;
  }
  for (int l = 1; l <= source.rank(); ++l) {
    for (std::size_t v = 0; v < source.size(); ++v) {
      const int w = source.target(static_cast<int>(v), l);
      if (vertex_map[static_cast<std::size_t>(w)] != target.target(vertex_map[v], l)) {
        return false;
      }
    }
  }
  return true;
}

CoveringMap covering_map(const SubgroupGraph &h, const SubgroupGraph &k) {
  require_finite_index(h);
  require_finite_index(k);
  if (!is_subgroup(h, k)) {
    throw PreconditionError("no covering map: the first subgroup is not inside the second");
  }
  CoveringMap m{h, k, {}};
  for (std::size_t v = 0; v < h.size(); ++v) {
    m.vertex_map.push_back(k.trace(0, h.tree_path(static_cast<int>(v))));
  }
  return m;
}

CoveringMap compose(const CoveringMap &first, const CoveringMap &second) {
  if (!(second.target == first.source)) {
    throw MismatchError("covering maps do not compose");
  }
  CoveringMap m{second.source, first.target, {}};
  for (int v : second.vertex_map) {
    m.vertex_map.push_back(first.vertex_map[static_cast<std::size_t>(v)]);
  }
  return m;
}

Word closest_point(const SubgroupGraph &d, const Word &g) {
  require_finite_index(d);
  const int k = d.rank();
  std::vector<int> dist(d.size(), -1);
  dist[0] = 0;
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int i = 1; i <= k; ++i) {
      for (Letter l : {i, -i}) {
        const int w = d.target(v, l);
        if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          todo.push(w);
        }
      }
    }
  }
  std::optional<Word> best;
  std::vector<Letter> path;
  long budget = work_cap();
  std::function<void(int)> walk = [&](int v) {
    if (--budget < 0) {
      throw ResourceLimitError("closest point search exceeded the work cap");
    }
    const int dv = dist[static_cast<std::size_t>(v)];
    if (dv == 0) {
      Word cand = g * Word(k, path);
      if (!best || shortlex(cand, *best) < 0) {
        best = cand;
      }
      return;
    }
    for (int i = 1; i <= k; ++i) {
      for (Letter l : {i, -i}) {
        const int w = d.target(v, l);
        if (dist[static_cast<std::size_t>(w)] == dv - 1) {
          path.push_back(l);
          walk(w);
          path.pop_back();
        }
      }
    }
  };
  walk(d.trace(0, g));
  return *best;
}

IntVector closest_point(const Lattice &d, const IntVector &g) {
  if (g.size() != d.dim()) {
    throw MismatchError("dimension mismatch");
  }
  for (long r = 0;; ++r) {
    std::optional<IntVector> best;
    for (const IntVector &u : l1_ball(d.dim(), r)) {
      if (l1_norm(u) != r) {
        continue;
      }
      IntVector cand = add(g, u);
      if (d.contains(cand) && (!best || cand < *best)) {
        best = cand;
      }
    }
    if (best) {
      return *best;
    }
  }
}

bool GraphLift::consistent() const {
  for (int l = 1; l <= source.rank(); ++l) {
    for (std::size_t v = 0; v < source.size(); ++v) {
      const int w = source.target(static_cast<int>(v), l);
      const Word &e = edge_image[static_cast<std::size_t>(l - 1)][v];
      if (target.trace(vertex_image[v], e) != vertex_image[static_cast<std::size_t>(w)]) {
        return false;
      }
    }
  }
  return vertex_image.at(0) == 0;
}

bool GraphLift::unique() const {
  std::vector<int> image(source.size(), -1);
  image[0] = 0;
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int i = source.rank(); i >= 1; --i) {
      for (Letter l : {-i, i}) {
        const int w = source.target(v, l);
        if (image[static_cast<std::size_t>(w)] != -1) {
          continue;
        }
        const Word path = l > 0 ? edge_image[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(v)]
                                : edge_image[static_cast<std::size_t>(-l - 1)][static_cast<std::size_t>(w)].inverse();
        image[static_cast<std::size_t>(w)] = target.trace(image[static_cast<std::size_t>(v)], path);
        todo.push(w);
      }
    }
  }
  return image == vertex_image;
}

GraphLift lift_through_covers(const FComm &phi, const SubgroupGraph &h,
                              const SubgroupGraph &k) {
  require_finite_index(h);
  require_finite_index(k);
  for (const Word &b : h.basis()) {
    if (!phi.domain().contains(b)) {
      throw PreconditionError("basis word " + to_literal(b) + " of H is outside the domain");
    }
    const Word img = phi.apply(b);
    if (!k.contains(img)) {
      throw PreconditionError("basis word " + to_literal(b) + " maps to " + to_literal(img) +
                              ", which is not in K");
    }
  }
  const int rank = h.rank();
  const bool whole = phi.domain().size() == 1;
  std::vector<Word> lifts;
  GraphLift out{h, k, {}, std::vector<std::vector<Word>>(static_cast<std::size_t>(rank)), whole};
  for (std::size_t v = 0; v < h.size(); ++v) {
    const Word &p = h.tree_path(static_cast<int>(v));
    lifts.push_back(phi.apply(whole ? p : closest_point(phi.domain(), p)));
    out.vertex_image.push_back(k.trace(0, lifts.back()));
  }
  for (int l = 1; l <= rank; ++l) {
    for (std::size_t v = 0; v < h.size(); ++v) {
      const int w = h.target(static_cast<int>(v), l);
      const Word loop = h.tree_path(static_cast<int>(v)) * Word::generator(rank, l) *
                        h.tree_path(w).inverse();
      const Word e = lifts[v].inverse() * phi.apply(loop) * lifts[static_cast<std::size_t>(w)];
      if (whole && e != phi.apply(Word::generator(rank, l))) {
        out.label_equivariant = false;
      }
      out.edge_image[static_cast<std::size_t>(l - 1)].push_back(e);
    }
  }
  return out;
}

TorusLift lift_through_covers(const ZComm &phi, const Lattice &h, const Lattice &k) {
  if (!is_subgroup(h, phi.domain())) {
    throw PreconditionError("H is not inside the domain");
  }
  for (const IntVector &c : h.columns()) {
    const IntVector img = phi.apply(c);
    if (!k.contains(img)) {
      throw PreconditionError("basis vector (" + to_string(c) + ") maps to (" + to_string(img) +
                              "), which is not in K");
    }
  }
  return TorusLift{h, k, phi.matrix()};
}

mpq_class injectivity_radius() {
  const mpq_class shortest_loop = 1;
  return shortest_loop / 2;
}

bool ball_projects_isometrically(const mpq_class &r) { return r >= 0 && r <= injectivity_radius(); }

FreeSolenoid::FreeSolenoid(int rank, long depth)
    : rank_(rank), depth_(depth),
      system_(std::make_shared<const TruncatedSystem<FreeGroup>>(rank, depth)) {
  SubgroupGraph acc = SubgroupGraph::whole(rank);
  std::size_t next = 0;
  const auto &objs = system_->objects();
  for (long n = 1; n <= depth; ++n) {
    while (next < objs.size() && static_cast<long>(objs[next].size()) == n) {
      if (static_cast<long double>(acc.size()) * objs[next].size() >
          static_cast<long double>(work_cap())) {
        throw ResourceLimitError("depth " + std::to_string(depth) +
                                 " kernel exceeds the work cap (COMMSOL_MAX_WORK)");
      }
      acc = intersect(acc, objs[next]);
      ++next;
    }
    levels_.push_back(acc);
  }
}

const SubgroupGraph &FreeSolenoid::level(long n) const {
  if (n < 1 || n > depth_) {
    throw PreconditionError("level must lie in 1.." + std::to_string(depth_));
  }
  return levels_[static_cast<std::size_t>(n - 1)];
}

long FreeSolenoid::pro_level(const Word &w) const {
  for (long n = depth_; n > 1; --n) {
    if (level(n).contains(w)) {
      return n;
    }
  }
  return 1;
}

MetricValue FreeSolenoid::d_pro(const Word &g, const Word &h) const {
  const long n = pro_level(g * h.inverse());
  return n == depth_ ? MetricValue() : MetricValue::exp_neg(n);
}

MetricValue FreeSolenoid::d_pro(int c1, int c2) const {
  return d_pro(kernel().tree_path(c1), kernel().tree_path(c2));
}

FreeSolenoidPoint FreeSolenoid::point(int coordinate, const TreePoint &leaf) const {
  int c = kernel().trace(coordinate, leaf.vertex);
  if (leaf.letter == 0 || leaf.t == 0) {
    return FreeSolenoidPoint{c, 0, 0};
  }
  if (leaf.t < 0 || leaf.t >= 1) {
    throw PreconditionError("edge parameter must lie in [0, 1)");
  }
  if (leaf.t > half || (leaf.t == half && letter_key(-leaf.letter) < letter_key(leaf.letter))) {
    c = kernel().target(c, leaf.letter);
    return FreeSolenoidPoint{c, -leaf.letter, 1 - leaf.t};
  }
  return FreeSolenoidPoint{c, leaf.letter, leaf.t};
}

FreeSolenoidPoint FreeSolenoid::baseleaf(const Word &g) const {
  return FreeSolenoidPoint{kernel().trace(0, g), 0, 0};
}

std::vector<FreeSolenoidPoint> FreeSolenoid::baseleaf_path(const Word &g) const {
  std::vector<FreeSolenoidPoint> out;
  for (std::size_t i = 0; i <= g.size(); ++i) {
    out.push_back(baseleaf(g.subword(0, i)));
  }
  return out;
}

std::vector<int> FreeSolenoid::coset_family(int coordinate) const {
  std::vector<int> out;
  const Word &p = kernel().tree_path(coordinate);
  for (const auto &obj : system_->objects()) {
    out.push_back(obj.trace(0, p));
  }
  return out;
}

TreePoint FreeSolenoid::leaf(const FreeSolenoidPoint &p) const {
  return TreePoint{Word(rank_), p.letter, p.t};
}

MetricValue FreeSolenoid::d_inf(const FreeSolenoidPoint &p, const FreeSolenoidPoint &q) const {
  return max(d_pro(p.coordinate, q.coordinate),
             MetricValue::rational(tree_distance(leaf(p), leaf(q))));
}

FreeSigma FreeSolenoid::sigma(const FreeSolenoidPoint &p, const FreeSolenoidPoint &q) const {
  const TreePoint x1 = leaf(p);
  const TreePoint x2 = leaf(q);
  FreeSigma best{d_inf(p, q), Word(rank_)};
  const mpq_class reach = distance_to_base(x1) + distance_to_base(x2);
  const long radius =
      static_cast<long>(std::floor(best.value.value() + reach.get_d() + 1e-9));
  for (const Word &g : ball(rank_, static_cast<std::size_t>(std::max(0L, radius)))) {
    if (g.empty()) {
      continue;
    }
    const MetricValue v =
        max(d_pro(p.coordinate, kernel().trace(q.coordinate, g.inverse())),
            MetricValue::rational(tree_distance(x1, translate(g, x2))));
    if (v < best.value) {
      best = FreeSigma{v, g};
    }
  }
  return best;
}

namespace {

std::vector<TreePoint> tree_ball_sample(const TreePoint &x, const mpq_class &epsilon, int rank) {
  std::vector<TreePoint> out{x};
  const Word base(rank);
  for (int j = 1; j < 4; ++j) {
    const mpq_class s = epsilon * j / 4;
    if (x.letter == 0 || x.t == 0) {
      for (int i = 1; i <= rank; ++i) {
        for (Letter l : {i, -i}) {
          out.push_back(TreePoint{base, l, s});
        }
      }
      continue;
    }
    out.push_back(TreePoint{base, x.letter, x.t + s});
    if (s < x.t) {
      out.push_back(TreePoint{base, x.letter, x.t - s});
    } else if (s == x.t) {
      out.push_back(TreePoint{base, 0, 0});
    } else {
      for (int i = 1; i <= rank; ++i) {
        for (Letter l : {i, -i}) {
          if (l != x.letter) {
            out.push_back(TreePoint{base, l, s - x.t});
          }
        }
      }
    }
  }
  return out;
}

void require_small_epsilon(const mpq_class &epsilon) {
  if (epsilon <= 0 || 4 * epsilon >= injectivity_radius()) {
    throw PreconditionError("epsilon must satisfy 0 < 4*epsilon < injectivity radius " +
                            injectivity_radius().get_str() + ", got " + epsilon.get_str());
  }
}

} // namespace

BallReport FreeSolenoid::ball_structure(const FreeSolenoidPoint &p,
                                        const mpq_class &epsilon) const {
  require_small_epsilon(epsilon);
  BallReport report;
  report.depth = depth_;
  report.epsilon = epsilon;
  report.degenerate = depth_ == 1;
  report.isometric = true;
  const MetricValue eps = MetricValue::rational(epsilon);
  const TreePoint x = leaf(p);
  const auto sample = tree_ball_sample(x, epsilon, rank_);
  for (std::size_t c = 0; c < sheets(); ++c) {
    const MetricValue dp = d_pro(p.coordinate, static_cast<int>(c));
    if (!(dp < eps)) {
      continue;
    }
    ++report.components;
    report.coordinates.push_back(to_literal(kernel().tree_path(static_cast<int>(c))));
    std::vector<FreeSolenoidPoint> pts;
    for (const TreePoint &y : sample) {
      pts.push_back(point(static_cast<int>(c), y));
      const MetricValue expected = max(dp, MetricValue::rational(tree_distance(x, y)));
      if (!(sigma(p, pts.back()).value == expected)) {
        report.isometric = false;
      }
    }
    for (std::size_t i = 0; i < sample.size(); ++i) {
      for (std::size_t j = i + 1; j < sample.size(); ++j) {
        const MetricValue leafwise = MetricValue::rational(tree_distance(sample[i], sample[j]));
        if (!(sigma(pts[i], pts[j]).value == leafwise)) {
          report.isometric = false;
        }
      }
    }
    report.samples += sample.size();
  }
  return report;
}

std::string FreeSolenoid::to_text(const FreeSolenoidPoint &p) const {
  std::string out = "solpoint N=" + std::to_string(depth_) + " cosets=[";
  const auto fam = coset_family(p.coordinate);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    out += (i ? "," : "") + std::to_string(fam[i]);
  }
  out += "] leaf=";
  if (p.letter == 0) {
    out += "1";
  } else {
    out += to_string(Word(rank_, {p.letter})) + "@" + p.t.get_str();
  }
  return out;
}

TorusSolenoid::TorusSolenoid(std::size_t n, long depth)
    : n_(n), depth_(depth),
      system_(std::make_shared<const TruncatedSystem<FreeAbelianGroup>>(static_cast<int>(n),
                                                                        depth)) {
  Lattice acc = Lattice::whole(n);
  std::size_t next = 0;
  const auto &objs = system_->objects();
  for (long m = 1; m <= depth; ++m) {
    while (next < objs.size() && objs[next].index() == m) {
      acc = intersect(acc, objs[next]);
      ++next;
    }
    levels_.push_back(acc);
  }
}

const Lattice &TorusSolenoid::level(long n) const {
  if (n < 1 || n > depth_) {
    throw PreconditionError("level must lie in 1.." + std::to_string(depth_));
  }
  return levels_[static_cast<std::size_t>(n - 1)];
}

long TorusSolenoid::pro_level(const IntVector &v) const {
  for (long n = depth_; n > 1; --n) {
    if (level(n).contains(v)) {
      return n;
    }
  }
  return 1;
}

MetricValue TorusSolenoid::d_pro(const IntVector &g, const IntVector &h) const {
  const long n = pro_level(sub(g, h));
  return n == depth_ ? MetricValue() : MetricValue::exp_neg(n);
}

TorusSolenoidPoint TorusSolenoid::point(const IntVector &coordinate,
                                        const std::vector<mpq_class> &leaf) const {
  if (coordinate.size() != n_ || leaf.size() != n_) {
    throw MismatchError("dimension mismatch");
  }
  IntVector shift(n_);
  std::vector<mpq_class> x(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    mpq_class y = leaf[i] - half;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    shift[i] = c;
    x[i] = leaf[i] - c;
  }
  return TorusSolenoidPoint{kernel().reduce(add(coordinate, shift)), x};
}

TorusSolenoidPoint TorusSolenoid::baseleaf(const IntVector &g) const {
  return TorusSolenoidPoint{kernel().reduce(g), std::vector<mpq_class>(n_, 0)};
}

std::vector<IntVector> TorusSolenoid::coset_family(const IntVector &coordinate) const {
  std::vector<IntVector> out;
  for (const auto &obj : system_->objects()) {
    out.push_back(obj.reduce(coordinate));
  }
  return out;
}

MetricValue euclidean_distance(const std::vector<mpq_class> &x, const std::vector<mpq_class> &y) {
  if (x.size() != y.size()) {
    throw MismatchError("dimension mismatch");
  }
  mpq_class s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const mpq_class d = x[i] - y[i];
    s += d * d;
  }
  return MetricValue::sqrt_of(s);
}

MetricValue TorusSolenoid::d_inf(const TorusSolenoidPoint &p, const TorusSolenoidPoint &q) const {
  return max(d_pro(p.coordinate, q.coordinate), euclidean_distance(p.leaf, q.leaf));
}

namespace {

std::vector<mpq_class> shifted(const std::vector<mpq_class> &x, const IntVector &g) {
  std::vector<mpq_class> out(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] += g[i];
  }
  return out;
}

bool before(const IntVector &a, const IntVector &b) {
  const mpz_class na = l1_norm(a), nb = l1_norm(b);
  return na != nb ? na < nb : a < b;
}

} // namespace

TorusSigma TorusSolenoid::sigma(const TorusSolenoidPoint &p, const TorusSolenoidPoint &q) const {
  TorusSigma best{d_inf(p, q), IntVector(n_, 0)};
  const long bound = static_cast<long>(std::floor(best.value.value())) + 1;
  IntVector g(n_, -bound);
  while (true) {
    const MetricValue v = max(d_pro(p.coordinate, sub(q.coordinate, g)),
                              euclidean_distance(p.leaf, shifted(q.leaf, g)));
    if (v < best.value || (v == best.value && before(g, best.argmin))) {
      best = TorusSigma{v, g};
    }
    std::size_t i = 0;
    while (i < n_ && g[i] == bound) {
      g[i] = -bound;
      ++i;
    }
    if (i == n_) {
      break;
    }
    g[i] += 1;
  }
  return best;
}

BallReport TorusSolenoid::ball_structure(const TorusSolenoidPoint &p,
                                         const mpq_class &epsilon) const {
  require_small_epsilon(epsilon);
  BallReport report;
  report.depth = depth_;
  report.epsilon = epsilon;
  report.degenerate = depth_ == 1;
  report.isometric = true;
  const MetricValue eps = MetricValue::rational(epsilon);
  std::vector<std::vector<mpq_class>> sample{p.leaf};
  for (int j = 1; j < 4; ++j) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (int sign : {1, -1}) {
        auto y = p.leaf;
        y[i] += sign * epsilon * j / 4;
        sample.push_back(y);
      }
    }
  }
  const Lattice &k = kernel();
  IntVector c(n_, 0);
  while (true) {
    const MetricValue dp = d_pro(p.coordinate, c);
    if (dp < eps) {
      ++report.components;
      report.coordinates.push_back("(" + to_string(c) + ")");
      std::vector<TorusSolenoidPoint> pts;
      for (const auto &y : sample) {
        pts.push_back(point(c, y));
        const MetricValue expected = max(dp, euclidean_distance(p.leaf, y));
        if (!(sigma(p, pts.back()).value == expected)) {
          report.isometric = false;
        }
      }
      for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
          if (!(sigma(pts[i], pts[j]).value == euclidean_distance(sample[i], sample[j]))) {
            report.isometric = false;
          }
        }
      }
      report.samples += sample.size();
    }
    std::size_t i = 0;
    while (i < n_ && c[i] + 1 == k.entry(i, i)) {
      c[i] = 0;
      ++i;
    }
    if (i == n_) {
      break;
    }
    c[i] += 1;
  }
  return report;
}

std::string TorusSolenoid::to_text(const TorusSolenoidPoint &p) const {
  std::string out = "solpoint N=" + std::to_string(depth_) + " cosets=[";
  const auto fam = coset_family(p.coordinate);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    out += (i ? ",(" : "(") + commsol::to_string(fam[i]) + ")";
  }
  out += "] leaf=(";
  for (std::size_t i = 0; i < p.leaf.size(); ++i) {
    out += (i ? "," : "") + p.leaf[i].get_str();
  }
  return out + ")";
}

mpq_class parse_decimal(std::string_view text) {
  std::string t(text);
  if (t.find('/') != std::string::npos) {
    return parse_rational(t);
  }
  std::string digits;
  long scale = 0;
  bool dot = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char ch = t[i];
    if (ch == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
               ((ch == '-' || ch == '+') && i == 0)) {
      digits += ch;
      if (dot && std::isdigit(static_cast<unsigned char>(ch))) {
        ++scale;
      }
    } else {
      throw ParseError("not a decimal number: '" + t + "'");
    }
  }
  mpz_class num;
  if (digits.empty() || digits == "-" || digits == "+" ||
      num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
    throw ParseError("not a decimal number: '" + t + "'");
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(scale));
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

MetricValue parse_metric_value(std::string_view text) {
  std::string t(text.substr(0, text.find(" = ")));
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) {
    t.pop_back();
  }
  auto inside = [&](const std::string &head) -> std::optional<std::string> {
    if (t.size() > head.size() + 1 && t.rfind(head + "(", 0) == 0 && t.back() == ')') {
      return t.substr(head.size() + 1, t.size() - head.size() - 2);
    }
    return std::nullopt;
  };
  if (t == "0") {
    return MetricValue();
  }
  if (auto e = inside("exp")) {
    if (e->size() < 2 || (*e)[0] != '-') {
      throw ParseError("expected exp(-<n>), got '" + t + "'");
    }
    mpz_class n;
    if (n.set_str(e->substr(1), 10) != 0 || n <= 0 || !n.fits_slong_p()) {
      throw ParseError("bad exponent in '" + t + "'");
    }
    return MetricValue::exp_neg(n.get_si());
  }
  if (auto r = inside("sqrt")) {
    return MetricValue::sqrt_of(parse_rational(*r));
  }
  return MetricValue::rational(parse_rational(t));
}

namespace {

struct SolpointFields {
  long depth = 0;
  std::string cosets;
  std::string leaf;
};

SolpointFields split_solpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag, n, cosets, leaf, extra;
  if (!(in >> tag >> n >> cosets >> leaf) || (in >> extra) || tag != "solpoint" ||
      n.rfind("N=", 0) != 0 || cosets.rfind("cosets=[", 0) != 0 || cosets.back() != ']' ||
      leaf.rfind("leaf=", 0) != 0) {
    throw ParseError("expected 'solpoint N=<n> cosets=[...] leaf=<...>'");
  }
  SolpointFields f;
  try {
    f.depth = std::stol(n.substr(2));
  } catch (const std::exception &) {
    throw ParseError("bad depth in '" + n + "'");
  }
  f.cosets = cosets.substr(8, cosets.size() - 9);
  f.leaf = leaf.substr(5);
  return f;
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  int nesting = 0;
  for (char ch : s) {
    if (ch == ',' && nesting == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    nesting += (ch == '(') - (ch == ')');
    cur += ch;
  }
  if (!s.empty()) {
    out.push_back(cur);
  }
  return out;
}

std::string strip_parens(const std::string &s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw ParseError("expected a parenthesised vector, got '" + s + "'");
  }
  return s.substr(1, s.size() - 2);
}

} // namespace

FreeSolenoidPoint FreeSolenoid::parse_point(std::string_view text) const {
  const SolpointFields f = split_solpoint(text);
  if (f.depth != depth_) {
    throw MismatchError("point has depth " + std::to_string(f.depth) + ", model has " +
                        std::to_string(depth_));
  }
  std::vector<int> fam;
  for (const auto &tok : split_commas(f.cosets)) {
    try {
      fam.push_back(std::stoi(tok));
    } catch (const std::exception &) {
      throw ParseError("bad coset entry '" + tok + "'");
    }
  }
  std::optional<int> coordinate;
  for (int c = 0; c < static_cast<int>(sheets()) && !coordinate; ++c) {
    if (coset_family(c) == fam) {
      coordinate = c;
    }
  }
  if (!coordinate) {
    throw ParseError("coset family matches no sheet of the depth-" + std::to_string(depth_) +
                     " model");
  }
  FreeSolenoidPoint p{*coordinate, 0, 0};
  if (f.leaf != "1") {
    const auto at = f.leaf.find('@');
    if (at == std::string::npos) {
      throw ParseError("leaf must be 1 or <letter>@<t>");
    }
    const Word l = parse_word(f.leaf.substr(0, at), rank_);
    if (l.size() != 1) {
      throw ParseError("leaf edge must be a single letter");
    }
    p.letter = l[0];
    p.t = parse_rational(f.leaf.substr(at + 1));
  }
  if (!(point(p.coordinate, leaf(p)) == p)) {
    throw ParseError("leaf coordinate is not in canonical form");
  }
  return p;
}

TorusSolenoidPoint TorusSolenoid::parse_point(std::string_view text) const {
  const SolpointFields f = split_solpoint(text);
  if (f.depth != depth_) {
    throw MismatchError("point has depth " + std::to_string(f.depth) + ", model has " +
                        std::to_string(depth_));
  }
  std::vector<IntVector> fam;
  for (const auto &tok : split_commas(f.cosets)) {
    fam.push_back(parse_int_vector(strip_parens(tok), n_));
  }
  std::vector<mpq_class> x;
  for (const auto &tok : split_commas(strip_parens(f.leaf))) {
    x.push_back(parse_rational(tok));
  }
  if (x.size() != n_) {
    throw ParseError("leaf has the wrong dimension");
  }
  // walk the box of reduced representatives
  IntVector c(n_, 0);
  while (true) {
    if (coset_family(c) == fam) {
      TorusSolenoidPoint p{c, x};
      if (!(point(c, x) == p)) {
        throw ParseError("leaf coordinate is not in canonical form");
      }
      return p;
    }
    std::size_t i = 0;
    while (i < n_) {
      c[i] += 1;
      if (c[i] < kernel().entry(i, i)) {
        break;
      }
      c[i] = 0;
      ++i;
    }
    if (i == n_) {
      break;
    }
  }
  throw ParseError("coset family matches no sheet of the depth-" + std::to_string(depth_) +
                   " model");
}

} // namespace commsol
