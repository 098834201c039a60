#include "commsol/stallings.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <cmath>
#include <optional>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

using Table = std::vector<std::vector<int>>;

// Letters in exploration order a, A, b, B, ...
std::vector<Letter> exploration_order(int rank) {
  std::vector<Letter> out;
  for (int i = 1; i <= rank; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

Table inverse_table(const Table &out) {
  Table in(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    in[i].assign(out[i].size(), -1);
    for (std::size_t v = 0; v < out[i].size(); ++v) {
      if (out[i][v] >= 0) {
        in[i][static_cast<std::size_t>(out[i][v])] = static_cast<int>(v);
      }
    }
  }
  return in;
}

// new_of_old numbering by breadth-first search from base; -1 = unreachable.
std::vector<int> canonical_numbering(int rank, const Table &out, const Table &in,
                                     int base, std::size_t &reached) {
  const std::size_t m = out.empty() ? 0 : out[0].size();
  std::vector<int> new_of_old(m, -1);
  std::vector<int> order{base};
  new_of_old[static_cast<std::size_t>(base)] = 0;
  const auto letters = exploration_order(rank);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int v = order[head];
    for (Letter l : letters) {
      const auto i = static_cast<std::size_t>(std::abs(l) - 1);
      const int w = l > 0 ? out[i][static_cast<std::size_t>(v)]
                          : in[i][static_cast<std::size_t>(v)];
      if (w >= 0 && new_of_old[static_cast<std::size_t>(w)] < 0) {
        new_of_old[static_cast<std::size_t>(w)] = static_cast<int>(order.size());
        order.push_back(w);
      }
    }
  }
  reached = order.size();
  return new_of_old;
}

Table renumber(const Table &out, const std::vector<int> &new_of_old,
               std::size_t reached) {
  Table result(out.size(), std::vector<int>(reached, -1));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t v = 0; v < out[i].size(); ++v) {
      const int nv = new_of_old[v];
      if (nv < 0 || out[i][v] < 0) {
        continue;
      }
      result[i][static_cast<std::size_t>(nv)] =
          new_of_old[static_cast<std::size_t>(out[i][v])];
    }
  }
  return result;
}

// Stallings folding, optionally carrying a label word on every edge. A label
// records which product of the generators the edge stands for; closed paths
// at the base multiply out to the generator expression of the word they
// read. Identifying two vertices first re-gauges one of them so that the two
// edges being folded carry the same label.
class Folder {
public:
  Folder(int rank, bool labelled, int label_rank)
      : rank_(rank), labelled_(labelled), label_rank_(label_rank) {
    add_vertex();
  }

  int add_vertex() {
    adj_.emplace_back();
    alive_.push_back(true);
    return static_cast<int>(adj_.size()) - 1;
  }

  void add_edge(int s, int t, Letter l, Word label) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({s, t, l, std::move(label), true});
    adj_[static_cast<std::size_t>(s)].push_back(id);
    if (t != s) {
      adj_[static_cast<std::size_t>(t)].push_back(id);
    }
  }

  // Petal reading w from the base, whose closing edge carries `label`.
  void add_petal(const Word &w, const Word &label) {
    const Word one(label_rank_);
    int v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool last = i + 1 == w.size();
      const int next = last ? 0 : add_vertex();
      const Letter l = w[i];
      const Word &lab = last ? label : one;
      if (l > 0) {
        add_edge(v, next, l, labelled_ ? lab : one);
      } else {
        add_edge(next, v, -l, labelled_ ? lab.inverse() : one);
      }
      v = next;
    }
  }

  void fold() {
    std::deque<int> work(adj_.size());
    std::iota(work.begin(), work.end(), 0);
    while (!work.empty()) {
      const int u = work.front();
      work.pop_front();
      while (alive_[static_cast<std::size_t>(u)] && fold_once(u, work)) {
      }
    }
  }

  bool conflict() const noexcept { return conflict_; }

  // Tables over the live vertices, in canonical numbering, plus labels.
  void extract(Table &out, std::vector<std::vector<Word>> &labels) const {
    std::vector<int> compact(adj_.size(), -1);
    int count = 0;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (alive_[v]) {
        compact[v] = count++;
      }
    }
    Table raw(static_cast<std::size_t>(rank_),
              std::vector<int>(static_cast<std::size_t>(count), -1));
    std::vector<std::vector<Word>> raw_labels(
        static_cast<std::size_t>(rank_),
        std::vector<Word>(static_cast<std::size_t>(count), Word(label_rank_)));
    for (const auto &e : edges_) {
      if (!e.alive) {
        continue;
      }
      const auto i = static_cast<std::size_t>(e.l - 1);
      const auto s = static_cast<std::size_t>(compact[static_cast<std::size_t>(e.s)]);
      raw[i][s] = compact[static_cast<std::size_t>(e.t)];
      raw_labels[i][s] = e.label;
    }
    std::size_t reached = 0;
    const auto new_of_old =
        canonical_numbering(rank_, raw, inverse_table(raw), 0, reached);
    out = renumber(raw, new_of_old, reached);
    labels.assign(static_cast<std::size_t>(rank_),
                  std::vector<Word>(reached, Word(label_rank_)));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t v = 0; v < raw[i].size(); ++v) {
        if (raw[i][v] >= 0 && new_of_old[v] >= 0) {
          labels[i][static_cast<std::size_t>(new_of_old[v])] = raw_labels[i][v];
        }
      }
    }
  }

private:
  struct Edge {
    int s, t;
    Letter l;
    Word label;
    bool alive;
  };
  struct Half {
    int edge;
    bool forward;
  };

  int other_end(const Half &h) const {
    const auto &e = edges_[static_cast<std::size_t>(h.edge)];
    return h.forward ? e.t : e.s;
  }
  Word half_label(const Half &h) const {
    const auto &e = edges_[static_cast<std::size_t>(h.edge)];
    return h.forward ? e.label : e.label.inverse();
  }

  bool fold_once(int u, std::deque<int> &work) {
    auto &list = adj_[static_cast<std::size_t>(u)];
    std::erase_if(list, [&](int id) { return !edges_[static_cast<std::size_t>(id)].alive; });
    std::vector<std::optional<Half>> slot(2 * static_cast<std::size_t>(rank_) + 1);
    for (int id : list) {
      const auto &e = edges_[static_cast<std::size_t>(id)];
      for (bool forward : {true, false}) {
        if ((forward ? e.s : e.t) != u) {
          continue;
        }
        const auto key = static_cast<std::size_t>(forward ? rank_ + e.l : rank_ - e.l);
        Half h{id, forward};
        if (!slot[key]) {
          slot[key] = h;
          continue;
        }
        merge_halves(u, *slot[key], h, work);
        return true;
      }
    }
    return false;
  }

  void merge_halves(int u, Half h1, Half h2, std::deque<int> &work) {
    const int v1 = other_end(h1);
    const int v2 = other_end(h2);
    if (v1 == v2) {
      if (labelled_ && half_label(h1) != half_label(h2)) {
        conflict_ = true;
      }
      edges_[static_cast<std::size_t>(h2.edge)].alive = false;
      work.push_back(u);
      return;
    }
    auto movable = [&](int v) { return v != 0 && v != u; };
    int z = 0;
    int keep = 0;
    Word g(label_rank_);
    if (movable(v2)) {
      z = v2;
      keep = v1;
      if (labelled_) {
        g = half_label(h2).inverse() * half_label(h1);
      }
    } else if (movable(v1)) {
      z = v1;
      keep = v2;
      if (labelled_) {
        g = half_label(h1).inverse() * half_label(h2);
      }
    } else {
      // One half is a loop at u, the other runs to the base.
      const Half loop = v1 == u ? h1 : h2;
      const Half other = v1 == u ? h2 : h1;
      z = u;
      keep = 0;
      if (labelled_) {
        g = half_label(loop).inverse() * half_label(other);
      }
    }
    if (labelled_) {
      gauge(z, g);
    }
    merge_vertices(z, keep);
    if (labelled_ && half_label(h1) != half_label(h2)) {
      throw std::logic_error("labelled folding lost label agreement");
    }
    edges_[static_cast<std::size_t>(h2.edge)].alive = false;
    work.push_back(keep);
    if (alive_[static_cast<std::size_t>(u)]) {
      work.push_back(u);
    }
  }

  void gauge(int z, const Word &g) {
    const Word g_inv = g.inverse();
    for (int id : adj_[static_cast<std::size_t>(z)]) {
      auto &e = edges_[static_cast<std::size_t>(id)];
      if (!e.alive) {
        continue;
      }
      if (e.s == z) {
        e.label = g_inv * e.label;
      }
      if (e.t == z) {
        e.label = e.label * g;
      }
    }
  }

  void merge_vertices(int z, int keep) {
    auto moved = std::move(adj_[static_cast<std::size_t>(z)]);
    adj_[static_cast<std::size_t>(z)].clear();
    for (int id : moved) {
      auto &e = edges_[static_cast<std::size_t>(id)];
      if (!e.alive) {
        continue;
      }
      const bool touched_keep = e.s == keep || e.t == keep;
      if (e.s == z) {
        e.s = keep;
      }
      if (e.t == z) {
        e.t = keep;
      }
      if (!touched_keep) {
        adj_[static_cast<std::size_t>(keep)].push_back(id);
      }
    }
    alive_[static_cast<std::size_t>(z)] = false;
  }

  int rank_;
  bool labelled_;
  int label_rank_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<bool> alive_;
  bool conflict_ = false;
};

void require_rank(const Word &w, int rank) {
  if (w.rank() != rank) {
    throw MismatchError("word over F_" + std::to_string(w.rank()) +
                        " used with F_" + std::to_string(rank));
  }
}

} // namespace

// ---------------------------------------------------------------------------

SubgroupGraph::SubgroupGraph(int rank) : rank_(rank) {
  if (rank < 1) {
    throw MismatchError("free group rank must be positive");
  }
  out_.assign(static_cast<std::size_t>(rank), std::vector<int>(1, -1));
  finish();
}

SubgroupGraph SubgroupGraph::whole(int rank) {
  SubgroupGraph g(rank);
  for (auto &row : g.out_) {
    row[0] = 0;
  }
  g.finish();
  return g;
}

SubgroupGraph SubgroupGraph::canonical(int rank, const Table &out, int base) {
  if (static_cast<int>(out.size()) != rank) {
    throw MismatchError("table count does not match rank");
  }
  std::size_t reached = 0;
  const auto new_of_old = canonical_numbering(rank, out, inverse_table(out), base, reached);
  SubgroupGraph g(rank);
  g.out_ = renumber(out, new_of_old, reached);
  g.finish();
  return g;
}

SubgroupGraph SubgroupGraph::from_permutations(int rank, const Table &perms) {
  if (static_cast<int>(perms.size()) != rank) {
    throw ParseError("expected " + std::to_string(rank) + " permutations");
  }
  const std::size_t m = perms[0].size();
  if (m == 0) {
    throw ParseError("permutations must act on at least one point");
  }
  for (const auto &p : perms) {
    if (p.size() != m) {
      throw ParseError("permutations have different degrees");
    }
    std::vector<bool> seen(m, false);
    for (int x : p) {
      if (x < 0 || static_cast<std::size_t>(x) >= m || seen[static_cast<std::size_t>(x)]) {
        throw ParseError("not a permutation of 1.." + std::to_string(m));
      }
      seen[static_cast<std::size_t>(x)] = true;
    }
  }
  SubgroupGraph g = canonical(rank, perms, 0);
  if (g.size() != m) {
    throw PreconditionError("permutation action is not transitive");
  }
  return g;
}

void SubgroupGraph::finish() {
  in_ = inverse_table(out_);
  const std::size_t m = size();
  paths_.assign(m, Word(rank_));
  edge_basis_.assign(static_cast<std::size_t>(rank_), std::vector<int>(m, -1));
  std::vector<std::vector<bool>> tree(static_cast<std::size_t>(rank_),
                                      std::vector<bool>(m, false));
  std::vector<bool> seen(m, false);
  seen[0] = true;
  const auto letters = exploration_order(rank_);
  // Vertices are already numbered in discovery order.
  for (std::size_t v = 0; v < m; ++v) {
    for (Letter l : letters) {
      const int w = target(static_cast<int>(v), l);
      if (w < 0 || seen[static_cast<std::size_t>(w)]) {
        continue;
      }
      seen[static_cast<std::size_t>(w)] = true;
      paths_[static_cast<std::size_t>(w)] = paths_[v] * Word::generator(rank_, l);
      if (l > 0) {
        tree[static_cast<std::size_t>(l - 1)][v] = true;
      } else {
        tree[static_cast<std::size_t>(-l - 1)][static_cast<std::size_t>(w)] = true;
      }
    }
  }
  basis_.clear();
  for (std::size_t v = 0; v < m; ++v) {
    for (int i = 0; i < rank_; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const int w = out_[ii][v];
      if (w < 0 || tree[ii][v]) {
        continue;
      }
      edge_basis_[ii][v] = static_cast<int>(basis_.size());
      basis_.push_back(paths_[v] * Word::generator(rank_, i + 1) *
                       paths_[static_cast<std::size_t>(w)].inverse());
    }
  }
}

bool SubgroupGraph::complete() const noexcept {
  for (const auto &row : out_) {
    for (int w : row) {
      if (w < 0) {
        return false;
      }
    }
  }
  return true;
}

int SubgroupGraph::target(int v, Letter l) const {
  const auto i = static_cast<std::size_t>(std::abs(l) - 1);
  return l > 0 ? out_[i][static_cast<std::size_t>(v)]
               : in_[i][static_cast<std::size_t>(v)];
}

int SubgroupGraph::trace(int v, const Word &w) const {
  require_rank(w, rank_);
  for (Letter l : w.letters()) {
    v = target(v, l);
    if (v < 0) {
      return -1;
    }
  }
  return v;
}

std::size_t SubgroupGraph::index() const {
  if (!complete()) {
    throw InfiniteIndexError("subgroup has infinite index (Stallings graph is not a covering)");
  }
  return size();
}

Word SubgroupGraph::basis_coordinates(const Word &w) const {
  require_rank(w, rank_);
  const int r = std::max<int>(1, static_cast<int>(basis_.size()));
  std::vector<Letter> coords;
  int v = 0;
  for (Letter l : w.letters()) {
    const int t = target(v, l);
    if (t < 0) {
      throw PreconditionError(to_literal(w) + " is not in the subgroup");
    }
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    const int source = l > 0 ? v : t;
    const int b = edge_basis_[i][static_cast<std::size_t>(source)];
    if (b >= 0) {
      coords.push_back(l > 0 ? b + 1 : -(b + 1));
    }
    v = t;
  }
  if (v != 0) {
    throw PreconditionError(to_literal(w) + " is not in the subgroup");
  }
  return Word(r, coords);
}

std::strong_ordering SubgroupGraph::operator<=>(const SubgroupGraph &other) const {
  if (auto c = rank_ <=> other.rank_; c != 0) {
    return c;
  }
  if (auto c = size() <=> other.size(); c != 0) {
    return c;
  }
  return out_ <=> other.out_;
}

// ---------------------------------------------------------------------------

SubgroupGraph from_generators(const std::vector<Word> &words, int rank) {
  Folder folder(rank, false, 1);
  const Word none(1);
  for (const auto &w : words) {
    require_rank(w, rank);
    folder.add_petal(w, none);
  }
  folder.fold();
  Table out;
  std::vector<std::vector<Word>> labels;
  folder.extract(out, labels);
  return SubgroupGraph::canonical(rank, out, 0);
}

const SubgroupGraph &require_finite_index(const SubgroupGraph &g) {
  if (!g.complete()) {
    throw InfiniteIndexError("subgroup has infinite index");
  }
  return g;
}

GeneratorExpression::GeneratorExpression(const std::vector<Word> &generators, int rank)
    : generators_(generators), graph_(rank) {
  const int label_rank = std::max<int>(1, static_cast<int>(generators.size()));
  Folder folder(rank, true, label_rank);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    require_rank(generators[i], rank);
    if (generators[i].empty()) {
      free_basis_ = false;
      continue;
    }
    folder.add_petal(generators[i],
                     Word::generator(label_rank, static_cast<Letter>(i + 1)));
  }
  folder.fold();
  if (folder.conflict()) {
    free_basis_ = false;
  }
  Table out;
  folder.extract(out, labels_);
  graph_ = SubgroupGraph::canonical(rank, out, 0);
}

std::optional<Word> GeneratorExpression::express(const Word &w) const {
  require_rank(w, graph_.rank());
  const int label_rank = std::max<int>(1, static_cast<int>(generators_.size()));
  Word acc(label_rank);
  int v = 0;
  for (Letter l : w.letters()) {
    const int t = graph_.target(v, l);
    if (t < 0) {
      return std::nullopt;
    }
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    if (l > 0) {
      acc = acc * labels_[i][static_cast<std::size_t>(v)];
    } else {
      acc = acc * labels_[i][static_cast<std::size_t>(t)].inverse();
    }
    v = t;
  }
  if (v != 0) {
    return std::nullopt;
  }
  return acc;
}

std::size_t index(const SubgroupGraph &g) { return g.index(); }

bool contains(const SubgroupGraph &g, const Word &w) { return g.contains(w); }

SubgroupGraph intersect(const SubgroupGraph &a, const SubgroupGraph &b) {
  if (a.rank() != b.rank()) {
    throw MismatchError("cannot intersect subgroups of different free groups");
  }
  const int rank = a.rank();
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> order{{0, 0}};
  id[{0, 0}] = 0;
  Table out(static_cast<std::size_t>(rank));
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto [x, y] = order[head];
    for (int i = 1; i <= rank; ++i) {
      for (Letter l : {i, -i}) {
        const int tx = a.target(x, l);
        const int ty = b.target(y, l);
        if (tx < 0 || ty < 0) {
          continue;
        }
        auto [it, inserted] = id.try_emplace({tx, ty}, static_cast<int>(order.size()));
        if (inserted) {
          order.emplace_back(tx, ty);
        }
      }
    }
  }
  for (auto &row : out) {
    row.assign(order.size(), -1);
  }
  for (std::size_t v = 0; v < order.size(); ++v) {
    const auto [x, y] = order[v];
    for (int i = 1; i <= rank; ++i) {
      const int tx = a.target(x, i);
      const int ty = b.target(y, i);
      if (tx >= 0 && ty >= 0) {
        out[static_cast<std::size_t>(i - 1)][v] = id.at({tx, ty});
      }
    }
  }
  return SubgroupGraph::canonical(rank, out, 0);
}

bool is_subgroup(const SubgroupGraph &a, const SubgroupGraph &b) {
  if (a.rank() != b.rank()) {
    throw MismatchError("subgroups of different free groups");
  }
  return std::all_of(a.basis().begin(), a.basis().end(),
                     [&](const Word &w) { return b.contains(w); });
}

std::vector<SubgroupGraph> enumerate_subgroups(int rank, long max_index) {
  if (rank < 1 || max_index < 1) {
    throw PreconditionError("enumerate_subgroups needs k >= 1 and N >= 1");
  }
  const std::size_t cap = work_cap();
  // Work estimate: sum over m of (m!)^k permutation tuples.
  double work = 0;
  double factorial = 1;
  for (long m = 1; m <= max_index; ++m) {
    factorial *= static_cast<double>(m);
    work += std::pow(factorial, rank);
  }
  if (work > static_cast<double>(cap)) {
    throw ResourceLimitError("enumerating subgroups of index <= " +
                             std::to_string(max_index) + " in F_" +
                             std::to_string(rank) + " needs ~" +
                             std::to_string(static_cast<long long>(work)) +
                             " permutation tuples (cap " + std::to_string(cap) +
                             "; set COMMSOL_MAX_WORK)");
  }
  std::set<SubgroupGraph> found;
  for (long m = 1; m <= max_index; ++m) {
    std::vector<int> identity(static_cast<std::size_t>(m));
    std::iota(identity.begin(), identity.end(), 0);
    Table tuple(static_cast<std::size_t>(rank), identity);
    auto visit = [&](auto &&self, std::size_t pos) -> void {
      if (pos == tuple.size()) {
        std::size_t reached = 0;
        const auto numbering =
            canonical_numbering(rank, tuple, inverse_table(tuple), 0, reached);
        if (reached == static_cast<std::size_t>(m)) {
          found.insert(SubgroupGraph::canonical(rank, tuple, 0));
        }
        (void)numbering;
        return;
      }
      std::vector<int> perm = identity;
      do {
        tuple[pos] = perm;
        self(self, pos + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
    };
    visit(visit, 0);
  }
  return {found.begin(), found.end()};
}

SubgroupGraph profinite_kernel(int rank, long max_index) {
  const std::size_t cap = work_cap();
  SubgroupGraph kernel = SubgroupGraph::whole(rank);
  for (const auto &g : enumerate_subgroups(rank, max_index)) {
    kernel = intersect(kernel, g);
    if (kernel.size() > cap) {
      throw ResourceLimitError("profinite kernel exceeds work cap; partial index reached " +
                               std::to_string(kernel.size()));
    }
  }
  return kernel;
}

SubgroupGraph parse_subgroup(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw ParseError("empty subgroup text");
  }
  std::istringstream header(lines[0]);
  std::string tag;
  int rank = 0;
  if (!(header >> tag >> rank) || tag != "F") {
    throw ParseError("subgroup text must start with 'F <k>'");
  }
  Alphabet alphabet(rank);
  std::string kind;
  if (header >> kind) {
    long m = 0;
    if (kind != "graph" || !(header >> m) || m < 1) {
      throw ParseError("expected 'F <k> graph <m>'");
    }
    if (lines.size() != static_cast<std::size_t>(rank) + 1) {
      throw ParseError("graph form needs exactly " + std::to_string(rank) +
                       " permutation lines");
    }
    Table perms;
    for (int i = 0; i < rank; ++i) {
      std::istringstream row(lines[static_cast<std::size_t>(i) + 1]);
      std::vector<int> perm;
      long x = 0;
      while (row >> x) {
        perm.push_back(static_cast<int>(x - 1));
      }
      if (!row.eof()) {
        throw ParseError("bad permutation line: '" +
                         lines[static_cast<std::size_t>(i) + 1] + "'");
      }
      if (perm.size() != static_cast<std::size_t>(m)) {
        throw ParseError("permutation line must list " + std::to_string(m) + " images");
      }
      perms.push_back(std::move(perm));
    }
    return SubgroupGraph::from_permutations(rank, perms);
  }
  std::vector<Word> gens;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    gens.push_back(parse_word(lines[i], alphabet));
  }
  return from_generators(gens, rank);
}

std::string to_text(const SubgroupGraph &g) {
  if (!g.complete()) {
    return to_generator_text(g);
  }
  std::string out = "F " + std::to_string(g.rank()) + " graph " +
                    std::to_string(g.size()) + "\n";
  for (const auto &row : g.out_table()) {
    for (std::size_t v = 0; v < row.size(); ++v) {
      if (v != 0) {
        out += ' ';
      }
      out += std::to_string(row[v] + 1);
    }
    out += '\n';
  }
  return out;
}

std::string to_generator_text(const SubgroupGraph &g) {
  std::string out = "F " + std::to_string(g.rank()) + "\n";
  for (const auto &w : g.basis()) {
    out += to_literal(w) + "\n";
  }
  return out;
}

Word substitute(const Word &w, const std::vector<Word> &images, int rank) {
  Word acc(rank);
  for (Letter l : w.letters()) {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    if (i >= images.size()) {
      throw MismatchError("substitution has no image for letter " + std::to_string(l));
    }
    acc = acc * (l > 0 ? images[i] : images[i].inverse());
  }
  return acc;
}

} // namespace commsol
