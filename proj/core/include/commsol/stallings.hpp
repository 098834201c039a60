#pragma once

// Subgroups of F_k as based, folded, labelled graphs (Stallings graphs).
// A finite-index subgroup is a complete graph, i.e. a finite covering of the
// rose, and its index is the vertex count.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "commsol/freewords.hpp"

namespace commsol {

/// Canonically numbered folded graph. Vertex 0 is the base; vertices are
/// numbered in breadth-first order from the base exploring letters in the
/// order a, A, b, B, ... . Two graphs are equal iff their subgroups are.
class SubgroupGraph {
public:
  /// Trivial subgroup: one vertex, no edges.
  explicit SubgroupGraph(int rank);
  static SubgroupGraph whole(int rank);
  /// Graph of the action given by k permutations (0-based images). Must be
  /// transitive; the base is point 0.
  static SubgroupGraph from_permutations(int rank,
                                         const std::vector<std::vector<int>> &perms);

  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return out_.empty() ? 0 : out_[0].size(); }
  bool complete() const noexcept;
  /// Endpoint of the edge leaving v labelled l (l may be an inverse
  /// letter), or -1.
  int target(int v, Letter l) const;
  /// Follows w from v; -1 when the path leaves the graph.
  int trace(int v, const Word &w) const;

  /// Throws InfiniteIndexError for incomplete graphs.
  std::size_t index() const;
  bool contains(const Word &w) const { return trace(0, w) == 0; }

  /// Word read along the breadth-first spanning tree from the base to v.
  const Word &tree_path(int v) const { return paths_[static_cast<std::size_t>(v)]; }
  /// Schreier free basis, one word per non-tree positive edge (v, letter),
  /// ordered by v then letter.
  const std::vector<Word> &basis() const noexcept { return basis_; }
  /// Coordinates of w in basis(): a word over basis().size() letters.
  /// Throws PreconditionError when w is not in the subgroup.
  Word basis_coordinates(const Word &w) const;

  /// Images of each positive letter as arrays (size() entries, -1 = none).
  const std::vector<std::vector<int>> &out_table() const noexcept { return out_; }

  bool operator==(const SubgroupGraph &other) const {
    return rank_ == other.rank_ && out_ == other.out_;
  }
  std::strong_ordering operator<=>(const SubgroupGraph &other) const;

  /// Builds from arbitrary folded tables rooted at `base`, keeping the
  /// component of the base and renumbering canonically.
  static SubgroupGraph canonical(int rank, const std::vector<std::vector<int>> &out,
                                 int base);

private:
  void finish();

  int rank_;
  std::vector<std::vector<int>> out_; // out_[letter-1][v]
  std::vector<std::vector<int>> in_;
  std::vector<Word> paths_;
  std::vector<Word> basis_;
  // basis index of the positive edge (v, letter), or -1 for tree edges
  std::vector<std::vector<int>> edge_basis_;
};

/// Stallings folding of the generators. The result may be incomplete, which
/// means infinite index; require_finite_index() turns that into an error.
SubgroupGraph from_generators(const std::vector<Word> &words, int rank);
const SubgroupGraph &require_finite_index(const SubgroupGraph &g);

/// Folding with bookkeeping of which product of generators each edge
/// carries, so that subgroup elements can be written in the generators.
class GeneratorExpression {
public:
  GeneratorExpression(const std::vector<Word> &generators, int rank);

  const SubgroupGraph &graph() const noexcept { return graph_; }
  /// False when some nontrivial product of the generators is the identity,
  /// i.e. the generators are not a free basis of what they generate.
  bool free_basis() const noexcept { return free_basis_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }
  /// w as a word over generator_count() letters, or nullopt when w is not
  /// in the subgroup.
  std::optional<Word> express(const Word &w) const;

private:
  std::vector<Word> generators_;
  SubgroupGraph graph_;
  bool free_basis_ = true;
  std::vector<std::vector<Word>> labels_; // labels_[letter-1][v]
};

std::size_t index(const SubgroupGraph &g);
bool contains(const SubgroupGraph &g, const Word &w);
/// Based component of the fiber product: the graph of the intersection.
SubgroupGraph intersect(const SubgroupGraph &a, const SubgroupGraph &b);
/// a <= b as subgroups.
bool is_subgroup(const SubgroupGraph &a, const SubgroupGraph &b);
inline const std::vector<Word> &basis(const SubgroupGraph &g) { return g.basis(); }

/// Every subgroup of F_k of index <= max_index, sorted by index and then
/// by table.
std::vector<SubgroupGraph> enumerate_subgroups(int rank, long max_index);
/// Intersection of every subgroup of index <= max_index.
SubgroupGraph profinite_kernel(int rank, long max_index);

/// "F <k>" and one generator per line, or "F <k> graph <m>" and k lines of
/// 1-based permutation images.
SubgroupGraph parse_subgroup(std::string_view text);
/// Graph form for complete graphs, generator form otherwise.
std::string to_text(const SubgroupGraph &g);
std::string to_generator_text(const SubgroupGraph &g);

/// Evaluates a word over r letters by substituting images[i] for letter i+1.
Word substitute(const Word &w, const std::vector<Word> &images, int rank);

} // namespace commsol
