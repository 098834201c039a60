#pragma once

// Truncated full solenoids over the rose R_k and the torus T^n. The depth-N
// model is the suspension G/K_N x_G X~, K_N the intersection of all
// subgroups of index <= N, with G acting by g.(c, x) = (c g^-1, g x). Points
// are stored as the orbit representative whose leaf coordinate is closest
// to the base vertex.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "commsol/commensurations.hpp"
#include "commsol/prosystems.hpp"

namespace commsol {

/// Nonnegative distance in exact form: 0, exp(-n), a rational, or the
/// square root of a rational.
class MetricValue {
public:
  enum class Kind { zero, exp, rational, root };

  MetricValue() = default;
  static MetricValue exp_neg(long n);
  static MetricValue rational(const mpq_class &q);
  static MetricValue sqrt_of(const mpq_class &q);

  Kind kind() const noexcept { return kind_; }
  long exponent() const noexcept { return exponent_; }
  const mpq_class &operand() const noexcept { return q_; }
  long double value() const;
  /// "0", "exp(-4)", "3/2", "sqrt(5/4)".
  std::string exact() const;
  /// exact() followed by " = " and a decimal rendering.
  std::string to_string() const;

  bool operator==(const MetricValue &other) const;
  bool operator<(const MetricValue &other) const;
  bool operator<=(const MetricValue &other) const { return !(other < *this); }

private:
  Kind kind_ = Kind::zero;
  long exponent_ = 0;
  mpq_class q_ = 0;
};

MetricValue max(const MetricValue &a, const MetricValue &b);
/// Reads the exact form, optionally followed by " = <decimal>".
MetricValue parse_metric_value(std::string_view text);

// ---------------------------------------------------------------------------
// Rose and its covers.

/// Point of the Cayley tree of F_k: distance t in [0, 1) along the edge
/// leaving `vertex` labelled `letter` (letter 0 means the vertex itself).
struct TreePoint {
  Word vertex;
  Letter letter = 0;
  mpq_class t = 0;
};

TreePoint tree_vertex(const Word &g);
/// g applied to p on the left.
TreePoint translate(const Word &g, const TreePoint &p);
mpq_class tree_distance(const TreePoint &p, const TreePoint &q);
mpq_class distance_to_base(const TreePoint &p);

/// A cover of the rose with vertices numbered arbitrarily (vertex 0 is the
/// base), as k permutation tables.
struct CoverGraph {
  int rank = 0;
  std::vector<std::vector<int>> out; // out[letter-1][v]

  std::size_t size() const { return out.empty() ? 0 : out[0].size(); }
  int target(int v, Letter l) const;
};

/// Throws InfiniteIndexError for incomplete graphs.
CoverGraph cover_of(const SubgroupGraph &h);
/// Same cover with vertex v renamed perm[v]; perm[0] must be 0.
CoverGraph relabel(const CoverGraph &c, const std::vector<int> &perm);
bool based_isomorphic(const CoverGraph &a, const CoverGraph &b);
/// The subgroup of based loops.
SubgroupGraph subgroup_of(const CoverGraph &c);

/// Covering projection X_H -> X_K for H <= K, as a vertex map.
struct CoveringMap {
  SubgroupGraph source;
  SubgroupGraph target;
  std::vector<int> vertex_map;

  /// Base to base, and every edge (v, l) maps to the edge (f(v), l).
  bool is_covering() const;
};

/// Throws PreconditionError unless h <= k.
CoveringMap covering_map(const SubgroupGraph &h, const SubgroupGraph &k);
/// first after second.
CoveringMap compose(const CoveringMap &first, const CoveringMap &second);

/// Element d of the finite-index subgroup closest to g: d = g u with |u|
/// least, ties broken by shortlex order on d.
Word closest_point(const SubgroupGraph &d, const Word &g);
IntVector closest_point(const Lattice &d, const IntVector &g);

/// Based graph map X_H -> X_K induced by phi. The edge (v, l, w) is sent to
/// the path from vertex_image[v] spelled edge_image[l-1][v].
struct GraphLift {
  SubgroupGraph source;
  SubgroupGraph target;
  std::vector<int> vertex_image;
  std::vector<std::vector<Word>> edge_image;
  /// Each edge labelled l goes to the path spelled phi(l).
  bool label_equivariant = false;

  /// Every edge image is a path between the images of its endpoints.
  bool consistent() const;
  /// Lifting along a second spanning tree reproduces vertex_image.
  bool unique() const;
};

/// Requires h inside the domain of phi and phi(h) <= k; otherwise throws
/// PreconditionError naming the first offending basis word. Vertex lifts
/// are phi applied to the closest domain point of each tree path.
GraphLift lift_through_covers(const FComm &phi, const SubgroupGraph &h,
                              const SubgroupGraph &k);

/// The torus map R^n/H -> R^n/K, x |-> M x.
struct TorusLift {
  Lattice source;
  Lattice target;
  RationalMatrix matrix;
};

TorusLift lift_through_covers(const ZComm &phi, const Lattice &h, const Lattice &k);

/// Half the shortest essential loop of the unit rose or unit torus.
mpq_class injectivity_radius();
/// Whether the open r-ball about the base of the universal cover maps
/// injectively to the unit rose.
bool ball_projects_isometrically(const mpq_class &r);

// ---------------------------------------------------------------------------
// Depth-N models.

struct FreeSolenoidPoint {
  int coordinate = 0; // vertex of the graph of K_N
  Letter letter = 0;  // leaf point at distance t from the base along letter
  mpq_class t = 0;    // t in [0, 1/2]

  bool operator==(const FreeSolenoidPoint &) const = default;
};

struct FreeSigma {
  MetricValue value;
  Word argmin;
};

struct BallReport {
  long depth = 0;
  mpq_class epsilon;
  std::size_t components = 0;
  std::vector<std::string> coordinates;
  std::size_t samples = 0;
  bool isometric = false;
  /// Depth one: the profinite pseudometric vanishes identically.
  bool degenerate = false;
};

class FreeSolenoid {
public:
  FreeSolenoid(int rank, long depth);

  int rank() const noexcept { return rank_; }
  long depth() const noexcept { return depth_; }
  const TruncatedSystem<FreeGroup> &system() const noexcept { return *system_; }
  std::shared_ptr<const TruncatedSystem<FreeGroup>> system_ptr() const { return system_; }
  /// G_{<=n} for 1 <= n <= depth.
  const SubgroupGraph &level(long n) const;
  const SubgroupGraph &kernel() const { return level(depth_); }
  /// Number of sheets over the base: [G : K_N].
  std::size_t sheets() const { return kernel().size(); }

  /// Largest n <= depth with w in G_{<=n}.
  long pro_level(const Word &w) const;
  MetricValue d_pro(const Word &g, const Word &h) const;
  MetricValue d_pro(int c1, int c2) const;

  /// Canonical representative of the orbit of (c, x).
  FreeSolenoidPoint point(int coordinate, const TreePoint &leaf) const;
  FreeSolenoidPoint baseleaf(const Word &g) const;
  /// Points at each prefix of g.
  std::vector<FreeSolenoidPoint> baseleaf_path(const Word &g) const;
  /// Vertex of each object's graph reached by the coordinate.
  std::vector<int> coset_family(int coordinate) const;
  TreePoint leaf(const FreeSolenoidPoint &p) const;

  /// max(d_pro, leaf distance) for the stored representatives.
  MetricValue d_inf(const FreeSolenoidPoint &p, const FreeSolenoidPoint &q) const;
  /// Minimum of d_inf over the orbit of q.
  FreeSigma sigma(const FreeSolenoidPoint &p, const FreeSolenoidPoint &q) const;
  /// Requires 0 < epsilon < injectivity_radius() / 4.
  BallReport ball_structure(const FreeSolenoidPoint &p, const mpq_class &epsilon) const;

  std::string to_text(const FreeSolenoidPoint &p) const;
  /// Inverse of to_text; rejects non-canonical leaf coordinates.
  FreeSolenoidPoint parse_point(std::string_view text) const;

private:
  int rank_;
  long depth_;
  std::shared_ptr<const TruncatedSystem<FreeGroup>> system_;
  std::vector<SubgroupGraph> levels_;
};

struct TorusSolenoidPoint {
  IntVector coordinate;        // reduced modulo K_N
  std::vector<mpq_class> leaf; // entries in (-1/2, 1/2]

  bool operator==(const TorusSolenoidPoint &) const = default;
};

struct TorusSigma {
  MetricValue value;
  IntVector argmin;
};

class TorusSolenoid {
public:
  TorusSolenoid(std::size_t n, long depth);

  std::size_t dim() const noexcept { return n_; }
  long depth() const noexcept { return depth_; }
  const TruncatedSystem<FreeAbelianGroup> &system() const noexcept { return *system_; }
  const Lattice &level(long n) const;
  const Lattice &kernel() const { return level(depth_); }
  mpz_class sheets() const { return kernel().index(); }

  long pro_level(const IntVector &v) const;
  MetricValue d_pro(const IntVector &g, const IntVector &h) const;

  TorusSolenoidPoint point(const IntVector &coordinate,
                           const std::vector<mpq_class> &leaf) const;
  TorusSolenoidPoint baseleaf(const IntVector &g) const;
  std::vector<IntVector> coset_family(const IntVector &coordinate) const;

  MetricValue d_inf(const TorusSolenoidPoint &p, const TorusSolenoidPoint &q) const;
  TorusSigma sigma(const TorusSolenoidPoint &p, const TorusSolenoidPoint &q) const;
  BallReport ball_structure(const TorusSolenoidPoint &p, const mpq_class &epsilon) const;

  std::string to_text(const TorusSolenoidPoint &p) const;
  TorusSolenoidPoint parse_point(std::string_view text) const;

private:
  std::size_t n_;
  long depth_;
  std::shared_ptr<const TruncatedSystem<FreeAbelianGroup>> system_;
  std::vector<Lattice> levels_;
};

/// Euclidean distance between rational vectors.
MetricValue euclidean_distance(const std::vector<mpq_class> &x,
                               const std::vector<mpq_class> &y);

/// Decimal or fraction text to an exact rational ("0.1" -> 1/10).
mpq_class parse_decimal(std::string_view text);

} // namespace commsol
