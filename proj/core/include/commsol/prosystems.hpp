#pragma once

// Inverse systems of finite-index subgroups truncated at index N, morphisms
// between them, and the correspondence zeta between commensurations and
// pro-automorphisms of the system.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "commsol/commensurations.hpp"

namespace commsol {

struct FreeGroup {
  using Element = Word;
  using Subgroup = SubgroupGraph;
  using Map = FComm;
  static constexpr const char *tag = "F";

  static std::vector<Subgroup> enumerate(int rank, long max_index);
  static Subgroup whole(int rank);
  static Map identity(int rank);
  static int size_of(const Subgroup &h) { return h.rank(); }
  static mpz_class index_of(const Subgroup &h);
  static std::vector<Element> basis(const Subgroup &h) { return h.basis(); }
  static std::string element_text(const Element &g) { return to_literal(g); }
  /// One-line form "<w1,w2,...>" of the Schreier basis.
  static std::string inline_text(const Subgroup &h);
};

struct FreeAbelianGroup {
  using Element = IntVector;
  using Subgroup = Lattice;
  using Map = ZComm;
  static constexpr const char *tag = "Z";

  static std::vector<Subgroup> enumerate(int n, long max_index);
  static Subgroup whole(int n);
  static Map identity(int n);
  static int size_of(const Subgroup &h) { return static_cast<int>(h.dim()); }
  static mpz_class index_of(const Subgroup &h) { return h.index(); }
  static std::vector<Element> basis(const Subgroup &h) { return h.columns(); }
  static std::string element_text(const Element &g) { return "(" + to_string(g) + ")"; }
  static std::string inline_text(const Subgroup &h);
};

/// Inclusion G_from -> G_to of a strictly smaller object into a larger one.
struct Bond {
  std::size_t from;
  std::size_t to;
  bool operator==(const Bond &) const = default;
};

template <class G> class TruncatedSystem {
public:
  using Subgroup = typename G::Subgroup;

  /// Every subgroup of index <= depth, in canonical order; object 0 is the
  /// whole group.
  TruncatedSystem(int size, long depth);
  /// The subsystem on the given objects (which must include one of index
  /// one for reconstruct to apply).
  TruncatedSystem(int size, long depth, std::vector<Subgroup> objects);

  int size() const noexcept { return size_; }
  long depth() const noexcept { return depth_; }
  const std::vector<Subgroup> &objects() const noexcept { return objects_; }
  const Subgroup &object(std::size_t i) const { return objects_.at(i); }
  /// Strict inclusions only; identity bonds are implicit.
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }
  /// Pairs (i, j), i < j, whose intersection is not an object.
  const std::vector<std::pair<std::size_t, std::size_t>> &overflow() const noexcept {
    return overflow_;
  }
  std::optional<std::size_t> find(const Subgroup &h) const;
  /// Object of largest index containing h; the top object when nothing
  /// smaller does. Throws when no object contains h.
  std::size_t smallest_containing(const Subgroup &h) const;

private:
  void connect();

  int size_;
  long depth_;
  std::vector<Subgroup> objects_;
  std::vector<Bond> bonds_;
  std::vector<std::pair<std::size_t, std::size_t>> overflow_;
};

/// Component at a target object: a map from `source` into that object.
template <class G> struct Component {
  typename G::Subgroup source;
  /// Position of source among the source system's objects, if it is one.
  std::optional<std::size_t> source_index;
  typename G::Map map;
};

template <class G> class SystemMorphism {
public:
  using System = TruncatedSystem<G>;

  SystemMorphism(std::shared_ptr<const System> source,
                 std::shared_ptr<const System> target,
                 std::vector<Component<G>> components);

  const System &source() const noexcept { return *source_; }
  const System &target() const noexcept { return *target_; }
  std::shared_ptr<const System> source_ptr() const noexcept { return source_; }
  std::shared_ptr<const System> target_ptr() const noexcept { return target_; }
  const std::vector<Component<G>> &components() const noexcept { return components_; }
  /// Target indices whose source lies deeper than the source system.
  std::vector<std::size_t> deep_sources() const;
  /// For every bond i -> j of the target, source_i lies in source_j and the
  /// two components agree on a basis of source_i.
  bool strictly_commutes() const;

private:
  std::shared_ptr<const System> source_;
  std::shared_ptr<const System> target_;
  std::vector<Component<G>> components_;
};

template <class G>
SystemMorphism<G> identity_morphism(std::shared_ptr<const TruncatedSystem<G>> s);

/// Component at G_l is phi restricted to phi^-1(G_l), on the given system.
template <class G>
SystemMorphism<G> zeta(const typename G::Map &phi,
                       std::shared_ptr<const TruncatedSystem<G>> system);

/// The top component as a commensuration. Throws PreconditionError when the
/// target has no object of index one.
template <class G> typename G::Map reconstruct(const SystemMorphism<G> &m);

/// first after second; second's target must be first's source.
template <class G>
SystemMorphism<G> compose_morphisms(const SystemMorphism<G> &first,
                                    const SystemMorphism<G> &second);

/// Componentwise agreement on the intersection of the sources.
template <class G>
bool morphisms_equivalent(const SystemMorphism<G> &a, const SystemMorphism<G> &b);

/// Selects objects by index: "all", "even", "index>=m", "index<=m",
/// "index%m==r", "index in a,b,c".
class IndexPredicate {
public:
  explicit IndexPredicate(std::string_view text);
  bool operator()(const mpz_class &index) const;
  const std::string &text() const noexcept { return text_; }

private:
  enum class Kind { all, at_least, at_most, modulo, member };
  std::string text_;
  Kind kind_ = Kind::all;
  mpz_class a_, b_;
  std::vector<mpz_class> members_;
};

template <class G> struct CofinalRestriction {
  std::shared_ptr<const TruncatedSystem<G>> subsystem;
  /// Full system -> subsystem: identity components.
  SystemMorphism<G> restrict;
  /// Subsystem -> full system. The component at G_l includes the
  /// intersection of the selected objects chosen for every object
  /// containing G_l, which keeps the components strictly commuting.
  SystemMorphism<G> inverse;
};

/// Throws PreconditionError naming an object that contains no selected
/// object.
template <class G>
CofinalRestriction<G> cofinal_restrict(std::shared_ptr<const TruncatedSystem<G>> s,
                                       const IndexPredicate &predicate);

template <class G> std::string to_text(const TruncatedSystem<G> &s);
/// Component lines "comp <j>: <basis element> -> <image>".
template <class G> std::string to_text(const SystemMorphism<G> &m);

} // namespace commsol
