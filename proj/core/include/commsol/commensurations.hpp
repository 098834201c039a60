#pragma once

// Partial automorphisms phi: H -> K between finite-index subgroups of Z^n
// and F_k. Two of them are equivalent when they agree on the intersection
// of their domains; equivalence classes form Comm(G).

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "commsol/freewords.hpp"
#include "commsol/lattices.hpp"
#include "commsol/rational.hpp"
#include "commsol/stallings.hpp"

namespace commsol {

/// x |-> M x restricted to a finite-index H with M H = K.
class ZComm {
public:
  /// Throws PreconditionError unless M is invertible and M H is integral.
  ZComm(Lattice domain, RationalMatrix matrix);

  static ZComm identity(std::size_t n);
  /// Domain {x in Z^n : M x in Z^n}, codomain its image.
  static ZComm from_matrix(const RationalMatrix &m);

  std::size_t dim() const noexcept { return domain_.dim(); }
  const Lattice &domain() const noexcept { return domain_; }
  const Lattice &codomain() const noexcept { return codomain_; }
  const RationalMatrix &matrix() const noexcept { return matrix_; }

  /// Throws PreconditionError when v is outside the domain.
  IntVector apply(const IntVector &v) const;

private:
  Lattice domain_;
  Lattice codomain_;
  RationalMatrix matrix_;
};

/// An isomorphism H -> K of finite-index subgroups of F_k, stored as the
/// images of the Schreier basis of H.
class FComm {
public:
  /// Throws PreconditionError unless the images fold to a finite-index K
  /// whose rank equals the rank of H.
  FComm(SubgroupGraph domain, std::vector<Word> images);

  static FComm identity(int rank);
  /// Conjugation x |-> g x g^-1 on all of F_k.
  static FComm inner(const Word &g);
  /// Automorphism of F_k given by the images of the generators.
  static FComm automorphism(const std::vector<Word> &generator_images);
  /// The map sending each word of a free basis of H to the matching image.
  static FComm from_basis_map(const std::vector<Word> &sources,
                              const std::vector<Word> &images);

  int rank() const noexcept { return domain_.rank(); }
  const SubgroupGraph &domain() const noexcept { return domain_; }
  const SubgroupGraph &codomain() const noexcept { return codomain_; }
  const std::vector<Word> &images() const noexcept { return images_; }

  /// Throws PreconditionError when w is outside the domain.
  Word apply(const Word &w) const;

private:
  SubgroupGraph domain_;
  SubgroupGraph codomain_;
  std::vector<Word> images_;
};

ZComm compose(const ZComm &phi, const ZComm &psi); // phi after psi
ZComm invert(const ZComm &phi);
bool equivalent(const ZComm &phi, const ZComm &psi);
/// Throws PreconditionError unless h is a subgroup of the domain.
ZComm restriction(const ZComm &phi, const Lattice &h);
RationalMatrix to_matrix(const ZComm &phi);
ZComm from_matrix(const RationalMatrix &m);
inline ZComm inner(const IntVector &g) { return ZComm::identity(g.size()); }

FComm compose(const FComm &phi, const FComm &psi); // phi after psi
FComm invert(const FComm &phi);
bool equivalent(const FComm &phi, const FComm &psi);
FComm restriction(const FComm &phi, const SubgroupGraph &h);
inline FComm inner(const Word &g) { return FComm::inner(g); }

/// {x in domain : phi(x) in target}.
Lattice pullback(const ZComm &phi, const Lattice &target);
SubgroupGraph pullback(const FComm &phi, const SubgroupGraph &target);
/// phi(h) for h inside the domain.
Lattice push_forward(const ZComm &phi, const Lattice &h);
SubgroupGraph push_forward(const FComm &phi, const SubgroupGraph &h);

using Commensuration = std::variant<ZComm, FComm>;

/// "comm Z <n>" and n rows of rationals, or "comm F <k>", an optional
/// domain block (generator words, or "graph <m>" and k permutation lines),
/// then lines "word -> image" over a free basis of the domain.
Commensuration parse_commensuration(std::string_view text);
std::string to_text(const ZComm &phi);
std::string to_text(const FComm &phi);
std::string to_text(const Commensuration &phi);

/// Fixed list of F_2 commensurations with domains of index <= 4.
std::vector<FComm> f2_catalog();

} // namespace commsol
