#pragma once

// Finite-index subgroups of Z^n stored as lower-triangular column Hermite
// normal form: column j is zero above row j, B(j,j) > 0, and for i > j the
// entry B(i,j) lies in [0, B(i,i)). Equal subgroups have identical matrices.

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "commsol/freewords.hpp"
#include "commsol/rational.hpp"

namespace commsol {

class Lattice {
public:
  /// Canonical HNF of the subgroup generated by `generators`.
  /// Throws InfiniteIndexError when they do not span a full-rank subgroup.
  static Lattice from_generators(std::size_t n,
                                 const std::vector<IntVector> &generators);
  static Lattice whole(std::size_t n);
  /// m * Z^n.
  static Lattice scaled(std::size_t n, const mpz_class &m);

  std::size_t dim() const noexcept { return n_; }
  const mpz_class &entry(std::size_t r, std::size_t c) const {
    return basis_[r * n_ + c];
  }
  IntVector column(std::size_t c) const;
  /// The HNF columns; a free basis of the subgroup.
  std::vector<IntVector> columns() const;
  mpz_class index() const;
  bool contains(const IntVector &v) const;
  /// Canonical representative of v + L: entry i reduced into [0, B(i,i)).
  IntVector reduce(const IntVector &v) const;
  /// Coordinates of v in the HNF basis; throws when v is not in L.
  IntVector coordinates(const IntVector &v) const;

  RationalMatrix basis_matrix() const;

  bool operator==(const Lattice &other) const = default;
  /// Canonical sort: by index, then row-major entries.
  std::strong_ordering operator<=>(const Lattice &other) const;

private:
  Lattice(std::size_t n, std::vector<mpz_class> basis)
      : n_(n), basis_(std::move(basis)) {}

  std::size_t n_ = 0;
  std::vector<mpz_class> basis_; // row-major n x n
};

mpz_class index(const Lattice &lattice);
bool contains(const Lattice &lattice, const IntVector &v);
Lattice intersect(const Lattice &a, const Lattice &b);
/// a <= b as subgroups: every column of a lies in b.
bool is_subgroup(const Lattice &a, const Lattice &b);

/// M * L, which must be integral.
Lattice image(const RationalMatrix &m, const Lattice &lattice);
/// {x in Z^n : M x in L}.
Lattice preimage(const RationalMatrix &m, const Lattice &lattice);

/// Every subgroup of Z^n with index <= max_index, canonically sorted.
std::vector<Lattice> enumerate_lattices(std::size_t n, long max_index);
/// Intersection of all subgroups of index <= max_index.
Lattice profinite_kernel(std::size_t n, long max_index);

/// "Z <n>" followed by generator vectors, one per line.
Lattice parse_lattice(std::string_view text);
std::string to_text(const Lattice &lattice);

} // namespace commsol
