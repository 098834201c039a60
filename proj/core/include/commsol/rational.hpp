#pragma once

// Exact dense matrices over Q, used for Z^n commensurations and lattice
// duality.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "commsol/freewords.hpp"

namespace commsol {

/// Square n x n matrix of canonicalized GMP rationals, row-major.
class RationalMatrix {
public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), entries_(n * n) {}
  RationalMatrix(std::size_t n, std::vector<mpq_class> row_major);

  static RationalMatrix identity(std::size_t n);
  /// Matrix whose columns are the given integer vectors.
  static RationalMatrix from_columns(const std::vector<IntVector> &columns);

  std::size_t dim() const noexcept { return n_; }
  const mpq_class &operator()(std::size_t r, std::size_t c) const {
    return entries_[r * n_ + c];
  }
  mpq_class &operator()(std::size_t r, std::size_t c) {
    return entries_[r * n_ + c];
  }

  mpq_class determinant() const;
  bool invertible() const { return determinant() != 0; }
  /// Throws PreconditionError when singular.
  RationalMatrix inverse() const;
  RationalMatrix transpose() const;
  /// Least common multiple of all entry denominators.
  mpz_class denominator_lcm() const;
  bool is_integral() const { return denominator_lcm() == 1; }

  /// M v; throws when the result is not integral.
  IntVector apply_integral(const IntVector &v) const;
  std::vector<mpq_class> apply(const std::vector<mpq_class> &v) const;
  /// Column c as an integer vector (must be integral).
  IntVector integral_column(std::size_t c) const;

  friend RationalMatrix operator*(const RationalMatrix &a,
                                  const RationalMatrix &b);
  friend RationalMatrix operator*(const mpq_class &s, const RationalMatrix &a);
  bool operator==(const RationalMatrix &other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }

private:
  std::size_t n_ = 0;
  std::vector<mpq_class> entries_;
};

mpq_class parse_rational(std::string_view token);
/// "p/q" always, including "2/1".
std::string to_fraction(const mpq_class &q);
/// One row per line, entries "p/q" separated by single spaces.
std::string to_string(const RationalMatrix &m);

} // namespace commsol
