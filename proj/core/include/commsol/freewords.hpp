#pragma once

// Free group words and integer vectors.
//
// Letters are stored as signed integers: +i is the i-th free generator
// (1-based), -i its inverse. In text the i-th generator is the i-th lowercase
// ASCII letter and its inverse the matching uppercase letter; the identity is
// written as the empty string or "1".

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace commsol {

using Letter = int;

/// Rank of a free group together with its letter naming.
class Alphabet {
public:
  explicit Alphabet(int rank);

  int rank() const noexcept { return rank_; }
  bool contains(Letter l) const noexcept {
    return l != 0 && l <= rank_ && -l <= rank_;
  }
  char name(Letter l) const;
  Letter letter(char c) const;

  /// Ranks above 26 are legal internally (subgroup bases), but have no text
  /// form.
  static constexpr int max_text_rank = 26;

private:
  int rank_;
};

/// A freely reduced word in F_k. Immutable once constructed.
class Word {
public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) {}
  /// Freely reduces `letters`.
  Word(int rank, std::span<const Letter> letters);
  Word(int rank, std::initializer_list<Letter> letters)
      : Word(rank, std::span<const Letter>(letters.begin(), letters.size())) {}

  static Word generator(int rank, Letter l) { return Word(rank, {l}); }

  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  const std::vector<Letter> &letters() const noexcept { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word power(long exponent) const;
  /// Letters [pos, pos+len) as a word (reduced, since a subword of a reduced
  /// word is reduced).
  Word subword(std::size_t pos, std::size_t len) const;

  bool operator==(const Word &other) const = default;

private:
  int rank_ = 0;
  std::vector<Letter> letters_;
};

/// Shortlex order with letters ranked a < A < b < B < ...
std::strong_ordering shortlex(const Word &u, const Word &v);
struct ShortlexLess {
  bool operator()(const Word &u, const Word &v) const {
    return shortlex(u, v) < 0;
  }
};

Word parse_word(std::string_view text, const Alphabet &alphabet);
inline Word parse_word(std::string_view text, int rank) {
  return parse_word(text, Alphabet(rank));
}
/// Letters only; the identity prints as the empty string.
std::string to_string(const Word &w);
/// File form: identity prints as "1".
std::string to_literal(const Word &w);

Word concat(const Word &u, const Word &v);
inline Word operator*(const Word &u, const Word &v) { return concat(u, v); }
inline Word invert(const Word &u) { return u.inverse(); }
Word conjugate(const Word &g, const Word &x); // g x g^-1

bool is_cyclically_reduced(const Word &w);

struct CyclicDecomposition {
  Word conjugator;        // u
  Word cyclic_core;       // c
};
/// w = u c u^-1 with c cyclically reduced and u maximal.
CyclicDecomposition cyclic_decompose(const Word &w);

struct PrimitiveRoot {
  Word root;
  long exponent;
};
/// w = r^m with m maximal.
PrimitiveRoot primitive_root(const Word &w);

/// All reduced words of length exactly `length`, in shortlex order.
std::vector<Word> words_of_length(int rank, std::size_t length);
/// All reduced words of length <= radius, in shortlex order.
std::vector<Word> ball(int rank, std::size_t radius);

// ---------------------------------------------------------------------------
// Z^n elements

using IntVector = std::vector<mpz_class>;

IntVector parse_int_vector(std::string_view text, std::size_t n);
std::string to_string(const IntVector &v);
IntVector add(const IntVector &u, const IntVector &v);
IntVector sub(const IntVector &u, const IntVector &v);
IntVector negate(const IntVector &v);
mpz_class l1_norm(const IntVector &v);
/// All integer vectors of l1 norm <= radius, sorted lexicographically.
std::vector<IntVector> l1_ball(std::size_t n, long radius);

} // namespace commsol
