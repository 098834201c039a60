#include "commsol/freewords.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

int letter_key(Letter l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }

// Letters in key order: a, A, b, B, ...
std::vector<Letter> ordered_letters(int rank) {
  std::vector<Letter> out;
  out.reserve(2 * static_cast<std::size_t>(rank));
  for (int i = 1; i <= rank; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

void check_rank(int rank) {
  if (rank < 1) {
    throw MismatchError("free group rank must be positive, got " +
                        std::to_string(rank));
  }
}

void require_same_rank(const Word &u, const Word &v) {
  if (u.rank() != v.rank()) {
    throw MismatchError("alphabet mismatch: F_" + std::to_string(u.rank()) +
                        " vs F_" + std::to_string(v.rank()));
  }
}

} // namespace

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 1 || rank > max_text_rank) {
    throw MismatchError("alphabet rank must be in 1..26, got " +
                        std::to_string(rank));
  }
}

char Alphabet::name(Letter l) const {
  if (!contains(l)) {
    throw MismatchError("letter outside alphabet");
  }
  return l > 0 ? static_cast<char>('a' + l - 1)
               : static_cast<char>('A' + (-l) - 1);
}

Letter Alphabet::letter(char c) const {
  Letter l = 0;
  if (c >= 'a' && c <= 'z') {
    l = c - 'a' + 1;
  } else if (c >= 'A' && c <= 'Z') {
    l = -(c - 'A' + 1);
  }
  if (l == 0 || !contains(l)) {
    throw ParseError(std::string("character '") + c +
                     "' is not a letter of F_" + std::to_string(rank_));
  }
  return l;
}

Word::Word(int rank, std::span<const Letter> letters) : rank_(rank) {
  check_rank(rank);
  letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0 || l > rank || -l > rank) {
      throw MismatchError("letter " + std::to_string(l) +
                          " outside F_" + std::to_string(rank));
    }
    if (!letters_.empty() && letters_.back() == -l) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::inverse() const {
  Word out(rank_);
  out.letters_.resize(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), out.letters_.begin(),
                 [](Letter l) { return -l; });
  return out;
}

Word Word::power(long exponent) const {
  if (exponent < 0) {
    return inverse().power(-exponent);
  }
  Word out(rank_);
  for (long i = 0; i < exponent; ++i) {
    out = concat(out, *this);
  }
  return out;
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  Word out(rank_);
  out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

std::strong_ordering shortlex(const Word &u, const Word &v) {
  if (auto c = u.size() <=> v.size(); c != 0) {
    return c;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (auto c = letter_key(u[i]) <=> letter_key(v[i]); c != 0) {
      return c;
    }
  }
  return std::strong_ordering::equal;
}

Word parse_word(std::string_view text, const Alphabet &alphabet) {
  // Surrounding whitespace is tolerated; "1" is the identity.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text == "1") {
    return Word(alphabet.rank());
  }
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    letters.push_back(alphabet.letter(c));
  }
  return Word(alphabet.rank(), letters);
}

std::string to_string(const Word &w) {
  Alphabet alphabet(w.rank());
  std::string out;
  out.reserve(w.size());
  for (Letter l : w.letters()) {
    out.push_back(alphabet.name(l));
  }
  return out;
}

std::string to_literal(const Word &w) {
  return w.empty() ? std::string("1") : to_string(w);
}

Word concat(const Word &u, const Word &v) {
  require_same_rank(u, v);
  std::size_t cancel = 0;
  while (cancel < u.size() && cancel < v.size() &&
         u[u.size() - 1 - cancel] == -v[cancel]) {
    ++cancel;
  }
  std::vector<Letter> letters(u.letters().begin(),
                              u.letters().end() - static_cast<std::ptrdiff_t>(cancel));
  letters.insert(letters.end(),
                 v.letters().begin() + static_cast<std::ptrdiff_t>(cancel),
                 v.letters().end());
  return Word(u.rank(), letters);
}

Word conjugate(const Word &g, const Word &x) {
  return concat(concat(g, x), g.inverse());
}

bool is_cyclically_reduced(const Word &w) {
  return w.size() < 2 || w.front() != -w.back();
}

CyclicDecomposition cyclic_decompose(const Word &w) {
  if (w.empty()) {
    throw PreconditionError("the identity has no cyclic decomposition");
  }
  std::size_t k = 0;
  // A reduced nonempty word cannot fully cancel against its own ends, so the
  // core keeps at least one letter.
  while (2 * k + 2 <= w.size() && w[k] == -w[w.size() - 1 - k]) {
    ++k;
  }
  return {w.subword(0, k), w.subword(k, w.size() - 2 * k)};
}

PrimitiveRoot primitive_root(const Word &w) {
  if (w.empty()) {
    throw PreconditionError("the identity has no primitive root");
  }
  auto [u, c] = cyclic_decompose(w);
  const std::size_t n = c.size();
  for (std::size_t period = 1; period <= n; ++period) {
    if (n % period != 0) {
      continue;
    }
    bool periodic = true;
    for (std::size_t i = period; i < n && periodic; ++i) {
      periodic = c[i] == c[i - period];
    }
    if (periodic) {
      Word root = concat(concat(u, c.subword(0, period)), u.inverse());
      return {root, static_cast<long>(n / period)};
    }
  }
  return {w, 1}; // unreachable: period n always matches
}

std::vector<Word> words_of_length(int rank, std::size_t length) {
  check_rank(rank);
  const auto letters = ordered_letters(rank);
  std::vector<Word> out;
  std::vector<Letter> current;
  current.reserve(length);
  auto extend = [&](auto &&self) -> void {
    if (current.size() == length) {
      out.emplace_back(rank, current);
      return;
    }
    for (Letter l : letters) {
      if (!current.empty() && current.back() == -l) {
        continue;
      }
      current.push_back(l);
      self(self);
      current.pop_back();
    }
  };
  extend(extend);
  return out;
}

std::vector<Word> ball(int rank, std::size_t radius) {
  std::vector<Word> out;
  for (std::size_t r = 0; r <= radius; ++r) {
    auto shell = words_of_length(rank, r);
    out.insert(out.end(), std::make_move_iterator(shell.begin()),
               std::make_move_iterator(shell.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------

IntVector parse_int_vector(std::string_view text, std::size_t n) {
  std::string buffer(text);
  std::replace(buffer.begin(), buffer.end(), ',', ' ');
  std::replace(buffer.begin(), buffer.end(), '(', ' ');
  std::replace(buffer.begin(), buffer.end(), ')', ' ');
  std::istringstream in(buffer);
  IntVector out;
  std::string token;
  while (in >> token) {
    mpz_class value;
    if (value.set_str(token, 10) != 0) {
      throw ParseError("not an integer: '" + token + "'");
    }
    out.push_back(value);
  }
  if (out.size() != n) {
    throw ParseError("expected " + std::to_string(n) + " integers, got " +
                     std::to_string(out.size()));
  }
  return out;
}

std::string to_string(const IntVector &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += v[i].get_str();
  }
  return out;
}

IntVector add(const IntVector &u, const IntVector &v) {
  if (u.size() != v.size()) {
    throw MismatchError("dimension mismatch");
  }
  IntVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u[i] + v[i];
  }
  return out;
}

IntVector sub(const IntVector &u, const IntVector &v) {
  if (u.size() != v.size()) {
    throw MismatchError("dimension mismatch");
  }
  IntVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u[i] - v[i];
  }
  return out;
}

IntVector negate(const IntVector &v) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = -v[i];
  }
  return out;
}

mpz_class l1_norm(const IntVector &v) {
  mpz_class total = 0;
  for (const auto &x : v) {
    total += abs(x);
  }
  return total;
}

std::vector<IntVector> l1_ball(std::size_t n, long radius) {
  std::vector<IntVector> out;
  std::vector<long> current(n, 0);
  auto fill = [&](auto &&self, std::size_t pos, long budget) -> void {
    if (pos == n) {
      IntVector v(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = current[i];
      }
      out.push_back(std::move(v));
      return;
    }
    for (long x = -budget; x <= budget; ++x) {
      current[pos] = x;
      self(self, pos + 1, budget - (x < 0 ? -x : x));
    }
  };
  fill(fill, 0, radius);
  return out;
}

} // namespace commsol
