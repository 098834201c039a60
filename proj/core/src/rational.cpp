#include "commsol/rational.hpp"

#include <utility>

#include "commsol/error.hpp"

namespace commsol {

RationalMatrix::RationalMatrix(std::size_t n, std::vector<mpq_class> row_major)
    : n_(n), entries_(std::move(row_major)) {
  if (entries_.size() != n * n) {
    throw MismatchError("matrix needs " + std::to_string(n * n) + " entries");
  }
  for (auto &q : entries_) {
    q.canonicalize();
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<IntVector> &columns) {
  const std::size_t n = columns.size();
  RationalMatrix m(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (columns[c].size() != n) {
      throw MismatchError("from_columns needs n vectors of length n");
    }
    for (std::size_t r = 0; r < n; ++r) {
      m(r, c) = columns[c][r];
    }
  }
  return m;
}

mpq_class RationalMatrix::determinant() const {
  RationalMatrix a = *this;
  mpq_class det = 1;
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t pivot = col;
    while (pivot < n_ && a(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == n_) {
      return 0;
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n_; ++c) {
        std::swap(a(pivot, c), a(col, c));
      }
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n_; ++r) {
      if (a(r, col) == 0) {
        continue;
      }
      mpq_class factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n_; ++c) {
        a(r, c) -= factor * a(col, c);
      }
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n_);
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t pivot = col;
    while (pivot < n_ && a(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == n_) {
      throw PreconditionError("matrix is singular");
    }
    for (std::size_t c = 0; c < n_; ++c) {
      std::swap(a(pivot, c), a(col, c));
      std::swap(inv(pivot, c), inv(col, c));
    }
    mpq_class scale = 1 / a(col, col);
    for (std::size_t c = 0; c < n_; ++c) {
      a(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == col || a(r, col) == 0) {
        continue;
      }
      mpq_class factor = a(r, col);
      for (std::size_t c = 0; c < n_; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      t(c, r) = (*this)(r, c);
    }
  }
  return t;
}

mpz_class RationalMatrix::denominator_lcm() const {
  mpz_class out = 1;
  for (const auto &q : entries_) {
    mpz_lcm(out.get_mpz_t(), out.get_mpz_t(), q.get_den_mpz_t());
  }
  return out;
}

IntVector RationalMatrix::apply_integral(const IntVector &v) const {
  if (v.size() != n_) {
    throw MismatchError("dimension mismatch in matrix application");
  }
  IntVector out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    mpq_class acc = 0;
    for (std::size_t c = 0; c < n_; ++c) {
      acc += (*this)(r, c) * v[c];
    }
    acc.canonicalize();
    if (acc.get_den() != 1) {
      throw PreconditionError("matrix image of " + to_string(v) +
                              " is not integral");
    }
    out[r] = acc.get_num();
  }
  return out;
}

std::vector<mpq_class> RationalMatrix::apply(const std::vector<mpq_class> &v) const {
  if (v.size() != n_) {
    throw MismatchError("dimension mismatch in matrix application");
  }
  std::vector<mpq_class> out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      out[r] += (*this)(r, c) * v[c];
    }
    out[r].canonicalize();
  }
  return out;
}

IntVector RationalMatrix::integral_column(std::size_t c) const {
  IntVector out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    const auto &q = (*this)(r, c);
    if (q.get_den() != 1) {
      throw PreconditionError("column is not integral");
    }
    out[r] = q.get_num();
  }
  return out;
}

RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b) {
  if (a.n_ != b.n_) {
    throw MismatchError("matrix dimension mismatch");
  }
  RationalMatrix out(a.n_);
  for (std::size_t r = 0; r < a.n_; ++r) {
    for (std::size_t k = 0; k < a.n_; ++k) {
      if (a(r, k) == 0) {
        continue;
      }
      for (std::size_t c = 0; c < a.n_; ++c) {
        out(r, c) += a(r, k) * b(k, c);
      }
    }
  }
  for (auto &q : out.entries_) {
    q.canonicalize();
  }
  return out;
}

RationalMatrix operator*(const mpq_class &s, const RationalMatrix &a) {
  RationalMatrix out = a;
  for (auto &q : out.entries_) {
    q *= s;
    q.canonicalize();
  }
  return out;
}

mpq_class parse_rational(std::string_view token) {
  mpq_class q;
  std::string text(token);
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw ParseError("not a rational: '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw ParseError("zero denominator in '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_fraction(const mpq_class &q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const RationalMatrix &m) {
  std::string out;
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (c != 0) {
        out += ' ';
      }
      out += to_fraction(m(r, c));
    }
    out += '\n';
  }
  return out;
}

} // namespace commsol
