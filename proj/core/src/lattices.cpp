#include "commsol/lattices.hpp"

#include <algorithm>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

mpz_class floor_div(const mpz_class &a, const mpz_class &b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void axpy(IntVector &y, const mpz_class &a, const IntVector &x) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += a * x[i];
  }
}

} // namespace

Lattice Lattice::from_generators(std::size_t n,
                                 const std::vector<IntVector> &generators) {
  if (n == 0) {
    throw MismatchError("lattice dimension must be positive");
  }
  std::vector<IntVector> pool;
  for (const auto &g : generators) {
    if (g.size() != n) {
      throw MismatchError("generator " + to_string(g) + " is not in Z^" +
                          std::to_string(n));
    }
    pool.push_back(g);
  }
  std::vector<IntVector> cols;
  cols.reserve(n);
  for (std::size_t row = 0; row < n; ++row) {
    // Euclid on the entries of this row until one generator is left.
    while (true) {
      std::size_t best = pool.size();
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i][row] == 0) {
          continue;
        }
        ++nonzero;
        if (best == pool.size() || abs(pool[i][row]) < abs(pool[best][row])) {
          best = i;
        }
      }
      if (nonzero == 0) {
        throw InfiniteIndexError("generators span a subgroup of infinite index in Z^" +
                                 std::to_string(n));
      }
      if (nonzero == 1) {
        IntVector pivot = pool[best];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        if (pivot[row] < 0) {
          pivot = negate(pivot);
        }
        cols.push_back(std::move(pivot));
        break;
      }
      const IntVector &p = pool[best];
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i == best || pool[i][row] == 0) {
          continue;
        }
        mpz_class q = floor_div(pool[i][row], p[row]);
        axpy(pool[i], -q, p);
      }
    }
    // Drop generators that became zero.
    std::erase_if(pool, [](const IntVector &v) {
      return std::all_of(v.begin(), v.end(), [](const mpz_class &x) { return x == 0; });
    });
  }
  // Reduce entries below the diagonal modulo the diagonal of their row.
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      mpz_class q = floor_div(cols[j][i], cols[i][i]);
      if (q != 0) {
        axpy(cols[j], -q, cols[i]);
      }
    }
  }
  std::vector<mpz_class> basis(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      basis[r * n + c] = cols[c][r];
    }
  }
  return Lattice(n, std::move(basis));
}

Lattice Lattice::whole(std::size_t n) { return scaled(n, 1); }

Lattice Lattice::scaled(std::size_t n, const mpz_class &m) {
  if (m == 0) {
    throw InfiniteIndexError("0 * Z^n has infinite index");
  }
  std::vector<mpz_class> basis(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    basis[i * n + i] = abs(m);
  }
  return Lattice(n, std::move(basis));
}

IntVector Lattice::column(std::size_t c) const {
  IntVector out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    out[r] = entry(r, c);
  }
  return out;
}

std::vector<IntVector> Lattice::columns() const {
  std::vector<IntVector> out;
  out.reserve(n_);
  for (std::size_t c = 0; c < n_; ++c) {
    out.push_back(column(c));
  }
  return out;
}

mpz_class Lattice::index() const {
  mpz_class det = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    det *= entry(i, i);
  }
  return det;
}

IntVector Lattice::coordinates(const IntVector &v) const {
  if (v.size() != n_) {
    throw MismatchError("vector dimension " + std::to_string(v.size()) +
                        " does not match Z^" + std::to_string(n_));
  }
  IntVector rest = v;
  IntVector coords(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!mpz_divisible_p(rest[i].get_mpz_t(), entry(i, i).get_mpz_t())) {
      throw PreconditionError(to_string(v) + " is not in the lattice");
    }
    coords[i] = rest[i] / entry(i, i);
    axpy(rest, -coords[i], column(i));
  }
  return coords;
}

bool Lattice::contains(const IntVector &v) const {
  if (v.size() != n_) {
    throw MismatchError("vector dimension " + std::to_string(v.size()) +
                        " does not match Z^" + std::to_string(n_));
  }
  IntVector rest = v;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!mpz_divisible_p(rest[i].get_mpz_t(), entry(i, i).get_mpz_t())) {
      return false;
    }
    axpy(rest, -(rest[i] / entry(i, i)), column(i));
  }
  return true;
}

IntVector Lattice::reduce(const IntVector &v) const {
  if (v.size() != n_) {
    throw MismatchError("dimension mismatch in reduce");
  }
  IntVector rest = v;
  for (std::size_t i = 0; i < n_; ++i) {
    mpz_class q = floor_div(rest[i], entry(i, i));
    if (q != 0) {
      axpy(rest, -q, column(i));
    }
  }
  return rest;
}

RationalMatrix Lattice::basis_matrix() const {
  return RationalMatrix::from_columns(columns());
}

std::strong_ordering Lattice::operator<=>(const Lattice &other) const {
  if (auto c = n_ <=> other.n_; c != 0) {
    return c;
  }
  if (auto c = cmp(index(), other.index()); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (auto c = cmp(basis_[i], other.basis_[i]); c != 0) {
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

mpz_class index(const Lattice &lattice) { return lattice.index(); }

bool contains(const Lattice &lattice, const IntVector &v) {
  return lattice.contains(v);
}

Lattice intersect(const Lattice &a, const Lattice &b) {
  if (a.dim() != b.dim()) {
    throw MismatchError("cannot intersect lattices of different dimension");
  }
  const std::size_t n = a.dim();
  // L1 ∩ L2 = (L1* + L2*)*, with duals scaled by D to stay integral.
  mpz_class d;
  mpz_lcm(d.get_mpz_t(), a.index().get_mpz_t(), b.index().get_mpz_t());
  const mpq_class dq(d);
  std::vector<IntVector> dual_gens;
  for (const Lattice *l : {&a, &b}) {
    RationalMatrix dual = dq * l->basis_matrix().inverse().transpose();
    for (std::size_t c = 0; c < n; ++c) {
      dual_gens.push_back(dual.integral_column(c));
    }
  }
  Lattice sum = Lattice::from_generators(n, dual_gens);
  RationalMatrix back = dq * sum.basis_matrix().inverse().transpose();
  std::vector<IntVector> gens;
  for (std::size_t c = 0; c < n; ++c) {
    gens.push_back(back.integral_column(c));
  }
  return Lattice::from_generators(n, gens);
}

bool is_subgroup(const Lattice &a, const Lattice &b) {
  if (a.dim() != b.dim()) {
    throw MismatchError("dimension mismatch in is_subgroup");
  }
  for (std::size_t c = 0; c < a.dim(); ++c) {
    if (!b.contains(a.column(c))) {
      return false;
    }
  }
  return true;
}

Lattice image(const RationalMatrix &m, const Lattice &lattice) {
  if (m.dim() != lattice.dim()) {
    throw MismatchError("dimension mismatch in lattice image");
  }
  std::vector<IntVector> gens;
  for (const auto &col : lattice.columns()) {
    gens.push_back(m.apply_integral(col));
  }
  return Lattice::from_generators(lattice.dim(), gens);
}

Lattice preimage(const RationalMatrix &m, const Lattice &lattice) {
  if (m.dim() != lattice.dim()) {
    throw MismatchError("dimension mismatch in lattice preimage");
  }
  const std::size_t n = lattice.dim();
  RationalMatrix pre = m.inverse() * lattice.basis_matrix();
  const mpz_class c = pre.denominator_lcm();
  RationalMatrix scaled = mpq_class(c) * pre;
  std::vector<IntVector> gens;
  for (std::size_t j = 0; j < n; ++j) {
    gens.push_back(scaled.integral_column(j));
  }
  Lattice meet = intersect(Lattice::from_generators(n, gens), Lattice::scaled(n, c));
  std::vector<IntVector> out;
  for (auto col : meet.columns()) {
    for (auto &x : col) {
      x /= c;
    }
    out.push_back(std::move(col));
  }
  return Lattice::from_generators(n, out);
}

std::vector<Lattice> enumerate_lattices(std::size_t n, long max_index) {
  if (n == 0 || max_index < 1) {
    throw PreconditionError("enumerate_lattices needs n >= 1 and N >= 1");
  }
  const std::size_t cap = work_cap();
  std::vector<Lattice> out;
  std::vector<long> diag(n, 1);
  // Choose the diagonal, then every admissible sub-diagonal filling.
  auto fill_diag = [&](auto &&self, std::size_t pos, long product) -> void {
    if (pos == n) {
      std::vector<IntVector> cols(n, IntVector(n, 0));
      auto fill_entries = [&](auto &&inner, std::size_t r, std::size_t c) -> void {
        if (r == n) {
          if (out.size() >= cap) {
            throw ResourceLimitError("lattice enumeration exceeds work cap of " +
                                     std::to_string(cap));
          }
          out.push_back(Lattice::from_generators(n, cols));
          return;
        }
        if (c == r) {
          cols[r][r] = diag[r];
          inner(inner, r + 1, 0);
          return;
        }
        for (long x = 0; x < diag[r]; ++x) {
          cols[c][r] = x;
          inner(inner, r, c + 1);
        }
        cols[c][r] = 0;
      };
      fill_entries(fill_entries, 0, 0);
      return;
    }
    for (long d = 1; product * d <= max_index; ++d) {
      diag[pos] = d;
      self(self, pos + 1, product * d);
    }
  };
  fill_diag(fill_diag, 0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

Lattice profinite_kernel(std::size_t n, long max_index) {
  Lattice kernel = Lattice::whole(n);
  for (const auto &l : enumerate_lattices(n, max_index)) {
    kernel = intersect(kernel, l);
  }
  return kernel;
}

Lattice parse_lattice(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool header = false;
  std::vector<IntVector> gens;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    if (!header) {
      std::istringstream h(line);
      std::string tag;
      long dim = 0;
      if (!(h >> tag >> dim) || tag != "Z" || dim < 1) {
        throw ParseError("lattice text must start with 'Z <n>'");
      }
      std::string extra;
      if (h >> extra) {
        throw ParseError("unexpected text after lattice header: '" + extra + "'");
      }
      n = static_cast<std::size_t>(dim);
      header = true;
      continue;
    }
    gens.push_back(parse_int_vector(line, n));
  }
  if (!header) {
    throw ParseError("empty lattice text");
  }
  return Lattice::from_generators(n, gens);
}

std::string to_text(const Lattice &lattice) {
  std::string out = "Z " + std::to_string(lattice.dim()) + "\n";
  for (std::size_t c = 0; c < lattice.dim(); ++c) {
    for (std::size_t r = 0; r < lattice.dim(); ++r) {
      if (r != 0) {
        out += ' ';
      }
      out += lattice.entry(r, c).get_str();
    }
    out += '\n';
  }
  return out;
}

} // namespace commsol
