#include "commsol/commensurations.hpp"

#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

Lattice checked_image(const RationalMatrix &m, const Lattice &h) {
  if (m.dim() != h.dim()) {
    throw MismatchError("matrix is " + std::to_string(m.dim()) + "x" +
                        std::to_string(m.dim()) + " but the domain lives in Z^" +
                        std::to_string(h.dim()));
  }
  if (!m.invertible()) {
    throw PreconditionError("singular matrix does not define a commensuration");
  }
  const RationalMatrix hm = m * h.basis_matrix();
  if (!hm.is_integral()) {
    throw PreconditionError("matrix does not map the domain into Z^n");
  }
  std::vector<IntVector> cols;
  for (std::size_t c = 0; c < hm.dim(); ++c) {
    cols.push_back(hm.integral_column(c));
  }
  return Lattice::from_generators(h.dim(), cols);
}

void require_same_rank(int a, int b) {
  if (a != b) {
    throw MismatchError("commensurations of F_" + std::to_string(a) + " and F_" +
                        std::to_string(b) + " cannot be combined");
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw MismatchError("commensurations of Z^" + std::to_string(a) + " and Z^" +
                        std::to_string(b) + " cannot be combined");
  }
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

ZComm::ZComm(Lattice domain, RationalMatrix matrix)
    : domain_(domain), codomain_(checked_image(matrix, domain)),
      matrix_(std::move(matrix)) {}

ZComm ZComm::identity(std::size_t n) {
  return ZComm(Lattice::whole(n), RationalMatrix::identity(n));
}

ZComm ZComm::from_matrix(const RationalMatrix &m) {
  if (!m.invertible()) {
    throw PreconditionError("singular matrix does not define a commensuration");
  }
  return ZComm(preimage(m, Lattice::whole(m.dim())), m);
}

IntVector ZComm::apply(const IntVector &v) const {
  if (!domain_.contains(v)) {
    throw PreconditionError("(" + to_string(v) + ") is outside the domain");
  }
  return matrix_.apply_integral(v);
}

ZComm compose(const ZComm &phi, const ZComm &psi) {
  require_same_dim(phi.dim(), psi.dim());
  return ZComm(pullback(psi, phi.domain()), phi.matrix() * psi.matrix());
}

ZComm invert(const ZComm &phi) {
  return ZComm(phi.codomain(), phi.matrix().inverse());
}

bool equivalent(const ZComm &phi, const ZComm &psi) {
  require_same_dim(phi.dim(), psi.dim());
  const Lattice common = intersect(phi.domain(), psi.domain());
  for (const IntVector &b : common.columns()) {
    if (phi.apply(b) != psi.apply(b)) {
      return false;
    }
  }
  return true;
}

ZComm restriction(const ZComm &phi, const Lattice &h) {
  if (!is_subgroup(h, phi.domain())) {
    throw PreconditionError("restriction target is not inside the domain");
  }
  return ZComm(h, phi.matrix());
}

RationalMatrix to_matrix(const ZComm &phi) { return phi.matrix(); }

ZComm from_matrix(const RationalMatrix &m) { return ZComm::from_matrix(m); }

Lattice pullback(const ZComm &phi, const Lattice &target) {
  require_same_dim(phi.dim(), target.dim());
  return preimage(phi.matrix(), intersect(phi.codomain(), target));
}

Lattice push_forward(const ZComm &phi, const Lattice &h) {
  if (!is_subgroup(h, phi.domain())) {
    throw PreconditionError("subgroup is not inside the domain");
  }
  return image(phi.matrix(), h);
}

FComm::FComm(SubgroupGraph domain, std::vector<Word> images)
    : domain_(std::move(domain)), codomain_(domain_.rank()),
      images_(std::move(images)) {
  require_finite_index(domain_);
  if (images_.size() != domain_.basis().size()) {
    throw PreconditionError("domain basis has " +
                            std::to_string(domain_.basis().size()) +
                            " elements but " + std::to_string(images_.size()) +
                            " images were given");
  }
  for (const Word &w : images_) {
    require_same_rank(w.rank(), rank());
  }
  codomain_ = from_generators(images_, rank());
  if (!codomain_.complete()) {
    throw PreconditionError("images generate an infinite-index subgroup");
  }
  const std::size_t k = static_cast<std::size_t>(rank());
  if (1 + codomain_.index() * (k - 1) != images_.size()) {
    throw PreconditionError("images do not form a free basis of their span");
  }
}

FComm FComm::identity(int rank) {
  const SubgroupGraph whole = SubgroupGraph::whole(rank);
  std::vector<Word> images = whole.basis();
  return FComm(whole, images);
}

FComm FComm::inner(const Word &g) {
  std::vector<Word> images;
  for (int i = 1; i <= g.rank(); ++i) {
    images.push_back(conjugate(g, Word::generator(g.rank(), i)));
  }
  return automorphism(images);
}

FComm FComm::automorphism(const std::vector<Word> &generator_images) {
  if (generator_images.empty()) {
    throw PreconditionError("no generator images");
  }
  const int k = generator_images.front().rank();
  if (generator_images.size() != static_cast<std::size_t>(k)) {
    throw PreconditionError("expected " + std::to_string(k) + " generator images");
  }
  FComm f(SubgroupGraph::whole(k), generator_images);
  if (f.codomain().index() != 1) {
    throw PreconditionError("generator images do not generate F_" + std::to_string(k));
  }
  return f;
}

FComm FComm::from_basis_map(const std::vector<Word> &sources,
                            const std::vector<Word> &images) {
  if (sources.empty() || sources.size() != images.size()) {
    throw PreconditionError("basis map needs one image per source word");
  }
  const int k = sources.front().rank();
  const GeneratorExpression ex(sources, k);
  if (!ex.free_basis()) {
    throw PreconditionError("source words are not a free basis of their span");
  }
  const SubgroupGraph &h = require_finite_index(ex.graph());
  std::vector<Word> out;
  for (const Word &b : h.basis()) {
    out.push_back(substitute(*ex.express(b), images, k));
  }
  return FComm(h, out);
}

Word FComm::apply(const Word &w) const {
  require_same_rank(w.rank(), rank());
  if (!domain_.contains(w)) {
    throw PreconditionError(to_literal(w) + " is outside the domain");
  }
  return substitute(domain_.basis_coordinates(w), images_, rank());
}

FComm invert(const FComm &phi) {
  const GeneratorExpression ex(phi.images(), phi.rank());
  std::vector<Word> out;
  for (const Word &b : phi.codomain().basis()) {
    out.push_back(substitute(*ex.express(b), phi.domain().basis(), phi.rank()));
  }
  return FComm(phi.codomain(), out);
}

SubgroupGraph pullback(const FComm &phi, const SubgroupGraph &target) {
  require_same_rank(phi.rank(), target.rank());
  const SubgroupGraph common = intersect(phi.codomain(), target);
  const GeneratorExpression ex(phi.images(), phi.rank());
  std::vector<Word> gens;
  for (const Word &b : common.basis()) {
    gens.push_back(substitute(*ex.express(b), phi.domain().basis(), phi.rank()));
  }
  return from_generators(gens, phi.rank());
}

SubgroupGraph push_forward(const FComm &phi, const SubgroupGraph &h) {
  if (!is_subgroup(h, phi.domain())) {
    throw PreconditionError("subgroup is not inside the domain");
  }
  std::vector<Word> gens;
  for (const Word &b : h.basis()) {
    gens.push_back(phi.apply(b));
  }
  return from_generators(gens, phi.rank());
}

FComm compose(const FComm &phi, const FComm &psi) {
  require_same_rank(phi.rank(), psi.rank());
  const SubgroupGraph d = pullback(psi, phi.domain());
  std::vector<Word> out;
  for (const Word &b : d.basis()) {
    out.push_back(phi.apply(psi.apply(b)));
  }
  return FComm(d, out);
}

bool equivalent(const FComm &phi, const FComm &psi) {
  require_same_rank(phi.rank(), psi.rank());
  const SubgroupGraph common = intersect(phi.domain(), psi.domain());
  for (const Word &b : common.basis()) {
    if (phi.apply(b) != psi.apply(b)) {
      return false;
    }
  }
  return true;
}

FComm restriction(const FComm &phi, const SubgroupGraph &h) {
  require_finite_index(h);
  if (!is_subgroup(h, phi.domain())) {
    throw PreconditionError("restriction target is not inside the domain");
  }
  std::vector<Word> out;
  for (const Word &b : h.basis()) {
    out.push_back(phi.apply(b));
  }
  return FComm(h, out);
}

Commensuration parse_commensuration(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw ParseError("empty commensuration text");
  }
  std::istringstream header(lines[0]);
  std::string tag, group;
  long size = 0;
  std::string extra;
  if (!(header >> tag >> group >> size) || tag != "comm" || (group != "Z" && group != "F") ||
      (header >> extra)) {
    throw ParseError("commensuration text must start with 'comm Z <n>' or 'comm F <k>'");
  }
  if (size <= 0) {
    throw ParseError("group size must be positive");
  }
  if (group == "Z") {
    const auto n = static_cast<std::size_t>(size);
    if (lines.size() != n + 1) {
      throw ParseError("expected " + std::to_string(n) + " matrix rows");
    }
    RationalMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::istringstream row(lines[r + 1]);
      std::string token;
      std::size_t c = 0;
      while (row >> token) {
        if (c == n) {
          throw ParseError("row " + std::to_string(r + 1) + " has too many entries");
        }
        m(r, c++) = parse_rational(token);
      }
      if (c != n) {
        throw ParseError("row " + std::to_string(r + 1) + " has too few entries");
      }
    }
    return ZComm::from_matrix(m);
  }

  const int k = static_cast<int>(size);
  Alphabet alphabet(k);
  std::vector<std::string> block;
  std::vector<Word> sources, images;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto arrow = lines[i].find("->");
    if (arrow == std::string::npos) {
      if (!sources.empty()) {
        throw ParseError("domain lines must precede the '->' lines");
      }
      block.push_back(lines[i]);
      continue;
    }
    sources.push_back(parse_word(trim(lines[i].substr(0, arrow)), alphabet));
    images.push_back(parse_word(trim(lines[i].substr(arrow + 2)), alphabet));
  }
  if (sources.empty()) {
    throw ParseError("no 'word -> image' lines");
  }
  FComm f = FComm::from_basis_map(sources, images);
  if (!block.empty()) {
    std::string sub = "F " + std::to_string(k);
    std::size_t first = 0;
    if (block[0].rfind("graph", 0) == 0) {
      sub += " " + block[0];
      first = 1;
    }
    sub += "\n";
    for (std::size_t i = first; i < block.size(); ++i) {
      sub += block[i] + "\n";
    }
    if (parse_subgroup(sub) != f.domain()) {
      throw PreconditionError("the mapped words do not generate the declared domain");
    }
  }
  return f;
}

std::string to_text(const ZComm &phi) {
  return "comm Z " + std::to_string(phi.dim()) + "\n" + to_string(phi.matrix());
}

std::string to_text(const FComm &phi) {
  std::string out = "comm F " + std::to_string(phi.rank()) + "\n";
  const std::string graph = to_text(phi.domain());
  out += graph.substr(graph.find("graph"));
  for (std::size_t i = 0; i < phi.images().size(); ++i) {
    out += to_literal(phi.domain().basis()[i]) + " -> " + to_literal(phi.images()[i]) + "\n";
  }
  return out;
}

std::string to_text(const Commensuration &phi) {
  return std::visit([](const auto &f) { return to_text(f); }, phi);
}

std::vector<FComm> f2_catalog() {
  auto w = [](const char *s) { return parse_word(s, 2); };
  const SubgroupGraph ka = from_generators({w("aa"), w("b"), w("abA")}, 2);
  const SubgroupGraph k4 = profinite_kernel(2, 2);
  const FComm swap = FComm::automorphism({w("b"), w("a")});
  const FComm transvection = FComm::automorphism({w("ab"), w("b")});
  const FComm flip = FComm::automorphism({w("A"), w("b")});
  const FComm across2 = FComm::from_basis_map({w("aa"), w("b"), w("abA")},
                                              {w("a"), w("bb"), w("baB")});
  const FComm across3 = FComm::from_basis_map(
      {w("aaa"), w("b"), w("abA"), w("aabAA")},
      {w("a"), w("bbb"), w("baB"), w("bbaBB")});
  return {
      FComm::identity(2),
      swap,
      FComm::inner(w("a")),
      FComm::inner(w("b")),
      FComm::inner(w("ab")),
      transvection,
      flip,
      restriction(transvection, ka),
      restriction(swap, k4),
      across2,
      across3,
      invert(across2),
      invert(transvection),
      restriction(FComm::inner(w("a")), from_generators({w("aaa"), w("b"), w("abA"), w("aabAA")}, 2)),
  };
}

} // namespace commsol
