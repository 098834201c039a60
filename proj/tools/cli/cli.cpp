#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "commsol/error.hpp"
#include "commsol/geometry.hpp"

namespace commsol::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  long depth = 2;
  long radius = 4;
  long max_index = 3;
  std::string format = "text";
  bool repelling = false;
  std::vector<std::string> args;

  bool lines() const { return format == "lines"; }
};

void want(const Options &o, std::size_t lo, std::size_t hi, const std::string &shape) {
  if (o.args.size() < lo || o.args.size() > hi) {
    throw UsageError("expected arguments: " + shape);
  }
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split_top(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int nesting = 0;
  for (char ch : s) {
    if (ch == sep && nesting == 0) {
      out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    nesting += (ch == '(') - (ch == ')');
    cur += ch;
  }
  if (!trim(cur).empty()) {
    out.push_back(trim(cur));
  }
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_file(const std::string &s) {
  std::error_code ec;
  return std::filesystem::is_regular_file(s, ec);
}

struct GroupArg {
  bool free = true;
  int size = 0;
};

GroupArg group_arg(const std::string &g, const std::string &n) {
  if (g != "F" && g != "Z") {
    throw UsageError("group must be F or Z, got '" + g + "'");
  }
  int size = 0;
  try {
    size = std::stoi(n);
  } catch (const std::exception &) {
    throw UsageError("group size must be an integer, got '" + n + "'");
  }
  if (size <= 0) {
    throw UsageError("group size must be positive");
  }
  return GroupArg{g == "F", size};
}

Word word_arg(const std::string &s, int rank) { return parse_word(s, rank); }

IntVector vector_arg(const std::string &s, int n) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
    t = t.substr(1, t.size() - 2);
  }
  return parse_int_vector(t, static_cast<std::size_t>(n));
}

std::string strip_angles(const std::string &s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '<' && t.back() == '>') {
    t = t.substr(1, t.size() - 2);
  }
  return t;
}

SubgroupGraph free_subgroup_arg(const std::string &s, int rank) {
  if (is_file(s)) {
    return parse_subgroup(read_file(s));
  }
  std::vector<Word> gens;
  for (const auto &tok : split_top(strip_angles(s), ',')) {
    gens.push_back(word_arg(tok, rank));
  }
  return from_generators(gens, rank);
}

Lattice lattice_arg(const std::string &s, int n) {
  if (is_file(s)) {
    return parse_lattice(read_file(s));
  }
  std::vector<IntVector> gens;
  for (const auto &tok : split_top(strip_angles(s), ',')) {
    gens.push_back(vector_arg(tok, n));
  }
  return Lattice::from_generators(static_cast<std::size_t>(n), gens);
}

/// A file, "catalog:<i>", or inline text with ';' for newlines.
Commensuration comm_arg(const std::string &s) {
  if (s.rfind("catalog:", 0) == 0) {
    const auto cat = f2_catalog();
    std::size_t i = 0;
    try {
      i = std::stoul(s.substr(8));
    } catch (const std::exception &) {
      throw UsageError("catalog index must be a number");
    }
    if (i >= cat.size()) {
      throw Error("catalog has " + std::to_string(cat.size()) + " entries");
    }
    return cat[i];
  }
  if (s.rfind("comm ", 0) == 0) {
    std::string text = s;
    std::replace(text.begin(), text.end(), ';', '\n');
    return parse_commensuration(text);
  }
  return parse_commensuration(read_file(s));
}

template <class T> const T &as(const Commensuration &c, const char *verb) {
  if (!std::holds_alternative<T>(c)) {
    throw MismatchError(std::string(verb) + ": the commensurations live in different groups");
  }
  return std::get<T>(c);
}

std::string decimal(const mpq_class &q) {
  std::ostringstream s;
  s << std::setprecision(12) << q.get_d();
  return s.str();
}

// ---------------------------------------------------------------------------

template <class G> std::string subgroup_text(const typename G::Subgroup &h) {
  return G::inline_text(h);
}

int v_parse(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm>");
  out << to_text(comm_arg(o.args[0]));
  return 0;
}

int v_index(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F|Z <n> <subgroup>");
  const auto g = group_arg(o.args[0], o.args[1]);
  const mpz_class m = g.free ? mpz_class(static_cast<unsigned long>(index(free_subgroup_arg(o.args[2], g.size))))
                             : lattice_arg(o.args[2], g.size).index();
  out << (o.lines() ? "" : "index ") << m.get_str() << "\n";
  return 0;
}

int v_intersect(const Options &o, std::ostream &out) {
  want(o, 4, 4, "F|Z <n> <subgroup> <subgroup>");
  const auto g = group_arg(o.args[0], o.args[1]);
  std::string text;
  std::string idx;
  if (g.free) {
    const auto h = intersect(free_subgroup_arg(o.args[2], g.size), free_subgroup_arg(o.args[3], g.size));
    text = subgroup_text<FreeGroup>(h);
    idx = std::to_string(index(h));
  } else {
    const auto h = intersect(lattice_arg(o.args[2], g.size), lattice_arg(o.args[3], g.size));
    text = subgroup_text<FreeAbelianGroup>(h);
    idx = h.index().get_str();
  }
  if (o.lines()) {
    out << text << "\n";
  } else {
    out << "subgroup " << text << "\nindex " << idx << "\n";
  }
  return 0;
}

int v_basis(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F|Z <n> <subgroup>");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (g.free) {
    const SubgroupGraph h = free_subgroup_arg(o.args[2], g.size);
    for (const Word &b : h.basis()) {
      out << to_literal(b) << "\n";
    }
  } else {
    for (const IntVector &b : lattice_arg(o.args[2], g.size).columns()) {
      out << "(" << to_string(b) << ")\n";
    }
  }
  return 0;
}

int v_enumerate(const Options &o, std::ostream &out) {
  want(o, 2, 2, "F|Z <n> --max-index <m>");
  const auto g = group_arg(o.args[0], o.args[1]);
  std::vector<mpz_class> indices;
  if (g.free) {
    for (const auto &h : enumerate_subgroups(g.size, o.max_index)) {
      indices.push_back(mpz_class(static_cast<unsigned long>(h.size())));
    }
  } else {
    for (const auto &h : enumerate_lattices(static_cast<std::size_t>(g.size), o.max_index)) {
      indices.push_back(h.index());
    }
  }
  for (long m = 1; m <= o.max_index; ++m) {
    const auto c = std::count(indices.begin(), indices.end(), mpz_class(m));
    out << (m > 1 ? " " : "") << m << ":" << c;
  }
  out << "\n";
  return 0;
}

int v_kernel(const Options &o, std::ostream &out) {
  want(o, 2, 2, "F|Z <n> --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  std::string text, idx;
  if (g.free) {
    const auto k = profinite_kernel(g.size, o.depth);
    text = subgroup_text<FreeGroup>(k);
    idx = std::to_string(index(k));
  } else {
    const auto k = profinite_kernel(static_cast<std::size_t>(g.size), o.depth);
    text = subgroup_text<FreeAbelianGroup>(k);
    idx = k.index().get_str();
  }
  if (o.lines()) {
    out << text << "\n";
  } else {
    out << "index " << idx << "\nsubgroup " << text << "\n";
  }
  return 0;
}

int v_compose(const Options &o, std::ostream &out) {
  want(o, 2, 2, "<comm> <comm>  (first after second)");
  const auto a = comm_arg(o.args[0]), b = comm_arg(o.args[1]);
  if (std::holds_alternative<ZComm>(a)) {
    out << to_text(compose(std::get<ZComm>(a), as<ZComm>(b, "compose")));
  } else {
    out << to_text(compose(std::get<FComm>(a), as<FComm>(b, "compose")));
  }
  return 0;
}

int v_invert(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm>");
  std::visit([&](const auto &f) { out << to_text(invert(f)); }, comm_arg(o.args[0]));
  return 0;
}

int v_equiv(const Options &o, std::ostream &out) {
  want(o, 2, 2, "<comm> <comm>");
  const auto a = comm_arg(o.args[0]), b = comm_arg(o.args[1]);
  const bool eq = std::holds_alternative<ZComm>(a)
                      ? equivalent(std::get<ZComm>(a), as<ZComm>(b, "equiv"))
                      : equivalent(std::get<FComm>(a), as<FComm>(b, "equiv"));
  out << (o.lines() ? (eq ? "true" : "false") : (eq ? "equivalent" : "not equivalent")) << "\n";
  return 0;
}

int v_tomatrix(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm on Z^n>");
  const auto c = comm_arg(o.args[0]);
  if (!std::holds_alternative<ZComm>(c)) {
    throw PreconditionError("tomatrix applies to commensurations of Z^n");
  }
  out << to_string(to_matrix(std::get<ZComm>(c)));
  return 0;
}

template <class G> std::shared_ptr<const TruncatedSystem<G>> system_for(int size, long depth) {
  return std::make_shared<const TruncatedSystem<G>>(size, depth);
}

int v_zeta(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm> --depth <N>");
  const auto c = comm_arg(o.args[0]);
  if (std::holds_alternative<ZComm>(c)) {
    const auto &f = std::get<ZComm>(c);
    const auto s = system_for<FreeAbelianGroup>(static_cast<int>(f.dim()), o.depth);
    out << to_text(*s) << to_text(zeta<FreeAbelianGroup>(f, s));
  } else {
    const auto &f = std::get<FComm>(c);
    const auto s = system_for<FreeGroup>(f.rank(), o.depth);
    out << to_text(*s) << to_text(zeta<FreeGroup>(f, s));
  }
  return 0;
}

int v_reconstruct(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm> --depth <N>");
  const auto c = comm_arg(o.args[0]);
  if (std::holds_alternative<ZComm>(c)) {
    const auto &f = std::get<ZComm>(c);
    out << to_text(reconstruct(zeta<FreeAbelianGroup>(f, system_for<FreeAbelianGroup>(static_cast<int>(f.dim()), o.depth))));
  } else {
    const auto &f = std::get<FComm>(c);
    out << to_text(reconstruct(zeta<FreeGroup>(f, system_for<FreeGroup>(f.rank(), o.depth))));
  }
  return 0;
}

template <class G> void cofinal_for(int size, const Options &o, std::ostream &out) {
  const auto r = cofinal_restrict<G>(system_for<G>(size, o.depth), IndexPredicate(o.args[2]));
  out << to_text(*r.subsystem);
  if (!o.lines()) {
    out << "cofinal: " << r.subsystem->objects().size() << " of "
        << r.restrict.source().objects().size() << " objects selected\n";
  }
}

int v_cofinal(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F|Z <n> <predicate> --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (g.free) {
    cofinal_for<FreeGroup>(g.size, o, out);
  } else {
    cofinal_for<FreeAbelianGroup>(g.size, o, out);
  }
  return 0;
}

int v_cover(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F|Z <n> <subgroup>");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (g.free) {
    const auto h = free_subgroup_arg(o.args[2], g.size);
    const CoverGraph c = cover_of(h);
    out << "cover " << c.size() << " sheets\n";
    for (int l = 1; l <= c.rank; ++l) {
      out << to_string(Word(c.rank, {l})) << ":";
      for (int t : c.out[static_cast<std::size_t>(l - 1)]) {
        out << " " << t + 1;
      }
      out << "\n";
    }
  } else {
    const auto h = lattice_arg(o.args[2], g.size);
    out << "torus cover " << h.index().get_str() << " sheets\n" << to_text(h);
  }
  return 0;
}

int v_lift(const Options &o, std::ostream &out) {
  want(o, 3, 3, "<comm> <H> <K>");
  const auto c = comm_arg(o.args[0]);
  if (std::holds_alternative<ZComm>(c)) {
    const auto &f = std::get<ZComm>(c);
    const int n = static_cast<int>(f.dim());
    const TorusLift l = lift_through_covers(f, lattice_arg(o.args[1], n), lattice_arg(o.args[2], n));
    out << "torus map\n" << to_string(l.matrix);
    return 0;
  }
  const auto &f = std::get<FComm>(c);
  const GraphLift l = lift_through_covers(f, free_subgroup_arg(o.args[1], f.rank()),
                                          free_subgroup_arg(o.args[2], f.rank()));
  for (std::size_t v = 0; v < l.vertex_image.size(); ++v) {
    out << "vertex " << v << " -> " << l.vertex_image[v] << "\n";
  }
  for (std::size_t i = 0; i < l.edge_image.size(); ++i) {
    for (std::size_t v = 0; v < l.edge_image[i].size(); ++v) {
      out << "edge " << v << " " << to_string(Word(f.rank(), {static_cast<Letter>(i + 1)})) << " -> "
          << to_literal(l.edge_image[i][v]) << "\n";
    }
  }
  out << "consistent " << (l.consistent() ? "yes" : "no") << "\nunique " << (l.unique() ? "yes" : "no")
      << "\nlabel equivariant " << (l.label_equivariant ? "yes" : "no") << "\n";
  return 0;
}

FreeSolenoidPoint free_point_arg(const FreeSolenoid &s, const std::string &a) {
  return a.rfind("solpoint", 0) == 0 ? s.parse_point(a) : s.baseleaf(word_arg(a, s.rank()));
}

TorusSolenoidPoint torus_point_arg(const TorusSolenoid &s, const std::string &a) {
  return a.rfind("solpoint", 0) == 0 ? s.parse_point(a)
                                     : s.baseleaf(vector_arg(a, static_cast<int>(s.dim())));
}

int v_baseleaf(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F|Z <n> <element> --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (g.free) {
    const FreeSolenoid s(g.size, o.depth);
    out << s.to_text(s.baseleaf(word_arg(o.args[2], g.size))) << "\n";
  } else {
    const TorusSolenoid s(static_cast<std::size_t>(g.size), o.depth);
    out << s.to_text(s.baseleaf(vector_arg(o.args[2], g.size))) << "\n";
  }
  return 0;
}

void print_metric(const Options &o, std::ostream &out, const MetricValue &v) {
  out << (o.lines() ? v.exact() : v.to_string()) << "\n";
}

int v_dpro(const Options &o, std::ostream &out) {
  want(o, 4, 4, "F|Z <n> <x> <y> --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (g.free) {
    const FreeSolenoid s(g.size, o.depth);
    print_metric(o, out, s.d_pro(word_arg(o.args[2], g.size), word_arg(o.args[3], g.size)));
  } else {
    const TorusSolenoid s(static_cast<std::size_t>(g.size), o.depth);
    print_metric(o, out, s.d_pro(vector_arg(o.args[2], g.size), vector_arg(o.args[3], g.size)));
  }
  return 0;
}

int v_sigma(const Options &o, std::ostream &out) {
  want(o, 4, 4, "F|Z <n> <point> <point> --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  MetricValue v;
  std::string argmin;
  if (g.free) {
    const FreeSolenoid s(g.size, o.depth);
    const auto r = s.sigma(free_point_arg(s, o.args[2]), free_point_arg(s, o.args[3]));
    v = r.value;
    argmin = to_literal(r.argmin);
  } else {
    const TorusSolenoid s(static_cast<std::size_t>(g.size), o.depth);
    const auto r = s.sigma(torus_point_arg(s, o.args[2]), torus_point_arg(s, o.args[3]));
    v = r.value;
    argmin = "(" + to_string(r.argmin) + ")";
  }
  if (o.lines()) {
    out << "value=" << v.exact() << "\nargmin=" << argmin << "\n";
  } else {
    out << "sigma " << v.to_string() << "\nargmin " << argmin << "\n";
  }
  return 0;
}

void print_ball(const BallReport &r, std::ostream &out) {
  out << "components " << r.components << "\nisometric " << (r.isometric ? "yes" : "no")
      << "\ndegenerate " << (r.degenerate ? "yes" : "no") << "\nsamples " << r.samples << "\n";
  for (const auto &c : r.coordinates) {
    out << "coordinate " << c << "\n";
  }
}

int v_ball(const Options &o, std::ostream &out) {
  want(o, 3, 4, "F|Z <n> <epsilon> [point] --depth <N>");
  const auto g = group_arg(o.args[0], o.args[1]);
  const mpq_class eps = parse_decimal(o.args[2]);
  if (g.free) {
    const FreeSolenoid s(g.size, o.depth);
    print_ball(s.ball_structure(o.args.size() == 4 ? free_point_arg(s, o.args[3]) : s.baseleaf(Word(g.size)), eps), out);
  } else {
    const TorusSolenoid s(static_cast<std::size_t>(g.size), o.depth);
    const auto base = s.baseleaf(IntVector(static_cast<std::size_t>(g.size), 0));
    print_ball(s.ball_structure(o.args.size() == 4 ? torus_point_arg(s, o.args[3]) : base, eps), out);
  }
  return 0;
}

int v_qi(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm> --radius <R>");
  const auto c = comm_arg(o.args[0]);
  const QIEstimate q = std::holds_alternative<ZComm>(c)
                           ? qi_estimate(BaseleafMap<FreeAbelianGroup>(std::get<ZComm>(c)), o.radius)
                           : qi_estimate(BaseleafMap<FreeGroup>(std::get<FComm>(c)), o.radius);
  if (o.lines()) {
    out << "L=" << q.multiplicative.get_str() << "\nC=" << q.additive.get_str() << "\npairs=" << q.pairs
        << "\n";
  } else {
    out << "radius " << q.radius << "\nL " << q.multiplicative.get_str() << " = " << decimal(q.multiplicative)
        << "\nC " << q.additive.get_str() << " = " << decimal(q.additive) << "\nratios in ["
        << q.min_ratio.get_str() << ", " << q.max_ratio.get_str() << "]\npairs " << q.pairs << "\n";
  }
  return 0;
}

int v_bounded(const Options &o, std::ostream &out) {
  want(o, 2, 2, "<comm> <comm> --radius <R>");
  const auto a = comm_arg(o.args[0]), b = comm_arg(o.args[1]);
  DistanceProfile p;
  bool eq = false;
  if (std::holds_alternative<ZComm>(a)) {
    const auto &f = std::get<ZComm>(a);
    const auto &h = as<ZComm>(b, "bounded");
    p = bounded_distance(BaseleafMap<FreeAbelianGroup>(f), BaseleafMap<FreeAbelianGroup>(h), o.radius);
    eq = equivalent(f, h);
  } else {
    const auto &f = std::get<FComm>(a);
    const auto &h = as<FComm>(b, "bounded");
    p = bounded_distance(BaseleafMap<FreeGroup>(f), BaseleafMap<FreeGroup>(h), o.radius);
    eq = equivalent(f, h);
  }
  out << "profile";
  for (std::size_t r = 0; r < p.profile.size(); ++r) {
    out << " " << r << ":" << p.profile[r].get_str();
  }
  out << "\n";
  if (eq) {
    out << "bound " << p.bound().get_str() << " stable from " << p.stable_from << "\n";
  } else {
    out << "inequivalent; distance " << p.bound().get_str() << " at radius " << o.radius
        << (p.stable_from == o.radius && o.radius > 0 ? ", still growing" : "") << "\n";
  }
  return 0;
}

int v_factor(const Options &o, std::ostream &out) {
  want(o, 1, 1, "<comm> --depth <N> --radius <R>");
  const auto c = comm_arg(o.args[0]);
  const FactorizationReport r = std::holds_alternative<ZComm>(c)
                                    ? factorization_check(std::get<ZComm>(c), o.depth, o.radius)
                                    : factorization_check(std::get<FComm>(c), o.depth, o.radius);
  out << "components " << r.components << "\npoints " << r.points << "\nmismatches " << r.mismatches.size()
      << "\n";
  for (const auto &m : r.mismatches) {
    out << "mismatch " << m << "\n";
  }
  return r.passed() ? 0 : 1;
}

int v_fixpoint(const Options &o, std::ostream &out) {
  want(o, 3, 3, "F <k> <word> [--repelling]");
  const auto g = group_arg(o.args[0], o.args[1]);
  if (!g.free) {
    throw PreconditionError("fixed points are defined for free groups");
  }
  out << to_text(fixed_point(word_arg(o.args[2], g.size), o.repelling ? -1 : 1)) << "\n";
  return 0;
}

int v_baction(const Options &o, std::ostream &out) {
  want(o, 2, 3, "<comm> <word> | <comm> u=<word> c=<word>");
  const auto c = comm_arg(o.args[0]);
  if (!std::holds_alternative<FComm>(c)) {
    throw PreconditionError("the boundary action is defined for free groups");
  }
  const auto &f = std::get<FComm>(c);
  std::string rest = o.args[1];
  for (std::size_t i = 2; i < o.args.size(); ++i) {
    rest += " " + o.args[i];
  }
  const BoundaryPoint p =
      rest.rfind("u=", 0) == 0 ? parse_boundary_point(rest, f.rank()) : fixed_point(word_arg(rest, f.rank()));
  out << to_text(boundary_action(f, p)) << "\n";
  return 0;
}

int v_selftest(const Options &o, std::ostream &out) {
  want(o, 0, 0, "(no arguments)");
  auto failures = acceptance::run_all(out);
  std::ostringstream log;
  const bool rt = round_trip(log);
  out << (rt ? "PASS" : "FAIL") << " RT  machine-readable round trip" << (rt ? "" : "\n" + log.str()) << "\n";
  const std::size_t failed = failures.size() + (rt ? 0 : 1);
  out << "selftest: " << (failed == 0 ? "all passed" : std::to_string(failed) + " failed") << "\n";
  return failed == 0 ? 0 : 1;
}

struct Verb {
  const char *name;
  const char *help;
  int (*fn)(const Options &, std::ostream &);
};

const Verb verbs[] = {
    {"parse", "parse a commensuration and print its canonical text", v_parse},
    {"index", "index of a subgroup", v_index},
    {"intersect", "intersection of two subgroups", v_intersect},
    {"basis", "free basis of a subgroup", v_basis},
    {"enumerate", "count subgroups per index up to --max-index", v_enumerate},
    {"kernel", "intersection of all subgroups of index <= --depth", v_kernel},
    {"compose", "first after second", v_compose},
    {"invert", "inverse commensuration", v_invert},
    {"equiv", "whether two commensurations agree on a common subgroup", v_equiv},
    {"tomatrix", "rational matrix of a commensuration of Z^n", v_tomatrix},
    {"zeta", "truncated system and the induced morphism", v_zeta},
    {"reconstruct", "recover the commensuration from its zeta image", v_reconstruct},
    {"cofinal", "restrict the system to objects selected by a predicate", v_cofinal},
    {"cover", "covering graph or torus of a subgroup", v_cover},
    {"lift", "lift a commensuration through the covers of H and K", v_lift},
    {"baseleaf", "solenoid point on the base leaf", v_baseleaf},
    {"dpro", "profinite pseudometric", v_dpro},
    {"sigma", "solenoid metric between two points", v_sigma},
    {"ball", "structure of a small ball in the solenoid", v_ball},
    {"qi", "quasi-isometry constants of the baseleaf map", v_qi},
    {"bounded", "distance between two baseleaf maps on balls", v_bounded},
    {"factor", "compare the lift with the baseleaf map", v_factor},
    {"fixpoint", "attracting (or --repelling) fixed point", v_fixpoint},
    {"baction", "boundary action on an attracting fixed point", v_baction},
    {"selftest", "run the acceptance suite", v_selftest},
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Commensurators of Z^n and F_k with truncated solenoid models", "commsol"};
  app.require_subcommand(1);
  Options opts;
  std::map<CLI::App *, const Verb *> table;
  for (const Verb &v : verbs) {
    CLI::App *sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--depth", opts.depth, "truncation depth N")->check(CLI::PositiveNumber);
    sub->add_option("--radius", opts.radius, "ball radius R")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-index", opts.max_index, "largest subgroup index")->check(CLI::PositiveNumber);
    sub->add_option("--format", opts.format, "text or lines")->check(CLI::IsMember({"text", "lines"}));
    if (std::string(v.name) == "fixpoint") {
      sub->add_flag("--repelling", opts.repelling, "repelling fixed point g-");
    }
    sub->add_option("args", opts.args, "positional arguments");
    table[sub] = &v;
  }
  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      std::none_of(std::begin(verbs), std::end(verbs), [&](const Verb &v) { return args[0] == v.name; })) {
    err << "usage error: unknown verb '" << args[0] << "'\n" << app.help();
    return 2;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  const Verb *verb = table.at(app.get_subcommands().front());
  try {
    return verb->fn(opts, out);
  } catch (const UsageError &e) {
    err << "usage error: " << verb->name << ": " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::string capture(const std::vector<std::string> &args, int &code) {
  std::ostringstream out, err;
  code = run(args, out, err);
  return out.str() + err.str();
}

std::map<std::string, std::string> key_values(const std::string &text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  return kv;
}

} // namespace

bool round_trip(std::ostream &log) {
  struct Case {
    std::vector<std::string> args;
    std::function<bool(const std::string &)> check;
  };
  const auto cat = f2_catalog();
  auto same_free = [](const FComm &a, const FComm &b) {
    return a.domain() == b.domain() && a.images() == b.images();
  };
  auto reparse_free = [&](const FComm &expected) {
    return [&, expected](const std::string &text) {
      const auto c = parse_commensuration(text);
      return std::holds_alternative<FComm>(c) && same_free(std::get<FComm>(c), expected);
    };
  };
  std::vector<Case> cases;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    cases.push_back({{"parse", "catalog:" + std::to_string(i)}, reparse_free(cat[i])});
  }
  cases.push_back({{"compose", "catalog:5", "catalog:9"}, reparse_free(compose(cat[5], cat[9]))});
  cases.push_back({{"invert", "catalog:10"}, reparse_free(invert(cat[10]))});
  cases.push_back({{"reconstruct", "catalog:7", "--depth", "2"}, [&](const std::string &text) {
                     const auto c = parse_commensuration(text);
                     return std::holds_alternative<FComm>(c) && equivalent(std::get<FComm>(c), cat[7]);
                   }});
  const RationalMatrix z2(2, {mpq_class(1, 2), mpq_class(1), mpq_class(0), mpq_class(3)});
  cases.push_back({{"parse", "comm Z 2;1/2 1;0 3"}, [&](const std::string &text) {
                     const auto c = parse_commensuration(text);
                     return std::holds_alternative<ZComm>(c) && std::get<ZComm>(c).matrix() == z2;
                   }});
  cases.push_back({{"tomatrix", "comm Z 1;2/1"}, [](const std::string &text) {
                     return text == "2/1\n" && parse_rational(trim(text)) == 2;
                   }});
  cases.push_back({{"kernel", "F", "2", "--depth", "2"}, [](const std::string &text) {
                     return free_subgroup_arg(trim(text), 2) == profinite_kernel(2, 2);
                   }});
  cases.push_back({{"intersect", "Z", "2", "(2,0),(0,1)", "(1,0),(0,3)"}, [](const std::string &text) {
                     return lattice_arg(trim(text), 2) == Lattice::from_generators(2, {{2, 0}, {0, 3}});
                   }});
  cases.push_back({{"baseleaf", "F", "2", "ab", "--depth", "2"}, [](const std::string &text) {
                     const FreeSolenoid s(2, 2);
                     return s.parse_point(trim(text)) == s.baseleaf(parse_word("ab", 2));
                   }});
  cases.push_back({{"baseleaf", "Z", "1", "12", "--depth", "5"}, [](const std::string &text) {
                     const TorusSolenoid s(1, 5);
                     return s.parse_point(trim(text)) == s.baseleaf(IntVector{mpz_class(12)});
                   }});
  cases.push_back({{"dpro", "Z", "1", "0", "12", "--depth", "5"}, [](const std::string &text) {
                     return parse_metric_value(trim(text)) == MetricValue::exp_neg(4);
                   }});
  cases.push_back({{"sigma", "F", "2", "a", "bA", "--depth", "2"}, [](const std::string &text) {
                     const FreeSolenoid s(2, 2);
                     const auto kv = key_values(text);
                     const auto r = s.sigma(s.baseleaf(parse_word("a", 2)), s.baseleaf(parse_word("bA", 2)));
                     return kv.count("value") && kv.count("argmin") && parse_metric_value(kv.at("value")) == r.value &&
                            parse_word(kv.at("argmin"), 2) == r.argmin;
                   }});
  cases.push_back({{"fixpoint", "F", "2", "Aba"}, [](const std::string &text) {
                     return parse_boundary_point(trim(text), 2) == fixed_point(parse_word("Aba", 2));
                   }});
  cases.push_back({{"baction", "catalog:2", "u=1", "c=b"}, [](const std::string &text) {
                     return to_text(parse_boundary_point(trim(text), 2)) == "u=a c=b";
                   }});
  cases.push_back({{"qi", "catalog:5", "--radius", "3"}, [&](const std::string &text) {
                     const auto kv = key_values(text);
                     const auto q = qi_estimate(BaseleafMap<FreeGroup>(cat[5]), 3);
                     return kv.count("L") && kv.count("C") && parse_rational(kv.at("L")) == q.multiplicative &&
                            parse_rational(kv.at("C")) == q.additive;
                   }});
  bool all = true;
  for (auto &c : cases) {
    c.args.push_back("--format");
    c.args.push_back("lines");
    int code = 0;
    const std::string text = capture(c.args, code);
    bool ok = code == 0;
    try {
      ok = ok && c.check(text);
    } catch (const std::exception &) {
      ok = false;
    }
    std::string cmd;
    for (const auto &a : c.args) {
      cmd += (cmd.empty() ? "" : " ") + a;
    }
    log << (ok ? "ok   " : "FAIL ") << cmd << "\n";
    all = all && ok;
  }
  return all;
}

} // namespace commsol::cli
