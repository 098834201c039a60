#include "commsol/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

namespace {

std::vector<Word> elements_within(const FComm &phi, long radius) {
  return ball(phi.rank(), static_cast<std::size_t>(radius));
}

std::vector<IntVector> elements_within(const ZComm &phi, long radius) {
  return l1_ball(phi.dim(), radius);
}

mpz_class length_of(const Word &g) { return mpz_class(static_cast<unsigned long>(g.size())); }
mpz_class length_of(const IntVector &g) { return l1_norm(g); }

Word closest(const FComm &phi, const Word &g) { return closest_point(phi.domain(), g); }
IntVector closest(const ZComm &phi, const IntVector &g) {
  return closest_point(phi.domain(), g);
}

void require_radius(long radius) {
  if (radius < 0) {
    throw PreconditionError("radius must be nonnegative");
  }
}

} // namespace

template <class G>
typename G::Element BaseleafMap<G>::evaluate(const Element &g) const {
  return phi_.apply(closest(phi_, g));
}

mpz_class word_distance(const Word &g, const Word &h) { return length_of(g.inverse() * h); }
mpz_class word_distance(const IntVector &g, const IntVector &h) { return l1_norm(sub(g, h)); }

bool QIEstimate::certifies(const mpz_class &d, const mpz_class &image_d) const {
  const mpq_class dq(d), iq(image_d);
  return dq / multiplicative - additive <= iq && iq <= multiplicative * dq + additive;
}

template <class G> QIEstimate qi_estimate(const BaseleafMap<G> &m, long radius) {
  require_radius(radius);
  const auto pts = elements_within(m.commensuration(), radius);
  const long double pair_count = static_cast<long double>(pts.size()) * (pts.size() - 1) / 2;
  if (pair_count > static_cast<long double>(work_cap())) {
    throw ResourceLimitError("radius " + std::to_string(radius) + " needs " +
                             std::to_string(static_cast<long long>(pair_count)) +
                             " pairs, above the work cap (COMMSOL_MAX_WORK)");
  }
  std::vector<typename G::Element> images;
  for (const auto &p : pts) {
    images.push_back(m.evaluate(p));
  }
  QIEstimate q;
  q.radius = radius;
  q.max_ratio = 1;
  q.min_ratio = 1;
  bool first = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const mpq_class ratio(word_distance(images[i], images[j]), word_distance(pts[i], pts[j]));
      if (first || ratio > q.max_ratio) {
        q.max_ratio = ratio;
      }
      if (first || ratio < q.min_ratio) {
        q.min_ratio = ratio;
      }
      first = false;
      ++q.pairs;
    }
  }
  q.multiplicative = std::max(mpq_class(1), q.max_ratio);
  q.additive = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const mpq_class slack = mpq_class(word_distance(pts[i], pts[j])) / q.multiplicative -
                              mpq_class(word_distance(images[i], images[j]));
      if (slack > q.additive) {
        q.additive = slack;
      }
    }
  }
  return q;
}

bool DistanceProfile::stable_between(long from, long to) const {
  if (from < 0 || to >= static_cast<long>(profile.size()) || from > to) {
    throw PreconditionError("radii outside the scanned profile");
  }
  return profile[static_cast<std::size_t>(from)] == profile[static_cast<std::size_t>(to)];
}

template <class G>
DistanceProfile bounded_distance(const BaseleafMap<G> &m1, const BaseleafMap<G> &m2,
                                 long radius) {
  require_radius(radius);
  DistanceProfile out;
  out.profile.assign(static_cast<std::size_t>(radius + 1), 0);
  for (const auto &g : elements_within(m1.commensuration(), radius)) {
    const auto r = static_cast<std::size_t>(length_of(g).get_ui());
    const mpz_class d = word_distance(m1.evaluate(g), m2.evaluate(g));
    if (d > out.profile[r]) {
      out.profile[r] = d;
    }
  }
  for (std::size_t r = 1; r < out.profile.size(); ++r) {
    out.profile[r] = std::max(out.profile[r], out.profile[r - 1]);
  }
  out.stable_from = radius;
  while (out.stable_from > 0 &&
         out.profile[static_cast<std::size_t>(out.stable_from - 1)] == out.profile.back()) {
    --out.stable_from;
  }
  return out;
}

FactorizationReport factorization_check(const FComm &phi, long depth, long radius) {
  require_radius(radius);
  const TruncatedSystem<FreeGroup> system(phi.rank(), depth);
  const BaseleafMap<FreeGroup> base(phi);
  const auto pts = ball(phi.rank(), static_cast<std::size_t>(radius));
  FactorizationReport report{depth, radius, 0, 0, {}};
  for (const auto &obj : system.objects()) {
    const SubgroupGraph source = pullback(phi, obj);
    const GraphLift lift = lift_through_covers(phi, source, obj);
    ++report.components;
    for (const Word &h : pts) {
      if (!source.contains(h)) {
        continue;
      }
      Word image(phi.rank());
      int v = 0;
      for (Letter l : h.letters()) {
        if (l > 0) {
          image = image * lift.edge_image[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(v)];
          v = source.target(v, l);
        } else {
          v = source.target(v, l);
          image = image * lift.edge_image[static_cast<std::size_t>(-l - 1)][static_cast<std::size_t>(v)].inverse();
        }
      }
      ++report.points;
      const Word expected = base.evaluate(h);
      if (image != expected) {
        report.mismatches.push_back(to_literal(h) + ": lift " + to_literal(image) +
                                    ", baseleaf " + to_literal(expected));
      }
    }
  }
  return report;
}

FactorizationReport factorization_check(const ZComm &phi, long depth, long radius) {
  require_radius(radius);
  const TruncatedSystem<FreeAbelianGroup> system(static_cast<int>(phi.dim()), depth);
  const BaseleafMap<FreeAbelianGroup> base(phi);
  const auto pts = l1_ball(phi.dim(), radius);
  FactorizationReport report{depth, radius, 0, 0, {}};
  for (const auto &obj : system.objects()) {
    const Lattice source = pullback(phi, obj);
    const TorusLift lift = lift_through_covers(phi, source, obj);
    ++report.components;
    for (const IntVector &x : pts) {
      if (!source.contains(x)) {
        continue;
      }
      ++report.points;
      const IntVector image = lift.matrix.apply_integral(x);
      const IntVector expected = base.evaluate(x);
      if (image != expected) {
        report.mismatches.push_back("(" + to_string(x) + "): lift (" + to_string(image) +
                                    "), baseleaf (" + to_string(expected) + ")");
      }
    }
  }
  return report;
}

Word BoundaryPoint::prefix(std::size_t n) const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < n && i < u.size(); ++i) {
    out.push_back(u[i]);
  }
  for (std::size_t i = 0; out.size() < n; ++i) {
    out.push_back(c[i % c.size()]);
  }
  return Word(u.rank(), out);
}

BoundaryPoint fixed_point(const Word &g, int sign) {
  if (g.empty()) {
    throw PreconditionError("the identity is elliptic and has no fixed points");
  }
  auto [u, core] = cyclic_decompose(g);
  Word c = primitive_root(core).root;
  if (sign < 0) {
    c = c.inverse();
  }
  std::vector<Letter> ul = u.letters();
  std::vector<Letter> cl = c.letters();
  while (!ul.empty() && ul.back() == cl.back()) {
    ul.pop_back();
    std::rotate(cl.rbegin(), cl.rbegin() + 1, cl.rend());
  }
  return BoundaryPoint{Word(g.rank(), ul), Word(g.rank(), cl), sign < 0 ? g.inverse() : g};
}

long power_into(const SubgroupGraph &h, const Word &g) {
  const auto limit = static_cast<long>(index(h));
  Word p = g;
  for (long m = 1; m <= limit; ++m) {
    if (h.contains(p)) {
      return m;
    }
    p = p * g;
  }
  throw PreconditionError("no power of " + to_literal(g) + " lies in the subgroup");
}

BoundaryPoint boundary_action(const FComm &phi, const BoundaryPoint &p) {
  const Word g = p.source ? *p.source : p.u * p.c * p.u.inverse();
  const long m = power_into(phi.domain(), g);
  return fixed_point(phi.apply(g.power(m)));
}

std::string to_text(const BoundaryPoint &p) {
  return "u=" + to_literal(p.u) + " c=" + to_literal(p.c);
}

BoundaryPoint parse_boundary_point(std::string_view text, int rank) {
  std::istringstream in{std::string(text)};
  std::string a, b, extra;
  if (!(in >> a >> b) || (in >> extra) || a.rfind("u=", 0) != 0 || b.rfind("c=", 0) != 0) {
    throw ParseError("boundary point must read 'u=<word> c=<word>'");
  }
  const Word u = parse_word(a.substr(2), rank);
  const Word c = parse_word(b.substr(2), rank);
  if (c.empty()) {
    throw ParseError("boundary point period must be nonempty");
  }
  return fixed_point(u * c * u.inverse());
}

template class BaseleafMap<FreeGroup>;
template class BaseleafMap<FreeAbelianGroup>;
template QIEstimate qi_estimate<FreeGroup>(const BaseleafMap<FreeGroup> &, long);
template QIEstimate qi_estimate<FreeAbelianGroup>(const BaseleafMap<FreeAbelianGroup> &, long);
template DistanceProfile bounded_distance<FreeGroup>(const BaseleafMap<FreeGroup> &,
                                                     const BaseleafMap<FreeGroup> &, long);
template DistanceProfile bounded_distance<FreeAbelianGroup>(const BaseleafMap<FreeAbelianGroup> &,
                                                            const BaseleafMap<FreeAbelianGroup> &,
                                                            long);

} // namespace commsol
