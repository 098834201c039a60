#include "commsol/prosystems.hpp"

#include <algorithm>
#include <sstream>

#include "commsol/error.hpp"

namespace commsol {

std::vector<SubgroupGraph> FreeGroup::enumerate(int rank, long max_index) {
  return enumerate_subgroups(rank, max_index);
}
SubgroupGraph FreeGroup::whole(int rank) { return SubgroupGraph::whole(rank); }
FComm FreeGroup::identity(int rank) { return FComm::identity(rank); }
mpz_class FreeGroup::index_of(const SubgroupGraph &h) {
  return mpz_class(static_cast<unsigned long>(h.index()));
}
std::string FreeGroup::inline_text(const SubgroupGraph &h) {
  std::string out = "<";
  for (std::size_t i = 0; i < h.basis().size(); ++i) {
    out += (i ? "," : "") + to_literal(h.basis()[i]);
  }
  return out + ">";
}

std::vector<Lattice> FreeAbelianGroup::enumerate(int n, long max_index) {
  return enumerate_lattices(static_cast<std::size_t>(n), max_index);
}
Lattice FreeAbelianGroup::whole(int n) { return Lattice::whole(static_cast<std::size_t>(n)); }
ZComm FreeAbelianGroup::identity(int n) { return ZComm::identity(static_cast<std::size_t>(n)); }
std::string FreeAbelianGroup::inline_text(const Lattice &h) {
  std::string out = "<";
  const auto cols = h.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += (i ? ",(" : "(") + to_string(cols[i]) + ")";
  }
  return out + ">";
}

template <class G>
TruncatedSystem<G>::TruncatedSystem(int size, long depth)
    : size_(size), depth_(depth) {
  if (depth < 1) {
    throw PreconditionError("truncation depth must be at least 1");
  }
  objects_ = G::enumerate(size, depth);
  connect();
}

template <class G>
TruncatedSystem<G>::TruncatedSystem(int size, long depth, std::vector<Subgroup> objects)
    : size_(size), depth_(depth), objects_(std::move(objects)) {
  std::sort(objects_.begin(), objects_.end());
  objects_.erase(std::unique(objects_.begin(), objects_.end()), objects_.end());
  connect();
}

template <class G> void TruncatedSystem<G>::connect() {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    for (std::size_t j = i + 1; j < objects_.size(); ++j) {
      if (is_subgroup(objects_[j], objects_[i])) {
        bonds_.push_back({j, i});
      } else if (!find(intersect(objects_[i], objects_[j]))) {
        overflow_.emplace_back(i, j);
      }
    }
  }
}

template <class G>
std::optional<std::size_t> TruncatedSystem<G>::find(const Subgroup &h) const {
  auto it = std::lower_bound(objects_.begin(), objects_.end(), h);
  if (it != objects_.end() && *it == h) {
    return static_cast<std::size_t>(it - objects_.begin());
  }
  return std::nullopt;
}

template <class G>
std::size_t TruncatedSystem<G>::smallest_containing(const Subgroup &h) const {
  for (std::size_t i = objects_.size(); i-- > 0;) {
    if (is_subgroup(h, objects_[i])) {
      return i;
    }
  }
  throw PreconditionError("no object of the system contains " + G::inline_text(h));
}

template <class G>
SystemMorphism<G>::SystemMorphism(std::shared_ptr<const System> source,
                                  std::shared_ptr<const System> target,
                                  std::vector<Component<G>> components)
    : source_(std::move(source)), target_(std::move(target)),
      components_(std::move(components)) {
  if (source_->size() != target_->size()) {
    throw MismatchError("systems of different groups");
  }
  if (components_.size() != target_->objects().size()) {
    throw PreconditionError("one component per target object is required");
  }
}

template <class G> std::vector<std::size_t> SystemMorphism<G>::deep_sources() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (!components_[j].source_index) {
      out.push_back(j);
    }
  }
  return out;
}

template <class G> bool SystemMorphism<G>::strictly_commutes() const {
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto &c = components_[j];
    if (!is_subgroup(c.map.codomain(), target_->object(j)) || !(c.map.domain() == c.source)) {
      return false;
    }
  }
  for (const Bond &b : target_->bonds()) {
    const auto &small = components_[b.from];
    const auto &large = components_[b.to];
    if (!is_subgroup(small.source, large.source)) {
      return false;
    }
    for (const auto &x : G::basis(small.source)) {
      if (!(small.map.apply(x) == large.map.apply(x))) {
        return false;
      }
    }
  }
  return true;
}

template <class G>
SystemMorphism<G> identity_morphism(std::shared_ptr<const TruncatedSystem<G>> s) {
  return zeta<G>(G::identity(s->size()), s);
}

template <class G>
SystemMorphism<G> zeta(const typename G::Map &phi,
                       std::shared_ptr<const TruncatedSystem<G>> system) {
  std::vector<Component<G>> comps;
  for (const auto &obj : system->objects()) {
    auto source = pullback(phi, obj);
    auto map = restriction(phi, source);
    auto where = system->find(source);
    comps.push_back(Component<G>{std::move(source), where, std::move(map)});
  }
  return SystemMorphism<G>(system, system, std::move(comps));
}

template <class G> typename G::Map reconstruct(const SystemMorphism<G> &m) {
  const auto &objects = m.target().objects();
  for (std::size_t j = 0; j < objects.size(); ++j) {
    if (G::index_of(objects[j]) == 1) {
      return m.components()[j].map;
    }
  }
  throw PreconditionError("not a pro-automorphism at this depth: the target has no top object");
}

template <class G>
SystemMorphism<G> compose_morphisms(const SystemMorphism<G> &first,
                                    const SystemMorphism<G> &second) {
  if (!(second.target().objects() == first.source().objects())) {
    throw MismatchError("morphisms do not compose: systems differ");
  }
  const auto &middle = second.target();
  std::vector<Component<G>> comps;
  for (const auto &f : first.components()) {
    const std::size_t nu = middle.smallest_containing(f.source);
    auto map = compose(f.map, second.components()[nu].map);
    auto source = map.domain();
    auto where = second.source().find(source);
    comps.push_back(Component<G>{std::move(source), where, std::move(map)});
  }
  return SystemMorphism<G>(second.source_ptr(), first.target_ptr(), std::move(comps));
}

template <class G>
bool morphisms_equivalent(const SystemMorphism<G> &a, const SystemMorphism<G> &b) {
  if (!(a.target().objects() == b.target().objects())) {
    return false;
  }
  for (std::size_t j = 0; j < a.components().size(); ++j) {
    if (!equivalent(a.components()[j].map, b.components()[j].map)) {
      return false;
    }
  }
  return true;
}

IndexPredicate::IndexPredicate(std::string_view text) : text_(text) {
  std::string t;
  for (char c : text) {
    if (c != ' ' && c != '\t') {
      t += c;
    }
  }
  auto number = [&](const std::string &s) {
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0) {
      throw ParseError("bad number '" + s + "' in predicate '" + text_ + "'");
    }
    return v;
  };
  if (t == "all") {
    kind_ = Kind::all;
  } else if (t == "even") {
    kind_ = Kind::modulo;
    a_ = 2;
    b_ = 0;
  } else if (t.rfind("index>=", 0) == 0) {
    kind_ = Kind::at_least;
    a_ = number(t.substr(7));
  } else if (t.rfind("index<=", 0) == 0) {
    kind_ = Kind::at_most;
    a_ = number(t.substr(7));
  } else if (t.rfind("index%", 0) == 0 && t.find("==") != std::string::npos) {
    const auto eq = t.find("==");
    kind_ = Kind::modulo;
    a_ = number(t.substr(6, eq - 6));
    b_ = number(t.substr(eq + 2));
    if (a_ <= 0) {
      throw ParseError("modulus must be positive in '" + text_ + "'");
    }
  } else if (t.rfind("indexin", 0) == 0) {
    kind_ = Kind::member;
    std::stringstream list(t.substr(7));
    std::string item;
    while (std::getline(list, item, ',')) {
      members_.push_back(number(item));
    }
    if (members_.empty()) {
      throw ParseError("empty list in '" + text_ + "'");
    }
  } else {
    throw ParseError("unknown predicate '" + text_ +
                     "' (expected all, even, index>=m, index<=m, index%m==r, "
                     "index in a,b,...)");
  }
}

bool IndexPredicate::operator()(const mpz_class &index) const {
  switch (kind_) {
  case Kind::all:
    return true;
  case Kind::at_least:
    return index >= a_;
  case Kind::at_most:
    return index <= a_;
  case Kind::modulo:
    return mpz_class(index % a_) == b_;
  case Kind::member:
    return std::find(members_.begin(), members_.end(), index) != members_.end();
  }
  return false;
}

template <class G>
CofinalRestriction<G> cofinal_restrict(std::shared_ptr<const TruncatedSystem<G>> s,
                                       const IndexPredicate &predicate) {
  std::vector<typename G::Subgroup> chosen;
  for (const auto &obj : s->objects()) {
    if (predicate(G::index_of(obj))) {
      chosen.push_back(obj);
    }
  }
  std::vector<std::size_t> cover(s->objects().size());
  for (std::size_t i = 0; i < s->objects().size(); ++i) {
    const auto &obj = s->object(i);
    auto it = std::find_if(chosen.begin(), chosen.end(),
                           [&](const auto &c) { return is_subgroup(c, obj); });
    if (it == chosen.end()) {
      throw PreconditionError("predicate '" + predicate.text() +
                              "' is not cofinal: object " + std::to_string(i) +
                              " (index " + G::index_of(obj).get_str() + ", " +
                              G::inline_text(obj) + ") contains no selected object");
    }
    cover[i] = *s->find(*it);
  }
  auto sub = std::make_shared<const TruncatedSystem<G>>(s->size(), s->depth(), chosen);
  const auto id = G::identity(s->size());

  std::vector<Component<G>> down;
  for (const auto &obj : sub->objects()) {
    down.push_back(Component<G>{obj, s->find(obj), restriction(id, obj)});
  }
  std::vector<Component<G>> up;
  for (std::size_t i = 0; i < s->objects().size(); ++i) {
    auto src = s->object(cover[i]);
    for (const Bond &b : s->bonds()) {
      if (b.from == i) {
        src = intersect(src, s->object(cover[b.to]));
      }
    }
    auto where = sub->find(src);
    up.push_back(Component<G>{src, where, restriction(id, src)});
  }
  SystemMorphism<G> restrict(s, sub, std::move(down));
  SystemMorphism<G> inverse(sub, s, std::move(up));
  return CofinalRestriction<G>{sub, std::move(restrict), std::move(inverse)};
}

template <class G> std::string to_text(const TruncatedSystem<G> &s) {
  std::string out;
  for (std::size_t i = 0; i < s.objects().size(); ++i) {
    out += "idx=" + std::to_string(i) + " index=" + G::index_of(s.object(i)).get_str() +
           " subgroup=" + G::inline_text(s.object(i)) + "\n";
  }
  for (const Bond &b : s.bonds()) {
    out += "bond " + std::to_string(b.from) + " " + std::to_string(b.to) + "\n";
  }
  return out;
}

template <class G> std::string to_text(const SystemMorphism<G> &m) {
  std::string out;
  for (std::size_t j = 0; j < m.components().size(); ++j) {
    const auto &c = m.components()[j];
    for (const auto &x : G::basis(c.source)) {
      out += "comp " + std::to_string(j) + ": " + G::element_text(x) + " -> " +
             G::element_text(c.map.apply(x)) + "\n";
    }
  }
  return out;
}

#define COMMSOL_INSTANTIATE(G)                                                           \
  template class TruncatedSystem<G>;                                                     \
  template class SystemMorphism<G>;                                                      \
  template SystemMorphism<G> identity_morphism<G>(std::shared_ptr<const TruncatedSystem<G>>); \
  template SystemMorphism<G> zeta<G>(const G::Map &,                                     \
                                     std::shared_ptr<const TruncatedSystem<G>>);         \
  template G::Map reconstruct<G>(const SystemMorphism<G> &);                             \
  template SystemMorphism<G> compose_morphisms<G>(const SystemMorphism<G> &,             \
                                                  const SystemMorphism<G> &);            \
  template bool morphisms_equivalent<G>(const SystemMorphism<G> &,                       \
                                        const SystemMorphism<G> &);                      \
  template CofinalRestriction<G> cofinal_restrict<G>(                                    \
      std::shared_ptr<const TruncatedSystem<G>>, const IndexPredicate &);                \
  template std::string to_text<G>(const TruncatedSystem<G> &);                           \
  template std::string to_text<G>(const SystemMorphism<G> &);

COMMSOL_INSTANTIATE(FreeGroup)
COMMSOL_INSTANTIATE(FreeAbelianGroup)

} // namespace commsol
