#pragma once

// Commensurations as quasi-isometries of the word metric, and the action of
// Comm(F_k) on attracting fixed points in the boundary.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "commsol/prosystems.hpp"
#include "commsol/solenoid.hpp"

namespace commsol {

/// phi precomposed with the closest-point projection to its domain.
template <class G> class BaseleafMap {
public:
  using Element = typename G::Element;
  using Map = typename G::Map;

  explicit BaseleafMap(Map phi) : phi_(std::move(phi)) {}
  const Map &commensuration() const noexcept { return phi_; }
  Element evaluate(const Element &g) const;

private:
  Map phi_;
};

/// Word length distance; l1 distance on Z^n.
mpz_class word_distance(const Word &g, const Word &h);
mpz_class word_distance(const IntVector &g, const IntVector &h);

struct QIEstimate {
  long radius = 0;
  /// Max of 1 and the largest ratio d(fx, fy) / d(x, y).
  mpq_class multiplicative;
  /// Max of 0 and the largest d(x, y) / L - d(fx, fy).
  mpq_class additive;
  mpq_class max_ratio;
  mpq_class min_ratio;
  std::size_t pairs = 0;

  /// Checks (1/L) d - C <= d' <= L d + C for one pair.
  bool certifies(const mpz_class &d, const mpz_class &image_d) const;
};

/// Exhaustive over unordered pairs of the R-ball. Throws
/// ResourceLimitError when the pair count exceeds the work cap.
template <class G> QIEstimate qi_estimate(const BaseleafMap<G> &m, long radius);

struct DistanceProfile {
  /// profile[r] = max over |g| <= r of d(m1(g), m2(g)).
  std::vector<mpz_class> profile;
  /// Least r after which the profile stays constant up to the scanned radius.
  long stable_from = 0;

  const mpz_class &bound() const { return profile.back(); }
  /// Constant on [from, to].
  bool stable_between(long from, long to) const;
};

template <class G>
DistanceProfile bounded_distance(const BaseleafMap<G> &m1, const BaseleafMap<G> &m2,
                                 long radius);

struct FactorizationReport {
  long depth = 0;
  long radius = 0;
  std::size_t components = 0;
  std::size_t points = 0;
  std::vector<std::string> mismatches;

  bool passed() const { return mismatches.empty(); }
};

/// For each object G_l of the depth-N system, lifts phi restricted to
/// phi^-1(G_l) through the covers and compares the induced map on the
/// universal cover with the baseleaf map on domain points of the R-ball.
FactorizationReport factorization_check(const FComm &phi, long depth, long radius);
FactorizationReport factorization_check(const ZComm &phi, long depth, long radius);

/// The eventually periodic reduced word u c c c ... with c cyclically
/// reduced and primitive, u as short as possible.
struct BoundaryPoint {
  Word u;
  Word c;
  /// An element whose attracting fixed point this is.
  std::optional<Word> source;

  bool operator==(const BoundaryPoint &other) const { return u == other.u && c == other.c; }
  /// The first n letters.
  Word prefix(std::size_t n) const;
};

/// g+ (attracting, sign > 0) or g- (repelling). Throws PreconditionError for
/// the identity.
BoundaryPoint fixed_point(const Word &g, int sign = 1);
/// (phi(g^m))+ for the least m >= 1 with g^m in the domain, where p = g+.
BoundaryPoint boundary_action(const FComm &phi, const BoundaryPoint &p);
/// Least m >= 1 with g^m in h.
long power_into(const SubgroupGraph &h, const Word &g);

/// "u=<word> c=<word>".
std::string to_text(const BoundaryPoint &p);
BoundaryPoint parse_boundary_point(std::string_view text, int rank);

} // namespace commsol
