#pragma once

// Z_p index / coindex bookkeeping: E_n recognition, exact values for joins of
// finite free Z_p-sets, rule-based bounds, and combinatorial verification of
// equivariant-map certificates out of the standard E_n model.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "coindex/complex.hpp"
#include "coindex/homology.hpp"

namespace coindex {

inline constexpr int kInfinity = std::numeric_limits<int>::max();

inline std::string level_to_string(int v) { return v == kInfinity ? "inf" : std::to_string(v); }

/// Outcome of testing whether a complex is an E_n Z_p-space.
struct EnReport {
  int n = 0;
  bool free = false;
  std::string free_witness;
  int dimension = -1;
  BettiVector betti;
  int homology_connectivity = -1;
  /// Free, dimension n, and reduced homology vanishing through degree n-1.
  bool homology_consistent = false;
  /// Additionally a join of n+1 nonempty finite free Z_p-sets, where
  /// (n-1)-connectedness holds by construction rather than only homologically.
  bool certified = false;
  std::string evidence;
};

/// Homology is taken over F_field (field = 0 means the acting prime).
inline EnReport is_EnZp(const EquivariantComplex& c, int n, std::uint32_t field = 0) {
  EnReport r;
  r.n = n;
  const auto fr = verify_free_action(c);
  r.free = fr.free;
  r.free_witness = fr.witness;
  r.dimension = dimension(c);
  r.betti = betti_of(c, field == 0 ? prime(c) : field);
  r.homology_connectivity = connectivity(r.betti);
  r.homology_consistent = r.free && r.dimension == n && r.homology_connectivity >= n - 1;

  const auto* s = std::get_if<SimplicialComplex>(&c);
  const bool structural = s != nullptr && s->join_factors() &&
                          s->join_factors()->size() == static_cast<std::size_t>(n + 1) &&
                          std::all_of(s->join_factors()->begin(), s->join_factors()->end(),
                                      [](std::size_t k) { return k > 0; });
  r.certified = r.homology_consistent && structural;
  if (r.certified) {
    r.evidence = "join of " + std::to_string(n + 1) + " nonempty finite free Z_" + std::to_string(prime(c)) +
                 "-sets; connectivity holds by construction and reduced homology agrees";
  } else if (r.homology_consistent) {
    r.evidence = "free, dimension and F_" + std::to_string(r.betti.field) +
                 " homology consistent with E_n; simple connectivity not checked";
  } else if (!r.free) {
    r.evidence = "action not free at " + fr.witness;
  } else if (r.dimension != n) {
    r.evidence = "dimension " + std::to_string(r.dimension) + " differs from " + std::to_string(n);
  } else {
    r.evidence = "reduced homology nonzero below degree " + std::to_string(n);
  }
  return r;
}

/// Lower and upper bounds for ind_p and coind_p of one space, with the rule
/// behind each change. ind >= coind is propagated automatically.
class IndexReport {
 public:
  IndexReport(unsigned p, std::string subject) : p_(p), subject_(std::move(subject)) {}

  /// All four values -1: the empty-space convention.
  static IndexReport empty_space(unsigned p, std::string subject) {
    IndexReport r(p, std::move(subject));
    r.set_exact(-1, "empty space: ind = coind = -1 by convention");
    return r;
  }

  unsigned p() const noexcept { return p_; }
  const std::string& subject() const noexcept { return subject_; }
  int coind_lower() const noexcept { return coind_lower_; }
  int coind_upper() const noexcept { return coind_upper_; }
  int ind_lower() const noexcept { return ind_lower_; }
  int ind_upper() const noexcept { return ind_upper_; }
  const std::vector<std::string>& provenance() const noexcept { return provenance_; }

  bool exact() const noexcept {
    return coind_lower_ == coind_upper_ && ind_lower_ == ind_upper_ && coind_lower_ == ind_lower_ &&
           coind_lower_ != kInfinity;
  }

  void raise_coind_lower(int v, const std::string& rule) {
    if (v <= coind_lower_) {
      provenance_.push_back(rule + " (coind >= " + std::to_string(v) + ", no change)");
      return;
    }
    coind_lower_ = v;
    ind_lower_ = std::max(ind_lower_, coind_lower_);
    provenance_.push_back(rule + " => coind >= " + std::to_string(v));
    check();
  }

  void lower_ind_upper(int v, const std::string& rule) {
    if (v >= ind_upper_) {
      provenance_.push_back(rule + " (ind <= " + std::to_string(v) + ", no change)");
      return;
    }
    ind_upper_ = v;
    coind_upper_ = std::min(coind_upper_, ind_upper_);
    provenance_.push_back(rule + " => ind <= " + std::to_string(v));
    check();
  }

  void set_exact(int v, const std::string& rule) {
    coind_lower_ = ind_lower_ = std::max(coind_lower_, v);
    coind_upper_ = ind_upper_ = std::min(ind_upper_, v);
    provenance_.push_back(rule + " => ind = coind = " + std::to_string(v));
    check();
  }

  /// Throws when the bounds contradict each other.
  void check() const {
    if (!(coind_lower_ <= coind_upper_ && ind_lower_ <= ind_upper_ && coind_upper_ <= ind_upper_ &&
          coind_lower_ <= ind_lower_ && coind_lower_ >= -1))
      throw Error("inconsistent", "index report for " + subject_ + " is inconsistent: coind in [" +
                                      level_to_string(coind_lower_) + "," + level_to_string(coind_upper_) +
                                      "], ind in [" + level_to_string(ind_lower_) + "," +
                                      level_to_string(ind_upper_) + "]");
  }

 private:
  unsigned p_;
  std::string subject_;
  int coind_lower_ = -1;
  int coind_upper_ = kInfinity;
  int ind_lower_ = -1;
  int ind_upper_ = kInfinity;
  std::vector<std::string> provenance_;
};

namespace detail {

inline void require_finite_free(const SimplicialComplex& s) {
  if (s.dimension() > 0)
    throw ShapeError("expected a finite Z_p-set (dimension <= 0), got dimension " + std::to_string(s.dimension()));
  const auto fr = s.freeness();
  if (!fr.free) throw NotFreeError("Z_" + std::to_string(s.prime()) + "-set is not free", fr.witness);
}

}  // namespace detail

/// A nonempty finite free Z_p-set has ind = coind = 0: one orbit receives
/// Z_p, and orbit representatives give a map back to Z_p.
inline IndexReport exact_index_finite_free(const SimplicialComplex& s, std::string subject = "finite free set") {
  detail::require_finite_free(s);
  if (s.vertex_count() == 0) return IndexReport::empty_space(s.prime(), std::move(subject));
  IndexReport r(s.prime(), std::move(subject));
  r.set_exact(0, "finite free Z_p-set with " + std::to_string(s.vertex_count() / s.prime()) +
                     " orbits: orbit inclusion and orbit-representative maps to and from Z_p");
  return r;
}

/// ind = coind = K for a join of K+1 nonempty finite free Z_p-sets, which is
/// an E_K Z_p-space by construction. Empty factors are join identities.
inline IndexReport index_of_join_of_finite(const std::vector<SimplicialComplex>& factors,
                                           std::string subject = "join of finite free sets") {
  if (factors.empty()) throw ShapeError("join needs at least one factor");
  const auto p = factors.front().prime();
  std::size_t nonempty = 0;
  std::size_t smallest = ~std::size_t{0};
  for (const auto& f : factors) {
    if (f.prime() != p) throw ShapeError("factors act with different primes");
    detail::require_finite_free(f);
    if (f.vertex_count() > 0) {
      ++nonempty;
      smallest = std::min(smallest, f.vertex_count());
    }
  }
  if (nonempty == 0) return IndexReport::empty_space(p, std::move(subject));
  const int k = static_cast<int>(nonempty) - 1;
  IndexReport r(p, std::move(subject));
  if (nonempty < factors.size())
    r.raise_coind_lower(-1, std::to_string(factors.size() - nonempty) + " empty factor(s) dropped as join identities");
  r.set_exact(k, "join of " + std::to_string(nonempty) + " nonempty finite free Z_" + std::to_string(p) +
                     "-sets (smallest has " + std::to_string(smallest) + " points) is an E_" + std::to_string(k) +
                     " Z_" + std::to_string(p) + "-space (structural)");
  return r;
}

/// coind(X * Y) >= coind(X) + coind(Y) + 1.
inline int coindex_join_lower(const IndexReport& x, const IndexReport& y) {
  if (x.p() != y.p()) throw ShapeError("coindex join rule needs equal primes");
  return x.coind_lower() + y.coind_lower() + 1;
}

/// Report for X * Y seeded by the join superadditivity rule.
inline IndexReport join_report(const IndexReport& x, const IndexReport& y) {
  IndexReport r(x.p(), "(" + x.subject() + ") * (" + y.subject() + ")");
  r.raise_coind_lower(coindex_join_lower(x, y), "coindex join superadditivity from coind(" + x.subject() +
                                                    ") >= " + std::to_string(x.coind_lower()) + " and coind(" +
                                                    y.subject() + ") >= " + std::to_string(y.coind_lower()));
  return r;
}

/// Evidence that an equivariant continuous map X -> Y exists.
struct MapEvidence {
  enum class Kind { identity, structural, certificate, claimed };

  Kind kind = Kind::claimed;
  unsigned p = 0;
  std::string description;
  bool verified = false;

  static MapEvidence identity(unsigned p) { return {Kind::identity, p, "identity map", true}; }
  /// A map that is equivariant by construction (sliding-block codes and the like).
  static MapEvidence structural(unsigned p, std::string name) { return {Kind::structural, p, std::move(name), true}; }
  /// Asserted but not checked; coindex_transport refuses these.
  static MapEvidence claimed(unsigned p, std::string name) { return {Kind::claimed, p, std::move(name), false}; }
};

/// Equivariant maps cannot lower the coindex: coind(Y) >= coind(X).
inline void coindex_transport(const MapEvidence& f, const IndexReport& x, IndexReport& y) {
  if (!f.verified) throw Error("unverified", "refusing to transport a bound along unverified map '" + f.description + "'");
  if (f.p != x.p() || x.p() != y.p()) throw ShapeError("coindex transport needs a single prime");
  y.raise_coind_lower(x.coind_lower(), "transport along " + f.description + " from " + x.subject());
}

/// A simplicial equivariant map from an E_n Z_p model into a target complex.
/// Domain models:
///   "join(Zp)^{n+1}"  the join of n+1 copies of Z_p; vertex f*p + g is
///                     element g of copy f, acted on by g -> g+1.
///   "cycle(v)"        the v-cycle rotated by v/p; accepted only for n = 1,
///                     where 0-connectedness is decided by homology.
/// vertex_map[i] is a target vertex: a vertex index for simplicial targets,
/// a grid vertex id for cubical ones.
struct EquivariantMapCert {
  unsigned p = 2;
  int n = 0;
  std::string domain = "join(Zp)^{n+1}";
  std::vector<std::uint64_t> vertex_map;
  std::string target_ref;
};

inline SimplicialComplex certificate_domain(const EquivariantMapCert& cert) {
  require_prime(cert.p);
  if (cert.n < 0) throw ShapeError("certificate n must be >= 0");
  if (cert.domain == "join(Zp)^{n+1}")
    return join_complexes(std::vector<SimplicialComplex>(static_cast<std::size_t>(cert.n + 1),
                                                         SimplicialComplex::cyclic_group(cert.p)));
  if (cert.domain.rfind("cycle(", 0) == 0 && cert.domain.back() == ')') {
    const auto v = std::stoul(cert.domain.substr(6, cert.domain.size() - 7));
    return SimplicialComplex::cycle(cert.p, static_cast<std::uint32_t>(v));
  }
  throw ShapeError("unknown certificate domain '" + cert.domain + "'");
}

struct CertificateVerdict {
  bool accepted = false;
  /// First violated vertex or cell when rejected.
  std::string witness;
  std::vector<std::string> checks;
};

namespace detail {

inline bool target_has_vertex(const EquivariantComplex& t, std::uint64_t v) {
  if (const auto* s = std::get_if<SimplicialComplex>(&t)) return v < s->vertex_count();
  return std::get<CubicalComplex>(t).has_vertex(v);
}

inline std::uint64_t target_act(const EquivariantComplex& t, std::uint64_t v) {
  if (const auto* s = std::get_if<SimplicialComplex>(&t)) return s->generator()[v];
  return std::get<CubicalComplex>(t).act_vertex(v);
}

inline bool target_spans_cell(const EquivariantComplex& t, std::vector<std::uint64_t> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  if (const auto* s = std::get_if<SimplicialComplex>(&t)) {
    std::vector<SimplicialComplex::Vertex> c(vs.begin(), vs.end());
    return s->find(c).has_value();
  }
  return std::get<CubicalComplex>(t).smallest_cell_containing(vs).has_value();
}

inline std::string describe_target_vertex(const EquivariantComplex& t, std::uint64_t v) {
  if (const auto* s = std::get_if<SimplicialComplex>(&t))
    return v < s->vertex_count() ? s->labels()[v] : "#" + std::to_string(v);
  return std::get<CubicalComplex>(t).describe_vertex(v);
}

}  // namespace detail

/// Checks (i) the domain is a valid E_n Z_p model, (ii) every domain simplex
/// lands in a single closed target cell, (iii) map(pi v) = pi' map(v).
inline CertificateVerdict verify_certificate(const EquivariantMapCert& cert, const EquivariantComplex& target) {
  CertificateVerdict v;
  auto reject = [&](std::string why) {
    v.accepted = false;
    v.witness = std::move(why);
    return v;
  };
  if (prime(target) != cert.p) return reject("target acts with p = " + std::to_string(prime(target)));
  const auto tf = verify_free_action(target);
  if (!tf.free) return reject("target action is not free at " + tf.witness);
  v.checks.push_back("target action free");

  std::optional<SimplicialComplex> dom;
  try {
    dom = certificate_domain(cert);
  } catch (const Error& e) {
    return reject(std::string("domain: ") + e.what());
  }
  if (cert.domain != "join(Zp)^{n+1}") {
    if (cert.n != 1) return reject("non-standard domain models are accepted only for n = 1");
    const auto en = is_EnZp(*dom, 1);
    if (!en.homology_consistent) return reject("domain is not an E_1 model: " + en.evidence);
    v.checks.push_back("domain " + cert.domain + " is free, 1-dimensional and connected (E_1 Z_" +
                       std::to_string(cert.p) + ")");
  } else {
    v.checks.push_back("domain is the standard model (Z_" + std::to_string(cert.p) + ")^{*" +
                       std::to_string(cert.n + 1) + "}");
  }

  if (cert.vertex_map.size() != dom->vertex_count())
    return reject("vertex map has " + std::to_string(cert.vertex_map.size()) + " entries for " +
                  std::to_string(dom->vertex_count()) + " domain vertices");
  for (std::size_t i = 0; i < cert.vertex_map.size(); ++i)
    if (!detail::target_has_vertex(target, cert.vertex_map[i]))
      return reject("domain vertex " + dom->labels()[i] + " maps to " +
                    detail::describe_target_vertex(target, cert.vertex_map[i]) + ", not a target vertex");

  for (int k = 1; k <= dom->dimension(); ++k)
    for (std::size_t i = 0; i < dom->cell_count(k); ++i) {
      std::vector<std::uint64_t> img;
      for (auto u : dom->cell(k, i)) img.push_back(cert.vertex_map[u]);
      if (!detail::target_spans_cell(target, img))
        return reject("domain cell " + dom->describe_cell(k, i) + " is not mapped into a target cell");
    }
  v.checks.push_back("every domain cell maps into a closed target cell");

  for (std::size_t i = 0; i < cert.vertex_map.size(); ++i) {
    const auto lhs = cert.vertex_map[dom->generator()[i]];
    const auto rhs = detail::target_act(target, cert.vertex_map[i]);
    if (lhs != rhs)
      return reject("equivariance fails at domain vertex " + dom->labels()[i] + ": f(T v) = " +
                    detail::describe_target_vertex(target, lhs) + " but T f(v) = " +
                    detail::describe_target_vertex(target, rhs));
  }
  v.checks.push_back("vertex map commutes with the actions");
  v.accepted = true;
  return v;
}

/// As above; on acceptance raises report's coindex lower bound to n.
inline CertificateVerdict verify_certificate(const EquivariantMapCert& cert, const EquivariantComplex& target,
                                             IndexReport& report) {
  auto v = verify_certificate(cert, target);
  if (v.accepted)
    report.raise_coind_lower(cert.n, "verified equivariant map certificate from E_" + std::to_string(cert.n) +
                                         " model " + cert.domain);
  return v;
}

inline MapEvidence evidence_from(const CertificateVerdict& v, const EquivariantMapCert& cert) {
  return {MapEvidence::Kind::certificate, cert.p, "certificate " + cert.domain + " -> " + cert.target_ref, v.accepted};
}

/// ind <= dim for a free complex. Standard theory, not verified here.
inline int ind_upper_by_dimension(const EquivariantComplex& c) {
  const auto fr = verify_free_action(c);
  if (!fr.free) throw NotFreeError("dimension bound needs a free action", fr.witness);
  return dimension(c);
}

inline void apply_dimension_bound(const EquivariantComplex& c, IndexReport& r) {
  r.lower_ind_upper(ind_upper_by_dimension(c),
                    "dimension bound ind <= dim for free complexes (standard theory, not verified internally)");
}

}  // namespace coindex
