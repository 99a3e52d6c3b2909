#pragma once

// Grid approximations of P_p(Zcal) and P_p(X(S^N, 1, delta)) as cubical
// complexes inside the torus (Z/q)^{N p}. A cube is kept when all of its
// corners satisfy the family predicate read cyclically; this is an inner
// approximation at resolution q, not a homotopy model.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coindex/complex.hpp"
#include "coindex/homology.hpp"
#include "coindex/index.hpp"
#include "coindex/subshift.hpp"

namespace coindex {

struct ZcalGrid {
  friend bool operator==(const ZcalGrid&, const ZcalGrid&) = default;
};

struct XsnGrid {
  int N = 1;
  Rational delta{1, 2};
  friend bool operator==(const XsnGrid&, const XsnGrid&) = default;
};

/// The whole torus with the rotation action; used as a homology sanity input.
struct FullTorus {
  friend bool operator==(const FullTorus&, const FullTorus&) = default;
};

using GridFamily = std::variant<ZcalGrid, XsnGrid, FullTorus>;

struct TorusGridSpec {
  unsigned p = 2;
  std::int32_t q = 8;
  GridFamily family = ZcalGrid{};

  int letter_arity() const {
    if (const auto* x = std::get_if<XsnGrid>(&family)) return x->N;
    return 1;
  }

  std::string describe() const {
    std::string f = "Zcal";
    if (const auto* x = std::get_if<XsnGrid>(&family))
      f = "X(S^" + std::to_string(x->N) + ",1," + to_string(x->delta) + ")";
    else if (std::holds_alternative<FullTorus>(family))
      f = "full torus";
    return f + " p=" + std::to_string(p) + " q=" + std::to_string(q);
  }

  void validate() const {
    require_prime(p);
    if (q < 8 || q % 4 != 0) throw ShapeError("torus grid needs q >= 8 with 4 | q, got " + std::to_string(q));
    if (const auto* x = std::get_if<XsnGrid>(&family)) {
      if (x->N < 1) throw ShapeError("X(S^N,1,delta) needs N >= 1");
      if (x->delta <= 0 || x->delta > 1) throw ShapeError("delta must lie in (0, 1]");
      // delta must be a multiple of the grid step 2/q.
      const Rational steps = x->delta * Rational(q, 2);
      if (steps.denominator() != 1)
        throw ShapeError("delta " + to_string(x->delta) + " is not a multiple of the grid step 2/" + std::to_string(q));
    }
  }

  /// The same family on the finer grid 2q.
  TorusGridSpec refined() const { return {p, 2 * q, family}; }
};

namespace detail {

inline std::optional<SubshiftSpec> letter_spec(const TorusGridSpec& s) {
  if (std::holds_alternative<ZcalGrid>(s.family)) return SubshiftSpec::zcal(s.q);
  if (const auto* x = std::get_if<XsnGrid>(&s.family))
    return SubshiftSpec::xgm(Alphabet::power(Alphabet::circle(s.q), x->N), 1, x->delta);
  return std::nullopt;
}

/// Grid vertex -> cyclic word of p letters, each letter a block of N coordinates.
inline CyclicWord vertex_word(const TorusGridSpec& s, const std::vector<std::int32_t>& coords) {
  const auto n = static_cast<std::size_t>(s.letter_arity());
  std::vector<Element> letters;
  for (std::size_t i = 0; i < s.p; ++i)
    letters.emplace_back(std::vector<std::int32_t>(coords.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                   coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  return CyclicWord(std::move(letters));
}

}  // namespace detail

inline std::uint64_t default_cell_cap() { return 2'000'000; }

/// Vertex predicate of the approximation.
inline bool grid_vertex_admissible(const TorusGridSpec& spec, const std::vector<std::int32_t>& coords) {
  const auto ls = detail::letter_spec(spec);
  if (!ls) return true;
  return satisfies(*ls, detail::vertex_word(spec, coords));
}

/// Cubical complex of cubes whose corners all satisfy the predicate; the
/// action is the shift, moving letter i+1 to slot i.
inline CubicalComplex build_approx(const TorusGridSpec& spec, std::uint64_t cell_cap = default_cell_cap()) {
  spec.validate();
  const auto n = static_cast<std::uint32_t>(spec.letter_arity());
  const int dims = static_cast<int>(n * spec.p);
  std::vector<std::uint32_t> perm(static_cast<std::size_t>(dims));
  for (std::uint32_t i = 0; i < spec.p; ++i)
    for (std::uint32_t c = 0; c < n; ++c) perm[i * n + c] = ((i + spec.p - 1) % spec.p) * n + c;
  const auto ls = detail::letter_spec(spec);
  return CubicalComplex::from_vertex_predicate(
      spec.p, spec.q, dims, std::move(perm),
      [&](const CubicalComplex::Coords& c) { return !ls || satisfies(*ls, detail::vertex_word(spec, c)); },
      cell_cap);
}

inline BettiVector betti_profile(const TorusGridSpec& spec, std::uint32_t field,
                                 std::uint64_t cell_cap = default_cell_cap()) {
  return betti_of(build_approx(spec, cell_cap), field);
}

struct StabilityReport {
  TorusGridSpec coarse;
  TorusGridSpec fine;
  BettiVector coarse_betti;
  BettiVector fine_betti;
  bool agree = false;
};

/// Reduced Betti numbers at q and 2q; disagreement is reported as such.
inline StabilityReport stability_check(const TorusGridSpec& spec, std::uint32_t field,
                                       std::uint64_t cell_cap = default_cell_cap()) {
  StabilityReport r{spec, spec.refined(), {}, {}, false};
  r.coarse_betti = betti_profile(r.coarse, field, cell_cap);
  r.fine_betti = betti_profile(r.fine, field, cell_cap);
  r.agree = r.coarse_betti.reduced == r.fine_betti.reduced;
  return r;
}

/// E_1 Z_2 certificate for the p = 2 Zcal approximation: the q-cycle with
/// the antipodal action, mapped by x -> (x, x + q/2). Antipodal points sit at
/// distance exactly 1, and x + q = x makes the antipode go to the swap.
inline EquivariantMapCert canonical_certificate_P2(std::int32_t q) {
  const TorusGridSpec spec{2, q, ZcalGrid{}};
  spec.validate();
  EquivariantMapCert cert;
  cert.p = 2;
  cert.n = 1;
  cert.domain = "cycle(" + std::to_string(q) + ")";
  cert.target_ref = "approx-z:" + spec.describe();
  for (std::int32_t x = 0; x < q; ++x) {
    const auto y = (x + q / 2) % q;
    cert.vertex_map.push_back(static_cast<std::uint64_t>(x) + static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(q));
  }
  return cert;
}

}  // namespace coindex
