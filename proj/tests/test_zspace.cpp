#include <catch_amalgamated.hpp>

#include "coindex/zspace.hpp"

using namespace coindex;

namespace {

// Circular distance on Z/q measured in grid steps.
int steps(int a, int b, int q) {
  const int d = ((a - b) % q + q) % q;
  return std::min(d, q - d);
}

}  // namespace

TEST_CASE("Zcal approximation for p = 2", "[zspace]") {
  for (std::int32_t q : {8, 16}) {
    const TorusGridSpec spec{2, q, ZcalGrid{}};
    const auto c = build_approx(spec);
    // Oracle: pairs (a, b) with circular distance >= q/4 steps (1/2 in metric units).
    std::size_t expected = 0;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        if (steps(a, b, q) >= q / 4) ++expected;
    CHECK(c.cell_count(0) == expected);
    CHECK(c.freeness().free);
    const auto b = betti_profile(spec, 2);
    REQUIRE(b.reduced.size() >= 2);
    CHECK(b.reduced[0] == 0);
    CHECK(b.reduced[1] == 1);
    for (std::size_t k = 2; k < b.reduced.size(); ++k) CHECK(b.reduced[k] == 0);
    CHECK(b.euler_identity_holds());
  }
  CHECK(build_approx({2, 8, ZcalGrid{}}).cell_count(0) == 40);
}

TEST_CASE("full torus sanity input", "[zspace]") {
  const auto b = betti_profile({2, 8, FullTorus{}}, 3);
  CHECK(b.reduced == std::vector<std::uint64_t>{0, 2, 1});
}

TEST_CASE("X(S^1,1,1/2) grid vertices match a brute-force scan", "[zspace]") {
  const TorusGridSpec spec{3, 8, XsnGrid{1, Rational(1, 2)}};
  const auto c = build_approx(spec);
  std::size_t expected = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int d = 0; d < 8; ++d)
        if (steps(a, b, 8) >= 2 && steps(b, d, 8) >= 2 && steps(d, a, 8) >= 2) ++expected;
  CHECK(c.cell_count(0) == expected);
  CHECK(c.freeness().free);
  CHECK(c.grid_dims() == 3);
}

TEST_CASE("grid vertices survive index doubling", "[zspace]") {
  for (const GridFamily fam : {GridFamily{ZcalGrid{}}, GridFamily{XsnGrid{1, Rational(1, 2)}}}) {
    const TorusGridSpec coarse{3, 8, fam};
    const auto fine = coarse.refined();
    CHECK(fine.q == 16);
    std::size_t kept = 0;
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int d = 0; d < 8; ++d) {
          if (!grid_vertex_admissible(coarse, {a, b, d})) continue;
          ++kept;
          CHECK(grid_vertex_admissible(fine, {2 * a, 2 * b, 2 * d}));
        }
    CHECK(kept > 0);
  }
}

TEST_CASE("canonical P2 certificate", "[zspace]") {
  for (std::int32_t q : {8, 16}) {
    const auto target = build_approx({2, q, ZcalGrid{}});
    const auto cert = canonical_certificate_P2(q);
    IndexReport r(2, "P_2(Zcal) approx");
    const auto v = verify_certificate(cert, target, r);
    INFO(v.witness);
    CHECK(v.accepted);
    CHECK(r.coind_lower() == 1);
  }
  const auto target = build_approx({2, 8, ZcalGrid{}});
  auto bad = canonical_certificate_P2(8);
  for (std::uint64_t x = 0; x < 8; ++x) bad.vertex_map[x] = x + ((x + 1) % 8) * 8;
  const auto v = verify_certificate(bad, target);
  CHECK_FALSE(v.accepted);
  CHECK_FALSE(v.witness.empty());
}

TEST_CASE("stability between q and 2q", "[zspace]") {
  const auto s = stability_check({2, 8, ZcalGrid{}}, 2);
  CHECK(s.agree);
  CHECK(s.fine.q == 16);
  CHECK(s.fine_betti.reduced == s.coarse_betti.reduced);
}

TEST_CASE("grid spec validation", "[zspace]") {
  CHECK_THROWS_AS(build_approx({2, 8, XsnGrid{1, Rational(1, 3)}}), ShapeError);
  CHECK_THROWS_AS(build_approx({2, 6, ZcalGrid{}}), ShapeError);
  CHECK_THROWS_AS(build_approx({4, 8, ZcalGrid{}}), ShapeError);
  CHECK_THROWS_AS(build_approx({2, 8, XsnGrid{0, Rational(1, 2)}}), ShapeError);
  CHECK_THROWS_AS(build_approx({5, 16, ZcalGrid{}}, 1000), ResourceError);
}

TEST_CASE("stability verdicts for p = 3 and the unconstrained torus", "[zspace]") {
  const auto s = stability_check({3, 8, ZcalGrid{}}, 3);
  // Recorded either way; both profiles must be internally consistent.
  CHECK(s.coarse_betti.euler_identity_holds());
  CHECK(s.fine_betti.euler_identity_holds());
  CHECK(build_approx({3, 16, ZcalGrid{}}).freeness().free);
  UNSCOPED_INFO("Zcal p=3 stability at (8,16): " << (s.agree ? "agree" : "disagree"));
  CHECK(stability_check({2, 8, FullTorus{}}, 2).agree);
}
