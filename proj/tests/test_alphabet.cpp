#include <catch_amalgamated.hpp>

#include "coindex/alphabet.hpp"

using namespace coindex;

TEST_CASE("group operations reduce residues", "[alphabet]") {
  const auto z3 = Alphabet::cyclic(3);
  CHECK(add(z3, Element{2}, Element{2}) == Element{1});
  for (std::int32_t x = 0; x < 3; ++x) CHECK(sub(z3, Element{x}, Element{x}) == Element{0});

  const auto s8 = Alphabet::circle(8);
  CHECK(sub(s8, Element{1}, Element{5}) == Element{4});

  const auto s2 = Alphabet::parse("S^2:q=8");
  CHECK(add(s2, Element{7, 3}, Element{2, 6}) == Element{1, 1});
}

TEST_CASE("mismatched letters are shape errors", "[alphabet]") {
  const auto z3 = Alphabet::cyclic(3);
  CHECK_THROWS_AS(add(z3, Element{3}, Element{0}), ShapeError);
  CHECK_THROWS_AS(invariant_metric(z3, Element{0, 0}, Element{0}), ShapeError);
  CHECK_THROWS_AS(Alphabet::circle(6), ShapeError);
  CHECK_THROWS_AS(Alphabet::cyclic(1), ShapeError);
  CHECK_THROWS_AS(Alphabet::parse("T7"), ShapeError);
}

TEST_CASE("metric values", "[alphabet]") {
  CHECK(invariant_metric(Alphabet::cyclic(3), Element{0}, Element{2}) == Rational(1));
  CHECK(invariant_metric(Alphabet::circle(8), Element{0}, Element{5}) == Rational(3, 4));
  CHECK(invariant_metric(Alphabet::circle(8), Element{0}, Element{4}) == Rational(1));
  CHECK(invariant_metric(Alphabet::parse("S^2:q=8"), Element{0, 0}, Element{1, 4}) == Rational(1));
  CHECK(Alphabet::circle(12).diameter() == Rational(1));
}

TEST_CASE("circle grid metric matches the arc-length table", "[alphabet]") {
  // Oracle: min over lifts |x - y - 2n| with x = 2i/q, y = 2j/q, n in {-1, 0, 1}.
  const std::int32_t q = 8;
  const auto s = Alphabet::circle(q);
  for (std::int32_t i = 0; i < q; ++i)
    for (std::int32_t j = 0; j < q; ++j) {
      Rational best(100);
      for (int n = -1; n <= 1; ++n) {
        Rational d = Rational(2 * i, q) - Rational(2 * j, q) - Rational(2 * n);
        if (d < 0) d = -d;
        best = std::min(best, d);
      }
      CHECK(invariant_metric(s, Element{i}, Element{j}) == best);
    }
}

TEST_CASE("metric axioms and translation invariance hold exhaustively", "[alphabet][property]") {
  std::vector<Alphabet> alphabets;
  for (std::int32_t n = 2; n <= 24; ++n) alphabets.push_back(Alphabet::cyclic(n));
  for (std::int32_t q = 4; q <= 24; q += 4) alphabets.push_back(Alphabet::circle(q));
  alphabets.push_back(Alphabet::parse("S^2:q=4"));
  alphabets.push_back(Alphabet::parse("Z3*S:q=4"));

  for (const auto& a : alphabets) {
    const auto letters = all_letters(a);
    std::size_t bad = 0;
    for (const auto& x : letters)
      for (const auto& y : letters) {
        const auto dxy = invariant_metric(a, x, y);
        bad += dxy != invariant_metric(a, y, x);
        bad += (dxy == Rational(0)) != (x == y);
        bad += dxy > a.diameter();
        for (const auto& g : letters) bad += invariant_metric(a, add(a, x, g), add(a, y, g)) != dxy;
        if (letters.size() <= 16)
          for (const auto& z : letters) bad += invariant_metric(a, x, z) > dxy + invariant_metric(a, y, z);
      }
    INFO(a.to_string());
    CHECK(bad == 0);
  }
}

TEST_CASE("alphabet text form round-trips", "[alphabet]") {
  for (const char* text : {"Z3", "S:q=8", "S^2:q=8", "Z3^2", "Z3*S:q=8"}) {
    const auto a = Alphabet::parse(text);
    CHECK(a.to_string() == text);
    CHECK(Alphabet::parse(a.to_string()) == a);
  }
  const auto a = Alphabet::parse("S^2:q=8");
  CHECK(a.arity() == 2);
  CHECK(a.size() == 64);
  for (std::uint64_t c = 0; c < a.size(); ++c) CHECK(a.encode(a.decode(c)) == c);
}

TEST_CASE("rational parsing", "[alphabet]") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK_THROWS_AS(parse_rational("1/0"), ShapeError);
  CHECK_THROWS_AS(parse_rational("x"), ShapeError);
}
