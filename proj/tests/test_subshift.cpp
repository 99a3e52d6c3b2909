#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "coindex/subshift.hpp"

using namespace coindex;

namespace {

CyclicWord z3_word(std::initializer_list<std::int32_t> xs) {
  std::vector<Element> letters;
  for (auto x : xs) letters.push_back(Element{x});
  return CyclicWord(std::move(letters));
}

// Brute-force oracle for Sigma_m: all 3^L words with x_n != x_{n + m!} (mod L).
std::uint64_t brute_force_sigma(int m, int length) {
  std::uint64_t step = 1;
  for (int i = 2; i <= m; ++i) step *= static_cast<std::uint64_t>(i);
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= 3;
  std::uint64_t count = 0;
  std::vector<int> x(static_cast<std::size_t>(length));
  for (std::uint64_t code = 0; code < total; ++code) {
    auto c = code;
    for (auto& v : x) {
      v = static_cast<int>(c % 3);
      c /= 3;
    }
    bool ok = true;
    for (int n = 0; n < length && ok; ++n)
      ok = x[static_cast<std::size_t>(n)] != x[(static_cast<std::uint64_t>(n) + step) % static_cast<std::uint64_t>(length)];
    count += ok ? 1 : 0;
  }
  return count;
}

// Brute-force oracle for words over an arbitrary alphabet whose letters step
// apart are >= delta apart, evaluated straight from the metric.
std::uint64_t brute_force_xgm(const Alphabet& a, std::uint64_t step, const Rational& delta, int length) {
  const auto letters = all_letters(a);
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= letters.size();
  std::uint64_t count = 0;
  std::vector<std::size_t> x(static_cast<std::size_t>(length));
  for (std::uint64_t code = 0; code < total; ++code) {
    auto c = code;
    for (auto& v : x) {
      v = c % letters.size();
      c /= letters.size();
    }
    bool ok = true;
    for (std::size_t n = 0; n < x.size() && ok; ++n)
      ok = invariant_metric(a, letters[x[n]], letters[x[(n + step) % x.size()]]) >= delta;
    count += ok ? 1 : 0;
  }
  return count;
}

}  // namespace

TEST_CASE("satisfies reads constraints cyclically", "[subshift]") {
  const auto s1 = SubshiftSpec::sigma(1);
  CHECK(satisfies(s1, z3_word({0, 1, 2})));
  CHECK_FALSE(satisfies(s1, z3_word({0, 0, 1})));
  CHECK_FALSE(satisfies(s1, z3_word({0, 1, 0})) == true);  // wrap pair (x_2, x_0) = (0, 0)

  const auto z = SubshiftSpec::zcal(8);
  CHECK(satisfies(z, CyclicWord({Element{0}, Element{4}})));
  CHECK_FALSE(satisfies(z, CyclicWord({Element{0}, Element{1}})));

  const auto y = SubshiftSpec::ycal(8);
  CHECK(satisfies(y, CyclicWord({Element{0}, Element{4}})));
  CHECK_FALSE(satisfies(y, CyclicWord({Element{0}, Element{3}})));

  CHECK_THROWS_AS(satisfies(s1, CyclicWord({Element{0, 0}})), ShapeError);
  CHECK_THROWS_AS(SubshiftSpec(Alphabet::cyclic(3), ZcalFamily{}), ShapeError);
  CHECK_THROWS_AS(SubshiftSpec::xgm(Alphabet::circle(8), 1, Rational(3, 2)), ShapeError);
}

TEST_CASE("shift is a group action on cyclic words", "[subshift]") {
  const auto w = z3_word({0, 1, 2});
  CHECK(shift(w, 1) == z3_word({1, 2, 0}));
  CHECK(shift(w, 3) == w);
  CHECK(shift(w, -1) == z3_word({2, 0, 1}));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto a = static_cast<std::int64_t>(rng() % 11) - 5;
    const auto b = static_cast<std::int64_t>(rng() % 11) - 5;
    CHECK(shift(shift(w, a), b) == shift(w, a + b));
  }
}

TEST_CASE("Sigma_1 periodic points", "[subshift]") {
  const auto s1 = SubshiftSpec::sigma(1);
  CHECK(enumerate_periodic(s1, 1).empty());
  const auto p3 = enumerate_periodic(s1, 3);
  REQUIRE(p3.size() == 6);
  for (const auto& w : p3) CHECK(satisfies(s1, w));
  CHECK(std::is_sorted(p3.begin(), p3.end()));

  CHECK(count_periodic(s1, 2) == 6);
  CHECK(count_periodic(s1, 5) == 30);
  CHECK(count_periodic(s1, 7) == 126);
  CHECK(count_periodic(s1, 11) == 2046);
}

TEST_CASE("proper-coloring law for Sigma_1", "[subshift][property]") {
  const auto s1 = SubshiftSpec::sigma(1);
  for (int length = 2; length <= 9; ++length) {
    const auto oracle = brute_force_sigma(1, length);
    const std::int64_t law = (1LL << length) + ((length % 2 == 0) ? 2 : -2);
    CHECK(static_cast<std::int64_t>(oracle) == law);
    CHECK(count_periodic(s1, static_cast<std::size_t>(length)) == law);
    CHECK(enumerate_periodic(s1, static_cast<std::size_t>(length)).size() == oracle);
  }
}

TEST_CASE("recoding bijection for Sigma_2", "[subshift]") {
  const auto s2 = SubshiftSpec::sigma(2);
  const auto direct = brute_force_sigma(2, 5);
  CHECK(direct == 30);
  const auto recoded = enumerate_periodic(s2, 5);
  EnumerateOptions plain;
  plain.use_recoding = false;
  const auto backtracked = enumerate_periodic(s2, 5, plain);
  CHECK(recoded.size() == 30);
  CHECK(recoded == backtracked);
  for (const auto& w : recoded) CHECK(satisfies(s2, w));
  CHECK(enumerate_periodic(s2, 7).size() == enumerate_periodic(SubshiftSpec::sigma(1), 7).size());
}

TEST_CASE("count and enumeration agree exhaustively", "[subshift][property]") {
  // Alphabets of order <= 8, periods <= 7, a spread of thresholds and m.
  const std::vector<std::pair<Alphabet, std::vector<Rational>>> cases = {
      {Alphabet::cyclic(3), {Rational(1, 2)}},
      {Alphabet::cyclic(5), {Rational(1)}},
      {Alphabet::circle(4), {Rational(1, 2), Rational(1)}},
      {Alphabet::circle(8), {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}},
  };
  for (const auto& [alphabet, deltas] : cases)
    for (const auto& delta : deltas)
      for (int m = 1; m <= 3; ++m)
        for (std::size_t p = 1; p <= 7; ++p) {
          const auto spec = SubshiftSpec::xgm(alphabet, m, delta);
          INFO(spec.describe() << " p=" << p);
          const auto counted = count_periodic(spec, p);
          if (counted > 200000) continue;  // keeps the materialized word set small
          const auto words = enumerate_periodic(spec, p);
          CHECK(counted == words.size());
          if (std::pow(static_cast<double>(alphabet.size()), static_cast<double>(p)) <= 40000)
            CHECK(words.size() == brute_force_xgm(alphabet, factorial(m) % p, delta, static_cast<int>(p)));
        }
}

TEST_CASE("non-coprime counts", "[subshift]") {
  const auto s2 = SubshiftSpec::sigma(2);
  // m! = 2 and p = 4: two independent 2-cycles, each with 6 proper colorings.
  CHECK(count_periodic(s2, 4) == 36);
  CHECK(brute_force_sigma(2, 4) == 36);
  CHECK(enumerate_periodic(s2, 4).size() == 36);
  CountOptions strict;
  strict.split_cycles = false;
  CHECK_THROWS_WITH(count_periodic(s2, 4, strict), Catch::Matchers::ContainsSubstring("gcd"));
  CHECK_THROWS_AS(count_periodic(SubshiftSpec::zcal(8), 3), ShapeError);
}

TEST_CASE("enumeration caps are enforced", "[subshift]") {
  EnumerateOptions tight;
  tight.node_cap = 100;
  CHECK_THROWS_AS(enumerate_periodic(SubshiftSpec::sigma(1), 11, tight), ResourceError);
  EnumerateOptions small_alphabet;
  small_alphabet.alphabet_cap = 4;
  CHECK_THROWS_AS(enumerate_periodic(SubshiftSpec::zcal(8), 2, small_alphabet), ResourceError);
}

TEST_CASE("Zcal enumeration on a coarse grid", "[subshift]") {
  const auto z = SubshiftSpec::zcal(8);
  // p = 2 degenerates to the single pair constraint: 8 * 5 words.
  CHECK(enumerate_periodic(z, 2).size() == 40);
  const auto words = enumerate_periodic(z, 3);
  for (const auto& w : words) {
    CHECK(satisfies(z, w));
    CHECK(satisfies(z, shift(w, 1)));
  }
  // Exhaustive oracle over all 8^3 words.
  std::size_t oracle = 0;
  for (std::int32_t a = 0; a < 8; ++a)
    for (std::int32_t b = 0; b < 8; ++b)
      for (std::int32_t c = 0; c < 8; ++c)
        oracle += satisfies(z, CyclicWord({Element{a}, Element{b}, Element{c}})) ? 1 : 0;
  CHECK(words.size() == oracle);
}

TEST_CASE("orbit decomposition", "[subshift]") {
  const auto s1 = SubshiftSpec::sigma(1);
  const auto p3 = orbit_decompose(enumerate_periodic(s1, 3), 3);
  CHECK(p3.orbits.size() == 2);
  CHECK(p3.free);
  for (const auto& o : p3.orbits) CHECK(o.size() == 3);

  const auto p5 = orbit_decompose(enumerate_periodic(s1, 5), 5);
  CHECK(p5.orbits.size() == 6);
  CHECK(p5.free);

  const auto none = orbit_decompose({}, 5);
  CHECK(none.orbits.empty());
  CHECK(none.free);

  CHECK_THROWS_AS(orbit_decompose({z3_word({0, 1, 2}), z3_word({0, 1})}, 3), ShapeError);

  // A constant word is a fixed point: its orbit has size 1.
  const auto fixed = orbit_decompose({z3_word({1, 1, 1})}, 3);
  CHECK_FALSE(fixed.free);
}

TEST_CASE("freeness for fixed-point-free specs and small primes", "[subshift][property]") {
  const std::vector<SubshiftSpec> specs = {SubshiftSpec::sigma(1), SubshiftSpec::sigma(2), SubshiftSpec::sigma(3),
                                           SubshiftSpec::zcal(8),
                                           SubshiftSpec::xgm(Alphabet::circle(8), 1, Rational(1, 2))};
  for (const auto& spec : specs)
    for (std::size_t p : {2U, 3U, 5U, 7U}) {
      if (std::holds_alternative<ZcalFamily>(spec.family()) && p == 7) continue;
      INFO(spec.describe() << " p=" << p);
      CHECK(orbit_decompose(enumerate_periodic(spec, p), p).free);
    }
}

TEST_CASE("cyclic word text form", "[subshift]") {
  const auto [a, w] = parse_word("Z3:[0,1,2]");
  CHECK(a == Alphabet::cyclic(3));
  CHECK(w == z3_word({0, 1, 2}));
  CHECK(format_word(a, w) == "Z3:[0,1,2]");

  const auto [a2, w2] = parse_word("S^2:q=8:[(0,4),(4,0)]");
  CHECK(format_word(a2, w2) == "S^2:q=8:[(0,4),(4,0)]");
  CHECK_THROWS_AS(parse_word("Z3:[0,3]"), ShapeError);
  CHECK_THROWS_AS(parse_word("Z3:0,1"), ShapeError);
}
