#pragma once

// Shift spaces over an Alphabet and their p-periodic points.
//
// A periodic point of period L is stored intrinsically as a cyclic word of
// length L; every constraint is read with indices mod L, wraparound pairs
// included.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coindex/alphabet.hpp"

namespace coindex {

using BigInt = boost::multiprecision::cpp_int;

inline std::int64_t positive_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

inline std::uint64_t factorial(int m) {
  if (m < 0 || m > 20) throw ShapeError("factorial argument out of range: " + std::to_string(m));
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Letters m! apart are at distance >= delta.
struct XGmDelta {
  int m = 1;
  Rational delta{1, 2};
  friend bool operator==(const XGmDelta&, const XGmDelta&) = default;
};

/// Every letter is >= 1/2 away from its left or its right neighbour.
struct ZcalFamily {
  friend bool operator==(const ZcalFamily&, const ZcalFamily&) = default;
};

/// Every letter is exactly 1 away from its left or its right neighbour.
struct YcalFamily {
  friend bool operator==(const YcalFamily&, const YcalFamily&) = default;
};

using Family = std::variant<XGmDelta, ZcalFamily, YcalFamily>;

class SubshiftSpec {
 public:
  SubshiftSpec(Alphabet alphabet, Family family) : alphabet_(std::move(alphabet)), family_(family) {
    if (const auto* x = std::get_if<XGmDelta>(&family_)) {
      if (x->m < 1 || x->m > 20) throw ShapeError("X(G,m,delta) needs 1 <= m <= 20");
      if (x->delta <= 0) throw ShapeError("X(G,m,delta) needs delta > 0");
      if (x->delta > alphabet_.diameter())
        throw ShapeError("delta " + to_string(x->delta) + " exceeds alphabet diameter " +
                         to_string(alphabet_.diameter()));
    } else if (!alphabet_.is_circle_grid()) {
      throw ShapeError("Z/Y families require a CircleGrid alphabet, got " + alphabet_.to_string());
    }
  }

  /// Sigma_m = X(Z_3, m, 1/2): letters m! apart differ.
  static SubshiftSpec sigma(int m) { return {Alphabet::cyclic(3), XGmDelta{m, Rational(1, 2)}}; }

  static SubshiftSpec xgm(Alphabet a, int m, Rational delta) { return {std::move(a), XGmDelta{m, delta}}; }
  static SubshiftSpec zcal(std::int32_t q) { return {Alphabet::circle(q), ZcalFamily{}}; }
  static SubshiftSpec ycal(std::int32_t q) { return {Alphabet::circle(q), YcalFamily{}}; }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const Family& family() const noexcept { return family_; }
  const XGmDelta* xgm_params() const noexcept { return std::get_if<XGmDelta>(&family_); }

  std::string describe() const {
    if (const auto* x = xgm_params())
      return "X(" + alphabet_.to_string() + ",m=" + std::to_string(x->m) + ",delta=" + to_string(x->delta) + ")";
    if (std::holds_alternative<ZcalFamily>(family_)) return "Zcal(" + alphabet_.to_string() + ")";
    return "Ycal(" + alphabet_.to_string() + ")";
  }

 private:
  Alphabet alphabet_;
  Family family_;
};

/// A point of P_L: letters indexed by Z/LZ.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(std::vector<Element> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw ShapeError("cyclic word must have period >= 1");
  }

  std::size_t period() const noexcept { return letters_.size(); }
  const std::vector<Element>& letters() const noexcept { return letters_; }

  const Element& at(std::int64_t n) const {
    return letters_[static_cast<std::size_t>(positive_mod(n, static_cast<std::int64_t>(letters_.size())))];
  }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord&, const CyclicWord&) = default;

 private:
  std::vector<Element> letters_;
};

inline void require_word(const Alphabet& alphabet, const CyclicWord& w) {
  for (const auto& e : w.letters()) alphabet.require(e);
}

/// "Z3:[0,1,2]", "S:q=8:[0,4]", "S^2:q=8:[(0,4),(4,0)]".
inline std::string format_word(const Alphabet& alphabet, const CyclicWord& w) {
  std::string s = alphabet.to_string() + ":[";
  for (std::size_t i = 0; i < w.period(); ++i) {
    if (i) s += ",";
    s += alphabet.format(w.letters()[i]);
  }
  return s + "]";
}

/// Inverse of format_word. Returns the alphabet named in the text alongside the word.
inline std::pair<Alphabet, CyclicWord> parse_word(std::string_view text) {
  const auto open = text.rfind(":[");
  if (open == std::string_view::npos || text.back() != ']')
    throw ShapeError("malformed cyclic word '" + std::string(text) + "'");
  auto alphabet = Alphabet::parse(text.substr(0, open));
  std::vector<std::int32_t> numbers;
  std::vector<Element> letters;
  const auto body = text.substr(open + 2, text.size() - open - 3);
  std::size_t i = 0;
  auto read_int = [&]() {
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(body.data() + i, body.data() + body.size(), v);
    if (ec != std::errc()) throw ShapeError("malformed cyclic word '" + std::string(text) + "'");
    i = static_cast<std::size_t>(ptr - body.data());
    return v;
  };
  while (i < body.size()) {
    if (body[i] == '(') {
      ++i;
      std::vector<std::int32_t> c;
      while (true) {
        c.push_back(read_int());
        if (i < body.size() && body[i] == ',') { ++i; continue; }
        if (i < body.size() && body[i] == ')') { ++i; break; }
        throw ShapeError("malformed cyclic word '" + std::string(text) + "'");
      }
      letters.emplace_back(std::move(c));
    } else {
      letters.push_back(Element{read_int()});
    }
    if (i < body.size()) {
      if (body[i] != ',') throw ShapeError("malformed cyclic word '" + std::string(text) + "'");
      ++i;
    }
  }
  CyclicWord w(std::move(letters));
  require_word(alphabet, w);
  return {std::move(alphabet), std::move(w)};
}

/// Checks the family constraint at cyclic index n only.
inline bool satisfies_at(const SubshiftSpec& spec, const CyclicWord& w, std::int64_t n) {
  const auto& a = spec.alphabet();
  if (const auto* x = spec.xgm_params()) {
    const auto step = static_cast<std::int64_t>(factorial(x->m) % w.period());
    return invariant_metric(a, w.at(n), w.at(n + step)) >= x->delta;
  }
  const Rational threshold = std::holds_alternative<ZcalFamily>(spec.family()) ? Rational(1, 2) : Rational(1);
  const bool exact = std::holds_alternative<YcalFamily>(spec.family());
  auto ok = [&](const Rational& d) { return exact ? d == threshold : d >= threshold; };
  return ok(invariant_metric(a, w.at(n - 1), w.at(n))) || ok(invariant_metric(a, w.at(n), w.at(n + 1)));
}

inline bool satisfies(const SubshiftSpec& spec, const CyclicWord& w) {
  require_word(spec.alphabet(), w);
  for (std::int64_t n = 0; n < static_cast<std::int64_t>(w.period()); ++n)
    if (!satisfies_at(spec, w, n)) return false;
  return true;
}

/// (shift(w, k))_n = w_{n+k}.
inline CyclicWord shift(const CyclicWord& w, std::int64_t k) {
  std::vector<Element> out;
  out.reserve(w.period());
  for (std::int64_t n = 0; n < static_cast<std::int64_t>(w.period()); ++n) out.push_back(w.at(n + k));
  return CyclicWord(std::move(out));
}

struct EnumerateOptions {
  std::uint64_t node_cap = 10'000'000;
  std::uint64_t alphabet_cap = 4096;
  /// Use the k -> k*m! mod p change of variables when gcd(m!, p) = 1.
  bool use_recoding = true;
};

namespace detail {

/// adjacency[a] = letters b (as codes) with metric(a, b) >= delta.
inline std::vector<std::vector<std::uint32_t>> distance_graph(const Alphabet& a, const Rational& delta) {
  const auto letters = all_letters(a);
  std::vector<std::vector<std::uint32_t>> adj(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i)
    for (std::size_t j = 0; j < letters.size(); ++j)
      if (invariant_metric(a, letters[i], letters[j]) >= delta) adj[i].push_back(static_cast<std::uint32_t>(j));
  return adj;
}

class NodeBudget {
 public:
  explicit NodeBudget(std::uint64_t cap) : cap_(cap) {}
  void charge() {
    if (++used_ > cap_)
      throw ResourceError("enumeration exceeded the node cap of " + std::to_string(cap_) + " candidates");
  }
  std::uint64_t used() const noexcept { return used_; }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
};

/// All proper cyclic sequences y of length p with y_{k+1} in adj[y_k], wrap included.
inline void enumerate_cycles(const std::vector<std::vector<std::uint32_t>>& adj, std::size_t p,
                             NodeBudget& budget, std::vector<std::vector<std::uint32_t>>& out) {
  std::vector<std::uint32_t> y(p);
  std::vector<std::vector<bool>> edge(adj.size(), std::vector<bool>(adj.size(), false));
  for (std::size_t a = 0; a < adj.size(); ++a)
    for (auto b : adj[a]) edge[a][b] = true;
  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    if (pos == p) {
      if (edge[y[p - 1]][y[0]]) out.push_back(y);
      return;
    }
    for (auto b : adj[y[pos - 1]]) {
      budget.charge();
      y[pos] = b;
      self(self, pos + 1);
    }
  };
  for (std::uint32_t first = 0; first < adj.size(); ++first) {
    budget.charge();
    y[0] = first;
    dfs(dfs, 1);
  }
}

}  // namespace detail

/// Every word of period p satisfying the spec, sorted lexicographically on
/// letter residues.
inline std::vector<CyclicWord> enumerate_periodic(const SubshiftSpec& spec, std::size_t p,
                                                  const EnumerateOptions& opts = {}) {
  if (p < 1) throw ShapeError("period must be >= 1");
  const auto& alphabet = spec.alphabet();
  if (alphabet.size() > opts.alphabet_cap)
    throw ResourceError("alphabet of " + std::to_string(alphabet.size()) + " letters exceeds the cap of " +
                        std::to_string(opts.alphabet_cap));
  detail::NodeBudget budget(opts.node_cap);
  std::vector<CyclicWord> words;

  const auto* x = spec.xgm_params();
  const auto plen = static_cast<std::int64_t>(p);
  if (x != nullptr && opts.use_recoding && std::gcd(factorial(x->m), static_cast<std::uint64_t>(p)) == 1) {
    // y_k = x_{k*m! mod p} turns the m!-step constraint into a nearest-neighbour one.
    const auto adj = detail::distance_graph(alphabet, x->delta);
    std::vector<std::vector<std::uint32_t>> cycles;
    detail::enumerate_cycles(adj, p, budget, cycles);
    const auto step = static_cast<std::int64_t>(factorial(x->m) % p);
    words.reserve(cycles.size());
    for (const auto& y : cycles) {
      std::vector<Element> letters(p);
      for (std::int64_t k = 0; k < plen; ++k)
        letters[static_cast<std::size_t>(positive_mod(k * step, plen))] = alphabet.decode(y[static_cast<std::size_t>(k)]);
      words.emplace_back(std::move(letters));
    }
  } else {
    // Direct backtracking: the constraint at n is tested once every index it reads is assigned.
    const auto letters = all_letters(alphabet);
    std::vector<Element> cur(p, alphabet.identity());
    std::int64_t reach = 1;
    if (x != nullptr) reach = static_cast<std::int64_t>(factorial(x->m) % p);
    auto reads = [&](std::int64_t n) -> std::vector<std::int64_t> {
      if (x != nullptr) return {positive_mod(n, plen), positive_mod(n + reach, plen)};
      return {positive_mod(n - 1, plen), positive_mod(n, plen), positive_mod(n + 1, plen)};
    };
    auto dfs = [&](auto&& self, std::int64_t pos) -> void {
      if (pos == plen) {
        words.emplace_back(cur);
        return;
      }
      for (const auto& letter : letters) {
        budget.charge();
        cur[static_cast<std::size_t>(pos)] = letter;
        const CyclicWord view(cur);
        bool ok = true;
        for (std::int64_t n = 0; n < plen && ok; ++n) {
          const auto r = reads(n);
          const bool touches = std::find(r.begin(), r.end(), pos) != r.end();
          const bool ready = std::all_of(r.begin(), r.end(), [&](std::int64_t i) { return i <= pos; });
          if (touches && ready) ok = satisfies_at(spec, view, n);
        }
        if (ok) self(self, pos + 1);
      }
    };
    dfs(dfs, 0);
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

struct CountOptions {
  /// When gcd(m!, p) = g > 1 the index set splits into g cycles of length p/g;
  /// with this off such inputs are refused instead.
  bool split_cycles = true;
};

namespace detail {

using BigMatrix = std::vector<std::vector<BigInt>>;

inline BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const auto n = a.size();
  BigMatrix c(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline BigInt trace_of_power(const BigMatrix& a, std::uint64_t e) {
  const auto n = a.size();
  BigMatrix result(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  BigMatrix base = a;
  while (e > 0) {
    if (e & 1U) result = multiply(result, base);
    e >>= 1U;
    if (e > 0) base = multiply(base, base);
  }
  BigInt t = 0;
  for (std::size_t i = 0; i < n; ++i) t += result[i][i];
  return t;
}

}  // namespace detail

/// |P_p| for an X(G,m,delta) spec via the trace of the p-th power of the
/// letter transfer matrix, after recoding the m!-step constraint to a
/// nearest-neighbour one.
inline BigInt count_periodic(const SubshiftSpec& spec, std::size_t p, const CountOptions& opts = {}) {
  if (p < 1) throw ShapeError("period must be >= 1");
  const auto* x = spec.xgm_params();
  if (x == nullptr)
    throw ShapeError("count_periodic supports X(G,m,delta) families only; got " + spec.describe());
  const auto g = std::gcd(factorial(x->m), static_cast<std::uint64_t>(p));
  if (g != 1 && !opts.split_cycles)
    throw ShapeError("recoding needs gcd(m!, p) = 1 but gcd(" + std::to_string(factorial(x->m)) + ", " +
                     std::to_string(p) + ") = " + std::to_string(g));
  const auto adj = detail::distance_graph(spec.alphabet(), x->delta);
  detail::BigMatrix a(adj.size(), std::vector<BigInt>(adj.size(), 0));
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (auto j : adj[i]) a[i][j] = 1;
  const BigInt per_cycle = detail::trace_of_power(a, p / g);
  return boost::multiprecision::pow(per_cycle, static_cast<unsigned>(g));
}

struct OrbitDecomposition {
  /// Each orbit lists indices into the input, in shift order starting from its smallest member.
  std::vector<std::vector<std::size_t>> orbits;
  bool free = true;
};

/// Partitions a shift-closed set of period-p words into shift orbits.
inline OrbitDecomposition orbit_decompose(const std::vector<CyclicWord>& words, std::size_t p) {
  std::map<CyclicWord, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].period() != p)
      throw ShapeError("word " + std::to_string(i) + " has period " + std::to_string(words[i].period()) +
                       ", expected " + std::to_string(p));
    index.emplace(words[i], i);
  }
  OrbitDecomposition out;
  std::vector<bool> seen(words.size(), false);
  for (const auto& [word, first] : index) {
    if (seen[first]) continue;
    std::vector<std::size_t> orbit;
    for (std::size_t k = 0; k < p; ++k) {
      const auto it = index.find(shift(word, static_cast<std::int64_t>(k)));
      if (it == index.end()) throw ShapeError("input set is not closed under the shift");
      if (seen[it->second]) break;
      seen[it->second] = true;
      orbit.push_back(it->second);
    }
    if (orbit.size() != p) out.free = false;
    out.orbits.push_back(std::move(orbit));
  }
  // Duplicated input words are not in `index` under their own position.
  for (std::size_t i = 0; i < words.size(); ++i)
    if (!seen[i]) throw ShapeError("input set contains duplicate words");
  return out;
}

}  // namespace coindex
