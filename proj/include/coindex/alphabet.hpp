#pragma once

// Alphabets for shift spaces: finite cyclic groups with the discrete metric,
// grid discretizations of the circle R/2Z, and finite products of those.
// All distances are exact rationals.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "coindex/errors.hpp"

namespace coindex {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "3", "-1/2", "3/4". Throws ShapeError on malformed input.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ShapeError("malformed rational '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ShapeError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

/// One letter of an alphabet: a residue per factor.
struct Element {
  std::vector<std::int32_t> coords;

  Element() = default;
  Element(std::initializer_list<std::int32_t> c) : coords(c) {}
  explicit Element(std::vector<std::int32_t> c) : coords(std::move(c)) {}

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

enum class GroupOp { add, sub };

class Alphabet {
 public:
  enum class Kind { cyclic_group, circle_grid };

  struct Factor {
    Kind kind;
    std::int32_t order;
    friend bool operator==(const Factor&, const Factor&) = default;
  };

  static Alphabet cyclic(std::int32_t n) {
    if (n < 2) throw ShapeError("CyclicGroup order must be >= 2, got " + std::to_string(n));
    return Alphabet({Factor{Kind::cyclic_group, n}});
  }

  /// q grid points on R/2Z; grid point j sits at j*(2/q).
  static Alphabet circle(std::int32_t q) {
    if (q < 4 || q % 4 != 0)
      throw ShapeError("CircleGrid resolution must be a positive multiple of 4, got " +
                       std::to_string(q));
    return Alphabet({Factor{Kind::circle_grid, q}});
  }

  static Alphabet product(const std::vector<Alphabet>& parts) {
    if (parts.empty()) throw ShapeError("product alphabet needs at least one factor");
    std::vector<Factor> f;
    for (const auto& a : parts) f.insert(f.end(), a.factors_.begin(), a.factors_.end());
    return Alphabet(std::move(f));
  }

  static Alphabet power(const Alphabet& base, int n) {
    if (n < 1) throw ShapeError("alphabet power must be >= 1");
    return product(std::vector<Alphabet>(static_cast<std::size_t>(n), base));
  }

  /// Accepts "Z3", "Z3^2", "S:q=8", "S^2:q=8", and products joined by '*'.
  static Alphabet parse(std::string_view text) {
    std::vector<Alphabet> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto stop = text.find('*', start);
      if (stop == std::string_view::npos) stop = text.size();
      parts.push_back(parse_single(text.substr(start, stop - start)));
      start = stop + 1;
    }
    return parts.size() == 1 ? parts.front() : product(parts);
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t arity() const noexcept { return factors_.size(); }

  /// Number of letters.
  std::uint64_t size() const noexcept {
    std::uint64_t s = 1;
    for (const auto& f : factors_) s *= static_cast<std::uint64_t>(f.order);
    return s;
  }

  bool is_circle_grid() const noexcept {
    return factors_.size() == 1 && factors_[0].kind == Kind::circle_grid;
  }

  Rational diameter() const {
    Rational d(0);
    for (const auto& f : factors_) d = std::max(d, factor_diameter(f));
    return d;
  }

  bool contains(const Element& e) const noexcept {
    if (e.coords.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (e.coords[i] < 0 || e.coords[i] >= factors_[i].order) return false;
    return true;
  }

  void require(const Element& e) const {
    if (!contains(e))
      throw ShapeError("letter " + format(e) + " is not an element of alphabet " + to_string());
  }

  Element identity() const { return Element(std::vector<std::int32_t>(factors_.size(), 0)); }

  /// Mixed-radix code in [0, size()); factor 0 is the most significant digit,
  /// so codes order letters lexicographically.
  std::uint64_t encode(const Element& e) const {
    require(e);
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      code = code * static_cast<std::uint64_t>(factors_[i].order) +
             static_cast<std::uint64_t>(e.coords[i]);
    return code;
  }

  Element decode(std::uint64_t code) const {
    std::vector<std::int32_t> c(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      const auto order = static_cast<std::uint64_t>(factors_[i].order);
      c[i] = static_cast<std::int32_t>(code % order);
      code /= order;
    }
    return Element(std::move(c));
  }

  std::string to_string() const {
    // Collapse runs of equal factors into powers so parse(to_string()) round-trips.
    std::string out;
    for (std::size_t i = 0; i < factors_.size();) {
      std::size_t j = i;
      while (j < factors_.size() && factors_[j] == factors_[i]) ++j;
      if (!out.empty()) out += "*";
      const auto reps = j - i;
      const auto& f = factors_[i];
      if (f.kind == Kind::cyclic_group) {
        out += "Z" + std::to_string(f.order);
        if (reps > 1) out += "^" + std::to_string(reps);
      } else {
        out += "S";
        if (reps > 1) out += "^" + std::to_string(reps);
        out += ":q=" + std::to_string(f.order);
      }
      i = j;
    }
    return out;
  }

  /// Letter text: a bare residue for single-factor alphabets, "(a,b)" otherwise.
  std::string format(const Element& e) const {
    if (e.coords.size() == 1) return std::to_string(e.coords[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < e.coords.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e.coords[i]);
    }
    return s + ")";
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

  // Discrete metric and half the circumference 2 both give diameter 1.
  static Rational factor_diameter(const Factor&) { return Rational(1); }

  /// Distance within one factor between residues a and b.
  static Rational factor_distance(const Factor& f, std::int32_t a, std::int32_t b) {
    if (f.kind == Kind::cyclic_group) return Rational(a == b ? 0 : 1);
    const std::int32_t d = ((a - b) % f.order + f.order) % f.order;
    return Rational(2 * std::min(d, f.order - d), f.order);
  }

 private:
  explicit Alphabet(std::vector<Factor> f) : factors_(std::move(f)) {}

  static std::int32_t parse_positive(std::string_view s, std::string_view whole) {
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || v <= 0)
      throw ShapeError("malformed alphabet '" + std::string(whole) + "'");
    return v;
  }

  static Alphabet parse_single(std::string_view text) {
    if (text.size() >= 2 && text[0] == 'Z') {
      const auto caret = text.find('^');
      const auto n = parse_positive(text.substr(1, caret == std::string_view::npos ? caret : caret - 1),
                                    text);
      const int reps = caret == std::string_view::npos ? 1 : parse_positive(text.substr(caret + 1), text);
      return power(cyclic(n), reps);
    }
    if (!text.empty() && text[0] == 'S') {
      const auto colon = text.find(":q=");
      if (colon == std::string_view::npos)
        throw ShapeError("malformed alphabet '" + std::string(text) + "' (expected S:q=<res>)");
      int reps = 1;
      if (colon > 1) {
        if (text[1] != '^') throw ShapeError("malformed alphabet '" + std::string(text) + "'");
        reps = parse_positive(text.substr(2, colon - 2), text);
      }
      return power(circle(parse_positive(text.substr(colon + 3), text)), reps);
    }
    throw ShapeError("unknown alphabet '" + std::string(text) + "'");
  }

  std::vector<Factor> factors_;
};

inline Element group_op(const Alphabet& alphabet, const Element& a, const Element& b, GroupOp op) {
  alphabet.require(a);
  alphabet.require(b);
  std::vector<std::int32_t> out(alphabet.arity());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto n = alphabet.factors()[i].order;
    const auto v = op == GroupOp::add ? a.coords[i] + b.coords[i] : a.coords[i] - b.coords[i];
    out[i] = ((v % n) + n) % n;
  }
  return Element(std::move(out));
}

inline Element add(const Alphabet& alphabet, const Element& a, const Element& b) {
  return group_op(alphabet, a, b, GroupOp::add);
}

inline Element sub(const Alphabet& alphabet, const Element& a, const Element& b) {
  return group_op(alphabet, a, b, GroupOp::sub);
}

/// Translation-invariant metric: discrete on cyclic factors, arc length on
/// circle grids, max over the factors of a product.
inline Rational invariant_metric(const Alphabet& alphabet, const Element& a, const Element& b) {
  alphabet.require(a);
  alphabet.require(b);
  Rational d(0);
  for (std::size_t i = 0; i < alphabet.arity(); ++i)
    d = std::max(d, Alphabet::factor_distance(alphabet.factors()[i], a.coords[i], b.coords[i]));
  return d;
}

/// All letters in code order.
inline std::vector<Element> all_letters(const Alphabet& alphabet) {
  std::vector<Element> out;
  out.reserve(alphabet.size());
  for (std::uint64_t c = 0; c < alphabet.size(); ++c) out.push_back(alphabet.decode(c));
  return out;
}

}  // namespace coindex
