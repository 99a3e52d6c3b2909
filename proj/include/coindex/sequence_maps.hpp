#pragma once

// Sliding-block maps between the shift spaces X_m = X(G, m, delta), evaluated
// on finite windows of bi-infinite configurations.
//
//   theta_{m,m-1}:  y_k = sum_{i=0}^{m-1} x_{k + i*(m-1)!}      (equivariant)
//   eta_{m-1,m}:    a right inverse of theta_{m,m-1} built from an anchor
//                   sequence a; not equivariant, so it is only offered on
//                   windows, never on cyclic words.
//   pair_embed:     x_k -> (x_k, x_{k+1})

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coindex/alphabet.hpp"
#include "coindex/subshift.hpp"

namespace coindex {

/// Letters of a configuration at absolute indices offset .. offset+size-1.
class Window {
 public:
  Window(std::int64_t offset, std::vector<Element> letters) : offset_(offset), letters_(std::move(letters)) {
    if (letters_.empty()) throw ShapeError("window must be nonempty");
  }

  std::int64_t offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return letters_.size(); }
  const std::vector<Element>& letters() const noexcept { return letters_; }
  IndexRange range() const noexcept { return {offset_, offset_ + static_cast<std::int64_t>(letters_.size()) - 1}; }

  const Element& at(std::int64_t k) const {
    if (!range().contains(k))
      throw NeededRangeError({k, k}, range(), uncovered({k, k}, range()));
    return letters_[static_cast<std::size_t>(k - offset_)];
  }

  /// Sub-window on r, which must lie inside range().
  Window restrict(const IndexRange& r) const {
    if (r.empty() || !range().contains(r)) throw NeededRangeError(r, range(), uncovered(r, range()));
    return Window(r.lo, {letters_.begin() + (r.lo - offset_), letters_.begin() + (r.hi - offset_ + 1)});
  }

  /// The same letters viewed as the configuration shifted by k: (shift x)_n = x_{n+k}.
  Window shifted(std::int64_t k) const { return Window(offset_ - k, letters_); }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  std::int64_t offset_;
  std::vector<Element> letters_;
};

/// The anchor a = (a_k) used by eta: any pure index -> letter rule.
class AnchorSeq {
 public:
  using Rule = std::function<Element(std::int64_t)>;

  explicit AnchorSeq(Rule rule) : rule_(std::move(rule)) {}

  static AnchorSeq constant(Element e) {
    return AnchorSeq([e = std::move(e)](std::int64_t) { return e; });
  }

  static AnchorSeq identity(const Alphabet& a) { return constant(a.identity()); }

  /// Deterministic pseudo-random letters: a_k depends only on (seed, k).
  static AnchorSeq seeded(const Alphabet& a, std::uint64_t seed) {
    return AnchorSeq([a, seed](std::int64_t k) {
      std::uint64_t z = seed ^ (static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      z ^= z >> 31;
      return a.decode(z % a.size());
    });
  }

  Element operator()(std::int64_t k) const { return rule_(k); }

 private:
  Rule rule_;
};

/// Number of input letters beyond k that theta_{m,m-1} reads for output k.
inline std::int64_t theta_reach(int m) {
  if (m < 2) throw ShapeError("theta_{m,m-1} needs m >= 2, got " + std::to_string(m));
  return static_cast<std::int64_t>(m - 1) * static_cast<std::int64_t>(factorial(m - 1));
}

/// theta_{m,m-1} on a window; the output loses theta_reach(m) letters at the right end.
inline Window theta_apply(const Alphabet& alphabet, int m, const Window& w) {
  const auto reach = theta_reach(m);
  const auto in = w.range();
  if (in.size() <= reach) {
    const IndexRange needed{in.lo, in.lo + reach};
    throw NeededRangeError(needed, in, uncovered(needed, in));
  }
  const auto step = static_cast<std::int64_t>(factorial(m - 1));
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(in.size() - reach));
  for (std::int64_t k = in.lo; k + reach <= in.hi; ++k) {
    Element s = alphabet.identity();
    for (int i = 0; i < m; ++i) s = add(alphabet, s, w.at(k + i * step));
    out.push_back(std::move(s));
  }
  return Window(in.lo, std::move(out));
}

/// theta_{m,n}: theta_{m,m-1} first, then theta_{m-1,m-2}, down to theta_{n+1,n}.
inline Window theta_compose(const Alphabet& alphabet, int m, int n, const Window& w) {
  if (n < 1 || n >= m) throw ShapeError("theta_{m,n} needs 1 <= n < m");
  Window cur = w;
  for (int k = m; k > n; --k) cur = theta_apply(alphabet, k, cur);
  return cur;
}

namespace detail {

struct EtaBlocks {
  std::int64_t block;  // m!
  std::int64_t step;   // (m-1)!
  std::int64_t base;   // (m-1)*(m-1)!, length of the pure-anchor prefix
};

inline EtaBlocks eta_blocks(int m) {
  if (m < 2) throw ShapeError("eta_{m-1,m} needs m >= 2, got " + std::to_string(m));
  const auto block = static_cast<std::int64_t>(factorial(m));
  const auto step = static_cast<std::int64_t>(factorial(m - 1));
  return {block, step, block - step};
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0);
}

}  // namespace detail

/// Hull of the x-indices read by eta_{m-1,m} for outputs on `requested`.
/// Empty when every requested output is a bare anchor letter.
inline IndexRange eta_input_window(int m, const IndexRange& requested) {
  if (requested.empty()) throw ShapeError("requested range must be nonempty");
  const auto b = detail::eta_blocks(m);
  IndexRange need;
  for (std::int64_t k = requested.lo; k <= requested.hi; ++k) {
    const auto n = detail::floor_div(k, b.block);
    const auto j = k - n * b.block;
    if (j >= b.base) need = hull(need, {j - b.base, j - b.base});
    if (n > 0) need = hull(need, {j, (n - 1) * b.block + b.step + j});
    if (n < 0) need = hull(need, {n * b.block + j, -b.block + b.step + j});
  }
  return need;
}

/// Window of y = eta_{m-1,m}(x) on `requested`, evaluated case by case:
///   k in [0, base)           y_k = a_k
///   k in [base, m!)          y_k = x_{k-base} - sum_{i=1}^{m-1} a_{k-i(m-1)!}
///   k = n*m! + j, n > 0      y_k = sum_{i=0}^{n-1} (x_{i m!+(m-1)!+j} - x_{i m!+j}) + y_j
///   k = n*m! + j, n < 0      y_k = sum_{i=n}^{-1} (x_{i m!+j} - x_{i m!+(m-1)!+j}) + y_j
inline Window eta_apply(const Alphabet& alphabet, int m, const AnchorSeq& anchor, const Window& x,
                        const IndexRange& requested) {
  const auto needed = eta_input_window(m, requested);
  if (!x.range().contains(needed)) throw NeededRangeError(needed, x.range(), uncovered(needed, x.range()));
  const auto b = detail::eta_blocks(m);

  auto base_letter = [&](std::int64_t j) {
    if (j < b.base) return anchor(j);
    Element s = x.at(j - b.base);
    for (int i = 1; i <= m - 1; ++i) s = sub(alphabet, s, anchor(j - i * b.step));
    return s;
  };

  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(requested.size()));
  for (std::int64_t k = requested.lo; k <= requested.hi; ++k) {
    const auto n = detail::floor_div(k, b.block);
    const auto j = k - n * b.block;
    Element y = base_letter(j);
    for (std::int64_t i = 0; i < n; ++i)
      y = add(alphabet, y, sub(alphabet, x.at(i * b.block + b.step + j), x.at(i * b.block + j)));
    for (std::int64_t i = n; i < 0; ++i)
      y = add(alphabet, y, sub(alphabet, x.at(i * b.block + j), x.at(i * b.block + b.step + j)));
    out.push_back(std::move(y));
  }
  return Window(requested.lo, std::move(out));
}

/// First index k with both k and k+step visible and metric(w_k, w_{k+step}) < delta.
inline std::optional<std::int64_t> window_violation(const Alphabet& alphabet, std::int64_t step,
                                                    const Rational& delta, const Window& w) {
  const auto r = w.range();
  for (std::int64_t k = r.lo; k + step <= r.hi; ++k)
    if (invariant_metric(alphabet, w.at(k), w.at(k + step)) < delta) return k;
  return std::nullopt;
}

/// Uniform-ish random window on `range` whose letters step apart are >= delta apart,
/// drawn left to right. Requires delta <= diameter so every draw has a candidate.
template <class Rng>
Window random_constrained_window(const Alphabet& alphabet, std::int64_t step, const Rational& delta,
                                 const IndexRange& range, Rng& rng) {
  if (range.empty()) throw ShapeError("random window needs a nonempty range");
  const auto letters = all_letters(alphabet);
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(range.size()));
  std::vector<const Element*> candidates;
  for (std::int64_t k = range.lo; k <= range.hi; ++k) {
    const auto pos = k - range.lo;
    if (pos < step) {
      std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
      out.push_back(letters[pick(rng)]);
      continue;
    }
    const auto& prev = out[static_cast<std::size_t>(pos - step)];
    candidates.clear();
    for (const auto& e : letters)
      if (invariant_metric(alphabet, prev, e) >= delta) candidates.push_back(&e);
    if (candidates.empty()) throw ShapeError("delta exceeds what the alphabet can realize");
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    out.push_back(*candidates[pick(rng)]);
  }
  return Window(range.lo, std::move(out));
}

/// Alphabet of pair_embed's output.
inline Alphabet pair_alphabet(const Alphabet& alphabet) { return Alphabet::product({alphabet, alphabet}); }

inline Element pair_letter(const Element& a, const Element& b) {
  std::vector<std::int32_t> c = a.coords;
  c.insert(c.end(), b.coords.begin(), b.coords.end());
  return Element(std::move(c));
}

/// (x_k) -> ((x_k, x_{k+1})); the window shrinks by one letter.
inline Window pair_embed(const Window& w) {
  if (w.size() < 2) throw ShapeError("pair_embed needs a window of length >= 2");
  std::vector<Element> out;
  out.reserve(w.size() - 1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) out.push_back(pair_letter(w.letters()[i], w.letters()[i + 1]));
  return Window(w.offset(), std::move(out));
}

/// pair_embed on a periodic point; equivariant, so periodic points go to periodic points.
inline CyclicWord pair_embed(const CyclicWord& w) {
  std::vector<Element> out;
  out.reserve(w.period());
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(w.period()); ++k) out.push_back(pair_letter(w.at(k), w.at(k + 1)));
  return CyclicWord(std::move(out));
}

/// Left inverse of pair_embed: the first coordinate block.
inline CyclicWord pair_project(const CyclicWord& w, std::size_t arity) {
  std::vector<Element> out;
  out.reserve(w.period());
  for (const auto& e : w.letters())
    out.emplace_back(std::vector<std::int32_t>(e.coords.begin(), e.coords.begin() + static_cast<std::ptrdiff_t>(arity)));
  return CyclicWord(std::move(out));
}

}  // namespace coindex
