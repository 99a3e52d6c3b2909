#pragma once

// Finite simplicial and cubical complexes carrying a Z_p-action by a cell
// permutation of order p, plus joins of complexes and of maps.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coindex/alphabet.hpp"
#include "coindex/errors.hpp"

namespace coindex {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw ShapeError(std::to_string(p) + " is not prime");
}

/// A signed face of a cell: index among the (k-1)-cells and an orientation sign.
struct Face {
  std::size_t index;
  int sign;
};

/// Result of the cell-level freeness test.
struct FreenessReport {
  bool free = true;
  /// Human-readable name of the first setwise-invariant cell, if any.
  std::string witness;
  int witness_dim = -1;
  std::size_t witness_index = 0;
};

namespace detail {

/// Checks that perm is a permutation of order exactly p (order 1 allowed only when n = 0).
inline void require_order(const std::vector<std::uint32_t>& perm, unsigned p, const char* what) {
  const auto n = perm.size();
  std::vector<bool> hit(n, false);
  for (auto v : perm) {
    if (v >= n || hit[v]) throw ShapeError(std::string(what) + " is not a permutation");
    hit[v] = true;
  }
  if (n == 0) return;
  bool identity = true;
  for (std::size_t i = 0; i < n; ++i) identity = identity && perm[i] == i;
  if (identity) throw ShapeError(std::string(what) + " is the identity; the action must have order p = " + std::to_string(p));
  std::vector<std::uint32_t> cur(n);
  std::iota(cur.begin(), cur.end(), 0U);
  for (unsigned i = 0; i < p; ++i)
    for (auto& c : cur) c = perm[c];
  for (std::size_t i = 0; i < n; ++i)
    if (cur[i] != i) throw ShapeError(std::string(what) + " does not satisfy pi^p = id for p = " + std::to_string(p));
}

}  // namespace detail

class SimplicialComplex {
 public:
  using Vertex = std::uint32_t;

  /// Face closure of `cells` on vertices 0..labels.size()-1, acted on by `generator`.
  static SimplicialComplex from_cells(unsigned p, std::vector<std::string> labels,
                                      const std::vector<std::vector<Vertex>>& cells, std::vector<Vertex> generator) {
    require_prime(p);
    std::vector<std::set<std::vector<Vertex>>> by_dim;
    for (auto cell : cells) {
      std::sort(cell.begin(), cell.end());
      if (cell.empty()) continue;
      if (std::adjacent_find(cell.begin(), cell.end()) != cell.end())
        throw ShapeError("cell lists a vertex twice");
      if (cell.back() >= labels.size()) throw ShapeError("cell references vertex " + std::to_string(cell.back()) +
                                                         " but only " + std::to_string(labels.size()) + " exist");
      if (cell.size() > 24) throw ShapeError("simplex dimension too large for face closure");
      const auto n = cell.size();
      if (by_dim.size() < n) by_dim.resize(n);
      for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<Vertex> face;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (1U << i)) face.push_back(cell[i]);
        by_dim[face.size() - 1].insert(std::move(face));
      }
    }
    // Isolated vertices listed only through labels are still vertices.
    if (by_dim.empty() && !labels.empty()) by_dim.resize(1);
    for (Vertex v = 0; v < labels.size(); ++v) by_dim[0].insert({v});
    std::vector<std::vector<Vertex>> flat(by_dim.size());
    for (std::size_t k = 0; k < by_dim.size(); ++k)
      for (const auto& c : by_dim[k]) flat[k].insert(flat[k].end(), c.begin(), c.end());
    return SimplicialComplex(p, std::move(labels), std::move(flat), std::move(generator), std::nullopt);
  }

  /// A finite Z_p-set as a 0-dimensional complex.
  static SimplicialComplex discrete(unsigned p, std::vector<std::string> labels, std::vector<Vertex> generator) {
    require_prime(p);
    std::vector<std::vector<Vertex>> flat;
    std::optional<std::vector<std::size_t>> factors;
    if (!labels.empty()) {
      flat.emplace_back(labels.size());
      std::iota(flat[0].begin(), flat[0].end(), 0U);
      factors = std::vector<std::size_t>{labels.size()};
    }
    return SimplicialComplex(p, std::move(labels), std::move(flat), std::move(generator), std::move(factors));
  }

  /// Z_p acting on itself by translation.
  static SimplicialComplex cyclic_group(unsigned p) {
    std::vector<std::string> labels;
    std::vector<Vertex> gen;
    for (unsigned g = 0; g < p; ++g) {
      labels.push_back(std::to_string(g));
      gen.push_back((g + 1) % p);
    }
    return discrete(p, std::move(labels), std::move(gen));
  }

  /// The v-cycle with the rotation by v/p; needs p | v and v >= 3.
  static SimplicialComplex cycle(unsigned p, std::uint32_t v) {
    if (v < 3 || v % p != 0) throw ShapeError("cycle model needs v >= 3 and p | v");
    std::vector<std::string> labels;
    std::vector<std::vector<Vertex>> edges;
    std::vector<Vertex> gen;
    for (Vertex i = 0; i < v; ++i) {
      labels.push_back(std::to_string(i));
      edges.push_back({i, (i + 1) % v});
      gen.push_back((i + v / p) % v);
    }
    return from_cells(p, std::move(labels), edges, std::move(gen));
  }

  unsigned prime() const noexcept { return p_; }
  int dimension() const noexcept { return static_cast<int>(cells_.size()) - 1; }
  std::size_t vertex_count() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Vertex>& generator() const noexcept { return generator_; }

  std::size_t cell_count(int k) const noexcept {
    if (k < 0 || k > dimension()) return 0;
    return cells_[static_cast<std::size_t>(k)].size() / static_cast<std::size_t>(k + 1);
  }

  std::size_t total_cells() const noexcept {
    std::size_t n = 0;
    for (int k = 0; k <= dimension(); ++k) n += cell_count(k);
    return n;
  }

  std::span<const Vertex> cell(int k, std::size_t i) const {
    const auto w = static_cast<std::size_t>(k + 1);
    return {cells_[static_cast<std::size_t>(k)].data() + i * w, w};
  }

  /// Index of a sorted vertex tuple among the k-cells.
  std::optional<std::size_t> find(std::span<const Vertex> c) const {
    const int k = static_cast<int>(c.size()) - 1;
    if (k < 0 || k > dimension()) return std::nullopt;
    std::size_t lo = 0, hi = cell_count(k);
    while (lo < hi) {
      const auto mid = (lo + hi) / 2;
      const auto m = cell(k, mid);
      if (std::lexicographical_compare(m.begin(), m.end(), c.begin(), c.end())) lo = mid + 1;
      else hi = mid;
    }
    if (lo < cell_count(k)) {
      const auto m = cell(k, lo);
      if (std::equal(m.begin(), m.end(), c.begin(), c.end())) return lo;
    }
    return std::nullopt;
  }

  /// Sorted image of a cell under the generator.
  std::vector<Vertex> image(std::span<const Vertex> c) const {
    std::vector<Vertex> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = generator_[c[i]];
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Faces with signs (-1)^t for dropping the t-th vertex.
  void boundary(int k, std::size_t i, std::vector<Face>& out) const {
    out.clear();
    if (k == 0) return;
    const auto c = cell(k, i);
    std::vector<Vertex> face(c.size() - 1);
    for (std::size_t t = 0; t < c.size(); ++t) {
      std::size_t w = 0;
      for (std::size_t s = 0; s < c.size(); ++s)
        if (s != t) face[w++] = c[s];
      const auto idx = find(face);
      if (!idx) throw ShapeError("complex is not closed under faces at " + describe_cell(k, i));
      out.push_back({*idx, (t % 2 == 0) ? 1 : -1});
    }
  }

  std::string describe_cell(int k, std::size_t i) const {
    std::string s = "{";
    const auto c = cell(k, i);
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (t) s += ",";
      s += labels_[c[t]];
    }
    return s + "}";
  }

  /// Cells not contained in a larger cell.
  std::vector<std::vector<Vertex>> maximal_cells() const {
    std::vector<std::vector<Vertex>> out;
    for (int k = dimension(); k >= 0; --k) {
      std::vector<bool> covered(cell_count(k), false);
      if (k < dimension()) {
        std::vector<Face> faces;
        for (std::size_t i = 0; i < cell_count(k + 1); ++i) {
          boundary(k + 1, i, faces);
          for (const auto& f : faces) covered[f.index] = true;
        }
      }
      for (std::size_t i = 0; i < cell_count(k); ++i)
        if (!covered[i]) out.emplace_back(cell(k, i).begin(), cell(k, i).end());
    }
    return out;
  }

  /// Sizes of the discrete factors when this complex is, by construction, a
  /// join of nonempty finite Z_p-sets.
  const std::optional<std::vector<std::size_t>>& join_factors() const noexcept { return join_factors_; }

  FreenessReport freeness() const {
    for (int k = 0; k <= dimension(); ++k)
      for (std::size_t i = 0; i < cell_count(k); ++i) {
        const auto c = cell(k, i);
        const auto img = image(c);
        if (std::equal(img.begin(), img.end(), c.begin(), c.end()))
          return {false, describe_cell(k, i), k, i};
      }
    return {};
  }

 private:
  SimplicialComplex(unsigned p, std::vector<std::string> labels, std::vector<std::vector<Vertex>> cells,
                    std::vector<Vertex> generator, std::optional<std::vector<std::size_t>> factors)
      : p_(p),
        labels_(std::move(labels)),
        cells_(std::move(cells)),
        generator_(std::move(generator)),
        join_factors_(std::move(factors)) {
    if (generator_.size() != labels_.size())
      throw ShapeError("generator has " + std::to_string(generator_.size()) + " entries for " +
                       std::to_string(labels_.size()) + " vertices");
    detail::require_order(generator_, p_, "vertex generator");
    validate_cells();
  }

  void validate_cells() const {
    std::vector<Face> faces;
    for (int k = 0; k <= dimension(); ++k)
      for (std::size_t i = 0; i < cell_count(k); ++i) {
        boundary(k, i, faces);
        if (!find(image(cell(k, i))))
          throw ShapeError("generator maps cell " + describe_cell(k, i) + " outside the complex");
      }
  }

  friend SimplicialComplex join_complexes(const std::vector<SimplicialComplex>& factors);

  unsigned p_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Vertex>> cells_;  // cells_[k]: sorted (k+1)-tuples, flattened
  std::vector<Vertex> generator_;
  std::optional<std::vector<std::size_t>> join_factors_;
};

/// Join with the simultaneous action: vertices are the disjoint union and the
/// cells are unions of one (possibly empty) cell per factor, not all empty.
/// Empty factors are join identities.
inline SimplicialComplex join_complexes(const std::vector<SimplicialComplex>& factors) {
  using Vertex = SimplicialComplex::Vertex;
  if (factors.empty()) throw ShapeError("join of zero complexes");
  const unsigned p = factors.front().prime();
  for (const auto& f : factors)
    if (f.prime() != p)
      throw ShapeError("cannot join complexes with different primes " + std::to_string(p) + " and " +
                       std::to_string(f.prime()));

  std::vector<std::string> labels;
  std::vector<Vertex> gen;
  std::vector<Vertex> offset;
  std::optional<std::vector<std::size_t>> structure = std::vector<std::size_t>{};
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& c = factors[f];
    offset.push_back(static_cast<Vertex>(labels.size()));
    for (std::size_t v = 0; v < c.vertex_count(); ++v) {
      labels.push_back(std::to_string(f) + ":" + c.labels()[v]);
      gen.push_back(offset.back() + c.generator()[v]);
    }
    if (c.vertex_count() == 0) continue;
    if (structure && c.join_factors()) structure->insert(structure->end(), c.join_factors()->begin(), c.join_factors()->end());
    else structure.reset();
  }
  if (structure && structure->empty()) structure.reset();

  int dim = -1;
  for (const auto& c : factors) dim += c.dimension() + 1;
  std::vector<std::vector<Vertex>> cells(static_cast<std::size_t>(std::max(dim + 1, 0)));

  // Walk every choice (d_0, ..., d_{F-1}) of per-factor cell dimension, d = -1 meaning "empty".
  const auto nf = factors.size();
  std::vector<int> d(nf, -1);
  std::vector<std::size_t> pick(nf, 0);
  while (true) {
    std::size_t f = 0;
    while (f < nf && d[f] == factors[f].dimension()) d[f++] = -1;
    if (f == nf) break;
    ++d[f];
    int k = -1;
    for (std::size_t g = 0; g < nf; ++g) k += d[g] + 1;
    bool any_empty_choice = false;
    for (std::size_t g = 0; g < nf; ++g)
      if (d[g] >= 0 && factors[g].cell_count(d[g]) == 0) any_empty_choice = true;
    if (any_empty_choice) continue;
    auto& out = cells[static_cast<std::size_t>(k)];
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      for (std::size_t g = 0; g < nf; ++g) {
        if (d[g] < 0) continue;
        for (auto v : factors[g].cell(d[g], pick[g])) out.push_back(offset[g] + v);
      }
      std::size_t g = 0;
      for (; g < nf; ++g) {
        if (d[g] < 0) continue;
        if (++pick[g] < factors[g].cell_count(d[g])) break;
        pick[g] = 0;
      }
      if (g == nf) break;
    }
  }

  // Sort each dimension lexicographically.
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto w = k + 1;
    const auto n = cells[k].size() / w;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    const auto& src = cells[k];
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::lexicographical_compare(src.begin() + a * w, src.begin() + (a + 1) * w, src.begin() + b * w,
                                          src.begin() + (b + 1) * w);
    });
    std::vector<Vertex> sorted;
    sorted.reserve(src.size());
    for (auto i : order) sorted.insert(sorted.end(), src.begin() + i * w, src.begin() + (i + 1) * w);
    cells[k] = std::move(sorted);
  }
  return SimplicialComplex(p, std::move(labels), std::move(cells), std::move(gen), std::move(structure));
}

inline SimplicialComplex join_complex(const SimplicialComplex& a, const SimplicialComplex& b) {
  return join_complexes({a, b});
}

/// Cubical complex inside the torus grid (Z/q)^D. A cell is a base vertex and
/// a set of directions; it spans base + {0,1}^directions (mod q). The action
/// permutes coordinates: vertex v goes to v' with v'[perm[c]] = v[c].
class CubicalComplex {
 public:
  using Key = std::uint64_t;
  using Coords = std::vector<std::int32_t>;

  /// All cubes of the grid whose corners satisfy `keep`. Throws ResourceError
  /// past `cell_cap` cells; nothing is silently dropped.
  static CubicalComplex from_vertex_predicate(unsigned p, std::int32_t q, int dims, std::vector<std::uint32_t> coord_perm,
                                              const std::function<bool(const Coords&)>& keep,
                                              std::uint64_t cell_cap = 2'000'000) {
    require_prime(p);
    if (q < 3) throw ShapeError("torus grid needs q >= 3");
    if (dims < 1 || dims > 16) throw ShapeError("torus grid dimension must lie in [1, 16]");
    if (coord_perm.size() != static_cast<std::size_t>(dims)) throw ShapeError("coordinate permutation has wrong length");
    detail::require_order(coord_perm, p, "coordinate permutation");
    double vertex_total = 1;
    for (int c = 0; c < dims; ++c) vertex_total *= q;
    if (vertex_total > static_cast<double>(cell_cap) * 64)
      throw ResourceError("torus grid has " + std::to_string(static_cast<std::uint64_t>(vertex_total)) +
                          " vertices, beyond the cell cap " + std::to_string(cell_cap));

    CubicalComplex cx(p, q, dims, std::move(coord_perm));
    const auto nv = static_cast<std::uint64_t>(vertex_total);
    std::vector<bool> valid(nv);
    for (std::uint64_t v = 0; v < nv; ++v) valid[v] = keep(cx.coords(v));

    std::uint64_t total = 0;
    std::vector<std::vector<Key>> cells(static_cast<std::size_t>(dims) + 1);
    const std::uint32_t masks = 1U << dims;
    for (std::uint64_t v = 0; v < nv; ++v) {
      if (!valid[v]) continue;
      for (std::uint32_t mask = 0; mask < masks; ++mask) {
        bool ok = true;
        // Corners of the cube: every submask of `mask`.
        for (std::uint32_t sub = mask;; sub = (sub - 1) & mask) {
          if (!valid[cx.offset_vertex(v, sub)]) { ok = false; break; }
          if (sub == 0) break;
        }
        if (!ok) continue;
        if (++total > cell_cap)
          throw ResourceError("cubical approximation exceeds the cell cap of " + std::to_string(cell_cap));
        cells[static_cast<std::size_t>(std::popcount(mask))].push_back((v << dims) | mask);
      }
    }
    while (!cells.empty() && cells.back().empty()) cells.pop_back();
    for (auto& c : cells) std::sort(c.begin(), c.end());
    cx.cells_ = std::move(cells);
    cx.validate_action();
    return cx;
  }

  unsigned prime() const noexcept { return p_; }
  std::int32_t resolution() const noexcept { return q_; }
  int grid_dims() const noexcept { return dims_; }
  const std::vector<std::uint32_t>& coord_perm() const noexcept { return perm_; }
  int dimension() const noexcept { return static_cast<int>(cells_.size()) - 1; }

  std::size_t cell_count(int k) const noexcept {
    if (k < 0 || k > dimension()) return 0;
    return cells_[static_cast<std::size_t>(k)].size();
  }

  std::size_t total_cells() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cells_) n += c.size();
    return n;
  }

  Key key(int k, std::size_t i) const { return cells_[static_cast<std::size_t>(k)][i]; }
  std::uint64_t base_vertex(Key key) const noexcept { return key >> dims_; }
  std::uint32_t directions(Key key) const noexcept { return static_cast<std::uint32_t>(key & ((1ULL << dims_) - 1)); }

  std::optional<std::size_t> find(Key key) const {
    const int k = std::popcount(directions(key));
    if (k > dimension()) return std::nullopt;
    const auto& c = cells_[static_cast<std::size_t>(k)];
    const auto it = std::lower_bound(c.begin(), c.end(), key);
    if (it == c.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - c.begin());
  }

  Coords coords(std::uint64_t v) const {
    Coords c(static_cast<std::size_t>(dims_));
    for (int i = 0; i < dims_; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(v % static_cast<std::uint64_t>(q_));
      v /= static_cast<std::uint64_t>(q_);
    }
    return c;
  }

  std::uint64_t vertex_id(const Coords& c) const {
    if (c.size() != static_cast<std::size_t>(dims_)) throw ShapeError("vertex has wrong number of coordinates");
    std::uint64_t v = 0;
    for (int i = dims_; i-- > 0;) v = v * static_cast<std::uint64_t>(q_) + static_cast<std::uint64_t>(positive_mod(c[static_cast<std::size_t>(i)]));
    return v;
  }

  bool has_vertex(std::uint64_t v) const { return dimension() >= 0 && find(v << dims_).has_value(); }

  std::uint64_t act_vertex(std::uint64_t v) const {
    const auto c = coords(v);
    Coords out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[perm_[i]] = c[i];
    return vertex_id(out);
  }

  Key image(Key key) const {
    std::uint32_t mask = 0;
    const auto m = directions(key);
    for (int i = 0; i < dims_; ++i)
      if (m & (1U << i)) mask |= 1U << perm_[static_cast<std::size_t>(i)];
    return (act_vertex(base_vertex(key)) << dims_) | mask;
  }

  /// Faces (base, dirs - d_t) with sign -(-1)^t and (base + e_{d_t}, dirs - d_t) with sign (-1)^t.
  void boundary(int k, std::size_t i, std::vector<Face>& out) const {
    out.clear();
    const auto key = cells_[static_cast<std::size_t>(k)][i];
    const auto base = base_vertex(key);
    const auto m = directions(key);
    int t = 0;
    for (int d = 0; d < dims_; ++d) {
      if (!(m & (1U << d))) continue;
      const auto rest = m & ~(1U << d);
      const int sign = (t % 2 == 0) ? 1 : -1;
      const auto lower = find((base << dims_) | rest);
      const auto upper = find((offset_vertex(base, 1U << d) << dims_) | rest);
      if (!lower || !upper) throw ShapeError("cubical complex is not closed under faces at " + describe_cell(k, i));
      out.push_back({*lower, -sign});
      out.push_back({*upper, sign});
      ++t;
    }
  }

  /// The smallest cube whose closure holds all the given vertices, if it is a cell.
  std::optional<Key> smallest_cell_containing(const std::vector<std::uint64_t>& vertices) const {
    if (vertices.empty()) return std::nullopt;
    Coords base(static_cast<std::size_t>(dims_));
    std::uint32_t mask = 0;
    std::vector<Coords> cs;
    for (auto v : vertices) cs.push_back(coords(v));
    for (int d = 0; d < dims_; ++d) {
      std::set<std::int32_t> vals;
      for (const auto& c : cs) vals.insert(c[static_cast<std::size_t>(d)]);
      if (vals.size() > 2) return std::nullopt;
      const auto lo = *vals.begin();
      base[static_cast<std::size_t>(d)] = lo;
      if (vals.size() == 2) {
        const auto hi = *vals.rbegin();
        if (hi == lo + 1) {
        } else if (lo == 0 && hi == q_ - 1) {
          base[static_cast<std::size_t>(d)] = hi;
        } else {
          return std::nullopt;
        }
        mask |= 1U << d;
      }
    }
    const Key key = (vertex_id(base) << dims_) | mask;
    if (!find(key)) return std::nullopt;
    return key;
  }

  std::string describe_vertex(std::uint64_t v) const {
    const auto c = coords(v);
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }

  std::string describe_cell(int k, std::size_t i) const {
    const auto key = cells_[static_cast<std::size_t>(k)][i];
    std::string s = "cube base " + describe_vertex(base_vertex(key)) + " dirs {";
    bool first = true;
    for (int d = 0; d < dims_; ++d)
      if (directions(key) & (1U << d)) {
        if (!first) s += ",";
        s += std::to_string(d);
        first = false;
      }
    return s + "}";
  }

  FreenessReport freeness() const {
    for (int k = 0; k <= dimension(); ++k)
      for (std::size_t i = 0; i < cell_count(k); ++i)
        if (image(key(k, i)) == key(k, i)) return {false, describe_cell(k, i), k, i};
    return {};
  }

 private:
  CubicalComplex(unsigned p, std::int32_t q, int dims, std::vector<std::uint32_t> perm)
      : p_(p), q_(q), dims_(dims), perm_(std::move(perm)) {}

  std::int32_t positive_mod(std::int32_t a) const noexcept { return ((a % q_) + q_) % q_; }

  /// v + sum of unit vectors in `mask`, mod q.
  std::uint64_t offset_vertex(std::uint64_t v, std::uint32_t mask) const {
    auto c = coords(v);
    for (int d = 0; d < dims_; ++d)
      if (mask & (1U << d)) c[static_cast<std::size_t>(d)] = positive_mod(c[static_cast<std::size_t>(d)] + 1);
    return vertex_id(c);
  }

  void validate_action() const {
    for (int k = 0; k <= dimension(); ++k)
      for (std::size_t i = 0; i < cell_count(k); ++i)
        if (!find(image(key(k, i))))
          throw ShapeError("coordinate action maps " + describe_cell(k, i) + " outside the complex");
  }

  unsigned p_;
  std::int32_t q_;
  int dims_;
  std::vector<std::uint32_t> perm_;
  std::vector<std::vector<Key>> cells_;
};

using EquivariantComplex = std::variant<SimplicialComplex, CubicalComplex>;

/// No cell may be mapped to itself setwise; for prime p this is freeness of
/// the geometric realization. The first invariant cell is the witness.
inline FreenessReport verify_free_action(const EquivariantComplex& c) {
  return std::visit([](const auto& cx) { return cx.freeness(); }, c);
}

inline int dimension(const EquivariantComplex& c) {
  return std::visit([](const auto& cx) { return cx.dimension(); }, c);
}

inline unsigned prime(const EquivariantComplex& c) {
  return std::visit([](const auto& cx) { return cx.prime(); }, c);
}

/// A point of X_0 * ... * X_F written as sum t_i x_i. Coordinates with weight 0
/// are collapsed and do not take part in equality.
template <class Point>
class JoinPoint {
 public:
  JoinPoint(std::vector<Rational> weights, std::vector<std::optional<Point>> points)
      : weights_(std::move(weights)), points_(std::move(points)) {
    if (weights_.size() != points_.size()) throw ShapeError("join point needs one weight per factor");
    Rational total(0);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < 0) throw ShapeError("join weights must be nonnegative");
      total += weights_[i];
      if (weights_[i] > 0 && !points_[i]) throw ShapeError("factor with positive weight has no point");
      if (weights_[i] == Rational(0)) points_[i].reset();
    }
    if (total != Rational(1)) throw ShapeError("join weights must sum to 1");
  }

  std::size_t arity() const noexcept { return weights_.size(); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const std::vector<std::optional<Point>>& points() const noexcept { return points_; }

  friend bool operator==(const JoinPoint& a, const JoinPoint& b) {
    return a.weights_ == b.weights_ && a.points_ == b.points_;
  }

 private:
  std::vector<Rational> weights_;
  std::vector<std::optional<Point>> points_;
};

/// (T_0 * ... * T_F)(sum t_i x_i) = sum t_i T_i(x_i).
template <class Point, class Map>
JoinPoint<Point> apply_join_of_maps(const std::vector<Map>& maps, const JoinPoint<Point>& x) {
  if (maps.size() != x.arity())
    throw ShapeError("join of maps has " + std::to_string(maps.size()) + " factors but the point has " +
                     std::to_string(x.arity()));
  std::vector<std::optional<Point>> out(x.arity());
  for (std::size_t i = 0; i < x.arity(); ++i)
    if (x.points()[i]) out[i] = maps[i](*x.points()[i]);
  return JoinPoint<Point>(x.weights(), std::move(out));
}

}  // namespace coindex
