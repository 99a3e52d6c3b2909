#pragma once

// Reduced homology over the prime field F_l by exact sparse elimination of
// boundary matrices.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "coindex/complex.hpp"

namespace coindex {

/// Column-compressed matrix over F_l; entries are stored reduced into [1, l).
struct SparseMatrixFp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> col_ptr{0};
  std::vector<std::uint32_t> row_idx;
  std::vector<std::uint32_t> vals;

  std::size_t nnz() const noexcept { return row_idx.size(); }
  std::size_t col_nnz(std::size_t j) const noexcept { return col_ptr[j + 1] - col_ptr[j]; }
};

namespace fp {

inline std::uint32_t reduce(std::int64_t v, std::uint32_t l) {
  const auto m = static_cast<std::int64_t>(l);
  return static_cast<std::uint32_t>(((v % m) + m) % m);
}

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t l) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % l);
}

inline std::uint32_t inverse(std::uint32_t a, std::uint32_t l) {
  std::uint64_t result = 1, base = a % l, e = l - 2;
  while (e > 0) {
    if (e & 1U) result = result * base % l;
    base = base * base % l;
    e >>= 1U;
  }
  return static_cast<std::uint32_t>(result);
}

struct Entry {
  std::uint32_t row;
  std::uint32_t val;
};

/// a - c*b for row-sorted sparse vectors.
inline void axpy(std::vector<Entry>& a, std::uint32_t c, const std::vector<Entry>& b, std::uint32_t l,
                 std::vector<Entry>& scratch) {
  scratch.clear();
  std::size_t i = 0, j = 0;
  const std::uint32_t neg = (l - c) % l;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].row < b[j].row)) {
      scratch.push_back(a[i++]);
    } else if (i == a.size() || b[j].row < a[i].row) {
      scratch.push_back({b[j].row, mul(neg, b[j].val, l)});
      ++j;
    } else {
      const auto v = (a[i].val + mul(neg, b[j].val, l)) % l;
      if (v != 0) scratch.push_back({a[i].row, v});
      ++i;
      ++j;
    }
  }
  a.swap(scratch);
}

}  // namespace fp

/// Rank over F_l. Columns are visited sparsest first and reduced against
/// stored pivots keyed by their largest row index.
inline std::size_t rank_fp(const SparseMatrixFp& m, std::uint32_t l) {
  require_prime(l);
  std::vector<std::size_t> order(m.cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m.col_nnz(a) < m.col_nnz(b); });

  constexpr std::uint32_t none = ~0U;
  std::vector<std::uint32_t> pivot_of_row(m.rows, none);
  std::vector<std::vector<fp::Entry>> pivots;
  std::vector<fp::Entry> col, scratch;
  for (const auto j : order) {
    col.clear();
    for (auto t = m.col_ptr[j]; t < m.col_ptr[j + 1]; ++t) col.push_back({m.row_idx[t], m.vals[t]});
    std::sort(col.begin(), col.end(), [](const fp::Entry& a, const fp::Entry& b) { return a.row < b.row; });
    while (!col.empty()) {
      const auto low = col.back();
      const auto pv = pivot_of_row[low.row];
      if (pv == none) {
        // Normalize so the pivot entry is 1.
        const auto inv = fp::inverse(low.val, l);
        for (auto& e : col) e.val = fp::mul(e.val, inv, l);
        pivot_of_row[low.row] = static_cast<std::uint32_t>(pivots.size());
        pivots.push_back(col);
        break;
      }
      fp::axpy(col, low.val, pivots[pv], l, scratch);
    }
  }
  return pivots.size();
}

/// Boundary maps d_k : C_k -> C_{k-1} over F_l for k = 0..dim, where d_0 is
/// the augmentation C_0 -> F_l.
class ChainComplexFp {
 public:
  ChainComplexFp(std::uint32_t field, std::vector<SparseMatrixFp> boundaries)
      : field_(field), boundaries_(std::move(boundaries)) {
    require_prime(field_);
    for (std::size_t k = 0; k + 1 < boundaries_.size(); ++k) {
      if (boundaries_[k].cols != boundaries_[k + 1].rows) throw ShapeError("boundary matrix shapes do not chain");
      if (!composes_to_zero(boundaries_[k], boundaries_[k + 1]))
        throw ShapeError("boundary of boundary is nonzero in degree " + std::to_string(k + 1));
    }
  }

  std::uint32_t field() const noexcept { return field_; }
  const std::vector<SparseMatrixFp>& boundaries() const noexcept { return boundaries_; }
  int dimension() const noexcept { return static_cast<int>(boundaries_.size()) - 1; }
  std::size_t cells(int k) const { return boundaries_[static_cast<std::size_t>(k)].cols; }

 private:
  bool composes_to_zero(const SparseMatrixFp& lower, const SparseMatrixFp& upper) const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> acc;
    for (std::size_t j = 0; j < upper.cols; ++j) {
      acc.clear();
      for (auto t = upper.col_ptr[j]; t < upper.col_ptr[j + 1]; ++t) {
        const auto mid = upper.row_idx[t];
        for (auto s = lower.col_ptr[mid]; s < lower.col_ptr[mid + 1]; ++s)
          acc.emplace_back(lower.row_idx[s], fp::mul(upper.vals[t], lower.vals[s], field_));
      }
      std::sort(acc.begin(), acc.end());
      for (std::size_t i = 0; i < acc.size();) {
        std::uint64_t sum = 0;
        std::size_t e = i;
        for (; e < acc.size() && acc[e].first == acc[i].first; ++e) sum += acc[e].second;
        if (sum % field_ != 0) return false;
        i = e;
      }
    }
    return true;
  }

  std::uint32_t field_;
  std::vector<SparseMatrixFp> boundaries_;
};

template <class Complex>
ChainComplexFp boundary_matrices(const Complex& c, std::uint32_t l) {
  require_prime(l);
  std::vector<SparseMatrixFp> out;
  if (c.dimension() < 0) return ChainComplexFp(l, std::move(out));
  SparseMatrixFp aug;
  aug.rows = 1;
  aug.cols = c.cell_count(0);
  for (std::size_t j = 0; j < aug.cols; ++j) {
    aug.row_idx.push_back(0);
    aug.vals.push_back(1);
    aug.col_ptr.push_back(aug.row_idx.size());
  }
  out.push_back(std::move(aug));
  std::vector<Face> faces;
  for (int k = 1; k <= c.dimension(); ++k) {
    SparseMatrixFp d;
    d.rows = c.cell_count(k - 1);
    d.cols = c.cell_count(k);
    d.col_ptr.reserve(d.cols + 1);
    for (std::size_t i = 0; i < d.cols; ++i) {
      c.boundary(k, i, faces);
      for (const auto& f : faces) {
        d.row_idx.push_back(static_cast<std::uint32_t>(f.index));
        d.vals.push_back(fp::reduce(f.sign, l));
      }
      d.col_ptr.push_back(d.row_idx.size());
    }
    out.push_back(std::move(d));
  }
  return ChainComplexFp(l, std::move(out));
}

inline ChainComplexFp boundary_matrices(const EquivariantComplex& c, std::uint32_t l) {
  return std::visit([l](const auto& cx) { return boundary_matrices(cx, l); }, c);
}

/// Reduced Betti numbers b~_0..b~_dim over F_l, with the cell counts they came from.
struct BettiVector {
  std::uint32_t field = 0;
  std::vector<std::uint64_t> reduced;
  std::vector<std::uint64_t> cells;

  int dimension() const noexcept { return static_cast<int>(cells.size()) - 1; }

  /// sum (-1)^k b~_k == sum (-1)^k c_k - 1 (vacuous for the empty complex).
  bool euler_identity_holds() const noexcept {
    if (cells.empty()) return true;
    std::int64_t lhs = 0, rhs = -1;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const std::int64_t s = (k % 2 == 0) ? 1 : -1;
      lhs += s * static_cast<std::int64_t>(reduced[k]);
      rhs += s * static_cast<std::int64_t>(cells[k]);
    }
    return lhs == rhs;
  }

  friend bool operator==(const BettiVector&, const BettiVector&) = default;
};

inline BettiVector betti(const ChainComplexFp& cc) {
  BettiVector b;
  b.field = cc.field();
  const auto n = static_cast<std::size_t>(cc.dimension() + 1);
  std::vector<std::uint64_t> ranks(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) ranks[k] = rank_fp(cc.boundaries()[k], cc.field());
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<std::uint64_t>(cc.boundaries()[k].cols);
    b.cells.push_back(c);
    b.reduced.push_back(c - ranks[k] - ranks[k + 1]);
  }
  if (!b.euler_identity_holds()) throw std::logic_error("reduced Euler identity failed");
  return b;
}

template <class Complex>
BettiVector betti_of(const Complex& c, std::uint32_t l) {
  return betti(boundary_matrices(c, l));
}

/// Largest k with b~_i = 0 for all i <= k; -1 for the empty complex or b~_0 != 0;
/// the dimension when every reduced Betti number vanishes.
inline int connectivity(const BettiVector& b) {
  int k = -1;
  for (std::size_t i = 0; i < b.reduced.size(); ++i) {
    if (b.reduced[i] != 0) break;
    k = static_cast<int>(i);
  }
  return k;
}

template <class Complex>
int connectivity(const Complex& c, std::uint32_t l) {
  return connectivity(betti_of(c, l));
}

}  // namespace coindex
