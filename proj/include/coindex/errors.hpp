#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coindex {

/// Base of every exception thrown by the library. `reason()` is a short
/// machine-readable tag ("shape", "resource", "needed_range", "not_free",
/// "unverified", "verification") that the CLI copies into its JSON output.
class Error : public std::runtime_error {
 public:
  Error(std::string reason, const std::string& what)
      : std::runtime_error(what), reason_(std::move(reason)) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

/// A group action with a setwise-invariant cell. The witness names the cell.
class NotFreeError : public Error {
 public:
  NotFreeError(const std::string& what, std::string witness)
      : Error("not_free", what + " (witness: " + witness + ")"), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Closed interval of absolute sequence indices. Empty when lo > hi.
struct IndexRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const noexcept { return lo > hi; }
  std::int64_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t k) const noexcept { return lo <= k && k <= hi; }
  bool contains(const IndexRange& r) const noexcept {
    return r.empty() || (!empty() && lo <= r.lo && r.hi <= hi);
  }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;

  std::string to_string() const {
    if (empty()) return "[]";
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  }
};

/// Hull of two ranges; an empty operand is ignored.
inline IndexRange hull(const IndexRange& a, const IndexRange& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// A windowed evaluation needed input indices that were not supplied.
class NeededRangeError : public Error {
 public:
  NeededRangeError(IndexRange needed, IndexRange available, std::vector<IndexRange> missing)
      : Error("needed_range", describe(needed, available, missing)),
        needed_(needed),
        available_(available),
        missing_(std::move(missing)) {}

  const IndexRange& needed() const noexcept { return needed_; }
  const IndexRange& available() const noexcept { return available_; }
  const std::vector<IndexRange>& missing() const noexcept { return missing_; }

 private:
  static std::string describe(const IndexRange& needed, const IndexRange& available,
                              const std::vector<IndexRange>& missing) {
    std::string s = "input window " + available.to_string() + " does not cover needed range " +
                    needed.to_string() + "; missing indices";
    for (const auto& r : missing) s += " " + r.to_string();
    return s;
  }

  IndexRange needed_;
  IndexRange available_;
  std::vector<IndexRange> missing_;
};

/// Parts of `needed` not covered by `available`.
inline std::vector<IndexRange> uncovered(const IndexRange& needed, const IndexRange& available) {
  std::vector<IndexRange> out;
  if (needed.empty()) return out;
  if (available.empty()) return {needed};
  if (needed.lo < available.lo) out.push_back({needed.lo, std::min(needed.hi, available.lo - 1)});
  if (needed.hi > available.hi) out.push_back({std::max(needed.lo, available.hi + 1), needed.hi});
  return out;
}

}  // namespace coindex
