#pragma once

// Domain types and set algebra shared by every part of the miner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace parasol {

using item = std::uint32_t;
using count_type = std::uint64_t;
using timestamp = std::uint64_t;

/// Sorted, duplicate-free set of items.
class itemset {
 public:
  itemset() = default;

  itemset(std::initializer_list<item> items) : items_(items) { normalize(); }

  /// Takes any sequence of items; sorts and removes duplicates.
  explicit itemset(std::vector<item> items) : items_(std::move(items)) {
    normalize();
  }

  /// Wraps a sequence already known to be strictly increasing.
  static itemset from_sorted(std::vector<item> items) {
    itemset s;
    s.items_ = std::move(items);
    return s;
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  item operator[](std::size_t i) const { return items_[i]; }
  std::span<const item> items() const noexcept { return items_; }

  bool contains(item x) const {
    return std::binary_search(items_.begin(), items_.end(), x);
  }

  friend bool operator==(const itemset&, const itemset&) = default;
  friend auto operator<=>(const itemset&, const itemset&) = default;

  friend std::ostream& operator<<(std::ostream& os, const itemset& s) {
    os << '{';
    for (std::size_t i = 0; i < s.items_.size(); ++i) {
      if (i) os << ',';
      os << s.items_[i];
    }
    return os << '}';
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<item> items_;
};

/// Space-separated items, the form used by the FIMI format and result files.
inline std::string to_string(const itemset& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(s[i]);
  }
  return out;
}

struct itemset_hash {
  std::size_t operator()(const itemset& s) const noexcept {
    // FNV-1a over the item words.
    std::uint64_t h = 1469598103934665603ull;
    for (item x : s) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Linear-merge intersection. Returns nullopt when the sets are disjoint.
/// `comparisons` is incremented once per merge step.
inline std::optional<itemset> intersect(const itemset& a, const itemset& b,
                                        std::size_t* comparisons = nullptr) {
  std::vector<item> out;
  out.reserve(std::min(a.size(), b.size()));
  auto i = a.begin(), ie = a.end();
  auto j = b.begin(), je = b.end();
  std::size_t steps = 0;
  while (i != ie && j != je) {
    ++steps;
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      out.push_back(*i);
      ++i;
      ++j;
    }
  }
  if (comparisons) *comparisons += steps;
  if (out.empty()) return std::nullopt;
  return itemset::from_sorted(std::move(out));
}

/// True iff every item of `sub` occurs in `super`.
inline bool is_subset(const itemset& sub, const itemset& super) {
  if (sub.size() > super.size()) return false;
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

/// Stored itemset with estimated count and per-entry maximum error.
struct entry {
  itemset alpha;
  count_type count = 0;
  count_type err = 0;

  friend bool operator==(const entry&, const entry&) = default;
  friend std::ostream& operator<<(std::ostream& os, const entry& e) {
    return os << '<' << e.alpha << ',' << e.count << ',' << e.err << '>';
  }
};

/// Descending count, then lexicographic itemset. The canonical output order.
inline bool output_order(const entry& a, const entry& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.alpha < b.alpha;
}

inline void sort_for_output(std::vector<entry>& es) {
  std::sort(es.begin(), es.end(), output_order);
}

struct transaction {
  itemset items;
  timestamp time = 0;
};

/// `sub` is delta-covered by `super`: sub ⊆ super and sup(sub) ≤ sup(super) + delta.
inline bool is_delta_covered(const itemset& sub, count_type sup_sub,
                             const itemset& super, count_type sup_super,
                             count_type delta) {
  return is_subset(sub, super) && sup_sub <= sup_super + delta;
}

/// Every member of `target` is delta-covered by some member of `candidate`.
template <class SupportFn>
bool is_delta_covered_set(std::span<const itemset> candidate,
                          std::span<const itemset> target, SupportFn&& support,
                          count_type delta) {
  for (const auto& a : target) {
    const count_type sa = support(a);
    const bool covered = std::any_of(
        candidate.begin(), candidate.end(), [&](const itemset& b) {
          return is_delta_covered(a, sa, b, support(b), delta);
        });
    if (!covered) return false;
  }
  return true;
}

/// floor(fraction * n), robust to the binary representation of decimal
/// fractions such as 0.1. Comparisons "c <= f*n" and "c > f*n" against an
/// integer count reduce to comparisons against this value.
inline count_type scaled_floor(double fraction, timestamp n) {
  const long double v = static_cast<long double>(fraction) * n;
  return static_cast<count_type>(std::floor(v + 1e-9L));
}

class timestamp_gap : public std::runtime_error {
 public:
  timestamp_gap(timestamp expected, timestamp got)
      : std::runtime_error("transaction timestamp " + std::to_string(got) +
                           " does not follow " + std::to_string(expected - 1)),
        expected_(expected),
        got_(got) {}
  timestamp expected() const noexcept { return expected_; }
  timestamp got() const noexcept { return got_; }

 private:
  timestamp expected_;
  timestamp got_;
};

}  // namespace parasol
