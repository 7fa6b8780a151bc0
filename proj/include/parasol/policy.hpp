#pragma once

// Pieces shared by the flat table and the weeping tree: the per-step work
// counters, the eviction order, and the deletion loop guard.

#include <cstddef>
#include <limits>
#include <optional>
#include <tuple>

#include "parasol/core.hpp"

namespace parasol {

inline constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

/// Work counters for one transaction.
struct step_stats {
  std::size_t intersections = 0;    // candidate intersections computed, incl. the transaction's own entry
  std::size_t max_merge_steps = 0;  // longest single intersection, in merge comparisons
  std::size_t peak_size = 0;        // entries held after intersection, before deletion
  std::size_t visits = 0;           // tree nodes whose intersection was computed
  std::size_t dis_increments = 0;   // tree nodes incremented without an intersection
  std::size_t dis = 0;
  std::size_t dus = 0;
  std::size_t sus = 0;
  std::size_t created = 0;
  std::size_t deleted = 0;
};

/// Eviction priority, smallest first: lowest count, then the larger itemset
/// (a superset never outlives its subsets at equal count, which keeps the
/// table closed under intersection), then oldest creation step, then the
/// lexicographic rank of the itemset among entries created in that step.
struct eviction_key {
  count_type count = 0;
  std::size_t size = 0;
  timestamp created = 0;
  std::size_t rank = 0;

  friend bool operator<(const eviction_key& a, const eviction_key& b) {
    return std::tuple(a.count, b.size, a.created, a.rank) <
           std::tuple(b.count, a.size, b.created, b.rank);
  }
  friend bool operator==(const eviction_key&, const eviction_key&) = default;
};

/// Loop guard of the deletion step. Without epsilon this is plain
/// minimum-entry deletion down to `capacity`; with epsilon it also evicts
/// every minimum entry whose count is at most epsilon * i.
struct deletion_policy {
  std::size_t capacity = unbounded;
  std::optional<double> epsilon;

  bool keep_deleting(count_type min_count, std::size_t size, timestamp i) const {
    if (size == 0) return false;
    if (size > capacity) return true;
    return epsilon && min_count <= scaled_floor(*epsilon, i);
  }
};

}  // namespace parasol
