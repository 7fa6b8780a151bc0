#pragma once

// Table-based reference implementation of incremental intersection with
// minimum-entry deletion. Every stored entry is intersected with every
// transaction; the weeping tree must reproduce this table exactly.

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parasol/core.hpp"
#include "parasol/policy.hpp"

namespace parasol {

class flat_table {
 public:
  struct slot {
    count_type count = 0;
    count_type err = 0;
    timestamp created = 0;
    std::size_t rank = 0;
  };

  flat_table() = default;

  /// Builds a table from explicit entries, all stamped with creation step
  /// `created` and ranked lexicographically. Intended for fixtures.
  static flat_table from_entries(std::vector<entry> es, timestamp created = 0) {
    flat_table t;
    std::sort(es.begin(), es.end(),
              [](const entry& a, const entry& b) { return a.alpha < b.alpha; });
    std::size_t rank = 0;
    for (auto& e : es)
      t.slots_.emplace(std::move(e.alpha), slot{e.count, e.err, created, rank++});
    return t;
  }

  std::size_t size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }

  const slot* find(const itemset& a) const {
    auto it = slots_.find(a);
    return it == slots_.end() ? nullptr : &it->second;
  }

  template <class F>
  void for_each_entry(F&& f) const {
    for (const auto& [alpha, s] : slots_) f(entry{alpha, s.count, s.err});
  }

  /// Snapshot in output order.
  std::vector<entry> entries() const {
    std::vector<entry> out;
    out.reserve(slots_.size());
    for_each_entry([&](entry e) { out.push_back(std::move(e)); });
    sort_for_output(out);
    return out;
  }

  std::optional<count_type> min_count() const {
    if (slots_.empty()) return std::nullopt;
    count_type m = std::numeric_limits<count_type>::max();
    for (const auto& kv : slots_) m = std::min(m, kv.second.count);
    return m;
  }

  /// Intersects every entry with `t` and merges the results back.
  ///
  /// A transaction with no entry of its own contributes <t, delta+1, delta>.
  /// Colliding candidates keep the highest count; at equal count the one
  /// derived from the smaller source itemset wins (an existing entry always
  /// beats its supersets, and the transaction's own candidate ranks last), so
  /// the outcome does not depend on iteration order.
  void intersect(const itemset& t, timestamp now, count_type delta,
                 step_stats& stats) {
    struct candidate {
      count_type count;
      count_type err;
      std::size_t source_size;
      const itemset* source;  // null for the transaction's own entry
    };
    auto better = [](const candidate& a, const candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      if (a.source_size != b.source_size) return a.source_size < b.source_size;
      if (!a.source || !b.source) return a.source != nullptr;
      return *a.source < *b.source;
    };

    std::unordered_map<itemset, candidate, itemset_hash> buffer;
    buffer.reserve(slots_.size() + 1);
    auto offer = [&](itemset key, const candidate& c) {
      auto [it, inserted] = buffer.try_emplace(std::move(key), c);
      if (!inserted && better(c, it->second)) it->second = c;
    };

    if (!slots_.contains(t)) {
      ++stats.intersections;
      stats.max_merge_steps = std::max(stats.max_merge_steps, t.size());
      offer(t, candidate{delta + 1, delta, std::numeric_limits<std::size_t>::max(), nullptr});
    }
    for (const auto& [alpha, s] : slots_) {
      std::size_t steps = 0;
      auto beta = parasol::intersect(alpha, t, &steps);
      ++stats.intersections;
      stats.max_merge_steps = std::max(stats.max_merge_steps, steps);
      if (beta) offer(std::move(*beta), candidate{s.count + 1, s.err, alpha.size(), &alpha});
    }

    std::vector<itemset> fresh;
    for (auto& [beta, c] : buffer) {
      auto it = slots_.find(beta);
      if (it != slots_.end()) {
        it->second.count = c.count;
        it->second.err = c.err;
      } else {
        fresh.push_back(beta);
      }
    }
    // Inserting only after the pass keeps `candidate::source` pointers valid.
    std::sort(fresh.begin(), fresh.end());
    std::size_t rank = 0;
    for (auto& beta : fresh) {
      const candidate& c = buffer.at(beta);
      slots_.emplace(beta, slot{c.count, c.err, now, rank++});
    }
    stats.created += fresh.size();
    stats.peak_size = std::max(stats.peak_size, slots_.size());
  }

  /// Removes minimum entries (in eviction_key order) while
  /// `keep(min_count, size)` holds. Returns the running maximum error.
  template <class Keep>
  count_type delete_minima(Keep&& keep, count_type delta, step_stats& stats) {
    if (slots_.empty()) return delta;
    using node = std::pair<eviction_key, const itemset*>;
    std::vector<node> heap;
    heap.reserve(slots_.size());
    for (const auto& [alpha, s] : slots_)
      heap.emplace_back(eviction_key{s.count, alpha.size(), s.created, s.rank}, &alpha);
    auto later = [](const node& a, const node& b) { return b.first < a.first; };
    std::make_heap(heap.begin(), heap.end(), later);
    while (!heap.empty() && keep(heap.front().first.count, slots_.size())) {
      std::pop_heap(heap.begin(), heap.end(), later);
      auto [key, alpha] = heap.back();
      heap.pop_back();
      delta = std::max(delta, key.count);
      slots_.erase(*alpha);
      ++stats.deleted;
    }
    return delta;
  }

 private:
  std::unordered_map<itemset, slot, itemset_hash> slots_;
};

/// Pre-deletion table for the next timestamp.
inline flat_table intersect_step(flat_table table, const itemset& t,
                                 count_type delta_prev, timestamp now = 0,
                                 step_stats* stats = nullptr) {
  step_stats local;
  table.intersect(t, now, delta_prev, stats ? *stats : local);
  return table;
}

/// Minimum-entry deletion down to `k` entries.
inline std::pair<flat_table, count_type> rc_delete(flat_table table, std::size_t k,
                                                   count_type delta_prev) {
  step_stats stats;
  const deletion_policy policy{k, std::nullopt};
  const count_type d = table.delete_minima(
      [&](count_type m, std::size_t n) { return policy.keep_deleting(m, n, 1); },
      delta_prev, stats);
  return {std::move(table), d};
}

/// Deletes minimum entries while the table exceeds `k` or the minimum count
/// is at most epsilon * i.
inline std::pair<flat_table, count_type> parasol_delete(flat_table table, std::size_t k,
                                                        double epsilon, timestamp i,
                                                        count_type delta_prev) {
  step_stats stats;
  const deletion_policy policy{k, epsilon};
  const count_type d = table.delete_minima(
      [&](count_type m, std::size_t n) { return policy.keep_deleting(m, n, i); },
      delta_prev, stats);
  return {std::move(table), d};
}

}  // namespace parasol
