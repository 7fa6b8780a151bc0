#pragma once

// Delta-compression of a finished table: an entry e1 is folded into a stored
// superset e2 when c1 <= c2 - err2 + delta_n. The superset's count rises to
// max(c1, c2) and its error absorbs the difference, so c2 - err2 is unchanged.
// A merge never lowers a count, which would uncover itemsets folded earlier.

#include <algorithm>
#include <tuple>
#include <vector>

#include "parasol/core.hpp"
#include "parasol/weeping_tree.hpp"

namespace parasol {

/// Brute-force pair search. Entries are considered as the subset side in
/// descending count (smaller itemsets first on ties); each picks the
/// qualifying proper superset with the highest count, then the smallest
/// error, then the lexicographically smallest itemset. Because c - err of
/// the superset side never changes, a single pass reaches a fixpoint.
/// Returns the survivors in output order.
inline std::vector<entry> delta_compress(std::vector<entry> es, count_type delta_n,
                                         std::size_t* removed = nullptr) {
  std::sort(es.begin(), es.end(), [](const entry& a, const entry& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.alpha.size() != b.alpha.size()) return a.alpha.size() < b.alpha.size();
    return a.alpha < b.alpha;
  });
  std::vector<bool> gone(es.size(), false);
  std::size_t n_removed = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const entry& e1 = es[i];
    std::size_t best = es.size();
    for (std::size_t j = 0; j < es.size(); ++j) {
      if (j == i || gone[j]) continue;
      const entry& e2 = es[j];
      if (e2.alpha.size() <= e1.alpha.size() || !is_subset(e1.alpha, e2.alpha)) continue;
      if (e1.count + e2.err > e2.count + delta_n) continue;
      if (best == es.size()) {
        best = j;
        continue;
      }
      const entry& b = es[best];
      if (std::tuple(b.count, e2.err, e2.alpha) < std::tuple(e2.count, b.err, b.alpha))
        best = j;
    }
    if (best == es.size()) continue;
    entry& e2 = es[best];
    if (e1.count > e2.count) {
      e2.err = e2.err + e1.count - e2.count;
      e2.count = e1.count;
    }
    gone[i] = true;
    ++n_removed;
  }
  std::vector<entry> out;
  out.reserve(es.size() - n_removed);
  for (std::size_t i = 0; i < es.size(); ++i)
    if (!gone[i]) out.push_back(std::move(es[i]));
  sort_for_output(out);
  if (removed) *removed = n_removed;
  return out;
}

struct two_step_result {
  std::vector<entry> entries;
  std::size_t prescan_removed = 0;
  std::size_t search_removed = 0;
};

/// Parent-child pre-scan on the tree, then the pair search on the survivors.
inline two_step_result compress_two_step(weeping_tree tree, count_type delta_n) {
  two_step_result r;
  r.prescan_removed = tree.precompress(delta_n);
  r.entries = delta_compress(tree.entries(), delta_n, &r.search_removed);
  return r;
}

}  // namespace parasol
