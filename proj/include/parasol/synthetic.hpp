#pragma once

// Seeded stream generators: a drift stream (a stable regime of repeated
// patterns interrupted by a burst of long random transactions over a
// disjoint vocabulary) and small uniform streams for fuzzing.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "parasol/core.hpp"

namespace parasol {

struct drift_config {
  std::uint64_t seed = 1;
  std::size_t n = 20000;
  std::size_t burst_begin = 2000;    // first burst transaction (0-based)
  std::size_t burst_length = 1000;
  std::size_t patterns = 6;
  std::size_t pattern_length = 5;
  std::size_t noise_items = 1;       // random extra items per stable transaction
  item stable_vocabulary = 40;       // stable items are 1..stable_vocabulary
  item burst_first_item = 1000;      // burst items start here
  item burst_vocabulary = 40;
  std::size_t burst_transaction_length = 20;
};

inline std::vector<itemset> generate_drift(const drift_config& c) {
  std::mt19937_64 rng(c.seed);
  auto pick = [&](item lo, item count) {
    return lo + static_cast<item>(std::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng));
  };
  auto draw_distinct = [&](item lo, item count, std::size_t len) {
    std::vector<item> v;
    while (v.size() < len && v.size() < count) {
      const item x = pick(lo, count);
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
    return v;
  };

  std::vector<std::vector<item>> patterns;
  for (std::size_t p = 0; p < c.patterns; ++p)
    patterns.push_back(draw_distinct(1, c.stable_vocabulary, c.pattern_length));

  std::vector<itemset> out;
  out.reserve(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    if (i >= c.burst_begin && i < c.burst_begin + c.burst_length) {
      out.emplace_back(draw_distinct(c.burst_first_item, c.burst_vocabulary,
                                     c.burst_transaction_length));
      continue;
    }
    std::vector<item> t = patterns[pick(0, static_cast<item>(patterns.size()))];
    for (std::size_t j = 0; j < c.noise_items; ++j) t.push_back(pick(1, c.stable_vocabulary));
    out.emplace_back(std::move(t));
  }
  return out;
}

/// n transactions over items 1..universe, each of length 1..max_length.
inline std::vector<itemset> generate_uniform(std::mt19937_64& rng, std::size_t n,
                                             item universe, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(1, max_length);
  std::uniform_int_distribution<item> it(1, universe);
  std::vector<itemset> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<item> v;
    const std::size_t l = len(rng);
    for (std::size_t j = 0; j < l; ++j) v.push_back(it(rng));
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace parasol
