#pragma once

// Brute-force referees for small streams. Nothing here touches the engine:
// supports are counted directly and itemsets are enumerated as bitmasks over
// the observed universe, so the differential tests compare two independent
// computations.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parasol/core.hpp"

namespace parasol::oracle {

using stream = std::vector<itemset>;
using support_map = std::map<itemset, count_type>;

inline constexpr std::size_t max_universe = 20;

class universe_too_large : public std::length_error {
 public:
  explicit universe_too_large(std::size_t n)
      : std::length_error("universe of " + std::to_string(n) + " items exceeds " +
                          std::to_string(max_universe)) {}
};

inline count_type true_support(const stream& s, const itemset& alpha) {
  return static_cast<count_type>(std::count_if(s.begin(), s.end(), [&](const itemset& t) {
    return std::includes(t.begin(), t.end(), alpha.begin(), alpha.end());
  }));
}

namespace detail {

// Stream re-encoded as bitmasks over its sorted universe.
struct cube {
  std::vector<item> universe;
  std::vector<std::uint32_t> rows;

  explicit cube(const stream& s) {
    std::set<item> u;
    for (const auto& t : s) u.insert(t.begin(), t.end());
    if (u.size() > max_universe) throw universe_too_large(u.size());
    universe.assign(u.begin(), u.end());
    for (const auto& t : s) rows.push_back(encode(t));
  }

  std::uint32_t encode(const itemset& a) const {
    std::uint32_t m = 0;
    for (item x : a) {
      auto it = std::lower_bound(universe.begin(), universe.end(), x);
      if (it == universe.end() || *it != x) return 0;  // unseen item: caller handles
      m |= 1u << (it - universe.begin());
    }
    return m;
  }

  itemset decode(std::uint32_t m) const {
    std::vector<item> v;
    for (std::size_t b = 0; b < universe.size(); ++b)
      if (m >> b & 1u) v.push_back(universe[b]);
    return itemset(std::move(v));
  }

  std::uint32_t full() const {
    return (1u << universe.size()) - 1;
  }

  // Support of every mask, indexed by mask.
  std::vector<count_type> all_supports() const {
    std::vector<count_type> sup(std::size_t{1} << universe.size(), 0);
    for (std::uint32_t r : rows) {
      // Enumerate the submasks of r.
      for (std::uint32_t m = r;; m = (m - 1) & r) {
        ++sup[m];
        if (m == 0) break;
      }
    }
    return sup;
  }
};

}  // namespace detail

/// Every non-empty itemset with support strictly greater than sigma * n.
inline support_map enumerate_fis(const stream& s, double sigma) {
  const detail::cube c(s);
  const auto sup = c.all_supports();
  const count_type bar = scaled_floor(sigma, s.size());
  support_map out;
  for (std::uint32_t m = 1; m <= c.full(); ++m)
    if (sup[m] > bar) out.emplace(c.decode(m), sup[m]);
  return out;
}

/// Closed itemsets by the no-deletion recurrence
/// C_i = C_{i-1} ∪ {t_i} ∪ {a ∩ t_i : a ∈ C_{i-1}, a ∩ t_i non-empty}.
inline support_map enumerate_closed(const stream& s) {
  std::set<std::vector<item>> closed;
  for (const auto& t : s) {
    const std::vector<item> tv(t.begin(), t.end());
    std::set<std::vector<item>> next = closed;
    next.insert(tv);
    for (const auto& a : closed) {
      std::vector<item> b;
      std::set_intersection(a.begin(), a.end(), tv.begin(), tv.end(), std::back_inserter(b));
      if (!b.empty()) next.insert(std::move(b));
    }
    closed = std::move(next);
  }
  support_map out;
  for (const auto& a : closed) {
    itemset alpha(a);
    out.emplace(alpha, true_support(s, alpha));
  }
  return out;
}

/// Closed itemsets by definition: supported itemsets with no proper superset
/// of equal support.
inline support_map enumerate_closed_by_definition(const stream& s) {
  const detail::cube c(s);
  const auto sup = c.all_supports();
  support_map out;
  for (std::uint32_t m = 1; m <= c.full(); ++m) {
    if (sup[m] == 0) continue;
    bool closed = true;
    for (std::size_t b = 0; b < c.universe.size() && closed; ++b)
      if (!(m >> b & 1u) && sup[m | 1u << b] == sup[m]) closed = false;
    if (closed) out.emplace(c.decode(m), sup[m]);
  }
  return out;
}

/// Frequent itemsets with no proper superset beta (over the observed
/// universe) such that sup(alpha) <= sup(beta) + delta.
inline std::set<itemset> enumerate_delta_closed(const stream& s, count_type delta,
                                                double sigma) {
  const detail::cube c(s);
  const auto sup = c.all_supports();
  const count_type bar = scaled_floor(sigma, s.size());
  std::set<itemset> out;
  for (std::uint32_t m = 1; m <= c.full(); ++m) {
    if (sup[m] <= bar) continue;
    bool closed = true;
    // Supports are antitone, so checking the one-item extensions suffices.
    for (std::size_t b = 0; b < c.universe.size() && closed; ++b)
      if (!(m >> b & 1u) && sup[m] <= sup[m | 1u << b] + delta) closed = false;
    if (closed) out.insert(c.decode(m));
  }
  return out;
}

/// Every frequent itemset (wrt sigma) is delta-covered, under true supports,
/// by some itemset of `output`. On failure `witness` receives the first
/// uncovered frequent itemset.
inline bool verify_delta_covered_set(const std::vector<entry>& output, const stream& s,
                                     double sigma, count_type delta,
                                     itemset* witness = nullptr) {
  std::vector<std::pair<itemset, count_type>> out;
  for (const auto& e : output) out.emplace_back(e.alpha, true_support(s, e.alpha));
  for (const auto& [alpha, sa] : enumerate_fis(s, sigma)) {
    const bool covered = std::any_of(out.begin(), out.end(), [&](const auto& b) {
      return std::includes(b.first.begin(), b.first.end(), alpha.begin(), alpha.end()) &&
             sa <= b.second + delta;
    });
    if (!covered) {
      if (witness) *witness = alpha;
      return false;
    }
  }
  return true;
}

}  // namespace parasol::oracle
