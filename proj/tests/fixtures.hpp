#pragma once

// Shared fixtures and harness helpers.
//
// Four-itemset coverage example, pinned as a concrete stream so that the
// supports are real: {1,2,3} three times, then {1,2}, then {1}. Supports at
// n = 5:
//   a1 = {1}      : 5
//   a2 = {2}      : 4
//   a3 = {1,2}    : 4
//   a4 = {1,2,3}  : 3
// With sigma = 0.5 all four are frequent, and the 1-closed family is {a4}.
//
// Worked streams:
//   s2_4: t_i = {1..5} minus {i}, i = 1..4; t5 = {1,3,5} extends it.
//   s3_4: <{1,2,3,5}, {1,2,4}, {2,3,4}, {1,2,5}>.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "parasol/parasol.hpp"

namespace fixtures {

using parasol::itemset;

inline const itemset a1{1}, a2{2}, a3{1, 2}, a4{1, 2, 3};

inline std::vector<itemset> coverage_stream() {
  return {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2}, {1}};
}

inline std::vector<itemset> s2_4() {
  return {{2, 3, 4, 5}, {1, 3, 4, 5}, {1, 2, 4, 5}, {1, 2, 3, 5}};
}

inline const itemset t5{1, 3, 5};

inline std::vector<itemset> s2_4_t5() {
  auto s = s2_4();
  s.push_back(t5);
  return s;
}

inline std::vector<itemset> s3_4() {
  return {{1, 2, 3, 5}, {1, 2, 4}, {2, 3, 4}, {1, 2, 5}};
}

// --- Addresses over a stream prefix of length n -------------------------
// Bit (n - j) stands for t_j, so t_1 is the most significant bit.

inline bool has_tx(std::uint64_t x, std::size_t j, std::size_t n) {
  return x >> (n - j) & 1u;
}

/// Intersection of the transactions selected by a non-zero address.
inline itemset itemset_of(const std::vector<itemset>& s, std::uint64_t x, std::size_t n) {
  std::optional<itemset> acc;
  for (std::size_t j = 1; j <= n; ++j) {
    if (!has_tx(x, j, n)) continue;
    if (!acc) {
      acc = s[j - 1];
    } else {
      auto m = parasol::intersect(*acc, s[j - 1]);
      acc = m ? *m : itemset{};
    }
  }
  return acc.value_or(itemset{});
}

/// x covers y: y agrees with x on every bit down to x's least significant set bit.
inline bool covers(std::uint64_t x, std::uint64_t y, std::size_t n) {
  if (x == 0) return true;
  const std::uint64_t width = n >= 64 ? ~0ull : (1ull << n) - 1;
  const std::uint64_t mask = ~((x & (~x + 1)) - 1) & width;
  return (y & mask) == x;
}

/// Parent in the binomial spanning tree: clear the least significant set bit.
inline std::uint64_t binomial_parent(std::uint64_t x) { return x & (x - 1); }

// --- Replay helpers -------------------------------------------------------

template <class Miner>
void replay(Miner& m, const std::vector<itemset>& s) {
  for (const auto& t : s) m.process(t);
}

inline parasol::flat_table table_after(const std::vector<itemset>& s) {
  parasol::flat_miner m;
  replay(m, s);
  return m.index();
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& l : v) out += l + '\n';
  return out;
}

}  // namespace fixtures
