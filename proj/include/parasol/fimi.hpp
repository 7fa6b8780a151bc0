#pragma once

// FIMI transaction files: one transaction per line, whitespace-separated
// non-negative integer items.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parasol/core.hpp"

namespace parasol {

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& token)
      : std::runtime_error("line " + std::to_string(line) + ": invalid item '" + token + "'"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses one line into a sorted, duplicate-free itemset (empty for a blank line).
inline itemset parse_fimi_line(std::string_view text, std::size_t line_no) {
  std::vector<item> items;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) break;
    const std::string_view tok = text.substr(pos, end - pos);
    item x = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw parse_error(line_no, std::string(tok));
    items.push_back(x);
    pos = end;
  }
  return itemset(std::move(items));
}

struct fimi_stats {
  std::size_t transactions = 0;
  std::size_t skipped_lines = 0;  // blank or whitespace-only
  std::size_t max_length = 0;
};

/// Streams transactions to `sink(transaction)` with timestamps 1, 2, ...
/// Skipped lines do not consume a timestamp.
template <class Sink>
fimi_stats read_fimi(std::istream& in, Sink&& sink) {
  fimi_stats st;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    itemset t = parse_fimi_line(line, line_no);
    if (t.empty()) {
      ++st.skipped_lines;
      continue;
    }
    st.max_length = std::max(st.max_length, t.size());
    sink(transaction{std::move(t), ++st.transactions});
  }
  if (in.bad()) throw std::ios_base::failure("read error");
  return st;
}

inline std::vector<transaction> parse_fimi(std::istream& in, fimi_stats* stats = nullptr) {
  std::vector<transaction> out;
  const fimi_stats st = read_fimi(in, [&](transaction t) { out.push_back(std::move(t)); });
  if (stats) *stats = st;
  return out;
}

inline void write_fimi(std::ostream& out, const std::vector<transaction>& ts) {
  for (const auto& t : ts) out << to_string(t.items) << '\n';
}

}  // namespace parasol
