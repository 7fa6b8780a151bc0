#pragma once

// Command-line driver: reads a FIMI file, replays it through the configured
// miner, optionally compresses, and writes results, metrics and a summary.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "parasol/compress.hpp"
#include "parasol/fimi.hpp"
#include "parasol/metrics.hpp"
#include "parasol/miner.hpp"

namespace parasol::cli {

enum class mode { baseline, parasol, exact };
enum class backend { flat, wtree };
enum class compression { off, flat, two_step };

enum exit_code : int { ok = 0, usage = 1, parse = 2, io = 3 };

struct run_config {
  std::string input;
  mode run_mode = mode::exact;
  std::size_t k = unbounded;
  std::optional<double> epsilon;
  double sigma = 0.0;
  backend index = backend::wtree;
  compression compress = compression::off;
  std::string metrics_path;  // empty: no metrics
  std::string out_path;      // empty: no result file; "-": stdout
  std::size_t stride = 1;
  bool summary_json = false;
};

struct run_summary {
  timestamp n = 0;
  std::size_t k_n = 0;
  count_type delta = 0;
  double ratio = 0.0;
  double time_ms = 0.0;
  bool weak_guarantee = false;
  std::size_t rows = 0;
  std::size_t skipped_lines = 0;
  std::size_t max_length = 0;
  std::size_t compress_removed = 0;
};

/// Empty when valid, otherwise the usage error message.
inline std::string validate(const run_config& c) {
  if (c.input.empty()) return "--input is required";
  if (c.k == 0) return "--k must be positive";
  if (c.run_mode == mode::parasol && !c.epsilon) return "--mode parasol requires --epsilon";
  if (c.epsilon && (*c.epsilon < 0.0 || *c.epsilon >= 1.0)) return "--epsilon must lie in [0, 1)";
  if (c.sigma < 0.0 || c.sigma > 1.0) return "--sigma must lie in [0, 1]";
  if (c.stride == 0) return "--stride must be positive";
  if (c.compress == compression::two_step && c.index != backend::wtree)
    return "--compress two-step requires --backend wtree";
  return {};
}

inline miner_config effective_config(const run_config& c) {
  miner_config m;
  m.metrics_stride = 0;
  switch (c.run_mode) {
    case mode::exact: break;
    case mode::baseline: m.k = c.k; break;
    case mode::parasol: m.k = c.k; m.epsilon = c.epsilon; break;
  }
  return m;
}

inline void write_results(std::ostream& os, const std::vector<entry>& es) {
  for (const auto& e : es) os << to_string(e.alpha) << '\t' << e.count << '\t' << e.err << '\n';
}

inline std::string summary_line(const run_summary& s) {
  char ms[32];
  std::snprintf(ms, sizeof ms, "%.3f", s.time_ms);
  return "n=" + std::to_string(s.n) + " k(n)=" + std::to_string(s.k_n) +
         " delta=" + std::to_string(s.delta) + " ratio=" + format_decimal(s.ratio) +
         " time_ms=" + ms + " weak_guarantee=" + (s.weak_guarantee ? "true" : "false");
}

inline nlohmann::json summary_json(const run_summary& s) {
  return {{"n", s.n},
          {"k_n", s.k_n},
          {"delta", s.delta},
          {"ratio", s.ratio},
          {"time_ms", s.time_ms},
          {"weak_guarantee", s.weak_guarantee},
          {"rows", s.rows},
          {"skipped_lines", s.skipped_lines},
          {"max_length", s.max_length},
          {"compress_removed", s.compress_removed}};
}

namespace detail {

template <class Index>
int replay(const run_config& c, std::istream& in, std::ostream& out, std::ostream& err,
           run_summary& summary) {
  basic_miner<Index> miner(effective_config(c));

  std::ofstream metrics_file;
  std::unique_ptr<async_metrics_writer> metrics;
  if (!c.metrics_path.empty()) {
    metrics_file.open(c.metrics_path, std::ios::binary);
    if (!metrics_file) {
      err << "error: cannot open " << c.metrics_path << " for writing\n";
      return io;
    }
    metrics = std::make_unique<async_metrics_writer>(metrics_file);
  }

  const auto start = std::chrono::steady_clock::now();
  fimi_stats fs;
  try {
    fs = read_fimi(in, [&](const transaction& t) {
      miner.process(t);
      if (metrics && t.time % c.stride == 0) metrics->push(miner.sample());
    });
  } catch (const parse_error& e) {
    err << "error: " << c.input << ": " << e.what() << '\n';
    return parse;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << c.input << ": " << e.what() << '\n';
    return io;
  }
  if (metrics) {
    if (miner.now() % c.stride != 0) metrics->push(miner.sample());
    metrics->close();
    if (!metrics_file) {
      err << "error: write to " << c.metrics_path << " failed\n";
      return io;
    }
  }

  std::vector<entry> table;
  if (c.compress == compression::two_step) {
    if constexpr (std::is_same_v<Index, weeping_tree>) {
      auto r = compress_two_step(miner.index(), miner.delta());
      table = std::move(r.entries);
      summary.compress_removed = r.prescan_removed + r.search_removed;
    }
  } else {
    table = miner.take_snapshot().entries;
    if (c.compress == compression::flat)
      table = delta_compress(std::move(table), miner.delta(), &summary.compress_removed);
  }
  const snapshot snap{miner.now(), miner.delta(), std::move(table)};
  const query_result result = snap.query(c.sigma);
  const auto stop = std::chrono::steady_clock::now();

  summary.n = miner.now();
  summary.k_n = miner.size();
  summary.delta = miner.delta();
  summary.ratio = miner.sample().error_ratio();
  summary.time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  summary.weak_guarantee = result.weak_guarantee;
  summary.rows = result.entries.size();
  summary.skipped_lines = fs.skipped_lines;
  summary.max_length = fs.max_length;

  if (c.out_path == "-") {
    write_results(out, result.entries);
  } else if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::binary);
    if (f) write_results(f, result.entries);
    if (!f) {
      err << "error: cannot write " << c.out_path << '\n';
      return io;
    }
  }
  return ok;
}

}  // namespace detail

/// Runs one configuration. Results go to `out` only when out_path is "-";
/// the summary (text or JSON) always goes to `out`.
inline int run(const run_config& c, std::ostream& out, std::ostream& err,
               run_summary* summary_out = nullptr) {
  if (auto msg = validate(c); !msg.empty()) {
    err << "error: " << msg << '\n';
    return usage;
  }
  std::ifstream file;
  std::istream* in = &std::cin;
  if (c.input != "-") {
    file.open(c.input, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << c.input << '\n';
      return io;
    }
    in = &file;
  }
  run_summary s;
  const int rc = c.index == backend::flat ? detail::replay<flat_table>(c, *in, out, err, s)
                                          : detail::replay<weeping_tree>(c, *in, out, err, s);
  if (rc != ok) return rc;
  if (c.summary_json)
    out << summary_json(s).dump() << '\n';
  else
    out << summary_line(s) << '\n';
  if (summary_out) *summary_out = s;
  return ok;
}

}  // namespace parasol::cli
