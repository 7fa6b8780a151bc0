#pragma once

// Stream driver: one intersection step and one deletion step per
// transaction, over either index (flat table or weeping tree).

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "parasol/core.hpp"
#include "parasol/flat_table.hpp"
#include "parasol/policy.hpp"
#include "parasol/weeping_tree.hpp"

namespace parasol {

struct miner_config {
  std::size_t k = unbounded;      // size constant
  std::optional<double> epsilon;  // enables PARASOL deletion when set
  std::size_t metrics_stride = 1; // 0 keeps no in-memory history
};

struct metric_sample {
  timestamp i = 0;
  std::size_t k_i = 0;
  count_type delta = 0;

  double error_ratio() const { return i ? static_cast<double>(delta) / i : 0.0; }
  friend bool operator==(const metric_sample&, const metric_sample&) = default;
};

struct query_result {
  std::vector<entry> entries;  // output order
  bool weak_guarantee = false; // delta(i) > sigma * i: coverage not guaranteed
};

/// Immutable copy of the miner state at one timestamp.
struct snapshot {
  timestamp i = 0;
  count_type delta = 0;
  std::vector<entry> entries;

  query_result query(double sigma) const {
    query_result r;
    const count_type bar = scaled_floor(sigma, i);
    for (const auto& e : entries)
      if (e.count > bar) r.entries.push_back(e);
    r.weak_guarantee = delta > bar;
    return r;
  }
};

template <class Index>
class basic_miner {
 public:
  explicit basic_miner(miner_config config = {}) : config_(config) {
    if (config_.k == 0) throw std::invalid_argument("k must be positive");
    if (config_.epsilon && (*config_.epsilon < 0.0 || *config_.epsilon >= 1.0))
      throw std::invalid_argument("epsilon must lie in [0, 1)");
  }

  /// Advances one step. `t.time` must be exactly now() + 1.
  const step_stats& process(const transaction& t) {
    if (t.time != now_ + 1) throw timestamp_gap(now_ + 1, t.time);
    return process(t.items);
  }

  /// Advances one step with the next timestamp.
  const step_stats& process(const itemset& t) {
    if (t.empty()) throw std::invalid_argument("empty transaction");
    const timestamp i = now_ + 1;
    last_ = step_stats{};
    index_.intersect(t, i, delta_, last_);
    const deletion_policy policy{config_.k, config_.epsilon};
    delta_ = index_.delete_minima(
        [&](count_type m, std::size_t n) { return policy.keep_deleting(m, n, i); },
        delta_, last_);
    now_ = i;
    max_length_ = std::max(max_length_, t.size());
    if (config_.metrics_stride && now_ % config_.metrics_stride == 0)
      metrics_.push_back(sample());
    return last_;
  }

  /// Entries with count > sigma * i.
  query_result query(double sigma) const {
    if (sigma < 0.0 || sigma > 1.0) throw std::invalid_argument("sigma must lie in [0, 1]");
    return take_snapshot().query(sigma);
  }

  snapshot take_snapshot() const { return {now_, delta_, index_.entries()}; }

  metric_sample sample() const { return {now_, index_.size(), delta_}; }

  timestamp now() const noexcept { return now_; }
  count_type delta() const noexcept { return delta_; }
  std::size_t size() const noexcept { return index_.size(); }
  std::size_t max_length() const noexcept { return max_length_; }
  const miner_config& config() const noexcept { return config_; }
  const step_stats& last_step() const noexcept { return last_; }
  const std::vector<metric_sample>& metrics() const noexcept { return metrics_; }
  const Index& index() const noexcept { return index_; }
  Index& index() noexcept { return index_; }

 private:
  miner_config config_;
  Index index_;
  timestamp now_ = 0;
  count_type delta_ = 0;
  std::size_t max_length_ = 0;
  step_stats last_;
  std::vector<metric_sample> metrics_;
};

using flat_miner = basic_miner<flat_table>;
using tree_miner = basic_miner<weeping_tree>;

}  // namespace parasol
