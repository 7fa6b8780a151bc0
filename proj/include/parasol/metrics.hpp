#pragma once

// Metrics time series as CSV ("i,k_i,delta_i,error_ratio"), and a writer
// thread so that formatting and I/O stay off the stepping thread.

#include <charconv>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>

#include "parasol/miner.hpp"

namespace parasol {

/// Shortest round-trip decimal form: 0.6, 0, 0.0125.
inline std::string format_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline constexpr const char* metrics_header = "i,k_i,delta_i,error_ratio";

inline std::string metrics_row(const metric_sample& s) {
  return std::to_string(s.i) + ',' + std::to_string(s.k_i) + ',' + std::to_string(s.delta) +
         ',' + format_decimal(s.error_ratio());
}

inline void write_metrics_csv(std::ostream& os, std::span<const metric_sample> samples) {
  os << metrics_header << '\n';
  for (const auto& s : samples) os << metrics_row(s) << '\n';
}

/// Bounded producer/consumer queue feeding a CSV stream from a worker
/// thread. push() waits only when `capacity` rows are pending; nothing is
/// ever dropped.
class async_metrics_writer {
 public:
  explicit async_metrics_writer(std::ostream& os, std::size_t capacity = 4096)
      : os_(os), capacity_(capacity ? capacity : 1) {
    os_ << metrics_header << '\n';
    worker_ = std::thread([this] { drain(); });
  }

  async_metrics_writer(const async_metrics_writer&) = delete;
  async_metrics_writer& operator=(const async_metrics_writer&) = delete;

  ~async_metrics_writer() { close(); }

  void push(const metric_sample& s) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_; });
    queue_.push_back(s);
    not_empty_.notify_one();
  }

  /// Flushes pending rows and joins the worker. Idempotent.
  void close() {
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      closed_ = true;
    }
    not_empty_.notify_one();
    worker_.join();
    os_.flush();
  }

  std::size_t written() const {
    std::lock_guard lock(mu_);
    return written_;
  }

 private:
  void drain() {
    for (;;) {
      std::unique_lock lock(mu_);
      not_empty_.wait(lock, [&] { return closed_ || !queue_.empty(); });
      if (queue_.empty()) return;
      const metric_sample s = queue_.front();
      queue_.pop_front();
      not_full_.notify_one();
      lock.unlock();
      os_ << metrics_row(s) << '\n';
      lock.lock();
      ++written_;
    }
  }

  std::ostream& os_;
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_, not_full_;
  std::deque<metric_sample> queue_;
  std::size_t written_ = 0;
  bool closed_ = false;
  std::thread worker_;
};

}  // namespace parasol
