#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rpnm {

// Evaluates fn(i) for i in [0, count) on up to `shards` threads and returns the
// results in index order. Work is handed out dynamically, but each result
// lands in its own slot, so any reduction over the returned vector is
// independent of the shard count.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned shards, Fn&& fn) {
  std::vector<T> out(count);
  shards = std::max(1u, std::min<unsigned>(shards, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (shards == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace rpnm
