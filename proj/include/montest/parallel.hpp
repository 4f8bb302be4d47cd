#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "montest/zp.hpp"

namespace montest {

/// Runs task(i) for i in [0, count) on up to `threads` workers.
///
/// With stop_on_yes, the result is the prefix ending at the smallest index whose
/// outcome has `.yes` set, whatever the scheduling, so reports stay reproducible.
/// Tasks must be independent. The first exception thrown by any task is rethrown.
template <class Task>
auto run_trials(u64 count, unsigned threads, bool stop_on_yes, Task&& task) {
  using R = decltype(task(u64{}));
  std::vector<std::optional<R>> slots(count);
  std::atomic<u64> next{0};
  std::atomic<u64> first_yes{count};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const u64 i = next.fetch_add(1);
      if (i >= count) return;
      if (stop_on_yes && i > first_yes.load(std::memory_order_relaxed)) continue;
      try {
        R r = task(i);
        const bool yes = r.yes;
        slots[i] = std::move(r);
        if (yes && stop_on_yes) {
          u64 cur = first_yes.load();
          while (i < cur && !first_yes.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        first_yes.store(0);
        return;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<u64>(count, 1024))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  const u64 end = stop_on_yes && first_yes.load() < count ? first_yes.load() + 1 : count;
  std::vector<R> out;
  out.reserve(end);
  for (u64 i = 0; i < end; ++i) out.push_back(std::move(*slots[i]));
  return out;
}

}  // namespace montest
