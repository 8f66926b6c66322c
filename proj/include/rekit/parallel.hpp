#pragma once

#include <cstdint>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace rekit::detail {

/// Worker count for trial batches: RE_KIT_THREADS if set (clamped to
/// hardware), otherwise 1.
inline int trial_thread_count() {
  const char* env = std::getenv("RE_KIT_THREADS");
  if (!env) return 1;
  int requested = std::atoi(env);
  if (requested < 1) return 1;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return hw > 0 ? std::min(requested, hw) : requested;
}

/// Runs fn(trial) for trial in [0, trials). Each trial must derive all its
/// randomness from its own index, so the schedule cannot change results.
template <typename Fn>
void for_each_trial(std::uint64_t trials, Fn&& fn) {
  const int threads = trial_thread_count();
  if (threads <= 1 || trials < 2) {
    for (std::uint64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::future<void>> futures;
  const std::uint64_t chunk = (trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, [lo, hi, &fn] {
      for (std::uint64_t t = lo; t < hi; ++t) fn(t);
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace rekit::detail
