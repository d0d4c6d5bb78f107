#pragma once

// Deterministic block-parallel Monte Carlo driver.
//
// Samples are grouped into fixed blocks of kBlockSize consecutive indices.
// Each block accumulates into its own partial result in sample order, and
// partials are folded into the total strictly in block order. The result is
// therefore independent of the number of workers and of scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace sdereg {

struct McRun {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 selects std::thread::hardware_concurrency()
};

inline constexpr std::size_t kBlockSize = 64;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// make_partial() -> Partial, make_workspace() -> Workspace,
/// body(sample_index, Partial&, Workspace&), merge(Partial& total, Partial&&).
template <class MakePartial, class MakeWorkspace, class Body, class Merge>
auto run_blocks(std::size_t n_samples, unsigned threads, MakePartial make_partial,
                MakeWorkspace make_workspace, Body body, Merge merge) {
  using Partial = decltype(make_partial());
  const std::size_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  Partial total = make_partial();

  std::mutex mutex;
  std::map<std::size_t, Partial> pending;
  std::size_t next_merge = 0;
  std::atomic<std::size_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    try {
      auto workspace = make_workspace();
      for (;;) {
        const std::size_t b = next_block.fetch_add(1);
        if (b >= n_blocks || failed.load()) return;
        Partial partial = make_partial();
        const std::size_t end = std::min(n_samples, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i)
          body(i, partial, workspace);
        std::lock_guard<std::mutex> lock(mutex);
        pending.emplace(b, std::move(partial));
        for (auto it = pending.find(next_merge); it != pending.end();
             it = pending.find(next_merge)) {
          merge(total, std::move(it->second));
          pending.erase(it);
          ++next_merge;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex);
      if (!error) error = std::current_exception();
      failed.store(true);
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads),
                                                  std::max<std::size_t>(n_blocks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return total;
}

}  // namespace sdereg
