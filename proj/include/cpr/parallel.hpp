#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

namespace cpr {

/// Worker count: CPR_THREADS when set to a positive integer, else hardware concurrency.
std::size_t thread_count();

/// Calls attempt(i) for i = 0, 1, ... < count and returns the smallest i for
/// which it returned true. Work proceeds in blocks; within a block attempts may
/// run concurrently, so attempts past the returned index can also have run.
/// The returned index is the same as for a sequential scan. `attempt` must be
/// safe to call concurrently for distinct i.
template <class Attempt>
std::optional<std::size_t> first_success(std::size_t count, Attempt&& attempt) {
  const std::size_t workers = std::max<std::size_t>(1, thread_count());
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      if (attempt(i)) return i;
    return std::nullopt;
  }
  const std::size_t block = workers * 8;
  for (std::size_t begin = 0; begin < count; begin += block) {
    const std::size_t end = std::min(count, begin + block);
    std::vector<char> hit(end - begin, 0);
    std::atomic<std::size_t> next{begin};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1))
        hit[i - begin] = attempt(i) ? 1 : 0;
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    for (std::size_t i = begin; i < end; ++i)
      if (hit[i - begin]) return i;
  }
  return std::nullopt;
}

}  // namespace cpr
