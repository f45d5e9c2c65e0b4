#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace fblnoma::detail {

// Run fn(i) for i in [0, count). Work items must be independent; results are
// typically written into a preallocated slot per index, so the merge order
// (and therefore the output) does not depend on scheduling.
template <typename Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fblnoma::detail
