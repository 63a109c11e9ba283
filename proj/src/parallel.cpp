#include "regmix/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace regmix {

namespace {
std::atomic<int> g_threads{0};  // 0 = not set yet

constexpr std::int64_t kMaxChunks = 256;

std::int64_t chunk_size(std::int64_t n) {
  return std::max<std::int64_t>(1, (n + kMaxChunks - 1) / kMaxChunks);
}
}  // namespace

int num_threads() {
  int t = g_threads.load(std::memory_order_relaxed);
  if (t > 0) return t;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_num_threads(int threads) {
  g_threads.store(std::max(1, threads), std::memory_order_relaxed);
}

int chunk_count(std::int64_t n) {
  if (n <= 0) return 0;
  std::int64_t cs = chunk_size(n);
  return static_cast<int>((n + cs - 1) / cs);
}

void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  const std::int64_t cs = chunk_size(n);
  const int chunks = chunk_count(n);
  const int workers = std::min<int>(num_threads(), chunks);

  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c)
      fn(c, c * cs, std::min<std::int64_t>(n, (c + 1) * cs));
    return;
  }

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      fn(c, c * cs, std::min<std::int64_t>(n, (c + 1) * cs));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

}  // namespace regmix
