#include "drsplit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace drsplit {
namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kMinChunk = 4096;
}  // namespace

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }

int num_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto threads = static_cast<std::size_t>(num_threads());
  if (threads <= 1 || n < 2 * kMinChunk) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min(threads, n / kMinChunk);
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::jthread> workers;
  workers.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t b = c * step;
    const std::size_t e = std::min(n, b + step);
    if (b < e) workers.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, step));
}

}  // namespace drsplit
