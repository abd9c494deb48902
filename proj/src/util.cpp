#include "fillinglab/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fillinglab {

std::size_t worker_count() {
  static const std::size_t n = [] {
    if (const char* v = std::getenv("FILLINGLAB_THREADS")) {
      const long k = std::strtol(v, nullptr, 10);
      if (k > 0) return static_cast<std::size_t>(k);
    }
    return static_cast<std::size_t>(std::max(1u, std::thread::hardware_concurrency()));
  }();
  return n;
}

void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  const std::size_t workers = std::min(worker_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) fn(c, bounds(c), bounds(c + 1));
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fillinglab
