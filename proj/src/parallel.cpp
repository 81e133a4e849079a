#include "radialwave/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace radialwave {

namespace {
std::atomic<unsigned> g_threads{1};

void run_tasks(std::size_t tasks, const std::function<void(std::size_t)>& task) {
  const unsigned workers = std::min<unsigned>(g_threads.load(), static_cast<unsigned>(tasks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}
}  // namespace

void set_thread_count(unsigned n) { g_threads = std::max(1u, n); }
unsigned thread_count() { return g_threads.load(); }

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  run_tasks(kWorkChunks, [&](std::size_t c) {
    const std::size_t begin = n * c / kWorkChunks;
    const std::size_t end = n * (c + 1) / kWorkChunks;
    if (begin < end) body(c, begin, end);
  });
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace radialwave
