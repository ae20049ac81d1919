#include "frachartree/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace frachartree {

namespace {
// Set inside worker threads so nested loops run inline instead of
// oversubscribing.
thread_local bool inside_worker = false;
}  // namespace

unsigned thread_budget() {
  if (const char* env = std::getenv("FRACHARTREE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

unsigned worker_count(std::size_t count) {
  return static_cast<unsigned>(std::min<std::size_t>(thread_budget(), std::max<std::size_t>(count, 1)));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, unsigned)>& body) {
  const unsigned workers = inside_worker ? 1 : worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end, w] {
      inside_worker = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace frachartree
