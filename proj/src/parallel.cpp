#include "tailwave/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tailwave {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
  const char* raw = std::getenv("TAILWAVE_THREADS");
  if (raw == nullptr) return 1;
  try {
    const int n = std::stoi(raw);
    return std::clamp(n, 1, 256);
  } catch (...) {
    return 1;
  }
}

}  // namespace

int thread_count() {
  const int o = g_override.load();
  return o > 0 ? o : env_threads();
}

void set_thread_count(int n) { g_override.store(std::max(n, 0)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, &errors, w, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tailwave
