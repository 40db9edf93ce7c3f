#include "restriction_lab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace rlab {

int max_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RESTRICTION_LAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
    workers.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> parts(n, 0.0);
  parallel_for(n, [&](std::size_t i) { parts[i] = f(i); });
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace rlab
