#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace xychain {

// Compensated accumulator (Kahan-Neumaier). Also tracks the sum of absolute
// values, which downstream code uses as a roundoff scale.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  double abs_scale() const { return abs_; }

 private:
  double sum_ = 0, comp_ = 0, abs_ = 0;
};

inline int default_thread_count() {
  if (const char* env = std::getenv("XYCHAIN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Chunked parallel map over [0, n). Each index is touched exactly once; the
// caller's function must write only to its own slot.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = default_thread_count();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Adaptive Simpson quadrature.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12, int max_depth = 40);

}  // namespace xychain
