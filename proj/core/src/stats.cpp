#include "pathqv/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "pathqv/error.hpp"
#include "pathqv/numeric.hpp"

namespace pathqv {

ProportionCI wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw_domain("Wilson interval needs at least one trial");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The interval endpoints are exactly 0 and 1 at the boundary counts.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {p, lo, hi};
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value() / static_cast<double>(xs.size());
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw_domain("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw_domain("quantile level must lie in [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(const std::vector<double>& xs) { return quantile(xs, 0.5); }

double mean_half_width(const std::vector<double>& xs, double z) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum ss;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = ss.value() / static_cast<double>(xs.size() - 1);
  return z * std::sqrt(var / static_cast<double>(xs.size()));
}

std::size_t worker_count() {
  if (const char* env = std::getenv("QV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pathqv
