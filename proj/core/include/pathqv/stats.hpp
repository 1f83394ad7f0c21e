#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pathqv {

struct ProportionCI {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
ProportionCI wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

double mean(const std::vector<double>& xs);
/// Linear-interpolation quantile (Hyndman-Fan type 7), q in [0, 1].
double quantile(std::vector<double> xs, double q);
double median(const std::vector<double>& xs);
/// Normal-approximation half width of the mean at z.
double mean_half_width(const std::vector<double>& xs, double z = 1.959963984540054);

/// Worker count: QV_THREADS when set and positive, else the hardware count.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Results must be
/// written by index so the outcome does not depend on scheduling. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pathqv
