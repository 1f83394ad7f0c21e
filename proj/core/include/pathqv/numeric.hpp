#pragma once

#include <cmath>

namespace pathqv {

// Neumaier-compensated accumulator. Long increment sums (2^16+ terms) must stay
// within a few ulps so the exact identities can be asserted at 1e-12.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pathqv
