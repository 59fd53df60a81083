#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace cw4 {

// Neumaier's compensated summation. Also tracks sum(|x|) so callers can bound
// the accumulated rounding error.
class CompensatedSum {
 public:
  CompensatedSum& add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::fabs(x);
    ++count_;
    return *this;
  }
  CompensatedSum& operator+=(double x) { return add(x); }

  double value() const { return sum_ + comp_; }
  double magnitude() const { return abs_; }
  std::size_t count() const { return count_; }

  // Worst-case error of the compensated result: 2u * sum|x| (plus the final rounding).
  double error_bound() const {
    constexpr double u = std::numeric_limits<double>::epsilon() / 2;
    return 2 * u * abs_ + u * std::fabs(value());
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace cw4
