#pragma once

#include <cmath>

namespace ffsc {

/// Neumaier-compensated running sum.
///
/// merge() folds another partial sum in with an error-free TwoSum on the
/// leading parts, so merging is commutative bit-for-bit: a.merge(b) and
/// b.merge(a) leave identical state.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    const double s = sum_ + other.sum_;
    const double bb = s - sum_;
    const double err = (sum_ - (s - bb)) + (other.sum_ - bb);
    sum_ = s;
    compensation_ = (compensation_ + other.compensation_) + err;
  }

  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace ffsc
