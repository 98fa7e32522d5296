// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_INTERVAL_HPP_
#define POLYEQ_INTERVAL_HPP_

#include <algorithm>
#include <cmath>
#include <string>

#include "polyeq/errors.hpp"

namespace polyeq {

// Closed interval [lo, hi] with finite endpoints and lo < hi. Used for both
// type domains and action intervals, so a degenerate or reversed interval is
// rejected at construction.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ConfigError("interval endpoints must be finite, got [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (!(lo < hi)) {
      throw ConfigError("interval requires lo < hi, got [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double width() const { return hi_ - lo_; }
  [[nodiscard]] double midpoint() const { return 0.5 * (lo_ + hi_); }

  [[nodiscard]] bool contains(double x, double tol = 0.0) const {
    return x >= lo_ - tol && x <= hi_ + tol;
  }

  [[nodiscard]] double clamp(double x) const {
    return std::min(hi_, std::max(lo_, x));
  }

  [[nodiscard]] bool operator==(const Interval& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_;
  }

 private:
  double lo_;
  double hi_;
};

}  // namespace polyeq

#endif  // POLYEQ_INTERVAL_HPP_
