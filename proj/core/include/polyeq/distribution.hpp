// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_DISTRIBUTION_HPP_
#define POLYEQ_DISTRIBUTION_HPP_

#include <vector>

#include "polyeq/interval.hpp"

namespace polyeq {

// One-dimensional type marginal: either uniform over its support or a
// piecewise-linear tabulated density (renormalized at construction).
// All integrals below are exact for the piecewise-linear representation.
class Marginal {
 public:
  static Marginal uniform(Interval support);

  // knots must be strictly increasing and span [support.lo, support.hi]
  // exactly; values must be nonnegative with positive total mass. The density
  // is the linear interpolant of (knots, values), scaled to integrate to one.
  static Marginal tabulated(Interval support, std::vector<double> knots,
                            std::vector<double> values);

  [[nodiscard]] const Interval& support() const { return support_; }
  [[nodiscard]] bool is_uniform() const { return uniform_; }

  // Density at x; throws DomainError outside the support.
  [[nodiscard]] double density(double x) const;

  // Probability mass of [a, b] intersected with the support.
  [[nodiscard]] double mass(double a, double b) const;

  // Inverse CDF for p in [0, 1].
  [[nodiscard]] double quantile(double p) const;

  // Conditional mean of the distribution restricted to [a, b];
  // throws ConfigError when [a, b] carries no mass.
  [[nodiscard]] double cell_mean(double a, double b) const;

  [[nodiscard]] double mean() const;

  // Inverse-CDF transform of a uniform draw u in [0, 1).
  [[nodiscard]] double sample(double u) const { return quantile(u); }

 private:
  Marginal(Interval support, bool uniform, std::vector<double> knots,
           std::vector<double> values);

  Interval support_;
  bool uniform_;
  std::vector<double> knots_;   // empty when uniform
  std::vector<double> values_;  // normalized density at knots
  std::vector<double> cdf_;     // CDF at knots (cdf_.front()=0, back()=1)
};

}  // namespace polyeq

#endif  // POLYEQ_DISTRIBUTION_HPP_
