// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_STRATEGY_HPP_
#define POLYEQ_STRATEGY_HPP_

#include <vector>

#include "polyeq/interval.hpp"

namespace polyeq {

// One player's decision rule: the polynomial
//   f(theta) = coeffs[0] + coeffs[1]*theta + ... + coeffs[d]*theta^d
// over the player's type domain, together with the action interval the rule
// is meant to respect. Construction does not certify feasibility; that is the
// job of certify_feasible.
class PolynomialStrategy {
 public:
  PolynomialStrategy(std::vector<double> coeffs, Interval domain,
                     Interval action_bounds);

  [[nodiscard]] int degree() const {
    return static_cast<int>(coeffs_.size()) - 1;
  }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] const Interval& action_bounds() const {
    return action_bounds_;
  }

  // Evaluates the rule at theta; throws DomainError outside the type domain.
  [[nodiscard]] double operator()(double theta) const;

 private:
  std::vector<double> coeffs_;
  Interval domain_;
  Interval action_bounds_;
};

// A full profile of decision rules, one per player, all of the same degree.
class StrategyProfile {
 public:
  explicit StrategyProfile(std::vector<PolynomialStrategy> strategies);

  [[nodiscard]] int num_players() const {
    return static_cast<int>(strategies_.size());
  }
  [[nodiscard]] int degree() const { return strategies_.front().degree(); }
  [[nodiscard]] const PolynomialStrategy& strategy(int i) const {
    return strategies_.at(static_cast<size_t>(i));
  }
  [[nodiscard]] const std::vector<PolynomialStrategy>& strategies() const {
    return strategies_;
  }

  void replace(int i, PolynomialStrategy s);

 private:
  std::vector<PolynomialStrategy> strategies_;
};

}  // namespace polyeq

#endif  // POLYEQ_STRATEGY_HPP_
