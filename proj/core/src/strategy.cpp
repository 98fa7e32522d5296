// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/strategy.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "polyeq/poly.hpp"

namespace polyeq {

PolynomialStrategy::PolynomialStrategy(std::vector<double> coeffs,
                                       Interval domain, Interval action_bounds)
    : coeffs_(std::move(coeffs)),
      domain_(domain),
      action_bounds_(action_bounds) {
  if (coeffs_.empty()) {
    throw ConfigError("polynomial strategy needs at least one coefficient");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw ConfigError("polynomial strategy coefficients must be finite");
    }
  }
}

double PolynomialStrategy::operator()(double theta) const {
  return eval_strategy(*this, theta);
}

StrategyProfile::StrategyProfile(std::vector<PolynomialStrategy> strategies)
    : strategies_(std::move(strategies)) {
  if (strategies_.empty()) {
    throw ConfigError("strategy profile needs at least one player");
  }
  int d = strategies_.front().degree();
  for (const auto& s : strategies_) {
    if (s.degree() != d) {
      throw ConfigError("strategy profile requires a common degree, got " +
                        std::to_string(s.degree()) + " vs " +
                        std::to_string(d));
    }
  }
}

void StrategyProfile::replace(int i, PolynomialStrategy s) {
  if (s.degree() != degree()) {
    throw ConfigError("replacement strategy degree " +
                      std::to_string(s.degree()) +
                      " does not match profile degree " +
                      std::to_string(degree()));
  }
  strategies_.at(static_cast<size_t>(i)) = std::move(s);
}

}  // namespace polyeq
