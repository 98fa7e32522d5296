// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_GAME_HPP_
#define POLYEQ_GAME_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyeq/distribution.hpp"
#include "polyeq/interval.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

// Payoff evaluator: player index, full action profile, full type profile.
// Must be pure (no state) so evaluation order never matters.
using UtilityFn =
    std::function<double(int, std::span<const double>, std::span<const double>)>;

// Partial derivative of player i's payoff with respect to i's own action,
// same argument convention as UtilityFn.
using OwnPartialFn =
    std::function<double(int, std::span<const double>, std::span<const double>)>;

// What is known analytically about the curvature of u_i in the own action.
// Drives the global/local labeling of solver results.
enum class OwnCurvature {
  kStronglyConcave,           // u_i'' <= -sigma < 0 everywhere on A x Theta
  kConcaveWhenOpponentsActive,  // u_i'' < 0 wherever opponents' actions > 0
  kNone,                      // linear or indefinite
  kUnknown,                   // user-supplied evaluator, nothing assumed
};

// A Bayesian game with interval type and action spaces and independent
// private types (the joint type distribution is the product of the
// one-dimensional marginals). Immutable after construction; all evaluators
// must be pure functions, so a single instance can be shared across threads.
class GameSpec {
 public:
  struct Options {
    OwnPartialFn own_partial;     // analytic du_i/da_i (optional)
    OwnPartialFn own_second;      // analytic d2u_i/da_i2 (optional)
    OwnCurvature curvature = OwnCurvature::kUnknown;
    bool continuous_equilibrium_guarantee = true;
    std::optional<StrategyProfile> reference_equilibrium;
    std::string name = "custom";
  };

  GameSpec(std::vector<Interval> type_domains,
           std::vector<Interval> action_domains, std::vector<Marginal> marginals,
           UtilityFn utility);
  GameSpec(std::vector<Interval> type_domains,
           std::vector<Interval> action_domains, std::vector<Marginal> marginals,
           UtilityFn utility, Options options);

  [[nodiscard]] int num_players() const {
    return static_cast<int>(type_domains_.size());
  }
  [[nodiscard]] const Interval& type_domain(int i) const {
    return type_domains_.at(static_cast<size_t>(i));
  }
  [[nodiscard]] const Interval& action_domain(int i) const {
    return action_domains_.at(static_cast<size_t>(i));
  }
  [[nodiscard]] const Marginal& marginal(int i) const {
    return marginals_.at(static_cast<size_t>(i));
  }
  [[nodiscard]] const std::vector<Interval>& type_domains() const {
    return type_domains_;
  }
  [[nodiscard]] const std::vector<Interval>& action_domains() const {
    return action_domains_;
  }

  // Domain-checked payoff evaluation; throws DomainError when any action or
  // type coordinate leaves its interval.
  [[nodiscard]] double utility(int i, std::span<const double> actions,
                               std::span<const double> types) const;

  // Unchecked payoff evaluation for hot loops whose inputs were validated
  // once up front (sample atoms, feasible action profiles).
  [[nodiscard]] double utility_unchecked(int i, std::span<const double> actions,
                                         std::span<const double> types) const {
    return utility_(i, actions, types);
  }

  // du_i/da_i: analytic when provided, otherwise a central difference with
  // step 1e-6 * max(1, |a_i|), stencil shifted inward at the action bounds.
  [[nodiscard]] double own_partial(int i, std::span<const double> actions,
                                   std::span<const double> types) const;

  // d2u_i/da_i2: analytic when provided, otherwise a second difference with
  // step 1e-4 * max(1, |a_i|), stencil shifted inward at the action bounds.
  [[nodiscard]] double own_second(int i, std::span<const double> actions,
                                  std::span<const double> types) const;

  [[nodiscard]] bool has_analytic_partial() const {
    return static_cast<bool>(own_partial_);
  }
  [[nodiscard]] OwnCurvature curvature() const { return curvature_; }
  [[nodiscard]] bool continuous_equilibrium_guarantee() const {
    return continuous_equilibrium_guarantee_;
  }
  [[nodiscard]] const std::optional<StrategyProfile>& reference_equilibrium()
      const {
    return reference_equilibrium_;
  }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::vector<Interval> type_domains_;
  std::vector<Interval> action_domains_;
  std::vector<Marginal> marginals_;
  UtilityFn utility_;
  OwnPartialFn own_partial_;
  OwnPartialFn own_second_;
  OwnCurvature curvature_;
  bool continuous_equilibrium_guarantee_;
  std::optional<StrategyProfile> reference_equilibrium_;
  std::string name_;
};

// Free-function forms of the two core evaluations.
[[nodiscard]] double eval_utility(const GameSpec& game, int i,
                                  std::span<const double> actions,
                                  std::span<const double> types);
[[nodiscard]] double marginal_density(const GameSpec& game, int i,
                                      double theta);

}  // namespace polyeq

#endif  // POLYEQ_GAME_HPP_
