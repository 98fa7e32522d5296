// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "polyeq/errors.hpp"

namespace polyeq {

namespace {

void check_profile_sizes(int n, std::span<const double> actions,
                         std::span<const double> types) {
  if (static_cast<int>(actions.size()) != n ||
      static_cast<int>(types.size()) != n) {
    throw ConfigError("profile size mismatch: game has " + std::to_string(n) +
                      " players, got " + std::to_string(actions.size()) +
                      " actions and " + std::to_string(types.size()) +
                      " types");
  }
}

}  // namespace

GameSpec::GameSpec(std::vector<Interval> type_domains,
                   std::vector<Interval> action_domains,
                   std::vector<Marginal> marginals, UtilityFn utility)
    : GameSpec(std::move(type_domains), std::move(action_domains),
               std::move(marginals), std::move(utility), Options{}) {}

GameSpec::GameSpec(std::vector<Interval> type_domains,
                   std::vector<Interval> action_domains,
                   std::vector<Marginal> marginals, UtilityFn utility,
                   Options options)
    : type_domains_(std::move(type_domains)),
      action_domains_(std::move(action_domains)),
      marginals_(std::move(marginals)),
      utility_(std::move(utility)),
      own_partial_(std::move(options.own_partial)),
      own_second_(std::move(options.own_second)),
      curvature_(options.curvature),
      continuous_equilibrium_guarantee_(
          options.continuous_equilibrium_guarantee),
      reference_equilibrium_(std::move(options.reference_equilibrium)),
      name_(std::move(options.name)) {
  std::size_t n = type_domains_.size();
  if (n < 2) {
    throw ConfigError("a game needs at least two players, got " +
                      std::to_string(n));
  }
  if (action_domains_.size() != n || marginals_.size() != n) {
    throw ConfigError("type domains, action domains and marginals must have "
                      "one entry per player");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(marginals_[i].support() == type_domains_[i])) {
      throw ConfigError("marginal support of player " + std::to_string(i + 1) +
                        " does not match its type domain");
    }
  }
  if (!utility_) {
    throw ConfigError("a game needs a utility evaluator");
  }
}

double GameSpec::utility(int i, std::span<const double> actions,
                         std::span<const double> types) const {
  int n = num_players();
  if (i < 0 || i >= n) {
    throw ConfigError("player index " + std::to_string(i) + " out of range");
  }
  check_profile_sizes(n, actions, types);
  for (int k = 0; k < n; ++k) {
    if (!action_domains_[static_cast<std::size_t>(k)].contains(actions[k])) {
      throw DomainError("action " + std::to_string(actions[k]) +
                        " of player " + std::to_string(k + 1) +
                        " outside its action interval");
    }
    if (!type_domains_[static_cast<std::size_t>(k)].contains(types[k])) {
      throw DomainError("type " + std::to_string(types[k]) + " of player " +
                        std::to_string(k + 1) + " outside its type domain");
    }
  }
  return utility_(i, actions, types);
}

double GameSpec::own_partial(int i, std::span<const double> actions,
                             std::span<const double> types) const {
  if (own_partial_) return own_partial_(i, actions, types);

  const Interval& bounds = action_domains_.at(static_cast<std::size_t>(i));
  double a = actions[static_cast<std::size_t>(i)];
  double h = 1e-6 * std::max(1.0, std::abs(a));
  h = std::min(h, 0.25 * bounds.width());

  std::vector<double> probe(actions.begin(), actions.end());
  auto eval = [&](double x) {
    probe[static_cast<std::size_t>(i)] = x;
    return utility_(i, probe, types);
  };
  if (a - h >= bounds.lo() && a + h <= bounds.hi()) {
    return (eval(a + h) - eval(a - h)) / (2.0 * h);
  }
  if (a - h < bounds.lo()) {
    return (-3.0 * eval(a) + 4.0 * eval(a + h) - eval(a + 2.0 * h)) /
           (2.0 * h);
  }
  return (3.0 * eval(a) - 4.0 * eval(a - h) + eval(a - 2.0 * h)) / (2.0 * h);
}

double GameSpec::own_second(int i, std::span<const double> actions,
                            std::span<const double> types) const {
  if (own_second_) return own_second_(i, actions, types);

  const Interval& bounds = action_domains_.at(static_cast<std::size_t>(i));
  double a = actions[static_cast<std::size_t>(i)];
  double h = 1e-4 * std::max(1.0, std::abs(a));
  h = std::min(h, 0.25 * bounds.width());

  std::vector<double> probe(actions.begin(), actions.end());
  auto eval = [&](double x) {
    probe[static_cast<std::size_t>(i)] = x;
    return utility_(i, probe, types);
  };
  double c = a;
  if (c - h < bounds.lo()) c = bounds.lo() + h;
  if (c + h > bounds.hi()) c = bounds.hi() - h;
  return (eval(c + h) - 2.0 * eval(c) + eval(c - h)) / (h * h);
}

double eval_utility(const GameSpec& game, int i, std::span<const double> actions,
                    std::span<const double> types) {
  return game.utility(i, actions, types);
}

double marginal_density(const GameSpec& game, int i, double theta) {
  if (i < 0 || i >= game.num_players()) {
    throw ConfigError("player index " + std::to_string(i) + " out of range");
  }
  return game.marginal(i).density(theta);
}

}  // namespace polyeq
