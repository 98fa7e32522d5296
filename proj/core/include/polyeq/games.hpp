// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_GAMES_HPP_
#define POLYEQ_GAMES_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyeq/game.hpp"
#include "polyeq/measure.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

// n-player contest: player i pays marginal cost theta_i per unit of effort
// a_i and wins the unit prize with probability a_i / sum_j a_j. When every
// effort is zero the prize is split evenly (share 1/n); when only a_i is zero
// its share is the continuous limit 0. Types are uniform on [alpha_i, ...]
// with alpha_i = type_domains[i].lo > 0; the effort interval is
// [effort_floor, effort_cap_i] with cap defaulting to 1/alpha_i, the largest
// effort any type could ever recoup.
struct ContestParams {
  int n = 2;
  std::vector<Interval> type_domains;
  std::vector<double> effort_cap;  // empty: default 1/alpha_i per player
  double effort_floor = 0.0;
};

[[nodiscard]] GameSpec rent_seeking(const ContestParams& params);

// Two-player game with u_i = a_1*a_2*theta_i - a_i^2, actions in [0,10],
// types uniform on [-1,1]. Strongly concave in the own action (second
// derivative -2) and diagonally strictly monotone, with the all-zero profile
// attached as the known unique equilibrium.
[[nodiscard]] GameSpec bilinear_quadratic();

// Two-player game with u_i = a_1*a_2*theta_i, actions in [0,10], types
// uniform on [-1,1]. Linear in the own action, so no continuous equilibrium
// is guaranteed (the flag on the returned spec records this); it admits
// discontinuous step equilibria that the brute-force oracle can find.
[[nodiscard]] GameSpec bilinear();

// True when the contest's own-action second derivative is strictly negative
// at every sample atom under the given profile, i.e. the inner maximizations
// at this profile were strictly concave. Used to upgrade rent-seeking
// results with effort_floor = 0 from local to global scope.
[[nodiscard]] bool strong_concavity_witness(const GameSpec& game,
                                            const StrategyProfile& profile,
                                            const QuantizedMeasure& sample);

// Registry of named game constructors so downstream code can plug games into
// the CLI without touching this library. Parameters arrive as a flat
// key -> value map; vector-valued keys use suffixes ("alpha_1", "alpha_2").
using GameFactory =
    std::function<GameSpec(const std::map<std::string, double>&)>;

void register_game(const std::string& name, GameFactory factory);
[[nodiscard]] bool is_registered_game(const std::string& name);
[[nodiscard]] GameSpec make_registered_game(
    const std::string& name, const std::map<std::string, double>& params);

}  // namespace polyeq

#endif  // POLYEQ_GAMES_HPP_
