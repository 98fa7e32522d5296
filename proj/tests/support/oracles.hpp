// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the test suite. Everything here is
// deliberately naive: plain loops, scalar search, no shared code with the
// library paths under test.

#ifndef POLYEQ_TESTS_SUPPORT_ORACLES_HPP_
#define POLYEQ_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "polyeq/game.hpp"
#include "polyeq/measure.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq::test {

struct ScalarMax {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of f on [lo, hi]. Globally correct
// for unimodal f; 160 shrinks reduce the bracket below any double spacing.
template <typename F>
ScalarMax golden_max(const F& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 160 && b - a > 0.0; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  double arg = 0.5 * (a + b);
  return {arg, f(arg)};
}

// 1-D maximizer: golden-section search plus a bisection on the central
// finite-difference first-order condition, returning the better of the two
// candidates and the endpoints. Exact enough that value errors sit at the
// second-order level ~|f''| * (argument error)^2.
template <typename F>
ScalarMax pointwise_max(const F& f, double lo, double hi) {
  ScalarMax best{lo, f(lo)};
  auto consider = [&](double x) {
    double v = f(x);
    if (v > best.value) best = {x, v};
  };
  consider(hi);
  ScalarMax golden = golden_max(f, lo, hi);
  if (golden.value > best.value) best = golden;

  const double h = 1e-7 * (hi - lo);
  auto slope = [&](double x) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  double a = lo + h;
  double b = hi - h;
  if (a < b) {
    double sa = slope(a);
    double sb = slope(b);
    if (sa > 0.0 && sb < 0.0) {
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        double m = 0.5 * (a + b);
        if (slope(m) > 0.0) {
          a = m;
        } else {
          b = m;
        }
      }
      consider(0.5 * (a + b));
    }
  }
  return best;
}

// Forward-order summation of the sample-average utility of player i, with
// every opponent action clamped to its interval the same way the solver
// clamps. An intentionally different accumulation order from the library's
// pairwise reduction.
inline double direct_expected_utility(const GameSpec& game,
                                      const QuantizedMeasure& sample, int i,
                                      const StrategyProfile& profile) {
  const int n = game.num_players();
  double total = 0.0;
  std::vector<double> actions(static_cast<std::size_t>(n));
  for (std::size_t k = sample.size(); k-- > 0;) {  // reverse order on purpose
    auto atom = sample.atom(k);
    for (int j = 0; j < n; ++j) {
      double a = profile.strategy(j)(atom[static_cast<std::size_t>(j)]);
      actions[static_cast<std::size_t>(j)] = game.action_domain(j).clamp(a);
    }
    total += sample.weights[k] * game.utility_unchecked(i, actions, atom);
  }
  return total;
}

// Sample-average utility of player i when it plays the constant action a and
// its own type coordinate is forced to t: the discretized conditional
// objective behind the pointwise best-response curve.
inline double conditional_utility(const GameSpec& game,
                                  const QuantizedMeasure& sample, int i,
                                  const StrategyProfile& opponents, double a,
                                  double t) {
  const int n = game.num_players();
  double total = 0.0;
  std::vector<double> actions(static_cast<std::size_t>(n));
  std::vector<double> types(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto atom = sample.atom(k);
    for (int j = 0; j < n; ++j) {
      types[static_cast<std::size_t>(j)] = atom[static_cast<std::size_t>(j)];
      if (j == i) continue;
      double aj = opponents.strategy(j)(atom[static_cast<std::size_t>(j)]);
      actions[static_cast<std::size_t>(j)] = game.action_domain(j).clamp(aj);
    }
    types[static_cast<std::size_t>(i)] = t;
    actions[static_cast<std::size_t>(i)] = a;
    total += sample.weights[k] * game.utility_unchecked(i, actions, types);
  }
  return total;
}

// Per-atom relaxation of the best-response problem: every atom picks its own
// action, an upper bound on any decision rule's sample-average utility.
inline double pointwise_upper_bound(const GameSpec& game,
                                    const QuantizedMeasure& sample, int i,
                                    const StrategyProfile& opponents) {
  const int n = game.num_players();
  const Interval& bounds = game.action_domain(i);
  double total = 0.0;
  std::vector<double> actions(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto atom = sample.atom(k);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double aj = opponents.strategy(j)(atom[static_cast<std::size_t>(j)]);
      actions[static_cast<std::size_t>(j)] = game.action_domain(j).clamp(aj);
    }
    auto value_at = [&](double a) {
      actions[static_cast<std::size_t>(i)] = a;
      return game.utility_unchecked(i, actions, atom);
    };
    total += sample.weights[k] *
             pointwise_max(value_at, bounds.lo(), bounds.hi()).value;
  }
  return total;
}

// Canonical 53-bit uniform in [0, 1).
inline double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace polyeq::test

#endif  // POLYEQ_TESTS_SUPPORT_ORACLES_HPP_
