// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_DIAGNOSTICS_HPP_
#define POLYEQ_DIAGNOSTICS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polyeq/game.hpp"
#include "polyeq/measure.hpp"
#include "polyeq/quantize.hpp"
#include "polyeq/solver.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

// ==== Payoff-monotonicity check ============================================

// A profile of arbitrary (not necessarily polynomial) decision rules, one
// evaluator per player, used where step or table rules must be tested.
using ProfileFn = std::vector<std::function<double(double)>>;

// Sampled estimate of
//   integral of [H(f)-H(g)]^T (f-g) d(eta),  H(f)_i = du_i/da_i at f,
// over the quantized measure. Strictly negative values for all distinct
// pairs are the uniqueness-driving monotonicity property.
[[nodiscard]] double monotonicity_integral(const GameSpec& game,
                                           const ProfileFn& f,
                                           const ProfileFn& g,
                                           const QuantizedMeasure& sample);

struct MonotonicityReport {
  enum class Verdict { kConsistent, kViolated };
  int pairs_tested = 0;
  // The pair integral closest to (or beyond) zero; consistent iff < 0.
  double most_adverse_integral = 0.0;
  Verdict verdict = Verdict::kConsistent;
  // Present when violated: the offending pair of polynomial profiles.
  std::optional<std::pair<StrategyProfile, StrategyProfile>> witness;
};

// Draws `trials` random pairs of distinct bound-feasible polynomial profiles
// (Bernstein control points, so bounds hold everywhere) and estimates the
// monotonicity integral for each. A consistent verdict is evidence over the
// sampled pairs, not a proof. Requires own-action derivatives (analytic or
// finite-difference); `degree` sets the random profiles' degree.
[[nodiscard]] MonotonicityReport check_monotonicity(const GameSpec& game,
                                                    int trials,
                                                    const QuantizedMeasure& sample,
                                                    std::uint64_t seed,
                                                    int degree = 3);

// ==== Second-order growth estimate =========================================

// Estimates the own-action strong-concavity modulus of player i:
//   sigma = -max over random interior probes of the central second
//   difference of u_i in a_i, step h = 1e-4 * action interval width.
// Nonnegative for concave payoffs; ~0 for linear ones.
[[nodiscard]] double estimate_strong_concavity(const GameSpec& game, int player,
                                               int probes, std::uint64_t seed);

// ==== Brute-force discrete oracle ==========================================

// A decision rule tabulated on a finite type grid.
struct TableStrategy {
  std::vector<double> type_points;
  std::vector<double> actions;
};
using TableProfile = std::vector<TableStrategy>;

// Exhaustive best-response iteration over fully discretized strategy tables:
// type grids from the tensor quantizer's per-dimension atoms, action grids of
// `action_counts[i]` equispaced levels, argmax ties resolved to the smallest
// action. Runs Gauss-Seidel table iteration from every corner of a coarse
// seeding set and returns all distinct fixed points.
// Throws BudgetError when one sweep would exceed 10^7 utility evaluations.
[[nodiscard]] std::vector<TableProfile> brute_force_discrete_equilibria(
    const GameSpec& game, std::span<const int> type_counts,
    std::span<const int> action_counts);

// ==== Convergence studies ==================================================

struct StudyRequest {
  enum class Axis { kDegree, kSampleSize };
  Axis axis = Axis::kDegree;
  std::vector<int> levels;  // ascending: degrees, or per-dim base counts
  // Sample-size axis, grid mode: per-player multipliers so level K yields
  // counts {pattern[0]*K, pattern[1]*K, ...}. Empty: all ones.
  std::vector<int> grid_pattern;
};

struct ConvergenceStudy {
  StudyRequest::Axis axis = StudyRequest::Axis::kDegree;
  std::vector<int> levels;
  // theta_grids[i]: the fixed 1000-point evaluation grid of player i.
  std::vector<std::vector<double>> theta_grids;
  // curves[l][i]: player i's rule at level l tabulated on theta_grids[i].
  std::vector<std::vector<std::vector<double>>> curves;
  // sup over players and grid points of |curve(l+1) - curve(l)|.
  std::vector<double> successive_sup_diffs;
  std::vector<bool> level_converged;
  std::vector<double> level_br_gaps;
  std::vector<int> level_sample_sizes;
};

// Solves the game at each level (degrees, or sample sizes via the quantizer
// pattern), warm-starting every level from the previous solution, and
// tabulates all rules on fixed 1000-point grids. Per-level convergence flags
// are recorded instead of throwing.
[[nodiscard]] ConvergenceStudy convergence_study(const GameSpec& game,
                                                 const StudyRequest& request,
                                                 const QuantizerConfig& quantizer,
                                                 const SolverConfig& solver);

}  // namespace polyeq

#endif  // POLYEQ_DIAGNOSTICS_HPP_
