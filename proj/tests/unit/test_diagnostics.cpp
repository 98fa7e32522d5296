// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "polyeq/diagnostics.hpp"
#include "polyeq/errors.hpp"
#include "polyeq/games.hpp"
#include "polyeq/quantize.hpp"
#include "polyeq/solver.hpp"

using namespace polyeq;

namespace {

[[nodiscard]] ProfileFn constant_fn(double a, double b) {
  return ProfileFn{[a](double) { return a; }, [b](double) { return b; }};
}

// Discrete conditional payoff of player i playing `action` at its k-th type
// point against table opponents, under equal type weights (uniform marginals
// on midpoint grids). Independent re-implementation of the oracle's update.
[[nodiscard]] double table_payoff(const GameSpec& game,
                                  const TableProfile& profile, int i,
                                  std::size_t own_index, double action) {
  const TableStrategy& opp = profile[static_cast<std::size_t>(1 - i)];
  double total = 0.0;
  std::vector<double> a(2);
  std::vector<double> t(2);
  for (std::size_t m = 0; m < opp.type_points.size(); ++m) {
    t[static_cast<std::size_t>(i)] =
        profile[static_cast<std::size_t>(i)].type_points[own_index];
    t[static_cast<std::size_t>(1 - i)] = opp.type_points[m];
    a[static_cast<std::size_t>(i)] = action;
    a[static_cast<std::size_t>(1 - i)] = opp.actions[m];
    total += game.utility(i, a, t);
  }
  return total / static_cast<double>(opp.type_points.size());
}

// Exhaustive no-improving-deviation check over the action grid.
void require_table_equilibrium(const GameSpec& game,
                               const TableProfile& profile,
                               int action_levels) {
  for (int i = 0; i < 2; ++i) {
    const TableStrategy& mine = profile[static_cast<std::size_t>(i)];
    const Interval& bounds = game.action_domain(i);
    for (std::size_t k = 0; k < mine.type_points.size(); ++k) {
      double current = table_payoff(game, profile, i, k, mine.actions[k]);
      for (int level = 0; level < action_levels; ++level) {
        double candidate =
            bounds.lo() + (bounds.hi() - bounds.lo()) * level /
                              (action_levels - 1);
        CHECK(table_payoff(game, profile, i, k, candidate) <=
              current + 1e-12);
      }
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("monotonicity integral closed form for constant rules") {
  // For u_i = a_1 a_2 theta_i - a_i^2 and constant profiles, the integrand is
  // (c2-d2)(c1-d1)(theta_1+theta_2) - 2(c1-d1)^2 - 2(c2-d2)^2, and the grid's
  // odd symmetry kills the first term.
  GameSpec game = bilinear_quadratic();
  std::vector<int> counts{8, 8};
  QuantizedMeasure sample = grid_quantize(game, counts);

  CHECK(monotonicity_integral(game, constant_fn(1.0, 1.0),
                              constant_fn(0.0, 0.0), sample) ==
        doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(monotonicity_integral(game, constant_fn(2.0, 0.5),
                              constant_fn(0.5, 2.0), sample) ==
        doctest::Approx(-2.0 * (1.5 * 1.5 + 1.5 * 1.5)).epsilon(1e-12));

  for (double delta : {1e-2, 1e-3, 1e-4}) {
    double integral = monotonicity_integral(
        game, constant_fn(delta, delta), constant_fn(0.0, 0.0), sample);
    CHECK(integral < 0.0);
    CHECK(integral == doctest::Approx(-4.0 * delta * delta).epsilon(1e-10));
  }
}

TEST_CASE("quadratic game passes the randomized monotonicity check") {
  GameSpec game = bilinear_quadratic();
  std::vector<int> counts{10, 10};
  QuantizedMeasure sample = grid_quantize(game, counts);

  MonotonicityReport report = check_monotonicity(game, 100, sample, 7);
  CHECK(report.pairs_tested == 100);
  CHECK(report.verdict == MonotonicityReport::Verdict::kConsistent);
  CHECK(report.most_adverse_integral < -1e-12);
  CHECK_FALSE(report.witness.has_value());

  MonotonicityReport again = check_monotonicity(game, 100, sample, 7);
  CHECK(again.most_adverse_integral == report.most_adverse_integral);

  CHECK_THROWS_AS((void)check_monotonicity(game, 0, sample, 7), ConfigError);
}

TEST_CASE("bilinear game fails monotonicity at its two known equilibria") {
  GameSpec game = bilinear();
  std::vector<int> counts{10, 10};
  QuantizedMeasure sample = grid_quantize(game, counts);

  ProfileFn zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  ProfileFn step{[](double t) { return t > 0.0 ? 10.0 : 0.0; },
                 [](double t) { return t > 0.0 ? 10.0 : 0.0; }};

  // [H(zero)-H(step)]^T (zero-step) = 100 (theta_1+theta_2) 1{theta_1>0}
  // 1{theta_2>0}; on the symmetric midpoint grid this sums to exactly 25.
  double integral = monotonicity_integral(game, zero, step, sample);
  CHECK(integral == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(integral > 0.0);  // strict monotonicity is violated

  // Order of the pair does not change the sign: the form is symmetric.
  CHECK(monotonicity_integral(game, step, zero, sample) ==
        doctest::Approx(integral).epsilon(1e-12));
}

TEST_CASE("monotonicity integral validates its inputs") {
  GameSpec game = bilinear_quadratic();
  std::vector<int> counts{4, 4};
  QuantizedMeasure sample = grid_quantize(game, counts);
  ProfileFn incomplete{[](double) { return 0.0; }};
  CHECK_THROWS_AS(
      (void)monotonicity_integral(game, incomplete, incomplete, sample),
      ConfigError);
}

TEST_CASE("strong concavity estimates") {
  GameSpec bq = bilinear_quadratic();
  double sigma_bq = estimate_strong_concavity(bq, 0, 200, 11);
  CHECK(sigma_bq >= 1.99);
  CHECK(sigma_bq <= 2.01);
  CHECK(estimate_strong_concavity(bq, 0, 200, 11) == sigma_bq);

  ContestParams params;
  params.n = 2;
  params.type_domains = {Interval(0.01, 1.01), Interval(0.01, 1.01)};
  params.effort_floor = 0.1;
  GameSpec contest = rent_seeking(params);
  // Curvature bound on the floored box: 2 * eps / (sum_i 1/alpha_i)^3.
  double sigma_contest = estimate_strong_concavity(contest, 0, 500, 13);
  CHECK(sigma_contest >= 2.5e-8);

  GameSpec flat = bilinear();
  double sigma_flat = estimate_strong_concavity(flat, 1, 200, 17);
  CHECK(std::abs(sigma_flat) <= 1e-6);

  CHECK_THROWS_AS((void)estimate_strong_concavity(bq, 2, 10, 1), ConfigError);
  CHECK_THROWS_AS((void)estimate_strong_concavity(bq, 0, 0, 1), ConfigError);
}

TEST_CASE("brute force finds both bilinear table equilibria") {
  GameSpec game = bilinear();
  std::vector<int> type_counts{21, 21};
  std::vector<int> action_counts{11, 11};
  std::vector<TableProfile> fixed_points =
      brute_force_discrete_equilibria(game, type_counts, action_counts);
  REQUIRE(fixed_points.size() >= 2);

  bool found_zero = false;
  bool found_step = false;
  for (const TableProfile& profile : fixed_points) {
    REQUIRE(profile.size() == 2);
    REQUIRE(profile[0].type_points.size() == 21);
    REQUIRE(profile[0].actions.size() == 21);

    bool all_zero = true;
    bool is_step = true;
    for (int i = 0; i < 2; ++i) {
      for (std::size_t k = 0; k < profile[static_cast<std::size_t>(i)].actions.size(); ++k) {
        double theta = profile[static_cast<std::size_t>(i)].type_points[k];
        double action = profile[static_cast<std::size_t>(i)].actions[k];
        if (action != 0.0) all_zero = false;
        double step_action = theta > 0.0 ? 10.0 : 0.0;
        if (action != step_action) is_step = false;
      }
    }
    found_zero = found_zero || all_zero;
    found_step = found_step || is_step;
    require_table_equilibrium(game, profile, 11);
  }
  CHECK(found_zero);
  CHECK(found_step);
}

TEST_CASE("quadratic game has a unique table equilibrium") {
  GameSpec game = bilinear_quadratic();
  std::vector<int> type_counts{21, 21};
  std::vector<int> action_counts{11, 11};
  std::vector<TableProfile> fixed_points =
      brute_force_discrete_equilibria(game, type_counts, action_counts);
  REQUIRE(fixed_points.size() == 1);
  for (const TableStrategy& table : fixed_points[0]) {
    for (double action : table.actions) CHECK(action == 0.0);
  }
  require_table_equilibrium(game, fixed_points[0], 11);
}

TEST_CASE("brute force cross-validates the polynomial contest solution") {
  GameSpec game = make_registered_game("rent_seeking", {});
  std::vector<int> type_counts{7, 7};
  const int action_levels = 41;
  std::vector<int> action_counts{action_levels, action_levels};

  std::vector<TableProfile> fixed_points =
      brute_force_discrete_equilibria(game, type_counts, action_counts);
  REQUIRE(!fixed_points.empty());

  QuantizedMeasure sample = grid_quantize(game, type_counts);
  SolverConfig config;
  config.degree = 5;
  EquilibriumResult result = gauss_seidel_solve(game, sample, config);
  REQUIRE(result.converged);

  const double step = game.action_domain(0).width() / (action_levels - 1);
  double best_mismatch = std::numeric_limits<double>::infinity();
  for (const TableProfile& profile : fixed_points) {
    double mismatch = 0.0;
    for (int i = 0; i < 2; ++i) {
      const TableStrategy& table = profile[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < table.type_points.size(); ++k) {
        double poly = result.profile.strategy(i)(table.type_points[k]);
        mismatch = std::max(mismatch, std::abs(table.actions[k] - poly));
      }
    }
    best_mismatch = std::min(best_mismatch, mismatch);
  }
  CHECK(best_mismatch <= 2.0 * step);
}

TEST_CASE("brute force enforces its evaluation budget") {
  GameSpec game = bilinear();
  std::vector<int> type_counts{200, 200};
  std::vector<int> action_counts{300, 300};
  CHECK_THROWS_AS((void)brute_force_discrete_equilibria(game, type_counts,
                                                        action_counts),
                  BudgetError);

  std::vector<int> mismatched{21};
  CHECK_THROWS_AS((void)brute_force_discrete_equilibria(game, mismatched,
                                                        action_counts),
                  ConfigError);
}

TEST_CASE("degree-axis study stabilizes and is deterministic") {
  GameSpec game = make_registered_game("rent_seeking", {});
  StudyRequest request;
  request.axis = StudyRequest::Axis::kDegree;
  request.levels = {3, 4, 5};
  QuantizerConfig quantizer;
  quantizer.counts = {10, 10};
  SolverConfig solver;

  ConvergenceStudy study = convergence_study(game, request, quantizer, solver);
  CHECK(study.axis == StudyRequest::Axis::kDegree);
  CHECK(study.levels == std::vector<int>{3, 4, 5});
  REQUIRE(study.theta_grids.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const auto& grid = study.theta_grids[static_cast<std::size_t>(i)];
    REQUIRE(grid.size() == 1000);
    CHECK(grid.front() == game.type_domain(i).lo());
    CHECK(grid.back() == game.type_domain(i).hi());
  }
  REQUIRE(study.curves.size() == 3);
  for (const auto& level : study.curves) {
    REQUIRE(level.size() == 2);
    for (const auto& curve : level) REQUIRE(curve.size() == 1000);
  }
  CHECK(study.successive_sup_diffs.size() == 2);
  for (double diff : study.successive_sup_diffs) CHECK(std::isfinite(diff));
  CHECK(study.level_converged == std::vector<bool>(3, true));
  CHECK(study.level_sample_sizes == std::vector<int>(3, 100));
  for (double gap : study.level_br_gaps) {
    CHECK(gap >= -1e-12);
    CHECK(gap <= 1e-6);
  }

  ConvergenceStudy again = convergence_study(game, request, quantizer, solver);
  CHECK(again.curves == study.curves);  // bit-for-bit reproducibility
  CHECK(again.successive_sup_diffs == study.successive_sup_diffs);
}

TEST_CASE("sample-size study derives grid counts from the pattern") {
  GameSpec game = bilinear_quadratic();
  StudyRequest request;
  request.axis = StudyRequest::Axis::kSampleSize;
  request.levels = {5, 10};
  request.grid_pattern = {1, 2};
  QuantizerConfig quantizer;
  SolverConfig solver;
  solver.degree = 2;

  ConvergenceStudy study = convergence_study(game, request, quantizer, solver);
  CHECK(study.level_sample_sizes == std::vector<int>{50, 200});
  CHECK(study.successive_sup_diffs.size() == 1);
  CHECK(study.level_converged == std::vector<bool>(2, true));
}

TEST_CASE("sample-size study with monte carlo draws") {
  GameSpec game = bilinear_quadratic();
  StudyRequest request;
  request.axis = StudyRequest::Axis::kSampleSize;
  request.levels = {40, 80};
  QuantizerConfig quantizer;
  quantizer.mode = QuantizerConfig::Mode::kMonteCarlo;
  quantizer.seed = 5;
  SolverConfig solver;
  solver.degree = 1;

  ConvergenceStudy study = convergence_study(game, request, quantizer, solver);
  CHECK(study.level_sample_sizes == std::vector<int>{40, 80});
  CHECK(study.level_converged == std::vector<bool>(2, true));
}

TEST_CASE("single-level study has no successive differences") {
  GameSpec game = bilinear_quadratic();
  StudyRequest request;
  request.levels = {2};
  QuantizerConfig quantizer;
  quantizer.counts = {6, 6};
  SolverConfig solver;

  ConvergenceStudy study = convergence_study(game, request, quantizer, solver);
  CHECK(study.levels.size() == 1);
  CHECK(study.successive_sup_diffs.empty());
}

TEST_CASE("study request validation") {
  GameSpec game = bilinear_quadratic();
  QuantizerConfig quantizer;
  quantizer.counts = {4, 4};
  SolverConfig solver;

  StudyRequest empty;
  CHECK_THROWS_AS((void)convergence_study(game, empty, quantizer, solver),
                  ConfigError);

  StudyRequest unsorted;
  unsorted.levels = {5, 3};
  CHECK_THROWS_AS((void)convergence_study(game, unsorted, quantizer, solver),
                  ConfigError);

  StudyRequest bad_pattern;
  bad_pattern.axis = StudyRequest::Axis::kSampleSize;
  bad_pattern.levels = {5, 10};
  bad_pattern.grid_pattern = {1, 2, 3};
  CHECK_THROWS_AS(
      (void)convergence_study(game, bad_pattern, quantizer, solver),
      ConfigError);

  StudyRequest degree_axis;
  degree_axis.levels = {2, 3};
  QuantizerConfig missing_counts;
  CHECK_THROWS_AS(
      (void)convergence_study(game, degree_axis, missing_counts, solver),
      ConfigError);
}

TEST_SUITE_END();
