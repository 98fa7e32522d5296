// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "polyeq/errors.hpp"
#include "polyeq/games.hpp"
#include "polyeq/quantize.hpp"

using namespace polyeq;

namespace {

[[nodiscard]] GameSpec default_contest(int n = 2) {
  ContestParams params;
  params.n = n;
  params.type_domains.assign(static_cast<std::size_t>(n),
                             Interval(0.01, 1.01));
  return rent_seeking(params);
}

[[nodiscard]] StrategyProfile constant_profile(const GameSpec& game,
                                               double level) {
  std::vector<PolynomialStrategy> rules;
  rules.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    rules.emplace_back(std::vector<double>{level}, game.type_domain(i),
                       game.action_domain(i));
  }
  return StrategyProfile(std::move(rules));
}

}  // namespace

TEST_SUITE_BEGIN("games");

TEST_CASE("contest payoff values") {
  GameSpec game = default_contest();
  std::vector<double> a{1.0, 1.0};
  std::vector<double> t{0.5, 0.25};
  CHECK(game.utility(0, a, t) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(game.own_partial(0, a, t) ==
        doctest::Approx(-0.5 + 0.25).epsilon(1e-15));
  std::vector<double> t2{0.9, 0.25};
  CHECK(game.own_partial(0, a, t2) ==
        doctest::Approx(-0.9 + 0.25).epsilon(1e-15));

  GameSpec three = default_contest(3);
  std::vector<double> zeros{0.0, 0.0, 0.0};
  std::vector<double> types{0.5, 0.5, 0.5};
  for (int i = 0; i < 3; ++i) {
    CHECK(three.utility(i, zeros, types) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("contest parameter validation") {
  ContestParams one;
  one.n = 1;
  one.type_domains = {Interval(0.01, 1.01)};
  CHECK_THROWS_AS((void)rent_seeking(one), ConfigError);

  ContestParams nonpositive;
  nonpositive.n = 2;
  nonpositive.type_domains = {Interval(0.0, 1.0), Interval(0.01, 1.01)};
  CHECK_THROWS_AS((void)rent_seeking(nonpositive), ConfigError);

  ContestParams floor_above_cap;
  floor_above_cap.n = 2;
  floor_above_cap.type_domains = {Interval(0.5, 1.0), Interval(0.5, 1.0)};
  floor_above_cap.effort_cap = {1.0, 1.0};
  floor_above_cap.effort_floor = 1.5;
  CHECK_THROWS_AS((void)rent_seeking(floor_above_cap), ConfigError);

  GameSpec game = default_contest();
  CHECK(game.action_domain(0).lo() == 0.0);
  CHECK(game.action_domain(0).hi() == doctest::Approx(100.0));  // 1/0.01
}

TEST_CASE("contest shares sum to one") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 5}) {
    GameSpec game = default_contest(n);
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> t(static_cast<std::size_t>(n), 0.5);
    for (int trial = 0; trial < 50; ++trial) {
      for (double& x : a) x = 100.0 * test::canonical_uniform(rng);
      double share_sum = 0.0;
      // u_i = -a_i t_i + share_i, so share_i = u_i + a_i t_i.
      for (int i = 0; i < n; ++i) {
        share_sum += game.utility(i, a, t) + a[static_cast<std::size_t>(i)] *
                                                 t[static_cast<std::size_t>(i)];
      }
      CHECK(share_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    std::fill(a.begin(), a.end(), 0.0);
    double zero_sum = 0.0;
    for (int i = 0; i < n; ++i) zero_sum += game.utility(i, a, t);
    CHECK(zero_sum == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("contest analytic derivative matches finite differences") {
  std::mt19937_64 rng(29);
  GameSpec game = default_contest(3);
  std::vector<double> a(3);
  std::vector<double> t(3);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& x : a) x = 1.0 + 98.0 * test::canonical_uniform(rng);
    for (double& x : t) x = 0.01 + test::canonical_uniform(rng);
    int i = static_cast<int>(rng() % 3);
    double h = 1e-5;
    std::vector<double> hi = a;
    std::vector<double> lo = a;
    hi[static_cast<std::size_t>(i)] += h;
    lo[static_cast<std::size_t>(i)] -= h;
    double fd = (game.utility(i, hi, t) - game.utility(i, lo, t)) / (2.0 * h);
    CHECK(std::abs(game.own_partial(i, a, t) - fd) <= 1e-6);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("contest second derivative closed form") {
  GameSpec game = default_contest();
  std::mt19937_64 rng(37);
  std::vector<double> t{0.5, 0.5};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a{1.0 + 90.0 * test::canonical_uniform(rng),
                          1.0 + 90.0 * test::canonical_uniform(rng)};
    for (int i = 0; i < 2; ++i) {
      double others = a[static_cast<std::size_t>(1 - i)];
      double total = a[0] + a[1];
      double expected = -2.0 * others / (total * total * total);
      CHECK(game.own_second(i, a, t) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
  // Cross-check the closed form against a second difference at one point.
  std::vector<double> a{3.0, 5.0};
  double h = 1e-4 * 3.0;
  std::vector<double> up{3.0 + h, 5.0};
  std::vector<double> dn{3.0 - h, 5.0};
  double fd2 = (game.utility(0, up, t) - 2.0 * game.utility(0, a, t) +
                game.utility(0, dn, t)) /
               (h * h);
  CHECK(game.own_second(0, a, t) == doctest::Approx(fd2).epsilon(1e-4));
}

TEST_CASE("effort floor yields a uniform curvature bound") {
  // With opponents forced above epsilon, u_i'' = -2 S / (a_i + S)^3 stays
  // below -2 (n-1) epsilon / (sum_i 1/alpha_i)^3 on the whole feasible box.
  const double eps = 0.1;
  ContestParams params;
  params.n = 2;
  params.type_domains = {Interval(0.01, 1.01), Interval(0.01, 1.01)};
  params.effort_floor = eps;
  GameSpec game = rent_seeking(params);
  CHECK(game.curvature() == OwnCurvature::kStronglyConcave);

  const double cap_sum = 100.0 + 100.0;  // sum of 1/alpha_i
  const double bound = -2.0 * 1.0 * eps / (cap_sum * cap_sum * cap_sum);
  CHECK(bound == doctest::Approx(-2.5e-8));

  std::mt19937_64 rng(41);
  std::vector<double> t{0.5, 0.5};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a{
        eps + (100.0 - eps) * test::canonical_uniform(rng),
        eps + (100.0 - eps) * test::canonical_uniform(rng)};
    for (int i = 0; i < 2; ++i) {
      CHECK(game.own_second(i, a, t) <= bound * (1.0 - 1e-12));
    }
  }

  GameSpec floorless = default_contest();
  CHECK(floorless.curvature() == OwnCurvature::kConcaveWhenOpponentsActive);
}

TEST_CASE("bilinear quadratic game") {
  GameSpec game = bilinear_quadratic();
  std::vector<double> a{1.0, 1.0};
  std::vector<double> t{1.0, -0.5};
  CHECK(game.utility(0, a, t) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(game.utility(1, a, t) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(game.curvature() == OwnCurvature::kStronglyConcave);
  CHECK(game.continuous_equilibrium_guarantee());

  REQUIRE(game.reference_equilibrium().has_value());
  const StrategyProfile& ref = *game.reference_equilibrium();
  for (int i = 0; i < 2; ++i) {
    for (double theta : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
      CHECK(ref.strategy(i)(theta) == 0.0);
    }
  }

  std::vector<double> types{0.25, 0.75};
  CHECK(game.own_second(0, a, types) == doctest::Approx(-2.0));
  CHECK(game.own_second(1, a, types) == doctest::Approx(-2.0));
}

TEST_CASE("bilinear quadratic jacobian form is negative definite") {
  // x^T H x with H = [[-2, t1], [t2, -2]] stays negative for |t_i| <= 1:
  // the symmetric part has eigenvalues -2 +/- (t1+t2)/2, both below zero.
  std::mt19937_64 rng(43);
  for (double t1 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double t2 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      for (int trial = 0; trial < 50; ++trial) {
        double x1 = 2.0 * test::canonical_uniform(rng) - 1.0;
        double x2 = 2.0 * test::canonical_uniform(rng) - 1.0;
        if (std::abs(x1) + std::abs(x2) < 1e-9) continue;
        double quad = -2.0 * x1 * x1 + (t1 + t2) * x1 * x2 - 2.0 * x2 * x2;
        CHECK(quad < 0.0);
      }
    }
  }
}

TEST_CASE("bilinear game admits no continuity guarantee") {
  GameSpec game = bilinear();
  std::vector<double> a{10.0, 10.0};
  std::vector<double> t{1.0, -1.0};
  CHECK(game.utility(0, a, t) == doctest::Approx(100.0));
  CHECK(game.utility(1, a, t) == doctest::Approx(-100.0));
  CHECK_FALSE(game.continuous_equilibrium_guarantee());
  CHECK(game.curvature() == OwnCurvature::kNone);
  CHECK_FALSE(game.reference_equilibrium().has_value());
}

TEST_CASE("strong concavity witness") {
  std::vector<int> counts{3, 3};

  GameSpec bq = bilinear_quadratic();
  QuantizedMeasure bq_sample = grid_quantize(bq, counts);
  CHECK(strong_concavity_witness(bq, constant_profile(bq, 1.0), bq_sample));

  GameSpec flat = bilinear();
  QuantizedMeasure flat_sample = grid_quantize(flat, counts);
  CHECK_FALSE(
      strong_concavity_witness(flat, constant_profile(flat, 1.0), flat_sample));

  GameSpec contest = default_contest();
  QuantizedMeasure contest_sample = grid_quantize(contest, counts);
  CHECK(strong_concavity_witness(contest, constant_profile(contest, 1.0),
                                 contest_sample));
  // All-zero efforts leave the share term flat, so no witness there.
  CHECK_FALSE(strong_concavity_witness(contest, constant_profile(contest, 0.0),
                                       contest_sample));
}

TEST_CASE("game registry") {
  CHECK(is_registered_game("rent_seeking"));
  CHECK(is_registered_game("bilinear_quadratic"));
  CHECK(is_registered_game("bilinear"));
  CHECK_FALSE(is_registered_game("cournot"));
  CHECK_THROWS_AS((void)make_registered_game("cournot", {}), ConfigError);

  GameSpec defaults = make_registered_game("rent_seeking", {});
  CHECK(defaults.num_players() == 2);
  CHECK(defaults.type_domain(0).lo() == doctest::Approx(0.01));
  CHECK(defaults.type_domain(0).hi() == doctest::Approx(1.01));
  CHECK(defaults.action_domain(1).hi() == doctest::Approx(100.0));

  GameSpec asym = make_registered_game(
      "rent_seeking", {{"beta_2", 2.01}, {"effort_floor", 0.05}});
  CHECK(asym.type_domain(0).hi() == doctest::Approx(1.01));
  CHECK(asym.type_domain(1).hi() == doctest::Approx(2.01));
  CHECK(asym.action_domain(0).lo() == doctest::Approx(0.05));

  GameSpec trio = make_registered_game(
      "rent_seeking", {{"n", 3.0}, {"alpha", 0.02}, {"effort_cap", 25.0}});
  CHECK(trio.num_players() == 3);
  CHECK(trio.type_domain(2).lo() == doctest::Approx(0.02));
  CHECK(trio.action_domain(2).hi() == doctest::Approx(25.0));

  CHECK_THROWS_AS(
      (void)make_registered_game("rent_seeking", {{"gamma", 1.0}}),
      ConfigError);
  CHECK_THROWS_AS(
      (void)make_registered_game("bilinear_quadratic", {{"n", 3.0}}),
      ConfigError);

  register_game("unit_test_game",
                [](const std::map<std::string, double>&) { return bilinear(); });
  CHECK(is_registered_game("unit_test_game"));
  GameSpec custom = make_registered_game("unit_test_game", {});
  CHECK(custom.name() == "bilinear");
}

TEST_SUITE_END();
