// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "polyeq/distribution.hpp"
#include "polyeq/errors.hpp"
#include "polyeq/games.hpp"
#include "polyeq/quantize.hpp"

using namespace polyeq;

namespace {

[[nodiscard]] std::vector<Marginal> uniform_product(
    const std::vector<Interval>& domains) {
  std::vector<Marginal> out;
  out.reserve(domains.size());
  for (const Interval& d : domains) out.push_back(Marginal::uniform(d));
  return out;
}

[[nodiscard]] double weight_sum(const QuantizedMeasure& sample) {
  double total = 0.0;
  for (double w : sample.weights) total += w;
  return total;
}

}  // namespace

TEST_SUITE_BEGIN("quantize");

TEST_CASE("uniform grids use cell midpoints with equal weights") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  std::vector<int> counts{4};
  QuantizedMeasure sample = grid_quantize(marginals, counts);

  REQUIRE(sample.size() == 4);
  REQUIRE(sample.dims == 1);
  const std::array<double, 4> expected{0.125, 0.375, 0.625, 0.875};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(sample.atom(k)[0] == doctest::Approx(expected[k]).epsilon(1e-15));
    CHECK(sample.weights[k] == doctest::Approx(0.25).epsilon(1e-15));
  }
  CHECK(sample.provenance == Provenance::kGridVoronoi);
}

TEST_CASE("two dimensional grid is the tensor product") {
  auto marginals = uniform_product({Interval(0.0, 1.0), Interval(0.0, 1.0)});
  std::vector<int> counts{2, 2};
  QuantizedMeasure sample = grid_quantize(marginals, counts);

  REQUIRE(sample.size() == 4);
  REQUIRE(sample.dims == 2);
  int hits = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto atom = sample.atom(k);
    for (double c : {0.25, 0.75}) {
      for (double d : {0.25, 0.75}) {
        if (std::abs(atom[0] - c) < 1e-15 && std::abs(atom[1] - d) < 1e-15) {
          ++hits;
        }
      }
    }
    CHECK(sample.weights[k] == doctest::Approx(0.25).epsilon(1e-15));
  }
  CHECK(hits == 4);  // every (0.25/0.75) pair appears exactly once
}

TEST_CASE("single-cell grid sits at the midpoint") {
  auto marginals = uniform_product({Interval(0.01, 1.01)});
  std::vector<int> counts{1};
  QuantizedMeasure sample = grid_quantize(marginals, counts);
  REQUIRE(sample.size() == 1);
  CHECK(sample.atom(0)[0] == doctest::Approx(0.51).epsilon(1e-15));
  CHECK(sample.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("grid rejects nonpositive counts") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  std::vector<int> zero{0};
  std::vector<int> negative{-3};
  CHECK_THROWS_AS((void)grid_quantize(marginals, zero), ConfigError);
  CHECK_THROWS_AS((void)grid_quantize(marginals, negative), ConfigError);
}

TEST_CASE("tabulated marginals get equal-mass cells and conditional means") {
  // Density proportional to t on [0,1]: CDF t^2, so equal-mass edges are
  // sqrt(k/K) and the cell conditional mean is (2/3)(e_k^3 - e_{k-1}^3)*K.
  std::vector<Marginal> marginals{Marginal::tabulated(
      Interval(0.0, 1.0), std::vector<double>{0.0, 1.0},
      std::vector<double>{0.0, 7.0})};
  const int K = 4;
  std::vector<int> counts{K};
  QuantizedMeasure sample = grid_quantize(marginals, counts);

  REQUIRE(sample.size() == static_cast<std::size_t>(K));
  REQUIRE(sample.axis_edges.size() == 1);
  REQUIRE(sample.axis_edges[0].size() == static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    CHECK(sample.axis_edges[0][static_cast<std::size_t>(k)] ==
          doctest::Approx(std::sqrt(static_cast<double>(k) / K))
              .epsilon(1e-12));
  }
  for (int k = 0; k < K; ++k) {
    double lo = std::sqrt(static_cast<double>(k) / K);
    double hi = std::sqrt(static_cast<double>(k + 1) / K);
    double conditional_mean = (2.0 / 3.0) * (hi * hi * hi - lo * lo * lo) * K;
    CHECK(sample.atom(static_cast<std::size_t>(k))[0] ==
          doctest::Approx(conditional_mean).epsilon(1e-12));
    CHECK(sample.weights[static_cast<std::size_t>(k)] ==
          doctest::Approx(1.0 / K).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo sampling basics") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});

  QuantizedMeasure one = mc_quantize(marginals, 1, 7);
  REQUIRE(one.size() == 1);
  CHECK(one.weights[0] == doctest::Approx(1.0));
  CHECK(one.provenance == Provenance::kMonteCarlo);
  CHECK(one.atom(0)[0] >= 0.0);
  CHECK(one.atom(0)[0] <= 1.0);

  QuantizedMeasure a = mc_quantize(marginals, 257, 42);
  QuantizedMeasure b = mc_quantize(marginals, 257, 42);
  CHECK(a.atoms == b.atoms);  // bit-for-bit reproducibility
  CHECK(a.weights == b.weights);

  QuantizedMeasure c = mc_quantize(marginals, 257, 43);
  CHECK(a.atoms != c.atoms);

  CHECK_THROWS_AS((void)mc_quantize(marginals, 0, 1), ConfigError);
}

TEST_CASE("monte carlo sample mean concentrates") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  QuantizedMeasure sample = mc_quantize(marginals, 100000, 2026);
  double mean = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    mean += sample.weights[k] * sample.atom(k)[0];
  }
  CHECK(std::abs(mean - 0.5) <= 0.005);
}

TEST_CASE("weights always sum to one") {
  auto marginals2 =
      uniform_product({Interval(0.01, 1.01), Interval(0.01, 2.01)});
  for (std::vector<int> counts :
       {std::vector<int>{1, 1}, std::vector<int>{3, 5},
        std::vector<int>{20, 40}}) {
    QuantizedMeasure g = grid_quantize(marginals2, counts);
    CHECK(std::abs(weight_sum(g) - 1.0) <= 1e-12);
  }
  std::vector<Marginal> shaped{
      Marginal::tabulated(Interval(0.0, 2.0), std::vector<double>{0.0, 1.0, 2.0},
                          std::vector<double>{1.0, 3.0, 0.5}),
      Marginal::uniform(Interval(-1.0, 1.0))};
  std::vector<int> counts{7, 4};
  CHECK(std::abs(weight_sum(grid_quantize(shaped, counts)) - 1.0) <= 1e-12);
  CHECK(std::abs(weight_sum(mc_quantize(shaped, 999, 5)) - 1.0) <= 1e-12);
}

TEST_CASE("dispersion of tensor grids is exact") {
  auto line = uniform_product({Interval(0.0, 1.0)});
  std::vector<Interval> line_dom{Interval(0.0, 1.0)};
  for (int K : {1, 2, 5, 16}) {
    std::vector<int> counts{K};
    DispersionEstimate est = dispersion(grid_quantize(line, counts), line_dom);
    CHECK(est.exact);
    CHECK(est.value == doctest::Approx(1.0 / (2.0 * K)).epsilon(1e-12));
  }

  auto square = uniform_product({Interval(0.0, 1.0), Interval(0.0, 1.0)});
  std::vector<Interval> square_dom{Interval(0.0, 1.0), Interval(0.0, 1.0)};
  for (int K : {2, 7}) {
    std::vector<int> counts{K, K};
    DispersionEstimate est =
        dispersion(grid_quantize(square, counts), square_dom);
    CHECK(est.exact);
    CHECK(est.value ==
          doctest::Approx(std::sqrt(2.0) / (2.0 * K)).epsilon(1e-12));
  }
}

TEST_CASE("dispersion of a single off-center atom") {
  auto marginals = uniform_product({Interval(0.01, 1.01)});
  std::vector<int> counts{1};
  QuantizedMeasure sample = grid_quantize(marginals, counts);
  std::vector<Interval> dom{Interval(0.01, 1.01)};
  DispersionEstimate est = dispersion(sample, dom);
  CHECK(est.exact);
  CHECK(est.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dispersion of scattered samples is a schedule-independent bound") {
  auto marginals = uniform_product({Interval(0.0, 1.0), Interval(0.0, 1.0)});
  std::vector<Interval> dom{Interval(0.0, 1.0), Interval(0.0, 1.0)};
  QuantizedMeasure sample = mc_quantize(marginals, 64, 9);

  DispersionEstimate serial = dispersion(sample, dom, 1);
  DispersionEstimate parallel = dispersion(sample, dom, 4);
  CHECK_FALSE(serial.exact);
  CHECK(serial.value == parallel.value);  // max-reduction order-insensitive
  CHECK(serial.value > 0.0);
  CHECK(serial.value <= std::sqrt(2.0));

  // A 1-D monte-carlo sample still admits the exact gap analysis.
  auto line = uniform_product({Interval(0.0, 1.0)});
  std::vector<Interval> line_dom{Interval(0.0, 1.0)};
  CHECK(dispersion(mc_quantize(line, 20, 3), line_dom).exact);

  QuantizedMeasure empty;
  empty.dims = 1;
  CHECK_THROWS_AS((void)dispersion(empty, line_dom), ConfigError);
}

TEST_CASE("transport bound is exact for uniform midpoint grids") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  for (int M : {1, 2, 4, 8, 32, 128}) {
    std::vector<int> counts{M};
    QuantizedMeasure sample = grid_quantize(marginals, counts);
    double bound = kantorovich_upper_bound(sample, marginals);
    CHECK(bound == doctest::Approx(1.0 / (4.0 * M)).epsilon(1e-10));
  }
}

TEST_CASE("transport bound for the single-atom measure") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  std::vector<int> counts{1};
  QuantizedMeasure sample = grid_quantize(marginals, counts);
  CHECK(sample.atom(0)[0] == doctest::Approx(0.5));
  CHECK(kantorovich_upper_bound(sample, marginals) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("transport bound never exceeds the fill distance") {
  std::vector<Marginal> shaped{
      Marginal::tabulated(Interval(0.0, 1.0), std::vector<double>{0.0, 1.0},
                          std::vector<double>{0.0, 7.0}),
      Marginal::uniform(Interval(-2.0, 1.0))};
  std::vector<Interval> dom{Interval(0.0, 1.0), Interval(-2.0, 1.0)};
  for (std::vector<int> counts :
       {std::vector<int>{1, 1}, std::vector<int>{4, 3},
        std::vector<int>{9, 17}}) {
    QuantizedMeasure sample = grid_quantize(shaped, counts);
    CHECK(kantorovich_upper_bound(sample, shaped) <=
          dispersion(sample, dom).value + 1e-12);
  }
}

TEST_CASE("transport bound requires cell structure") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  QuantizedMeasure sample = mc_quantize(marginals, 16, 1);
  CHECK_THROWS_AS((void)kantorovich_upper_bound(sample, marginals),
                  UnsupportedError);
}

TEST_CASE("transport bound halves when every count doubles") {
  auto marginals =
      uniform_product({Interval(0.01, 1.01), Interval(0.01, 2.01)});
  std::vector<int> coarse{3, 5};
  std::vector<int> fine{6, 10};
  double b_coarse = kantorovich_upper_bound(grid_quantize(marginals, coarse),
                                            marginals);
  double b_fine =
      kantorovich_upper_bound(grid_quantize(marginals, fine), marginals);
  CHECK(b_fine == doctest::Approx(0.5 * b_coarse).epsilon(1e-10));

  auto line = uniform_product({Interval(0.0, 1.0)});
  std::vector<int> k8{8};
  std::vector<int> k16{16};
  double one = kantorovich_upper_bound(grid_quantize(line, k8), line);
  double two = kantorovich_upper_bound(grid_quantize(line, k16), line);
  CHECK(two == doctest::Approx(0.5 * one).epsilon(1e-10));
}

TEST_CASE("expectation error of a Lipschitz sum obeys the transport bound") {
  // f(theta) = sum_i theta_i is sqrt(n)-Lipschitz in the Euclidean metric, so
  // |E_sample f - E f| <= bound * sqrt(n).
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int dims = 1 + static_cast<int>(rng() % 3);
    std::vector<Marginal> marginals;
    std::vector<int> counts;
    double exact_mean_sum = 0.0;
    for (int i = 0; i < dims; ++i) {
      double lo = 2.0 * test::canonical_uniform(rng) - 1.0;
      double width = 0.1 + 2.0 * test::canonical_uniform(rng);
      marginals.push_back(Marginal::uniform(Interval(lo, lo + width)));
      counts.push_back(1 + static_cast<int>(rng() % 30));
      exact_mean_sum += lo + width / 2.0;
    }
    QuantizedMeasure sample = grid_quantize(marginals, counts);
    double sample_mean_sum = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
      auto atom = sample.atom(k);
      for (int i = 0; i < dims; ++i) sample_mean_sum += sample.weights[k] * atom[static_cast<std::size_t>(i)];
    }
    double bound = kantorovich_upper_bound(sample, marginals);
    CHECK(std::abs(sample_mean_sum - exact_mean_sum) <=
          bound * std::sqrt(static_cast<double>(dims)) + 1e-12);
  }
}

TEST_CASE("game overloads quantize the game's marginals") {
  GameSpec game = bilinear_quadratic();
  std::vector<int> counts{2, 2};
  QuantizedMeasure sample = grid_quantize(game, counts);
  REQUIRE(sample.size() == 4);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    CHECK(std::abs(std::abs(sample.atom(k)[0]) - 0.5) <= 1e-15);
    CHECK(std::abs(std::abs(sample.atom(k)[1]) - 0.5) <= 1e-15);
  }

  std::vector<Marginal> ms{game.marginal(0), game.marginal(1)};
  QuantizedMeasure direct = grid_quantize(ms, counts);
  CHECK(sample.atoms == direct.atoms);
  CHECK(sample.weights == direct.weights);
  CHECK(kantorovich_upper_bound(sample, game) ==
        kantorovich_upper_bound(direct, ms));

  // Independent oracle: dense midpoint-rule integral of the Euclidean
  // distance to the atom over one cell (all four are congruent). Joint
  // density is 1/4 on [-1,1]^2; each cell has side 1 and a centered atom.
  const int grid = 1200;
  double cell_integral = 0.0;
  for (int a = 0; a < grid; ++a) {
    double u = (a + 0.5) / grid - 0.5;
    for (int b = 0; b < grid; ++b) {
      double v = (b + 0.5) / grid - 0.5;
      cell_integral += std::sqrt(u * u + v * v);
    }
  }
  cell_integral /= static_cast<double>(grid) * grid;
  double oracle = 4.0 * 0.25 * cell_integral;
  CHECK(kantorovich_upper_bound(sample, game) ==
        doctest::Approx(oracle).epsilon(1e-3));

  QuantizedMeasure mc = mc_quantize(game, 11, 77);
  CHECK(mc.size() == 11);
  CHECK(mc.dims == 2);
}

TEST_CASE("measure validation rejects broken invariants") {
  auto marginals = uniform_product({Interval(0.0, 1.0)});
  std::vector<Interval> dom{Interval(0.0, 1.0)};
  std::vector<int> counts{4};
  QuantizedMeasure good = grid_quantize(marginals, counts);
  CHECK_NOTHROW(check_measure(good, dom));

  QuantizedMeasure bad_weights = good;
  bad_weights.weights[0] += 1e-6;
  CHECK_THROWS_AS(check_measure(bad_weights, dom), ConfigError);

  QuantizedMeasure outside = good;
  outside.atoms[0] = -0.25;
  CHECK_THROWS_AS(check_measure(outside, dom), ConfigError);
}

TEST_SUITE_END();
