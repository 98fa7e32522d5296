// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0
//
// Micro benchmarks for the hot paths: basis evaluation, bound-preserving
// fits, quantization plus its transport bound, single best responses, and
// the full sweep loop.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "polyeq/games.hpp"
#include "polyeq/poly.hpp"
#include "polyeq/quantize.hpp"
#include "polyeq/solver.hpp"

namespace {

using namespace polyeq;

// ==== Polynomial layer ======================================================

void bm_monomial_basis(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  std::vector<double> out(static_cast<std::size_t>(degree) + 1);
  double t = 0.73;
  for (auto _ : state) {
    monomial_basis_into(t, degree, out);
    benchmark::DoNotOptimize(out.data());
    t = t < 1.0 ? t + 1e-9 : 0.0;  // defeat value caching
  }
}
BENCHMARK(bm_monomial_basis)->Arg(4)->Arg(8)->Arg(16);

void bm_bernstein_fit(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  auto f = [](double t) { return 3.0 + 2.0 * std::sin(5.0 * t); };
  for (auto _ : state) {
    PolynomialStrategy fit =
        bernstein_fit(f, degree, Interval(0.0, 1.0), Interval(0.0, 10.0));
    benchmark::DoNotOptimize(fit.coeffs().data());
  }
}
BENCHMARK(bm_bernstein_fit)->Arg(4)->Arg(8)->Arg(16);

// ==== Quantization layer ====================================================

void bm_grid_quantize(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  GameSpec game = bilinear_quadratic();
  std::vector<int> counts{k, k};
  for (auto _ : state) {
    QuantizedMeasure sample = grid_quantize(game, counts);
    benchmark::DoNotOptimize(sample.atoms.data());
  }
}
BENCHMARK(bm_grid_quantize)->Arg(10)->Arg(30)->Arg(70);

void bm_kantorovich_bound(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<Marginal> marginals{
      Marginal::uniform(Interval(0.0, 1.0)),
      Marginal::tabulated(Interval(0.0, 1.0), {0.0, 1.0}, {0.0, 2.0})};
  std::vector<int> counts{k, k};
  QuantizedMeasure sample = grid_quantize(marginals, counts);
  for (auto _ : state) {
    double bound = kantorovich_upper_bound(sample, marginals);
    benchmark::DoNotOptimize(bound);
  }
}
BENCHMARK(bm_kantorovich_bound)->Arg(10)->Arg(30)->Arg(70);

// ==== Solver layer ==========================================================

[[nodiscard]] GameSpec contest_game() {
  ContestParams params;
  params.n = 2;
  params.type_domains = {Interval(0.01, 1.01), Interval(0.01, 1.01)};
  return rent_seeking(params);
}

void bm_best_response_degree(benchmark::State& state) {
  GameSpec game = contest_game();
  std::vector<int> counts{20, 20};
  QuantizedMeasure sample = grid_quantize(game, counts);
  SolverConfig config;
  config.degree = static_cast<int>(state.range(0));
  StrategyProfile opponents = midpoint_profile(game, config.degree);
  DiscretizedObjective objective(game, sample, 0, opponents, config);
  for (auto _ : state) {
    BestResponse br = best_response(objective, objective.center(), config);
    benchmark::DoNotOptimize(br.coeffs.data());
  }
}
BENCHMARK(bm_best_response_degree)->Arg(2)->Arg(5)->Arg(8);

void bm_best_response_sample(benchmark::State& state) {
  GameSpec game = contest_game();
  const int k = static_cast<int>(state.range(0));
  std::vector<int> counts{k, k};
  QuantizedMeasure sample = grid_quantize(game, counts);
  SolverConfig config;
  config.degree = 5;
  StrategyProfile opponents = midpoint_profile(game, config.degree);
  DiscretizedObjective objective(game, sample, 0, opponents, config);
  for (auto _ : state) {
    BestResponse br = best_response(objective, objective.center(), config);
    benchmark::DoNotOptimize(br.coeffs.data());
  }
}
BENCHMARK(bm_best_response_sample)->Arg(10)->Arg(30)->Arg(70);

void bm_gauss_seidel_solve(benchmark::State& state) {
  GameSpec game = contest_game();
  std::vector<int> counts{20, 20};
  QuantizedMeasure sample = grid_quantize(game, counts);
  SolverConfig config;
  config.degree = static_cast<int>(state.range(0));
  for (auto _ : state) {
    EquilibriumResult result = gauss_seidel_solve(game, sample, config);
    benchmark::DoNotOptimize(result.br_gap);
  }
}
BENCHMARK(bm_gauss_seidel_solve)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_best_response_gap(benchmark::State& state) {
  GameSpec game = contest_game();
  std::vector<int> counts{30, 30};
  QuantizedMeasure sample = grid_quantize(game, counts);
  SolverConfig config;
  config.degree = 8;
  EquilibriumResult result = gauss_seidel_solve(game, sample, config);
  for (auto _ : state) {
    double gap = best_response_gap(game, result.profile, sample, config);
    benchmark::DoNotOptimize(gap);
  }
}
BENCHMARK(bm_best_response_gap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
