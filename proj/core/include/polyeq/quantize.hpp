// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_QUANTIZE_HPP_
#define POLYEQ_QUANTIZE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "polyeq/distribution.hpp"
#include "polyeq/game.hpp"
#include "polyeq/measure.hpp"

namespace polyeq {

struct QuantizerConfig {
  enum class Mode { kGridVoronoi, kMonteCarlo };
  Mode mode = Mode::kGridVoronoi;
  std::vector<int> counts;   // grid mode: per-dimension cell counts
  std::int64_t mc_count = 0;  // monte-carlo mode: number of draws
  std::uint64_t seed = 0;     // monte-carlo mode only
};

// Tensor-product Voronoi quantizer. Per dimension, a uniform marginal is cut
// into counts[i] equal-width cells represented by their midpoints; a
// tabulated marginal is cut into counts[i] equal-mass cells represented by
// their conditional means. Atom weights are the products of the 1-D cell
// masses. Throws ConfigError when any count is < 1.
[[nodiscard]] QuantizedMeasure grid_quantize(std::span<const Marginal> marginals,
                                             std::span<const int> counts);
[[nodiscard]] QuantizedMeasure grid_quantize(const GameSpec& game,
                                             std::span<const int> counts);

// m independent draws from the product distribution, each with weight 1/m.
// Deterministic for a fixed seed. Throws ConfigError when m < 1.
[[nodiscard]] QuantizedMeasure mc_quantize(std::span<const Marginal> marginals,
                                           std::int64_t m, std::uint64_t seed);
[[nodiscard]] QuantizedMeasure mc_quantize(const GameSpec& game, std::int64_t m,
                                           std::uint64_t seed);

struct DispersionEstimate {
  double value = 0.0;
  // True when `value` is the exact fill distance (tensor grids and any
  // one-dimensional sample); false for the dense-search lower bound.
  bool exact = false;
};

// Fill distance sup_theta min_k ||theta - theta^k|| of the sample within the
// given domains. Exact per-dimension gap analysis for tensor grids and 1-D
// samples; otherwise a dense-grid search with ~10^6 probes that yields a
// lower-bound estimate. threads parallelizes the probe sweep (the max
// reduction is order-insensitive, so results do not depend on it).
// Throws ConfigError for an empty sample or mismatched dimensions.
[[nodiscard]] DispersionEstimate dispersion(const QuantizedMeasure& sample,
                                            std::span<const Interval> domains,
                                            int threads = 1);

// Transport-distance bound sum_k integral over cell k of ||theta - theta^k||
// d(eta), evaluated by per-cell Gauss-Legendre quadrature with each dimension
// split at the atom (exact for uniform marginals in one dimension). Defined
// for grid provenance only; monte-carlo samples throw UnsupportedError.
// Never exceeds the exact fill distance.
[[nodiscard]] double kantorovich_upper_bound(const QuantizedMeasure& sample,
                                             std::span<const Marginal> marginals);
[[nodiscard]] double kantorovich_upper_bound(const QuantizedMeasure& sample,
                                             const GameSpec& game);

// Validates the standing invariants (weights sum to one within 1e-12, atoms
// inside the domains); throws ConfigError on violation.
void check_measure(const QuantizedMeasure& sample,
                   std::span<const Interval> domains);

}  // namespace polyeq

#endif  // POLYEQ_QUANTIZE_HPP_
