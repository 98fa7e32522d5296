// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_RESULT_HPP_
#define POLYEQ_RESULT_HPP_

#include <limits>
#include <vector>

#include "polyeq/measure.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

// Whether the returned profile is a certified global equilibrium candidate
// (every inner maximization was a concave program) or only a local one.
enum class EquilibriumScope {
  kGlobal,
  kLocal,
};

// Outcome of a Gauss-Seidel solve. converged means the final sweep moved no
// coefficient by more than the outer tolerance AND the verified best-response
// gap is within the residual tolerance; a run that merely exhausts its sweep
// budget reports converged=false here rather than throwing.
struct EquilibriumResult {
  StrategyProfile profile;
  int sweeps = 0;
  std::vector<double> outer_trace;  // per-sweep max coefficient change
  double br_gap = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  EquilibriumScope scope = EquilibriumScope::kLocal;
  QuantizedMeasure sample;
};

}  // namespace polyeq

#endif  // POLYEQ_RESULT_HPP_
