// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_MEASURE_HPP_
#define POLYEQ_MEASURE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace polyeq {

// How a quantized measure was produced. Voronoi-cell quadrature bounds are
// only defined for the tensor-grid construction.
enum class Provenance {
  kGridVoronoi,
  kMonteCarlo,
};

// A finitely supported approximation of the joint type distribution:
// atoms theta^1..theta^M with probability weights summing to one.
// For grid provenance the per-dimension structure (atom coordinates, cell
// edges, cell masses) is retained so quadrature against the cells stays
// possible; monte-carlo samples carry the flat atom list only.
struct QuantizedMeasure {
  int dims = 0;
  std::vector<double> atoms;    // size() * dims, row-major
  std::vector<double> weights;  // size()
  Provenance provenance = Provenance::kGridVoronoi;

  // Grid provenance only; empty otherwise.
  std::vector<std::vector<double>> axis_atoms;   // per-dim sorted coordinates
  std::vector<std::vector<double>> axis_edges;   // per-dim cell boundaries
  std::vector<std::vector<double>> axis_masses;  // per-dim cell masses

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] std::span<const double> atom(std::size_t k) const {
    return {atoms.data() + k * static_cast<std::size_t>(dims),
            static_cast<std::size_t>(dims)};
  }
};

}  // namespace polyeq

#endif  // POLYEQ_MEASURE_HPP_
