// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "polyeq/errors.hpp"

namespace polyeq {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15, and exact
// for the per-half-cell transport integrand in one dimension.
constexpr int kGaussOrder = 8;
constexpr double kGaussNodes[kGaussOrder] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussWeights[kGaussOrder] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Marginal> game_marginals(const GameSpec& game) {
  std::vector<Marginal> out;
  out.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    out.push_back(game.marginal(i));
  }
  return out;
}

}  // namespace

// ==== Construction =========================================================

QuantizedMeasure grid_quantize(std::span<const Marginal> marginals,
                               std::span<const int> counts) {
  if (marginals.empty() || counts.size() != marginals.size()) {
    throw ConfigError("grid quantizer needs one positive count per dimension");
  }
  QuantizedMeasure q;
  q.dims = static_cast<int>(marginals.size());
  q.provenance = Provenance::kGridVoronoi;
  q.axis_atoms.resize(marginals.size());
  q.axis_edges.resize(marginals.size());
  q.axis_masses.resize(marginals.size());

  std::size_t total = 1;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    int k = counts[i];
    if (k < 1) {
      throw ConfigError("quantizer count of dimension " + std::to_string(i + 1) +
                        " must be >= 1, got " + std::to_string(k));
    }
    const Marginal& m = marginals[i];
    const Interval& sup = m.support();
    auto& atoms = q.axis_atoms[i];
    auto& edges = q.axis_edges[i];
    auto& masses = q.axis_masses[i];
    atoms.resize(static_cast<std::size_t>(k));
    edges.resize(static_cast<std::size_t>(k) + 1);
    masses.assign(static_cast<std::size_t>(k), 1.0 / k);
    if (m.is_uniform()) {
      double h = sup.width() / k;
      for (int c = 0; c <= k; ++c) {
        edges[static_cast<std::size_t>(c)] =
            (c == k) ? sup.hi() : sup.lo() + c * h;
      }
      for (int c = 0; c < k; ++c) {
        atoms[static_cast<std::size_t>(c)] = sup.lo() + (c + 0.5) * h;
      }
    } else {
      for (int c = 0; c <= k; ++c) {
        edges[static_cast<std::size_t>(c)] =
            (c == 0) ? sup.lo()
                     : (c == k) ? sup.hi()
                                : m.quantile(static_cast<double>(c) / k);
      }
      for (int c = 0; c < k; ++c) {
        atoms[static_cast<std::size_t>(c)] =
            m.cell_mean(edges[static_cast<std::size_t>(c)],
                        edges[static_cast<std::size_t>(c) + 1]);
      }
    }
    total *= static_cast<std::size_t>(k);
  }

  q.atoms.resize(total * static_cast<std::size_t>(q.dims));
  q.weights.resize(total);
  std::vector<std::size_t> idx(marginals.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      q.atoms[flat * marginals.size() + i] = q.axis_atoms[i][idx[i]];
      w *= q.axis_masses[i][idx[i]];
    }
    q.weights[flat] = w;
    // Advance the multi-index, last dimension fastest.
    for (std::size_t i = marginals.size(); i-- > 0;) {
      if (++idx[i] < q.axis_atoms[i].size()) break;
      idx[i] = 0;
    }
  }
  return q;
}

QuantizedMeasure grid_quantize(const GameSpec& game,
                               std::span<const int> counts) {
  auto marginals = game_marginals(game);
  return grid_quantize(std::span<const Marginal>(marginals), counts);
}

QuantizedMeasure mc_quantize(std::span<const Marginal> marginals,
                             std::int64_t m, std::uint64_t seed) {
  if (marginals.empty()) {
    throw ConfigError("monte-carlo quantizer needs at least one dimension");
  }
  if (m < 1) {
    throw ConfigError("monte-carlo quantizer needs at least one draw, got " +
                      std::to_string(m));
  }
  QuantizedMeasure q;
  q.dims = static_cast<int>(marginals.size());
  q.provenance = Provenance::kMonteCarlo;
  q.atoms.resize(static_cast<std::size_t>(m) * marginals.size());
  q.weights.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) {
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      q.atoms[k * marginals.size() + i] =
          marginals[i].sample(canonical_uniform(rng));
    }
  }
  return q;
}

QuantizedMeasure mc_quantize(const GameSpec& game, std::int64_t m,
                             std::uint64_t seed) {
  auto marginals = game_marginals(game);
  return mc_quantize(std::span<const Marginal>(marginals), m, seed);
}

void check_measure(const QuantizedMeasure& sample,
                   std::span<const Interval> domains) {
  if (sample.size() == 0) {
    throw ConfigError("quantized measure has no atoms");
  }
  if (sample.dims != static_cast<int>(domains.size())) {
    throw ConfigError("quantized measure dimension mismatch");
  }
  double sum = 0.0, comp = 0.0;
  for (double w : sample.weights) {
    double y = w - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("quantized measure weights sum to " +
                      std::to_string(sum) + ", expected 1 within 1e-12");
  }
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto atom = sample.atom(k);
    for (std::size_t i = 0; i < domains.size(); ++i) {
      if (!domains[i].contains(atom[i])) {
        throw ConfigError("atom " + std::to_string(k + 1) +
                          " leaves the type domain in dimension " +
                          std::to_string(i + 1));
      }
    }
  }
}

// ==== Dispersion ===========================================================

namespace {

// Exact fill distance of sorted 1-D coordinates within [lo, hi].
double axis_fill_distance(std::vector<double> coords, const Interval& domain) {
  std::sort(coords.begin(), coords.end());
  double worst = std::max(coords.front() - domain.lo(),
                          domain.hi() - coords.back());
  for (std::size_t j = 0; j + 1 < coords.size(); ++j) {
    worst = std::max(worst, 0.5 * (coords[j + 1] - coords[j]));
  }
  return worst;
}

// Bucketed nearest-atom search for scattered multi-dimensional samples.
class NearestAtomIndex {
 public:
  NearestAtomIndex(const QuantizedMeasure& sample,
                   std::span<const Interval> domains)
      : sample_(&sample), dims_(static_cast<std::size_t>(sample.dims)) {
    double per_dim = std::pow(static_cast<double>(sample.size()),
                              1.0 / static_cast<double>(dims_));
    buckets_per_dim_ = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(per_dim)));
    lo_.resize(dims_);
    width_.resize(dims_);
    for (std::size_t i = 0; i < dims_; ++i) {
      lo_[i] = domains[i].lo();
      width_[i] = domains[i].width() / static_cast<double>(buckets_per_dim_);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < dims_; ++i) total *= buckets_per_dim_;
    buckets_.resize(total);
    for (std::size_t k = 0; k < sample.size(); ++k) {
      buckets_[bucket_of(sample.atom(k))].push_back(k);
    }
    min_width_ = *std::min_element(width_.begin(), width_.end());
  }

  [[nodiscard]] double nearest_distance(std::span<const double> point) const {
    std::vector<std::size_t> cell(dims_);
    for (std::size_t i = 0; i < dims_; ++i) {
      cell[i] = coord_bucket(point[i], i);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t radius = 0; radius < buckets_per_dim_; ++radius) {
      if (best <= (radius == 0 ? 0.0
                               : (static_cast<double>(radius) - 1.0) *
                                     min_width_)) {
        break;
      }
      bool any = scan_shell(point, cell, radius, &best);
      if (!any && best < std::numeric_limits<double>::infinity() &&
          radius > 0) {
        // Shell left the bucket lattice entirely and a candidate exists.
        break;
      }
    }
    return best;
  }

 private:
  [[nodiscard]] std::size_t coord_bucket(double x, std::size_t dim) const {
    double t = (x - lo_[dim]) / width_[dim];
    auto b = static_cast<std::ptrdiff_t>(std::floor(t));
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(b, 0,
                                   static_cast<std::ptrdiff_t>(buckets_per_dim_) - 1));
  }

  [[nodiscard]] std::size_t bucket_of(std::span<const double> atom) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_; ++i) {
      flat = flat * buckets_per_dim_ + coord_bucket(atom[i], i);
    }
    return flat;
  }

  // Visits every bucket whose Chebyshev index distance equals `radius`;
  // returns whether any lattice cell was visited.
  bool scan_shell(std::span<const double> point,
                  const std::vector<std::size_t>& cell, std::size_t radius,
                  double* best) const {
    std::vector<std::ptrdiff_t> offset(dims_,
                                       -static_cast<std::ptrdiff_t>(radius));
    bool visited = false;
    while (true) {
      bool on_shell = radius == 0;
      for (std::size_t i = 0; i < dims_ && !on_shell; ++i) {
        on_shell = static_cast<std::size_t>(std::abs(offset[i])) == radius;
      }
      if (on_shell) {
        bool inside = true;
        std::size_t flat = 0;
        for (std::size_t i = 0; i < dims_; ++i) {
          auto c = static_cast<std::ptrdiff_t>(cell[i]) + offset[i];
          if (c < 0 || c >= static_cast<std::ptrdiff_t>(buckets_per_dim_)) {
            inside = false;
            break;
          }
          flat = flat * buckets_per_dim_ + static_cast<std::size_t>(c);
        }
        if (inside) {
          visited = true;
          for (std::size_t k : buckets_[flat]) {
            auto atom = sample_->atom(k);
            double d2 = 0.0;
            for (std::size_t i = 0; i < dims_; ++i) {
              double diff = point[i] - atom[i];
              d2 += diff * diff;
            }
            *best = std::min(*best, std::sqrt(d2));
          }
        }
      }
      // Advance the offset multi-index, last dimension fastest.
      std::size_t i = dims_;
      while (i-- > 0) {
        if (++offset[i] <= static_cast<std::ptrdiff_t>(radius)) break;
        offset[i] = -static_cast<std::ptrdiff_t>(radius);
        if (i == 0) return visited;
      }
      if (i == static_cast<std::size_t>(-1)) return visited;
    }
  }

  const QuantizedMeasure* sample_;
  std::size_t dims_;
  std::size_t buckets_per_dim_ = 1;
  std::vector<double> lo_;
  std::vector<double> width_;
  double min_width_ = 0.0;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

DispersionEstimate dispersion(const QuantizedMeasure& sample,
                              std::span<const Interval> domains, int threads) {
  if (sample.size() == 0) {
    throw ConfigError("dispersion of an empty sample");
  }
  if (sample.dims != static_cast<int>(domains.size())) {
    throw ConfigError("dispersion dimension mismatch: sample has " +
                      std::to_string(sample.dims) + " dims, got " +
                      std::to_string(domains.size()) + " domains");
  }

  // Tensor grids: per-dimension gaps combine in the Euclidean norm because
  // each coordinate distance is maximized independently.
  if (!sample.axis_atoms.empty()) {
    double sq = 0.0;
    for (std::size_t i = 0; i < domains.size(); ++i) {
      double e = axis_fill_distance(sample.axis_atoms[i], domains[i]);
      sq += e * e;
    }
    return {std::sqrt(sq), true};
  }

  if (sample.dims == 1) {
    std::vector<double> coords(sample.atoms);
    return {axis_fill_distance(std::move(coords), domains[0]), true};
  }

  // Scattered multi-dimensional sample: dense probe grid, lower bound only.
  std::size_t dims = static_cast<std::size_t>(sample.dims);
  auto per_dim = static_cast<std::size_t>(
      std::floor(std::pow(1e6, 1.0 / static_cast<double>(dims))));
  per_dim = std::max<std::size_t>(per_dim, 2);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= per_dim;

  NearestAtomIndex index(sample, domains);
  auto probe_at = [&](std::size_t flat, std::vector<double>* point) {
    for (std::size_t i = dims; i-- > 0;) {
      std::size_t g = flat % per_dim;
      flat /= per_dim;
      (*point)[i] = domains[i].lo() + domains[i].width() *
                                          (static_cast<double>(g) /
                                           static_cast<double>(per_dim - 1));
    }
  };

  int workers = std::max(1, threads);
  std::vector<std::future<double>> futures;
  futures.reserve(static_cast<std::size_t>(workers));
  std::size_t chunk = (total + static_cast<std::size_t>(workers) - 1) /
                      static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    std::size_t begin = static_cast<std::size_t>(w) * chunk;
    std::size_t end = std::min(total, begin + chunk);
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      std::vector<double> point(dims);
      double worst = 0.0;
      for (std::size_t flat = begin; flat < end; ++flat) {
        probe_at(flat, &point);
        worst = std::max(worst, index.nearest_distance(point));
      }
      return worst;
    }));
  }
  double worst = 0.0;
  for (auto& f : futures) worst = std::max(worst, f.get());
  return {worst, false};
}

// ==== Transport bound ======================================================

double kantorovich_upper_bound(const QuantizedMeasure& sample,
                               std::span<const Marginal> marginals) {
  if (sample.provenance != Provenance::kGridVoronoi ||
      sample.axis_atoms.empty()) {
    throw UnsupportedError(
        "transport bound requires grid-voronoi provenance; monte-carlo "
        "samples carry no cell structure");
  }
  std::size_t dims = static_cast<std::size_t>(sample.dims);
  if (marginals.size() != dims) {
    throw ConfigError("transport bound dimension mismatch");
  }

  // Per-dimension, per-cell quadrature nodes and density-weighted weights,
  // with every cell split at its atom so the integrand is smooth per piece.
  struct AxisCell {
    std::vector<double> nodes;
    std::vector<double> weights;  // include the marginal density
    double atom;
  };
  std::vector<std::vector<AxisCell>> axis_cells(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    const auto& atoms = sample.axis_atoms[i];
    const auto& edges = sample.axis_edges[i];
    axis_cells[i].resize(atoms.size());
    for (std::size_t c = 0; c < atoms.size(); ++c) {
      AxisCell& cell = axis_cells[i][c];
      cell.atom = atoms[c];
      const double segments[2][2] = {{edges[c], atoms[c]},
                                     {atoms[c], edges[c + 1]}};
      for (const auto& seg : segments) {
        double half = 0.5 * (seg[1] - seg[0]);
        if (!(half > 0.0)) continue;
        double mid = 0.5 * (seg[0] + seg[1]);
        for (int gq = 0; gq < kGaussOrder; ++gq) {
          double x = mid + half * kGaussNodes[gq];
          cell.nodes.push_back(x);
          cell.weights.push_back(kGaussWeights[gq] * half *
                                 marginals[i].density(x));
        }
      }
    }
  }

  // Tensor sweep over cells, then over node combinations within each cell.
  double total = 0.0;
  std::vector<std::size_t> cell_idx(dims, 0);
  std::vector<std::size_t> node_idx(dims);
  while (true) {
    std::size_t nodes_total = 1;
    for (std::size_t i = 0; i < dims; ++i) {
      nodes_total *= axis_cells[i][cell_idx[i]].nodes.size();
    }
    std::fill(node_idx.begin(), node_idx.end(), 0);
    for (std::size_t flat = 0; flat < nodes_total; ++flat) {
      double w = 1.0;
      double d2 = 0.0;
      for (std::size_t i = 0; i < dims; ++i) {
        const AxisCell& cell = axis_cells[i][cell_idx[i]];
        double x = cell.nodes[node_idx[i]];
        w *= cell.weights[node_idx[i]];
        double diff = x - cell.atom;
        d2 += diff * diff;
      }
      total += w * std::sqrt(d2);
      for (std::size_t i = dims; i-- > 0;) {
        if (++node_idx[i] < axis_cells[i][cell_idx[i]].nodes.size()) break;
        node_idx[i] = 0;
      }
    }
    std::size_t i = dims;
    bool done = true;
    while (i-- > 0) {
      if (++cell_idx[i] < axis_cells[i].size()) {
        done = false;
        break;
      }
      cell_idx[i] = 0;
    }
    if (done) break;
  }
  return total;
}

double kantorovich_upper_bound(const QuantizedMeasure& sample,
                               const GameSpec& game) {
  auto marginals = game_marginals(game);
  return kantorovich_upper_bound(sample, std::span<const Marginal>(marginals));
}

}  // namespace polyeq
