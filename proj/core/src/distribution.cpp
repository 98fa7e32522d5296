// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

namespace polyeq {

namespace {

// Integral of the linear interpolant over one full segment.
double segment_mass(double x0, double x1, double v0, double v1) {
  return 0.5 * (v0 + v1) * (x1 - x0);
}

}  // namespace

Marginal::Marginal(Interval support, bool uniform, std::vector<double> knots,
                   std::vector<double> values)
    : support_(support),
      uniform_(uniform),
      knots_(std::move(knots)),
      values_(std::move(values)) {
  if (uniform_) return;
  cdf_.resize(knots_.size());
  cdf_[0] = 0.0;
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    cdf_[k] = cdf_[k - 1] + segment_mass(knots_[k - 1], knots_[k],
                                         values_[k - 1], values_[k]);
  }
  cdf_.back() = 1.0;
}

Marginal Marginal::uniform(Interval support) {
  return Marginal(support, true, {}, {});
}

Marginal Marginal::tabulated(Interval support, std::vector<double> knots,
                             std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw ConfigError("tabulated marginal needs matching knot/value lists "
                      "with at least two entries");
  }
  if (knots.front() != support.lo() || knots.back() != support.hi()) {
    throw ConfigError("tabulated marginal knots must span the support exactly");
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (!(knots[k] < knots[k + 1])) {
      throw ConfigError("tabulated marginal knots must be strictly increasing");
    }
    if (values[k] < 0.0 || !std::isfinite(values[k])) {
      throw ConfigError("tabulated marginal values must be finite and >= 0");
    }
    total += segment_mass(knots[k], knots[k + 1], values[k], values[k + 1]);
  }
  if (values.back() < 0.0 || !std::isfinite(values.back())) {
    throw ConfigError("tabulated marginal values must be finite and >= 0");
  }
  if (!(total > 0.0)) {
    throw ConfigError("tabulated marginal must carry positive mass");
  }
  for (double& v : values) v /= total;
  return Marginal(support, false, std::move(knots), std::move(values));
}

double Marginal::density(double x) const {
  if (!support_.contains(x)) {
    throw DomainError("density query " + std::to_string(x) +
                      " outside support [" + std::to_string(support_.lo()) +
                      ", " + std::to_string(support_.hi()) + "]");
  }
  if (uniform_) return 1.0 / support_.width();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t k = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(it - knots_.begin() - 1, 0,
                                 static_cast<std::ptrdiff_t>(knots_.size()) - 2));
  double t = (x - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

double Marginal::mass(double a, double b) const {
  a = std::max(a, support_.lo());
  b = std::min(b, support_.hi());
  if (!(a < b)) return 0.0;
  if (uniform_) return (b - a) / support_.width();

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    double x0 = std::max(a, knots_[k]);
    double x1 = std::min(b, knots_[k + 1]);
    if (!(x0 < x1)) continue;
    double w = knots_[k + 1] - knots_[k];
    double v0 = values_[k] + (x0 - knots_[k]) / w * (values_[k + 1] - values_[k]);
    double v1 = values_[k] + (x1 - knots_[k]) / w * (values_[k + 1] - values_[k]);
    total += segment_mass(x0, x1, v0, v1);
  }
  return total;
}

double Marginal::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("quantile argument must lie in [0,1], got " +
                      std::to_string(p));
  }
  if (uniform_) return support_.lo() + p * support_.width();
  if (p <= 0.0) return support_.lo();
  if (p >= 1.0) return support_.hi();

  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
  std::size_t k = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(it - cdf_.begin() - 1, 0,
                                 static_cast<std::ptrdiff_t>(cdf_.size()) - 2));
  double w = knots_[k + 1] - knots_[k];
  double seg = cdf_[k + 1] - cdf_[k];
  if (seg <= 0.0) return knots_[k];
  double v0 = values_[k];
  double slope = (values_[k + 1] - values_[k]) / w;
  double rest = p - cdf_[k];
  // Solve (slope/2) xi^2 + v0 xi = rest for xi in [0, w].
  double xi;
  if (std::abs(slope) * w < 1e-14 * std::max(v0, 1.0)) {
    xi = rest / std::max(v0, 1e-300);
  } else {
    double disc = v0 * v0 + 2.0 * slope * rest;
    xi = (std::sqrt(std::max(disc, 0.0)) - v0) / slope;
  }
  return knots_[k] + std::clamp(xi, 0.0, w);
}

double Marginal::cell_mean(double a, double b) const {
  a = std::max(a, support_.lo());
  b = std::min(b, support_.hi());
  if (!(a < b)) {
    throw ConfigError("cell_mean over an empty interval");
  }
  if (uniform_) return 0.5 * (a + b);

  double m = mass(a, b);
  if (!(m > 0.0)) {
    throw ConfigError("cell_mean over an interval with zero mass");
  }
  double first_moment = 0.0;
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    double x0 = std::max(a, knots_[k]);
    double x1 = std::min(b, knots_[k + 1]);
    if (!(x0 < x1)) continue;
    double w = knots_[k + 1] - knots_[k];
    double slope = (values_[k + 1] - values_[k]) / w;
    double xk = knots_[k];
    double vk = values_[k];
    // integral of (xk + xi)(vk + slope*xi) d xi over [x0-xk, x1-xk]
    auto prim = [&](double xi) {
      return xk * (vk * xi + 0.5 * slope * xi * xi) + 0.5 * vk * xi * xi +
             slope * xi * xi * xi / 3.0;
    };
    first_moment += prim(x1 - xk) - prim(x0 - xk);
  }
  return first_moment / m;
}

double Marginal::mean() const {
  if (uniform_) return support_.midpoint();
  return cell_mean(support_.lo(), support_.hi());
}

}  // namespace polyeq
