// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "polyeq/errors.hpp"

namespace polyeq {

namespace {

// Binomial coefficients through the fit cap; exact in double precision.
constexpr int kMaxBinomialRow = kMaxBernsteinFitDegree;

double binomial(int n, int k) {
  static const auto table = [] {
    std::array<std::array<double, kMaxBinomialRow + 1>, kMaxBinomialRow + 1> c{};
    for (int i = 0; i <= kMaxBinomialRow; ++i) {
      c[static_cast<std::size_t>(i)][0] = 1.0;
      for (int j = 1; j <= i; ++j) {
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
            (j <= i - 1
                 ? c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]
                 : 0.0);
      }
    }
    return c;
  }();
  return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace

std::vector<double> monomial_basis(double t, int degree) {
  if (degree < 0) {
    throw ConfigError("monomial basis degree must be >= 0");
  }
  std::vector<double> out(static_cast<std::size_t>(degree) + 1);
  monomial_basis_into(t, degree, out);
  return out;
}

void monomial_basis_into(double t, int degree, std::span<double> out) {
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    out[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j - 1)] * t;
  }
}

double eval_coeffs(std::span<const double> coeffs, double theta) {
  double power = 1.0;
  double acc = 0.0;
  for (double c : coeffs) {
    acc += c * power;
    power *= theta;
  }
  return acc;
}

double eval_strategy(const PolynomialStrategy& strategy, double theta) {
  if (!strategy.domain().contains(theta)) {
    throw DomainError("strategy evaluated at " + std::to_string(theta) +
                      " outside its type domain [" +
                      std::to_string(strategy.domain().lo()) + ", " +
                      std::to_string(strategy.domain().hi()) + "]");
  }
  return eval_coeffs(strategy.coeffs(), theta);
}

std::vector<double> affine_substitute(std::span<const double> coeffs,
                                      double alpha, double beta) {
  std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  // power holds (alpha + beta x)^j, grown by one degree per step.
  std::vector<double> power(n, 0.0);
  power[0] = 1.0;
  out[0] = coeffs[0];
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t r = j; r > 0; --r) {
      power[r] = alpha * power[r] + beta * power[r - 1];
    }
    power[0] *= alpha;
    for (std::size_t r = 0; r <= j; ++r) {
      out[r] += coeffs[j] * power[r];
    }
  }
  return out;
}

// ==== Bernstein form =======================================================

BernsteinForm::BernsteinForm(std::vector<double> control_values,
                             Interval domain)
    : control_values_(std::move(control_values)), domain_(domain) {
  if (control_values_.empty()) {
    throw ConfigError("Bernstein form needs at least one control value");
  }
}

double BernsteinForm::operator()(double theta) const {
  if (!domain_.contains(theta)) {
    throw DomainError("Bernstein form evaluated outside its domain");
  }
  double t = (theta - domain_.lo()) / domain_.width();
  std::vector<double> b = control_values_;
  for (std::size_t level = b.size() - 1; level > 0; --level) {
    for (std::size_t j = 0; j < level; ++j) {
      b[j] = (1.0 - t) * b[j] + t * b[j + 1];
    }
  }
  return b[0];
}

BernsteinForm bernstein_form(const std::function<double(double)>& f, int degree,
                             Interval domain) {
  if (degree < 0) {
    throw ConfigError("Bernstein degree must be >= 0");
  }
  std::vector<double> values(static_cast<std::size_t>(degree) + 1);
  if (degree == 0) {
    values[0] = f(domain.midpoint());
  } else {
    for (int j = 0; j <= degree; ++j) {
      double theta = (j == degree)
                         ? domain.hi()
                         : domain.lo() + domain.width() *
                               (static_cast<double>(j) / degree);
      values[static_cast<std::size_t>(j)] = f(theta);
    }
  }
  return BernsteinForm(std::move(values), domain);
}

PolynomialStrategy bernstein_fit(const std::function<double(double)>& f,
                                 int degree, Interval domain,
                                 Interval action_bounds) {
  if (degree < 0) {
    throw ConfigError("Bernstein fit degree must be >= 0");
  }
  if (degree > kMaxBernsteinFitDegree) {
    throw ConfigError(
        "Bernstein fit capped at degree " +
        std::to_string(kMaxBernsteinFitDegree) +
        " (monomial conversion is fragile beyond it); evaluate the "
        "BernsteinForm directly for higher degrees");
  }
  BernsteinForm form = bernstein_form(f, degree, domain);
  const std::vector<double>& g = form.control_values();

  // Monomial coefficients in the normalized variable t = (theta-lo)/width:
  //   t^j (1-t)^(d-j) = sum_k C(d-j,k) (-1)^k t^(j+k).
  std::vector<double> unit(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int m = 0; m <= degree; ++m) {
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
      acc += g[static_cast<std::size_t>(j)] * binomial(degree, j) *
             binomial(degree - j, m - j) * sign;
    }
    unit[static_cast<std::size_t>(m)] = acc;
  }

  double w = domain.width();
  std::vector<double> coeffs =
      affine_substitute(unit, -domain.lo() / w, 1.0 / w);
  return PolynomialStrategy(std::move(coeffs), domain, action_bounds);
}

// ==== Feasibility certification ============================================

FeasibilityCertificate certify_feasible(const PolynomialStrategy& strategy) {
  const Interval& dom = strategy.domain();
  const Interval& bounds = strategy.action_bounds();
  const std::vector<double>& v = strategy.coeffs();

  double s = std::max({1.0, std::abs(dom.lo()), std::abs(dom.hi())});
  double deriv_bound = 0.0;
  double s_pow = 1.0;  // s^(j-1)
  for (std::size_t j = 1; j < v.size(); ++j) {
    deriv_bound += static_cast<double>(j) * std::abs(v[j]) * s_pow;
    s_pow *= s;
  }

  FeasibilityCertificate cert;
  for (int exp = 8; exp <= 20; ++exp) {
    int grid = (1 << exp) + 1;
    double h = dom.width() / (grid - 1);
    double min_margin = std::numeric_limits<double>::infinity();
    double witness = dom.lo();
    for (int g = 0; g < grid; ++g) {
      double t = (g == grid - 1) ? dom.hi() : dom.lo() + g * h;
      double val = eval_coeffs(v, t);
      double margin = std::min(val - bounds.lo(), bounds.hi() - val);
      if (margin < min_margin) {
        min_margin = margin;
        witness = t;
      }
    }
    if (min_margin < 0.0) {
      cert.status = Feasibility::kViolated;
      cert.witness = witness;
      cert.margin = min_margin;
      return cert;
    }
    double guard = 0.5 * h * deriv_bound;
    if (min_margin - guard > 0.0 || (deriv_bound == 0.0 && min_margin >= 0.0)) {
      cert.status = Feasibility::kCertified;
      cert.witness = witness;
      cert.margin = min_margin - guard;
      return cert;
    }
    cert.witness = witness;
    cert.margin = min_margin - guard;
  }
  cert.status = Feasibility::kUndecided;
  return cert;
}

}  // namespace polyeq
