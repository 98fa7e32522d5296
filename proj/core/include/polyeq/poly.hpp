// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_POLY_HPP_
#define POLYEQ_POLY_HPP_

#include <functional>
#include <span>
#include <vector>

#include "polyeq/interval.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

// Monomial basis (1, t, t^2, ..., t^d), built by iterated multiplication.
[[nodiscard]] std::vector<double> monomial_basis(double t, int degree);
void monomial_basis_into(double t, int degree, std::span<double> out);

// Inner product of a coefficient vector with monomial_basis(theta, d).
[[nodiscard]] double eval_coeffs(std::span<const double> coeffs, double theta);

// Domain-checked strategy evaluation (same as strategy(theta)).
[[nodiscard]] double eval_strategy(const PolynomialStrategy& strategy,
                                   double theta);

// Coefficients of p(alpha + beta * x) given the coefficients of p, exact
// binomial recomposition. Shared by the Bernstein conversion and by domain
// normalization in the solver.
[[nodiscard]] std::vector<double> affine_substitute(
    std::span<const double> coeffs, double alpha, double beta);

// Degree-d Bernstein approximant of f over its domain, kept in Bernstein
// form: control values f(lo + (j/d)*width). Evaluation runs de Casteljau's
// recurrence, which is a convex combination of the control values and hence
// respects any bounds they respect, at every degree.
class BernsteinForm {
 public:
  BernsteinForm(std::vector<double> control_values, Interval domain);

  [[nodiscard]] int degree() const {
    return static_cast<int>(control_values_.size()) - 1;
  }
  [[nodiscard]] const std::vector<double>& control_values() const {
    return control_values_;
  }
  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] double operator()(double theta) const;

 private:
  std::vector<double> control_values_;
  Interval domain_;
};

[[nodiscard]] BernsteinForm bernstein_form(
    const std::function<double(double)>& f, int degree, Interval domain);

// Monomial conversion of the Bernstein form is numerically fragile past this
// degree; bernstein_fit rejects larger requests, and callers needing higher
// degrees evaluate the BernsteinForm directly.
inline constexpr int kMaxBernsteinFitDegree = 25;

// Degree-d Bernstein approximant of f over `domain`, converted to monomial
// coefficients via explicit binomial expansion. The fit samples f at the
// d+1 equispaced nodes, so values of f inside [bounds.lo, bounds.hi] yield a
// polynomial inside those bounds over the whole domain. degree 0 fits the
// constant f(midpoint). Throws ConfigError for degree > kMaxBernsteinFitDegree.
[[nodiscard]] PolynomialStrategy bernstein_fit(
    const std::function<double(double)>& f, int degree, Interval domain,
    Interval action_bounds);

enum class Feasibility {
  kCertified,  // a_i <= f(theta) <= b_i proven on the whole domain
  kViolated,   // a witness point leaves the bounds
  kUndecided,  // neither proven nor refuted within the grid budget
};

struct FeasibilityCertificate {
  Feasibility status = Feasibility::kUndecided;
  // Violation point, or the tightest point examined when not violated.
  double witness = 0.0;
  // Certified: rigorous lower bound on the distance to the nearest bound.
  // Violated: negative, the largest observed violation.
  // Undecided: best (non-positive or unproven) margin bound found.
  double margin = 0.0;
};

// Proves or refutes bound feasibility of the rule over its whole domain by
// grid evaluation combined with the derivative bound
//   sup |f'| <= sum_j j*|v_j|*max(1,|lo|,|hi|)^(j-1),
// which certifies a margin of h*sup|f'|/2 between adjacent grid points. The
// grid is refined adaptively up to 2^20+1 points before giving up.
[[nodiscard]] FeasibilityCertificate certify_feasible(
    const PolynomialStrategy& strategy);

}  // namespace polyeq

#endif  // POLYEQ_POLY_HPP_
