// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_SOLVER_HPP_
#define POLYEQ_SOLVER_HPP_

#include <optional>
#include <span>
#include <vector>

#include "polyeq/game.hpp"
#include "polyeq/measure.hpp"
#include "polyeq/result.hpp"
#include "polyeq/strategy.hpp"

namespace polyeq {

struct SolverConfig {
  int degree = 8;
  double outer_tol = 1e-8;    // sup-norm coefficient change per sweep
  int outer_max_sweeps = 500;
  double inner_tol = 1e-10;   // barrier duality-gap surrogate and residual tol
  int inner_max_newton = 200;  // Newton step budget per best response
  double coeff_box = 1e6;      // |v_j| bound keeping the polytope compact
  double damping = 1.0;        // update v <- (1-damping)*v + damping*BR
  // Evaluate the basis in the type domain mapped affinely to [0,1]; improves
  // Vandermonde conditioning at high degree. Exchanged coefficients stay in
  // the raw domain either way.
  bool normalize_domain = false;

  void validate() const;  // throws ConfigError on invalid fields
};

// Player i's discretized best-response problem against fixed opponents:
//   maximize F(v) = sum_j p_j u_i(v . basis(theta_i^j), f_-i(theta_-i^j), theta^j)
// over the polytope
//   action_lo <= v . basis(t) <= action_hi  for every distinct own atom t,
//   |v_j| <= coeff_box.
// Opponent actions are evaluated once at construction; constraint rows are
// deduplicated over distinct own-type atoms. Instances are immutable and
// cheap to rebuild each sweep.
class DiscretizedObjective {
 public:
  DiscretizedObjective(const GameSpec& game, const QuantizedMeasure& sample,
                       int player, const StrategyProfile& opponents,
                       const SolverConfig& config);

  [[nodiscard]] int player() const { return player_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int dimension() const { return degree_ + 1; }
  [[nodiscard]] std::size_t num_atoms() const { return weights_.size(); }
  [[nodiscard]] const Interval& action_bounds() const { return action_bounds_; }
  [[nodiscard]] double coeff_box() const { return coeff_box_; }
  [[nodiscard]] const std::vector<double>& distinct_own_types() const {
    return distinct_types_;
  }

  // One linear constraint normal . v <= offset.
  struct Row {
    std::vector<double> normal;
    double offset;
  };
  // 2 * (#distinct own atoms) action rows followed by 2 * dimension box rows.
  [[nodiscard]] const std::vector<Row>& constraint_rows() const {
    return rows_;
  }

  // Expected utility at working coefficients v, accumulated with pairwise
  // summation in a fixed order (order-independent to ~1e-12).
  // Throws NumericalError if a non-finite term appears.
  [[nodiscard]] double value(std::span<const double> v) const;
  void gradient(std::span<const double> v, std::span<double> out) const;
  // Dense symmetric Hessian, row-major dimension() x dimension().
  void hessian(std::span<const double> v, std::span<double> out) const;

  // Strictly feasible Slater point: the constant rule at the action midpoint.
  [[nodiscard]] std::vector<double> center() const;

  // Basis in the working variable (normalized or raw, per config).
  void basis_at(double theta, std::span<double> out) const;

  // Working coefficients <-> raw-domain monomial coefficients. Identity when
  // normalization is off.
  [[nodiscard]] std::vector<double> to_raw(std::span<const double> v) const;
  [[nodiscard]] std::vector<double> from_raw(std::span<const double> v) const;

 private:
  const GameSpec* game_;
  int player_;
  int degree_;
  bool normalized_;
  Interval theta_domain_;
  Interval action_bounds_;
  double coeff_box_;
  std::vector<double> weights_;        // p_j
  std::vector<double> own_basis_;      // num_atoms x dimension, row-major
  std::vector<double> action_template_;  // num_atoms x n, own slot rewritten
  std::vector<double> atom_types_;     // num_atoms x n
  std::vector<double> distinct_types_;
  std::vector<Row> rows_;
};

// Free-function form of DiscretizedObjective::value.
[[nodiscard]] double expected_utility(const DiscretizedObjective& objective,
                                      std::span<const double> v);

// Expected utility of a full profile for one player under the sample.
[[nodiscard]] double expected_utility(const GameSpec& game,
                                      const QuantizedMeasure& sample, int player,
                                      const StrategyProfile& profile);

struct BestResponse {
  std::vector<double> coeffs;  // working-variable coefficients
  double value = 0.0;
  int newton_steps = 0;
  bool converged = false;
  double kkt_residual = 0.0;
};

// Maximizes the discretized objective over its polytope: active-set Newton
// polish when the warm start is already near-optimal, otherwise a damped
// Newton logarithmic-barrier pass (mu: 1 -> inner_tol, factor 10) followed by
// the polish. Returns the best iterate flagged non-converged when the step
// budget runs out or progress stalls.
[[nodiscard]] BestResponse best_response(const DiscretizedObjective& objective,
                                         std::span<const double> warm_start,
                                         const SolverConfig& config);

// Gauss-Seidel sweeps over players in index order, each update replacing
// player i's coefficients with (1-damping)*old + damping*best response.
// Stops when the sweep's max coefficient change is <= outer_tol or the sweep
// budget is exhausted (converged=false then, never an exception).
[[nodiscard]] EquilibriumResult gauss_seidel_solve(
    const GameSpec& game, const QuantizedMeasure& sample,
    const SolverConfig& config,
    const std::optional<StrategyProfile>& init = std::nullopt);

// max_i [ sup over feasible polynomials of player i's expected utility
//         - expected utility at the profile ], >= -1e-12 up to roundoff.
[[nodiscard]] double best_response_gap(const GameSpec& game,
                                       const StrategyProfile& profile,
                                       const QuantizedMeasure& sample,
                                       const SolverConfig& config);

// Midpoint constant rules at the configured degree (the default initial
// profile; strictly feasible for every player).
[[nodiscard]] StrategyProfile midpoint_profile(const GameSpec& game,
                                               int degree);

}  // namespace polyeq

#endif  // POLYEQ_SOLVER_HPP_
