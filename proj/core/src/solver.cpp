// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "polyeq/errors.hpp"
#include "polyeq/games.hpp"
#include "polyeq/poly.hpp"
#include "polyeq/quantize.hpp"

namespace polyeq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed-order pairwise reduction. The summation tree depends only on the
// term count, so the result is bitwise reproducible and order-independent
// to ~1e-12 relative accuracy.
double pairwise_sum(const double* terms, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += terms[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(terms, half) + pairwise_sum(terms + half, n - half);
}

double pairwise_sum(const std::vector<double>& terms) {
  return terms.empty() ? 0.0 : pairwise_sum(terms.data(), terms.size());
}

int checked_player(const GameSpec& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw ConfigError("player index " + std::to_string(player + 1) +
                      " out of range for a " +
                      std::to_string(game.num_players()) + "-player game");
  }
  return player;
}

}  // namespace

// ==== Configuration ========================================================

void SolverConfig::validate() const {
  if (degree < 0) {
    throw ConfigError("solver degree must be >= 0, got " +
                      std::to_string(degree));
  }
  if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be > 0");
  if (outer_max_sweeps < 1) throw ConfigError("outer_max_sweeps must be >= 1");
  if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be > 0");
  if (inner_max_newton < 1) throw ConfigError("inner_max_newton must be >= 1");
  if (!(coeff_box > 0.0) || !std::isfinite(coeff_box)) {
    throw ConfigError("coeff_box must be positive and finite");
  }
  if (!(damping > 0.0) || damping > 1.0) {
    throw ConfigError("damping must lie in (0, 1]");
  }
}

// ==== Discretized best-response objective ==================================

DiscretizedObjective::DiscretizedObjective(const GameSpec& game,
                                           const QuantizedMeasure& sample,
                                           int player,
                                           const StrategyProfile& opponents,
                                           const SolverConfig& config)
    : game_(&game),
      player_(checked_player(game, player)),
      degree_(config.degree),
      normalized_(config.normalize_domain),
      theta_domain_(game.type_domain(player_)),
      action_bounds_(game.action_domain(player_)),
      coeff_box_(config.coeff_box) {
  config.validate();
  int n = game.num_players();
  if (sample.dims != n) {
    throw ConfigError("sample dimension " + std::to_string(sample.dims) +
                      " does not match " + std::to_string(n) + " players");
  }
  if (sample.size() == 0) {
    throw ConfigError("best-response objective needs a non-empty sample");
  }
  if (opponents.num_players() != n) {
    throw ConfigError("opponent profile has " +
                      std::to_string(opponents.num_players()) +
                      " players, expected " + std::to_string(n));
  }

  auto working = [this](double theta) {
    return normalized_ ? (theta - theta_domain_.lo()) / theta_domain_.width()
                       : theta;
  };

  std::size_t m = sample.size();
  std::size_t dim = static_cast<std::size_t>(degree_) + 1;
  std::size_t players = static_cast<std::size_t>(n);
  weights_ = sample.weights;
  own_basis_.resize(m * dim);
  action_template_.assign(m * players, 0.0);
  atom_types_.resize(m * players);
  std::vector<double> own_coords;
  own_coords.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto atom = sample.atom(k);
    std::copy(atom.begin(), atom.end(), atom_types_.begin() + k * players);
    for (int j = 0; j < n; ++j) {
      if (j == player_) continue;
      double a = opponents.strategy(j)(atom[static_cast<std::size_t>(j)]);
      action_template_[k * players + static_cast<std::size_t>(j)] =
          game.action_domain(j).clamp(a);
    }
    double t = atom[static_cast<std::size_t>(player_)];
    own_coords.push_back(t);
    monomial_basis_into(working(t), degree_,
                        std::span<double>(own_basis_.data() + k * dim, dim));
  }

  std::sort(own_coords.begin(), own_coords.end());
  own_coords.erase(std::unique(own_coords.begin(), own_coords.end()),
                   own_coords.end());
  distinct_types_ = std::move(own_coords);

  rows_.reserve(2 * distinct_types_.size() + 2 * dim);
  std::vector<double> basis(dim);
  for (double t : distinct_types_) {
    monomial_basis_into(working(t), degree_, basis);
    Row upper;
    upper.normal = basis;
    upper.offset = action_bounds_.hi();
    rows_.push_back(std::move(upper));
    Row lower;
    lower.normal.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) lower.normal[j] = -basis[j];
    lower.offset = -action_bounds_.lo();
    rows_.push_back(std::move(lower));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    Row upper;
    upper.normal.assign(dim, 0.0);
    upper.normal[j] = 1.0;
    upper.offset = coeff_box_;
    rows_.push_back(std::move(upper));
    Row lower;
    lower.normal.assign(dim, 0.0);
    lower.normal[j] = -1.0;
    lower.offset = coeff_box_;
    rows_.push_back(std::move(lower));
  }
}

double DiscretizedObjective::value(std::span<const double> v) const {
  std::size_t dim = static_cast<std::size_t>(dimension());
  if (v.size() != dim) {
    throw ConfigError("coefficient vector has wrong dimension");
  }
  std::size_t m = weights_.size();
  std::size_t players = static_cast<std::size_t>(game_->num_players());
  std::vector<double> terms(m);
  std::vector<double> actions(players);
  for (std::size_t k = 0; k < m; ++k) {
    const double* basis = own_basis_.data() + k * dim;
    double a = 0.0;
    for (std::size_t j = 0; j < dim; ++j) a += basis[j] * v[j];
    std::copy_n(action_template_.begin() + k * players, players,
                actions.begin());
    actions[static_cast<std::size_t>(player_)] = a;
    double term =
        weights_[k] *
        game_->utility_unchecked(
            player_, actions,
            std::span<const double>(atom_types_.data() + k * players, players));
    if (!std::isfinite(term)) {
      throw NumericalError(
          "expected utility became non-finite at atom " + std::to_string(k) +
          " (own type " +
          std::to_string(atom_types_[k * players +
                                     static_cast<std::size_t>(player_)]) +
          ", own action " + std::to_string(a) + ")");
    }
    terms[k] = term;
  }
  return pairwise_sum(terms);
}

void DiscretizedObjective::gradient(std::span<const double> v,
                                    std::span<double> out) const {
  std::size_t dim = static_cast<std::size_t>(dimension());
  if (v.size() != dim || out.size() != dim) {
    throw ConfigError("gradient buffer has wrong dimension");
  }
  std::size_t m = weights_.size();
  std::size_t players = static_cast<std::size_t>(game_->num_players());
  std::vector<double> slope(m);
  std::vector<double> actions(players);
  for (std::size_t k = 0; k < m; ++k) {
    const double* basis = own_basis_.data() + k * dim;
    double a = 0.0;
    for (std::size_t j = 0; j < dim; ++j) a += basis[j] * v[j];
    std::copy_n(action_template_.begin() + k * players, players,
                actions.begin());
    actions[static_cast<std::size_t>(player_)] = a;
    slope[k] =
        weights_[k] *
        game_->own_partial(
            player_, actions,
            std::span<const double>(atom_types_.data() + k * players, players));
    if (!std::isfinite(slope[k])) {
      throw NumericalError("utility gradient became non-finite at atom " +
                           std::to_string(k));
    }
  }
  std::vector<double> scratch(m);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t k = 0; k < m; ++k) {
      scratch[k] = slope[k] * own_basis_[k * dim + c];
    }
    out[c] = pairwise_sum(scratch);
  }
}

void DiscretizedObjective::hessian(std::span<const double> v,
                                   std::span<double> out) const {
  std::size_t dim = static_cast<std::size_t>(dimension());
  if (v.size() != dim || out.size() != dim * dim) {
    throw ConfigError("hessian buffer has wrong dimension");
  }
  std::size_t m = weights_.size();
  std::size_t players = static_cast<std::size_t>(game_->num_players());
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> actions(players);
  for (std::size_t k = 0; k < m; ++k) {
    const double* basis = own_basis_.data() + k * dim;
    double a = 0.0;
    for (std::size_t j = 0; j < dim; ++j) a += basis[j] * v[j];
    std::copy_n(action_template_.begin() + k * players, players,
                actions.begin());
    actions[static_cast<std::size_t>(player_)] = a;
    double curv =
        weights_[k] *
        game_->own_second(
            player_, actions,
            std::span<const double>(atom_types_.data() + k * players, players));
    if (!std::isfinite(curv)) {
      throw NumericalError("utility curvature became non-finite at atom " +
                           std::to_string(k));
    }
    for (std::size_t r = 0; r < dim; ++r) {
      double br = curv * basis[r];
      for (std::size_t c = r; c < dim; ++c) {
        out[r * dim + c] += br * basis[c];
      }
    }
  }
  for (std::size_t r = 1; r < dim; ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      out[r * dim + c] = out[c * dim + r];
    }
  }
}

std::vector<double> DiscretizedObjective::center() const {
  double mid = action_bounds_.midpoint();
  if (!(std::abs(mid) < coeff_box_)) {
    throw ConfigError("coeff_box is too small to contain the midpoint rule");
  }
  std::vector<double> v(static_cast<std::size_t>(dimension()), 0.0);
  v[0] = mid;
  return v;
}

void DiscretizedObjective::basis_at(double theta, std::span<double> out) const {
  double w = normalized_
                 ? (theta - theta_domain_.lo()) / theta_domain_.width()
                 : theta;
  monomial_basis_into(w, degree_, out);
}

std::vector<double> DiscretizedObjective::to_raw(
    std::span<const double> v) const {
  if (!normalized_) return std::vector<double>(v.begin(), v.end());
  double w = theta_domain_.width();
  return affine_substitute(v, -theta_domain_.lo() / w, 1.0 / w);
}

std::vector<double> DiscretizedObjective::from_raw(
    std::span<const double> v) const {
  if (!normalized_) return std::vector<double>(v.begin(), v.end());
  return affine_substitute(v, theta_domain_.lo(), theta_domain_.width());
}

double expected_utility(const DiscretizedObjective& objective,
                        std::span<const double> v) {
  return objective.value(v);
}

double expected_utility(const GameSpec& game, const QuantizedMeasure& sample,
                        int player, const StrategyProfile& profile) {
  checked_player(game, player);
  int n = game.num_players();
  if (profile.num_players() != n || sample.dims != n) {
    throw ConfigError("profile or sample does not match the player count");
  }
  std::size_t players = static_cast<std::size_t>(n);
  std::vector<double> terms(sample.size());
  std::vector<double> actions(players);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto types = sample.atom(k);
    for (int i = 0; i < n; ++i) {
      actions[static_cast<std::size_t>(i)] = game.action_domain(i).clamp(
          profile.strategy(i)(types[static_cast<std::size_t>(i)]));
    }
    double term =
        sample.weights[k] * game.utility_unchecked(player, actions, types);
    if (!std::isfinite(term)) {
      throw NumericalError("expected utility became non-finite at atom " +
                           std::to_string(k));
    }
    terms[k] = term;
  }
  return pairwise_sum(terms);
}

// ==== Inner solver =========================================================

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Maximizes one DiscretizedObjective over its polytope. Strategy: an
// active-set Newton polish first (cheap and exact when the warm start is
// near-optimal, including exact landings on the boundary), falling back to a
// log-barrier interior-point pass for globalization, then polishing again.
class InnerSolver {
 public:
  InnerSolver(const DiscretizedObjective& obj, const SolverConfig& cfg)
      : obj_(obj), cfg_(cfg), dim_(obj.dimension()) {
    const auto& rows = obj.constraint_rows();
    m_ = rows.size();
    A_.resize(static_cast<Eigen::Index>(m_), dim_);
    b_.resize(static_cast<Eigen::Index>(m_));
    scale_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      for (int j = 0; j < dim_; ++j) {
        A_(static_cast<Eigen::Index>(r), j) =
            rows[r].normal[static_cast<std::size_t>(j)];
      }
      b_(static_cast<Eigen::Index>(r)) = rows[r].offset;
      scale_[r] = std::max(1.0, std::abs(rows[r].offset));
    }
    center_ = VectorXd::Zero(dim_);
    auto c = obj.center();
    for (int j = 0; j < dim_; ++j) center_(j) = c[static_cast<std::size_t>(j)];
  }

  BestResponse run(std::span<const double> warm) {
    if (static_cast<int>(warm.size()) != dim_) {
      throw ConfigError("warm start has dimension " +
                        std::to_string(warm.size()) + ", expected " +
                        std::to_string(dim_));
    }
    VectorXd v(dim_);
    for (int j = 0; j < dim_; ++j) {
      v(j) = std::clamp(warm[static_cast<std::size_t>(j)], -obj_.coeff_box(),
                        obj_.coeff_box());
    }
    VectorXd s = slacks(v);
    double worst = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      worst = std::min(worst, s(static_cast<Eigen::Index>(r)) / scale_[r]);
    }
    if (worst < -1e-7) {
      v = center_;  // warm start too infeasible to trust
    } else if (worst < 0.0) {
      v = blend_to_slack(v, 0.0);
    }

    VectorXd v1 = v;
    Outcome first = polish(&v1, std::min(cfg_.inner_max_newton, 60));
    if (first.converged) return pack(v1, first);

    VectorXd v2 = v;
    barrier(&v2);
    Outcome second = polish(&v2, cfg_.inner_max_newton);
    double f1 = value(v1);
    double f2 = value(v2);
    if (second.converged || f2 >= f1) return pack(v2, second);
    return pack(v1, first);
  }

 private:
  struct Outcome {
    bool converged = false;
    double residual = kInf;
  };

  [[nodiscard]] double value(const VectorXd& v) const {
    return obj_.value(
        std::span<const double>(v.data(), static_cast<std::size_t>(dim_)));
  }
  [[nodiscard]] VectorXd grad(const VectorXd& v) const {
    VectorXd g(dim_);
    obj_.gradient(
        std::span<const double>(v.data(), static_cast<std::size_t>(dim_)),
        std::span<double>(g.data(), static_cast<std::size_t>(dim_)));
    return g;
  }
  [[nodiscard]] MatrixXd hess(const VectorXd& v) const {
    MatrixXd h(dim_, dim_);
    std::vector<double> buf(static_cast<std::size_t>(dim_) *
                            static_cast<std::size_t>(dim_));
    obj_.hessian(
        std::span<const double>(v.data(), static_cast<std::size_t>(dim_)),
        buf);
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) {
        h(r, c) = buf[static_cast<std::size_t>(r) *
                          static_cast<std::size_t>(dim_) +
                      static_cast<std::size_t>(c)];
      }
    }
    return h;
  }
  [[nodiscard]] VectorXd slacks(const VectorXd& v) const { return b_ - A_ * v; }

  [[nodiscard]] double act_tol(std::size_t r) const {
    return 1e-9 * scale_[r];
  }

  [[nodiscard]] bool budget_left() const {
    return steps_ < cfg_.inner_max_newton;
  }

  BestResponse pack(const VectorXd& v, const Outcome& out) const {
    BestResponse br;
    br.coeffs.assign(v.data(), v.data() + dim_);
    br.value = value(v);
    br.newton_steps = steps_;
    br.converged = out.converged;
    br.kkt_residual = out.residual;
    return br;
  }

  // Smallest blend toward the strictly feasible center that lifts every
  // relative slack to at least eps_rel.
  [[nodiscard]] VectorXd blend_to_slack(const VectorXd& v,
                                        double eps_rel) const {
    VectorXd s = slacks(v);
    VectorXd sc = slacks(center_);
    double tau = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      auto ri = static_cast<Eigen::Index>(r);
      double eps = eps_rel * scale_[r];
      if (s(ri) >= eps) continue;
      if (sc(ri) > s(ri)) {
        tau = std::max(tau, (eps - s(ri)) / (sc(ri) - s(ri)));
      } else {
        tau = 1.0;
      }
    }
    tau = std::min(tau, 1.0);
    return (1.0 - tau) * v + tau * center_;
  }

  // Solve (M + ridge I) x = rhs with M expected positive definite, escalating
  // the ridge until the factorization succeeds.
  static VectorXd damped_solve(MatrixXd m, const VectorXd& rhs) {
    double base = std::max(1.0, m.cwiseAbs().maxCoeff());
    double ridge = 0.0;
    Eigen::LLT<MatrixXd> llt(m);
    while (llt.info() != Eigen::Success && ridge < 1e20 * base) {
      ridge = (ridge == 0.0) ? 1e-12 * base : ridge * 100.0;
      llt.compute(m + ridge * MatrixXd::Identity(m.rows(), m.cols()));
    }
    if (llt.info() != Eigen::Success) return rhs;  // gradient fallback
    return llt.solve(rhs);
  }

  // Multiplier least-squares on the active rows; reports the KKT residual
  // with multipliers clipped to the nonnegative cone, plus the most negative
  // multiplier (candidate row to release).
  struct MultiplierCheck {
    double residual = kInf;
    int drop = -1;  // index into `act`, -1 if none sufficiently negative
  };
  [[nodiscard]] MultiplierCheck multipliers(const VectorXd& v,
                                            const std::vector<int>& act,
                                            const VectorXd& g) const {
    MultiplierCheck out;
    double viol = 0.0;
    VectorXd s = slacks(v);
    for (std::size_t r = 0; r < m_; ++r) {
      viol = std::max(viol, -s(static_cast<Eigen::Index>(r)));
    }
    if (act.empty()) {
      out.residual = std::max(g.lpNorm<Eigen::Infinity>(), viol);
      return out;
    }
    MatrixXd at(dim_, static_cast<Eigen::Index>(act.size()));
    for (std::size_t c = 0; c < act.size(); ++c) {
      at.col(static_cast<Eigen::Index>(c)) = A_.row(act[c]).transpose();
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(at);
    VectorXd lambda = qr.solve(g);
    VectorXd clipped = lambda.cwiseMax(0.0);
    out.residual =
        std::max((g - at * clipped).lpNorm<Eigen::Infinity>(), viol);
    double tol_mult = 1e-9 * std::max(1.0, g.lpNorm<Eigen::Infinity>());
    double most_negative = -tol_mult;
    for (Eigen::Index c = 0; c < lambda.size(); ++c) {
      if (lambda(c) < most_negative) {
        most_negative = lambda(c);
        out.drop = static_cast<int>(c);
      }
    }
    return out;
  }

  // Active-set Newton ascent. Exact boundary landings are allowed; rows are
  // released one at a time via the multiplier check and barred from
  // re-entering until the iterate moves.
  Outcome polish(VectorXd* pv, int step_cap) {
    VectorXd& v = *pv;
    std::vector<char> banned(m_, 0);
    int local_steps = 0;
    Outcome out;
    while (budget_left() && local_steps < step_cap) {
      VectorXd s = slacks(v);
      VectorXd g = grad(v);
      double gnorm = g.lpNorm<Eigen::Infinity>();
      double tol_g = cfg_.inner_tol * std::max(1.0, gnorm);
      std::vector<int> act;
      std::vector<char> in_act(m_, 0);
      for (std::size_t r = 0; r < m_; ++r) {
        if (!banned[r] && s(static_cast<Eigen::Index>(r)) <= act_tol(r)) {
          act.push_back(static_cast<int>(r));
          in_act[r] = 1;
        }
      }

      MatrixXd z;
      if (act.empty()) {
        z = MatrixXd::Identity(dim_, dim_);
      } else {
        MatrixXd at(dim_, static_cast<Eigen::Index>(act.size()));
        for (std::size_t c = 0; c < act.size(); ++c) {
          at.col(static_cast<Eigen::Index>(c)) = A_.row(act[c]).transpose();
        }
        Eigen::ColPivHouseholderQR<MatrixXd> qr(at);
        Eigen::Index rank = qr.rank();
        if (rank >= dim_) {
          z.resize(dim_, 0);
        } else {
          MatrixXd q = qr.householderQ() * MatrixXd::Identity(dim_, dim_);
          z = q.rightCols(dim_ - rank);
        }
      }

      VectorXd rg;
      if (z.cols() > 0) rg = z.transpose() * g;
      if (z.cols() == 0 || rg.lpNorm<Eigen::Infinity>() <= tol_g) {
        MultiplierCheck kkt = multipliers(v, act, g);
        out.residual = kkt.residual;
        if (kkt.residual <= tol_g) {
          out.converged = true;
          return out;
        }
        if (kkt.drop >= 0) {
          banned[static_cast<std::size_t>(act[static_cast<std::size_t>(
              kkt.drop)])] = 1;
          ++local_steps;
          continue;
        }
        return out;  // stationary on the face but KKT not satisfied: stalled
      }

      MatrixXd hr = z.transpose() * hess(v) * z;
      VectorXd dz = damped_solve(-hr, rg);
      VectorXd d = z * dz;
      ++steps_;
      ++local_steps;
      double ascent = g.dot(d);
      if (!(ascent > 0.0)) {
        d = z * rg;  // projected gradient fallback
        ascent = rg.squaredNorm();
        if (!(ascent > 0.0)) {
          MultiplierCheck kkt = multipliers(v, act, g);
          out.residual = kkt.residual;
          out.converged = kkt.residual <= tol_g;
          return out;
        }
      }

      VectorXd ad = A_ * d;
      double amax = kInf;
      for (std::size_t r = 0; r < m_; ++r) {
        if (in_act[r]) continue;
        auto ri = static_cast<Eigen::Index>(r);
        if (ad(ri) > 0.0) {
          amax = std::min(amax, std::max(0.0, s(ri)) / ad(ri));
        }
      }
      double alpha = std::min(1.0, amax);
      bool moved = false;
      if (alpha > 0.0) {
        double f0 = value(v);
        for (int t = 0; t < 60 && alpha > 1e-18; ++t) {
          VectorXd vt = v + alpha * d;
          if (value(vt) >= f0 + 1e-4 * alpha * ascent) {
            v = vt;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
      }
      if (!moved) {
        MultiplierCheck kkt = multipliers(v, act, g);
        out.residual = kkt.residual;
        out.converged = kkt.residual <= tol_g;
        return out;
      }
      std::fill(banned.begin(), banned.end(), 0);
    }
    // Budget exhausted: report the KKT residual at the final iterate.
    MultiplierCheck kkt = multipliers(v, active_by_slack(v), grad(v));
    out.residual = kkt.residual;
    return out;
  }

  [[nodiscard]] std::vector<int> active_by_slack(const VectorXd& v) const {
    VectorXd s = slacks(v);
    std::vector<int> act;
    for (std::size_t r = 0; r < m_; ++r) {
      if (s(static_cast<Eigen::Index>(r)) <= act_tol(r)) {
        act.push_back(static_cast<int>(r));
      }
    }
    return act;
  }

  // Damped-Newton log-barrier pass: maximize F(v) + mu * sum_r log s_r with
  // mu swept 1 -> inner_tol by factors of 10, fraction-to-boundary 0.995.
  void barrier(VectorXd* pv) {
    VectorXd& v = *pv;
    v = blend_to_slack(v, 1e-8);
    double mu = 1.0;
    while (budget_left()) {
      center_at(mu, &v);
      if (mu <= cfg_.inner_tol * (1.0 + 1e-12)) break;
      mu = std::max(mu * 0.1, cfg_.inner_tol);
    }
  }

  void center_at(double mu, VectorXd* pv) {
    VectorXd& v = *pv;
    for (int it = 0; it < 50 && budget_left(); ++it) {
      VectorXd s = slacks(v);
      VectorXd g = grad(v);
      VectorXd sinv = s.cwiseInverse();
      VectorXd gphi = g - mu * (A_.transpose() * sinv);
      MatrixXd hphi = hess(v);
      hphi.noalias() -=
          mu * (A_.transpose() * sinv.array().square().matrix().asDiagonal() *
                A_);
      VectorXd d = damped_solve(-hphi, gphi);
      ++steps_;
      double decrement = gphi.dot(d);
      if (decrement <= 0.2 * mu) return;

      VectorXd ad = A_ * d;
      double amax = kInf;
      for (Eigen::Index r = 0; r < ad.size(); ++r) {
        if (ad(r) > 0.0) amax = std::min(amax, s(r) / ad(r));
      }
      double alpha = std::min(1.0, 0.995 * amax);
      double phi0 = value(v) + mu * s.array().log().sum();
      bool accepted = false;
      for (int t = 0; t < 60 && alpha > 1e-18; ++t) {
        VectorXd vt = v + alpha * d;
        VectorXd st = slacks(vt);
        if (st.minCoeff() > 0.0) {
          double phit = value(vt) + mu * st.array().log().sum();
          if (phit >= phi0 + 1e-4 * alpha * decrement) {
            v = vt;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) return;
    }
  }

  const DiscretizedObjective& obj_;
  const SolverConfig& cfg_;
  int dim_;
  std::size_t m_ = 0;
  MatrixXd A_;
  VectorXd b_;
  std::vector<double> scale_;
  VectorXd center_;
  int steps_ = 0;
};

}  // namespace

BestResponse best_response(const DiscretizedObjective& objective,
                           std::span<const double> warm_start,
                           const SolverConfig& config) {
  config.validate();
  InnerSolver solver(objective, config);
  return solver.run(warm_start);
}

// ==== Outer loop ===========================================================

StrategyProfile midpoint_profile(const GameSpec& game, int degree) {
  if (degree < 0) {
    throw ConfigError("profile degree must be >= 0");
  }
  std::vector<PolynomialStrategy> strategies;
  strategies.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    coeffs[0] = game.action_domain(i).midpoint();
    strategies.emplace_back(std::move(coeffs), game.type_domain(i),
                            game.action_domain(i));
  }
  return StrategyProfile(std::move(strategies));
}

double best_response_gap(const GameSpec& game, const StrategyProfile& profile,
                         const QuantizedMeasure& sample,
                         const SolverConfig& config) {
  config.validate();
  int n = game.num_players();
  if (profile.num_players() != n) {
    throw ConfigError("profile does not match the player count");
  }
  std::size_t dim = static_cast<std::size_t>(config.degree) + 1;
  double gap = -kInf;
  for (int i = 0; i < n; ++i) {
    DiscretizedObjective objective(game, sample, i, profile, config);
    std::vector<double> warm;
    std::vector<double> raw = profile.strategy(i).coeffs();
    if (raw.size() <= dim) {
      raw.resize(dim, 0.0);
      warm = objective.from_raw(raw);
    } else {
      warm = objective.center();
    }
    BestResponse from_profile = best_response(objective, warm, config);
    BestResponse from_center =
        best_response(objective, objective.center(), config);
    double sup = std::max(from_profile.value, from_center.value);
    double current = expected_utility(game, sample, i, profile);
    gap = std::max(gap, sup - current);
  }
  return gap;
}

EquilibriumResult gauss_seidel_solve(const GameSpec& game,
                                     const QuantizedMeasure& sample,
                                     const SolverConfig& config,
                                     const std::optional<StrategyProfile>& init) {
  config.validate();
  int n = game.num_players();
  if (sample.dims != n) {
    throw ConfigError("sample dimension does not match the player count");
  }
  check_measure(sample, game.type_domains());

  StrategyProfile profile =
      init ? *init : midpoint_profile(game, config.degree);
  if (init) {
    if (profile.num_players() != n) {
      throw ConfigError("initial profile does not match the player count");
    }
    if (profile.degree() != config.degree) {
      throw ConfigError("initial profile degree " +
                        std::to_string(profile.degree()) +
                        " does not match solver degree " +
                        std::to_string(config.degree));
    }
    for (int i = 0; i < n; ++i) {
      if (!(profile.strategy(i).domain() == game.type_domain(i))) {
        throw ConfigError("initial profile domain of player " +
                          std::to_string(i + 1) +
                          " does not match the game");
      }
    }
  }

  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.outer_max_sweeps));
  int sweeps = 0;
  double last_change = kInf;
  for (int sweep = 1; sweep <= config.outer_max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      DiscretizedObjective objective(game, sample, i, profile, config);
      const std::vector<double>& old_raw = profile.strategy(i).coeffs();
      std::vector<double> warm = objective.from_raw(old_raw);
      BestResponse br = best_response(objective, warm, config);
      std::vector<double> new_raw = objective.to_raw(br.coeffs);
      double delta = 0.0;
      for (std::size_t j = 0; j < new_raw.size(); ++j) {
        new_raw[j] = (1.0 - config.damping) * old_raw[j] +
                     config.damping * new_raw[j];
        delta = std::max(delta, std::abs(new_raw[j] - old_raw[j]));
      }
      change = std::max(change, delta);
      profile.replace(i, PolynomialStrategy(std::move(new_raw),
                                            game.type_domain(i),
                                            game.action_domain(i)));
    }
    trace.push_back(change);
    sweeps = sweep;
    last_change = change;
    if (change <= config.outer_tol) break;
  }

  double gap = best_response_gap(game, profile, sample, config);
  bool converged = last_change <= config.outer_tol && gap <= config.inner_tol;
  EquilibriumScope scope = EquilibriumScope::kLocal;
  if (game.curvature() == OwnCurvature::kStronglyConcave) {
    scope = EquilibriumScope::kGlobal;
  } else if (game.curvature() == OwnCurvature::kConcaveWhenOpponentsActive &&
             strong_concavity_witness(game, profile, sample)) {
    scope = EquilibriumScope::kGlobal;
  }

  return EquilibriumResult{.profile = std::move(profile),
                           .sweeps = sweeps,
                           .outer_trace = std::move(trace),
                           .br_gap = gap,
                           .converged = converged,
                           .scope = scope,
                           .sample = sample};
}

}  // namespace polyeq
