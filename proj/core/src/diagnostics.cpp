// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "polyeq/errors.hpp"
#include "polyeq/poly.hpp"

namespace polyeq {

namespace {

double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double pairwise_sum(const double* terms, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += terms[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(terms, half) + pairwise_sum(terms + half, n - half);
}

}  // namespace

// ==== Payoff-monotonicity check ============================================

double monotonicity_integral(const GameSpec& game, const ProfileFn& f,
                             const ProfileFn& g,
                             const QuantizedMeasure& sample) {
  std::size_t n = static_cast<std::size_t>(game.num_players());
  if (f.size() != n || g.size() != n) {
    throw ConfigError("profile evaluators must cover every player");
  }
  if (sample.dims != game.num_players()) {
    throw ConfigError("sample dimension does not match the player count");
  }
  std::vector<double> af(n), ag(n), terms(sample.size());
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto types = sample.atom(k);
    for (std::size_t i = 0; i < n; ++i) {
      const Interval& bounds = game.action_domain(static_cast<int>(i));
      af[i] = bounds.clamp(f[i](types[i]));
      ag[i] = bounds.clamp(g[i](types[i]));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hf = game.own_partial(static_cast<int>(i), af, types);
      double hg = game.own_partial(static_cast<int>(i), ag, types);
      dot += (hf - hg) * (af[i] - ag[i]);
    }
    terms[k] = sample.weights[k] * dot;
  }
  return terms.empty() ? 0.0 : pairwise_sum(terms.data(), terms.size());
}

namespace {

// Random bound-feasible polynomial rule: uniform Bernstein control values in
// the action interval, so the polynomial respects the bounds everywhere.
PolynomialStrategy random_feasible_rule(const Interval& domain,
                                        const Interval& bounds, int degree,
                                        std::mt19937_64& rng) {
  std::vector<double> control(static_cast<std::size_t>(degree) + 1);
  for (double& c : control) {
    c = bounds.lo() + bounds.width() * canonical_uniform(rng);
  }
  auto node_value = [&control, degree, &domain](double theta) {
    double t = (theta - domain.lo()) / domain.width();
    auto j = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(t * degree), 0, degree));
    return control[j];
  };
  return bernstein_fit(node_value, degree, domain, bounds);
}

StrategyProfile random_feasible_profile(const GameSpec& game, int degree,
                                        std::mt19937_64& rng) {
  std::vector<PolynomialStrategy> rules;
  rules.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    rules.push_back(random_feasible_rule(game.type_domain(i),
                                         game.action_domain(i), degree, rng));
  }
  return StrategyProfile(std::move(rules));
}

ProfileFn as_profile_fn(const StrategyProfile& profile) {
  ProfileFn fn;
  fn.reserve(static_cast<std::size_t>(profile.num_players()));
  for (int i = 0; i < profile.num_players(); ++i) {
    PolynomialStrategy rule = profile.strategy(i);
    fn.push_back([rule](double theta) { return rule(theta); });
  }
  return fn;
}

bool same_profile(const StrategyProfile& a, const StrategyProfile& b) {
  for (int i = 0; i < a.num_players(); ++i) {
    if (a.strategy(i).coeffs() != b.strategy(i).coeffs()) return false;
  }
  return true;
}

}  // namespace

MonotonicityReport check_monotonicity(const GameSpec& game, int trials,
                                      const QuantizedMeasure& sample,
                                      std::uint64_t seed, int degree) {
  if (trials < 1) throw ConfigError("monotonicity check needs trials >= 1");
  if (degree < 0) throw ConfigError("monotonicity profile degree must be >= 0");
  if (degree > kMaxBernsteinFitDegree) {
    throw ConfigError("monotonicity profile degree exceeds the fit limit");
  }
  std::mt19937_64 rng(seed);
  MonotonicityReport report;
  report.pairs_tested = trials;
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    StrategyProfile f = random_feasible_profile(game, degree, rng);
    StrategyProfile g = random_feasible_profile(game, degree, rng);
    for (int redraw = 0; redraw < 8 && same_profile(f, g); ++redraw) {
      g = random_feasible_profile(game, degree, rng);
    }
    double integral =
        monotonicity_integral(game, as_profile_fn(f), as_profile_fn(g), sample);
    if (first || integral > report.most_adverse_integral) {
      report.most_adverse_integral = integral;
      if (integral >= 0.0) report.witness = std::make_pair(f, g);
      first = false;
    }
  }
  report.verdict = report.most_adverse_integral < 0.0
                       ? MonotonicityReport::Verdict::kConsistent
                       : MonotonicityReport::Verdict::kViolated;
  if (report.verdict == MonotonicityReport::Verdict::kConsistent) {
    report.witness.reset();
  }
  return report;
}

// ==== Second-order growth estimate =========================================

double estimate_strong_concavity(const GameSpec& game, int player,
                                 int probes, std::uint64_t seed) {
  if (player < 0 || player >= game.num_players()) {
    throw ConfigError("player index out of range");
  }
  if (probes < 1) throw ConfigError("concavity estimate needs probes >= 1");
  std::size_t n = static_cast<std::size_t>(game.num_players());
  const Interval& own = game.action_domain(player);
  double h = 1e-4 * own.width();
  std::mt19937_64 rng(seed);
  std::vector<double> actions(n), types(n);
  double max_second = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < probes; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      const Interval& ai = game.action_domain(static_cast<int>(i));
      const Interval& ti = game.type_domain(static_cast<int>(i));
      actions[i] = ai.lo() + ai.width() * canonical_uniform(rng);
      types[i] = ti.lo() + ti.width() * canonical_uniform(rng);
    }
    // Keep the own-action stencil strictly inside the interval.
    auto pi = static_cast<std::size_t>(player);
    actions[pi] = std::clamp(actions[pi], own.lo() + h, own.hi() - h);
    double center = actions[pi];
    double u0 = game.utility_unchecked(player, actions, types);
    actions[pi] = center + h;
    double up = game.utility_unchecked(player, actions, types);
    actions[pi] = center - h;
    double um = game.utility_unchecked(player, actions, types);
    actions[pi] = center;
    max_second = std::max(max_second, (up - 2.0 * u0 + um) / (h * h));
  }
  return -max_second;
}

// ==== Brute-force discrete oracle ==========================================

namespace {

struct DiscreteGrid {
  std::vector<std::vector<double>> type_points;   // per player
  std::vector<std::vector<double>> type_masses;   // per player, sums to 1
  std::vector<std::vector<double>> action_levels; // per player, ascending
};

DiscreteGrid build_grids(const GameSpec& game, std::span<const int> type_counts,
                         std::span<const int> action_counts) {
  std::size_t n = static_cast<std::size_t>(game.num_players());
  if (type_counts.size() != n || action_counts.size() != n) {
    throw ConfigError("oracle needs one type count and action count per player");
  }
  QuantizedMeasure grid = grid_quantize(game, type_counts);
  DiscreteGrid out;
  out.type_points = grid.axis_atoms;
  out.type_masses = grid.axis_masses;
  out.action_levels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int levels = action_counts[i];
    if (levels < 1) throw ConfigError("action counts must be >= 1");
    const Interval& bounds = game.action_domain(static_cast<int>(i));
    auto& acts = out.action_levels[i];
    if (levels == 1) {
      acts.push_back(bounds.midpoint());
    } else {
      acts.reserve(static_cast<std::size_t>(levels));
      for (int j = 0; j < levels; ++j) {
        acts.push_back(j == levels - 1
                           ? bounds.hi()
                           : bounds.lo() + bounds.width() * j / (levels - 1));
      }
    }
  }
  return out;
}

// Utility evaluations for one full sweep; the budget guard.
double sweep_cost(const DiscreteGrid& grid) {
  double total_types = 1.0;
  for (const auto& pts : grid.type_points) {
    total_types *= static_cast<double>(pts.size());
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < grid.action_levels.size(); ++i) {
    cost += static_cast<double>(grid.action_levels[i].size()) * total_types;
  }
  return cost;
}

// One best-response sweep in place; returns whether any entry changed.
bool table_sweep(const GameSpec& game, const DiscreteGrid& grid,
                 TableProfile* profile) {
  int n = game.num_players();
  auto players = static_cast<std::size_t>(n);
  bool changed = false;
  std::vector<double> actions(players), types(players);
  for (int i = 0; i < n; ++i) {
    auto pi = static_cast<std::size_t>(i);
    const auto& own_types = grid.type_points[pi];
    const auto& levels = grid.action_levels[pi];
    std::vector<double> level_values(levels.size());
    for (std::size_t tj = 0; tj < own_types.size(); ++tj) {
      std::fill(level_values.begin(), level_values.end(), 0.0);
      types[pi] = own_types[tj];
      // Odometer over the opponents' type combinations.
      std::vector<std::size_t> idx(players, 0);
      while (true) {
        double w = 1.0;
        for (std::size_t q = 0; q < players; ++q) {
          if (q == pi) continue;
          types[q] = grid.type_points[q][idx[q]];
          actions[q] = (*profile)[q].actions[idx[q]];
          w *= grid.type_masses[q][idx[q]];
        }
        for (std::size_t a = 0; a < levels.size(); ++a) {
          actions[pi] = levels[a];
          level_values[a] += w * game.utility_unchecked(i, actions, types);
        }
        // Advance, skipping the own dimension, last dimension fastest.
        std::size_t q = players;
        bool done = true;
        while (q-- > 0) {
          if (q == pi) continue;
          if (++idx[q] < grid.type_points[q].size()) {
            done = false;
            break;
          }
          idx[q] = 0;
        }
        if (done) break;
      }
      // Argmax with ties resolved to the smallest action level.
      std::size_t best = 0;
      for (std::size_t a = 1; a < levels.size(); ++a) {
        if (level_values[a] > level_values[best]) best = a;
      }
      if ((*profile)[pi].actions[tj] != levels[best]) {
        (*profile)[pi].actions[tj] = levels[best];
        changed = true;
      }
    }
  }
  return changed;
}

bool same_table(const TableProfile& a, const TableProfile& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].actions != b[i].actions) return false;
  }
  return true;
}

}  // namespace

std::vector<TableProfile> brute_force_discrete_equilibria(
    const GameSpec& game, std::span<const int> type_counts,
    std::span<const int> action_counts) {
  DiscreteGrid grid = build_grids(game, type_counts, action_counts);
  double cost = sweep_cost(grid);
  if (cost > 1e7) {
    throw BudgetError(
        "brute-force sweep would need about " + std::to_string(cost) +
        " utility evaluations; the budget is 1e7");
  }
  auto players = static_cast<std::size_t>(game.num_players());

  // Seed set: every all-extreme constant profile plus the all-midpoint one.
  std::vector<TableProfile> seeds;
  auto make_constant = [&](const std::vector<double>& values) {
    TableProfile profile(players);
    for (std::size_t i = 0; i < players; ++i) {
      profile[i].type_points = grid.type_points[i];
      profile[i].actions.assign(grid.type_points[i].size(), values[i]);
    }
    return profile;
  };
  std::size_t corners = std::size_t{1} << players;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    std::vector<double> values(players);
    for (std::size_t i = 0; i < players; ++i) {
      const auto& levels = grid.action_levels[i];
      values[i] = (mask >> i) & 1 ? levels.back() : levels.front();
    }
    seeds.push_back(make_constant(values));
  }
  {
    std::vector<double> mids(players);
    for (std::size_t i = 0; i < players; ++i) {
      const auto& levels = grid.action_levels[i];
      mids[i] = levels[levels.size() / 2];
    }
    seeds.push_back(make_constant(mids));
  }

  constexpr int kMaxSweeps = 200;
  std::vector<TableProfile> fixed_points;
  for (const TableProfile& seed : seeds) {
    TableProfile profile = seed;
    bool settled = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      if (!table_sweep(game, grid, &profile)) {
        settled = true;
        break;
      }
    }
    if (!settled) continue;  // cycling seed: no fixed point from here
    bool known = false;
    for (const TableProfile& fp : fixed_points) {
      if (same_table(fp, profile)) {
        known = true;
        break;
      }
    }
    if (!known) fixed_points.push_back(std::move(profile));
  }
  return fixed_points;
}

// ==== Convergence studies ==================================================

ConvergenceStudy convergence_study(const GameSpec& game,
                                   const StudyRequest& request,
                                   const QuantizerConfig& quantizer,
                                   const SolverConfig& solver) {
  solver.validate();
  if (request.levels.empty()) {
    throw ConfigError("study needs at least one level");
  }
  for (std::size_t l = 1; l < request.levels.size(); ++l) {
    if (request.levels[l] <= request.levels[l - 1]) {
      throw ConfigError("study levels must be strictly increasing");
    }
  }
  auto players = static_cast<std::size_t>(game.num_players());
  std::vector<int> pattern = request.grid_pattern;
  if (pattern.empty()) {
    pattern.assign(players, 1);
  } else if (pattern.size() != players) {
    throw ConfigError("grid pattern needs one multiplier per player");
  }

  ConvergenceStudy study;
  study.axis = request.axis;
  study.levels = request.levels;
  study.theta_grids.resize(players);
  constexpr int kGridPoints = 1000;
  for (std::size_t i = 0; i < players; ++i) {
    const Interval& dom = game.type_domain(static_cast<int>(i));
    auto& grid = study.theta_grids[i];
    grid.reserve(kGridPoints);
    for (int g = 0; g < kGridPoints; ++g) {
      grid.push_back(g == kGridPoints - 1
                         ? dom.hi()
                         : dom.lo() + dom.width() * g / (kGridPoints - 1));
    }
  }

  auto quantize_at = [&](int level) {
    if (request.axis == StudyRequest::Axis::kSampleSize) {
      if (quantizer.mode == QuantizerConfig::Mode::kGridVoronoi) {
        std::vector<int> counts(players);
        for (std::size_t i = 0; i < players; ++i) {
          counts[i] = pattern[i] * level;
        }
        return grid_quantize(game, counts);
      }
      std::int64_t draws = level;
      for (int p : pattern) draws *= p;
      return mc_quantize(game, draws, quantizer.seed);
    }
    // Degree axis: one fixed sample for every level.
    if (quantizer.mode == QuantizerConfig::Mode::kGridVoronoi) {
      if (quantizer.counts.size() != players) {
        throw ConfigError("quantizer counts must cover every player");
      }
      return grid_quantize(game, quantizer.counts);
    }
    return mc_quantize(game, quantizer.mc_count, quantizer.seed);
  };

  std::optional<StrategyProfile> warm;
  for (int level : request.levels) {
    SolverConfig level_config = solver;
    if (request.axis == StudyRequest::Axis::kDegree) {
      level_config.degree = level;
    }
    QuantizedMeasure sample = quantize_at(level);

    std::optional<StrategyProfile> init;
    if (warm) {
      // Embed the previous solution; lower-degree rules pad with zeros.
      std::vector<PolynomialStrategy> rules;
      rules.reserve(players);
      for (std::size_t i = 0; i < players; ++i) {
        std::vector<double> coeffs = warm->strategy(static_cast<int>(i)).coeffs();
        coeffs.resize(static_cast<std::size_t>(level_config.degree) + 1, 0.0);
        rules.emplace_back(std::move(coeffs),
                           game.type_domain(static_cast<int>(i)),
                           game.action_domain(static_cast<int>(i)));
      }
      init = StrategyProfile(std::move(rules));
    }

    EquilibriumResult result =
        gauss_seidel_solve(game, sample, level_config, init);
    study.level_converged.push_back(result.converged);
    study.level_br_gaps.push_back(result.br_gap);
    study.level_sample_sizes.push_back(static_cast<int>(sample.size()));

    std::vector<std::vector<double>> level_curves(players);
    for (std::size_t i = 0; i < players; ++i) {
      const PolynomialStrategy& rule = result.profile.strategy(static_cast<int>(i));
      auto& curve = level_curves[i];
      curve.reserve(study.theta_grids[i].size());
      for (double theta : study.theta_grids[i]) {
        curve.push_back(rule(theta));
      }
    }
    study.curves.push_back(std::move(level_curves));
    warm = result.profile;
  }

  for (std::size_t l = 1; l < study.curves.size(); ++l) {
    double sup = 0.0;
    for (std::size_t i = 0; i < players; ++i) {
      for (std::size_t g = 0; g < study.curves[l][i].size(); ++g) {
        sup = std::max(sup,
                       std::abs(study.curves[l][i][g] - study.curves[l - 1][i][g]));
      }
    }
    study.successive_sup_diffs.push_back(sup);
  }
  return study;
}

}  // namespace polyeq
