// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cli_support.hpp"
#include "polyeq/errors.hpp"
#include "polyeq/poly.hpp"

namespace polyeq::cli {

namespace {

int resolve_threads(int configured) {
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string scope_tag(EquilibriumScope scope) {
  return scope == EquilibriumScope::kGlobal ? "global" : "local";
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json coefficients_json(const StrategyProfile& profile) {
  json out = json::array();
  for (const PolynomialStrategy& rule : profile.strategies()) {
    out.push_back(rule.coeffs());
  }
  return out;
}

// Shared solve metadata block for result.json and oracle.json.
json solve_summary(const EquilibriumResult& result) {
  json out;
  out["converged"] = result.converged;
  out["sweeps"] = result.sweeps;
  out["br_gap"] = result.br_gap;
  out["scope"] = scope_tag(result.scope);
  return out;
}

bool shared_type_domain(const GameSpec& game) {
  for (int i = 1; i < game.num_players(); ++i) {
    if (!(game.type_domain(i) == game.type_domain(0))) return false;
  }
  return true;
}

std::vector<int> broadcast_counts(std::vector<int> counts, int players,
                                  const std::string& field) {
  if (counts.size() == 1 && players > 1) {
    counts.assign(static_cast<std::size_t>(players), counts.front());
  }
  if (counts.size() != static_cast<std::size_t>(players)) {
    throw ConfigError("config field '" + field + "': expected " +
                      std::to_string(players) + " entries, got " +
                      std::to_string(counts.size()));
  }
  return counts;
}

}  // namespace

// ==== solve =================================================================

int run_solve(ExperimentConfig config) {
  GameSpec game = build_game(config.game);
  QuantizedMeasure sample = build_sample(game, config);
  LockFile lock(config.output_dir);
  log_line("solve: game=" + game.name() +
           " atoms=" + std::to_string(sample.size()) +
           " degree=" + std::to_string(config.solver.degree));

  EquilibriumResult result = gauss_seidel_solve(game, sample, config.solver);
  log_line("solve: converged=" + std::string(result.converged ? "yes" : "no") +
           " sweeps=" + std::to_string(result.sweeps) +
           " br_gap=" + fmt(result.br_gap) + " scope=" +
           scope_tag(result.scope));

  DispersionEstimate disp =
      dispersion(sample, game.type_domains(), resolve_threads(config.threads));
  std::optional<double> kant;
  if (sample.provenance == Provenance::kGridVoronoi) {
    kant = kantorovich_upper_bound(sample, game);
  }

  json doc;
  doc["command"] = "solve";
  doc["game"] = game.name();
  json summary = solve_summary(result);
  for (auto it = summary.begin(); it != summary.end(); ++it) {
    doc[it.key()] = it.value();
  }
  doc["sample_size"] = sample.size();
  doc["dispersion"] = disp.value;
  doc["dispersion_exact"] = disp.exact;
  doc["kantorovich_bound"] = kant ? json(*kant) : json(nullptr);
  doc["outer_trace"] = result.outer_trace;
  doc["coefficients"] = coefficients_json(result.profile);
  doc["config"] = config_to_json(config);
  write_json_file(config.output_dir / "result.json", doc);

  auto files = write_curves_csv(config.output_dir, "curves", game,
                                result.profile);
  log_line("solve: wrote result.json and " + std::to_string(files.size()) +
           " curve file(s) to " + config.output_dir.string());
  return result.converged ? kExitOk : kExitNotConverged;
}

// ==== study =================================================================

int run_study(ExperimentConfig config) {
  if (!config.study) {
    throw ConfigError(
        "config field 'study': required by the study command");
  }
  GameSpec game = build_game(config.game);
  // Sample-size studies derive their grids from the levels; anything else
  // uses the configured quantizer at every level.
  if (config.study->axis == StudyRequest::Axis::kDegree) {
    resolve_quantizer(game, config);
  }
  LockFile lock(config.output_dir);
  log_line("study: game=" + game.name() + " axis=" +
           (config.study->axis == StudyRequest::Axis::kDegree ? "degree"
                                                              : "sample_size") +
           " levels=" + std::to_string(config.study->levels.size()));

  ConvergenceStudy study =
      convergence_study(game, *config.study, config.quantizer, config.solver);

  json doc;
  doc["command"] = "study";
  doc["game"] = game.name();
  doc["axis"] = study.axis == StudyRequest::Axis::kDegree ? "degree"
                                                          : "sample_size";
  doc["levels"] = study.levels;
  doc["successive_sup_diffs"] = study.successive_sup_diffs;
  doc["level_converged"] = study.level_converged;
  doc["level_br_gaps"] = study.level_br_gaps;
  doc["level_sample_sizes"] = study.level_sample_sizes;
  doc["config"] = config_to_json(config);
  write_json_file(config.output_dir / "study.json", doc);

  const bool shared = shared_type_domain(game);
  int files = 0;
  for (std::size_t l = 0; l < study.levels.size(); ++l) {
    auto written = write_curves_csv(
        config.output_dir,
        "curves_level" + std::to_string(study.levels[l]), study.theta_grids,
        study.curves[l], shared);
    files += static_cast<int>(written.size());
  }
  log_line("study: wrote study.json and " + std::to_string(files) +
           " curve file(s) to " + config.output_dir.string());

  bool all_converged =
      std::all_of(study.level_converged.begin(), study.level_converged.end(),
                  [](bool b) { return b; });
  if (!all_converged) {
    log_line("study: at least one level did not converge");
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

// ==== oracle ================================================================

int run_oracle(ExperimentConfig config) {
  if (!config.oracle) {
    throw ConfigError(
        "config field 'oracle': required by the oracle command (table grid "
        "sizes)");
  }
  GameSpec game = build_game(config.game);
  const int n = game.num_players();
  std::vector<int> type_counts =
      broadcast_counts(config.oracle->type_counts, n, "oracle.type_counts");
  std::vector<int> action_counts = broadcast_counts(
      config.oracle->action_counts, n, "oracle.action_counts");
  config.oracle->type_counts = type_counts;
  config.oracle->action_counts = action_counts;

  LockFile lock(config.output_dir);
  log_line("oracle: game=" + game.name() + " table iteration started");
  std::vector<TableProfile> fixed_points =
      brute_force_discrete_equilibria(game, type_counts, action_counts);
  log_line("oracle: found " + std::to_string(fixed_points.size()) +
           " fixed point(s)");

  json doc;
  doc["command"] = "oracle";
  doc["game"] = game.name();
  doc["type_counts"] = type_counts;
  doc["action_counts"] = action_counts;
  doc["fixed_point_count"] = fixed_points.size();
  json points = json::array();
  for (const TableProfile& profile : fixed_points) {
    json entry = json::array();
    for (const TableStrategy& table : profile) {
      json rule;
      rule["type_points"] = table.type_points;
      rule["actions"] = table.actions;
      entry.push_back(rule);
    }
    points.push_back(entry);
  }
  doc["fixed_points"] = points;

  int exit_code = kExitOk;
  if (config.oracle->compare_with_solver) {
    QuantizedMeasure sample = build_sample(game, config);
    EquilibriumResult result = gauss_seidel_solve(game, sample, config.solver);
    log_line("oracle: solver converged=" +
             std::string(result.converged ? "yes" : "no") +
             " br_gap=" + fmt(result.br_gap));
    doc["solver"] = solve_summary(result);
    doc["solver"]["coefficients"] = coefficients_json(result.profile);

    // Per-player action grid step, the comparison's natural unit.
    std::vector<double> steps(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Interval& bounds = game.action_domain(i);
      steps[static_cast<std::size_t>(i)] =
          action_counts[static_cast<std::size_t>(i)] > 1
              ? bounds.width() / (action_counts[static_cast<std::size_t>(i)] - 1)
              : bounds.width();
    }
    json comparison = json::array();
    for (std::size_t p = 0; p < fixed_points.size(); ++p) {
      json row;
      row["fixed_point"] = p;
      std::vector<double> max_abs_diff(static_cast<std::size_t>(n), 0.0);
      double max_steps = 0.0;
      for (int i = 0; i < n; ++i) {
        const TableStrategy& table = fixed_points[p][static_cast<std::size_t>(i)];
        const auto& coeffs = result.profile.strategy(i).coeffs();
        double worst = 0.0;
        for (std::size_t k = 0; k < table.type_points.size(); ++k) {
          double poly = eval_coeffs(coeffs, table.type_points[k]);
          worst = std::max(worst, std::abs(poly - table.actions[k]));
        }
        max_abs_diff[static_cast<std::size_t>(i)] = worst;
        max_steps =
            std::max(max_steps, worst / steps[static_cast<std::size_t>(i)]);
      }
      row["max_abs_diff"] = max_abs_diff;
      row["action_grid_steps"] = steps;
      row["max_diff_in_steps"] = max_steps;
      comparison.push_back(row);
    }
    doc["comparison"] = comparison;
    if (!result.converged) exit_code = kExitNotConverged;
  }

  doc["config"] = config_to_json(config);
  write_json_file(config.output_dir / "oracle.json", doc);
  log_line("oracle: wrote oracle.json to " + config.output_dir.string());
  return exit_code;
}

// ==== quantize ==============================================================

int run_quantize(ExperimentConfig config) {
  GameSpec game = build_game(config.game);
  QuantizedMeasure sample = build_sample(game, config);
  LockFile lock(config.output_dir);

  DispersionEstimate disp =
      dispersion(sample, game.type_domains(), resolve_threads(config.threads));
  std::optional<double> kant;
  if (sample.provenance == Provenance::kGridVoronoi) {
    kant = kantorovich_upper_bound(sample, game);
  }
  log_line("quantize: atoms=" + std::to_string(sample.size()) +
           " dispersion=" + fmt(disp.value) +
           (kant ? " kantorovich=" + fmt(*kant) : ""));

  json doc;
  doc["command"] = "quantize";
  doc["game"] = game.name();
  doc["mode"] = sample.provenance == Provenance::kGridVoronoi ? "grid"
                                                              : "monte_carlo";
  doc["sample_size"] = sample.size();
  doc["dims"] = sample.dims;
  json atoms = json::array();
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto atom = sample.atom(k);
    atoms.push_back(std::vector<double>(atom.begin(), atom.end()));
  }
  doc["atoms"] = atoms;
  doc["weights"] = sample.weights;
  doc["dispersion"] = disp.value;
  doc["dispersion_exact"] = disp.exact;
  doc["kantorovich_bound"] = kant ? json(*kant) : json(nullptr);
  doc["config"] = config_to_json(config);
  write_json_file(config.output_dir / "quantize.json", doc);
  log_line("quantize: wrote quantize.json to " + config.output_dir.string());
  return kExitOk;
}

}  // namespace polyeq::cli
