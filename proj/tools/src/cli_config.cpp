// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cli_support.hpp"
#include "polyeq/errors.hpp"

namespace polyeq::cli {

namespace {

[[noreturn]] void fail_field(const std::string& path, const std::string& msg) {
  throw ConfigError("config field '" + path + "': " + msg);
}

// Tracked view of one JSON object: typed getters, helpful messages carrying
// the full field path, and unknown-key detection via finish().
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      fail_field(path_, "expected a JSON object");
    }
  }

  [[nodiscard]] std::string field_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[nodiscard]] const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  [[nodiscard]] const json& require(const std::string& key) {
    const json* value = get(key);
    if (value == nullptr) fail_field(field_path(key), "required");
    return *value;
  }

  // Rejects keys this reader never consumed, so typos surface as errors
  // instead of silently falling back to defaults.
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (seen_.count(it.key()) == 0) {
        fail_field(path_.empty() ? it.key() : path_ + "." + it.key(),
                   "unknown key");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail_field(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_field(path, "expected an integer");
  auto wide = v.get<std::int64_t>();
  if (wide < INT32_MIN || wide > INT32_MAX) fail_field(path, "out of range");
  return static_cast<int>(wide);
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_field(path, "expected a nonnegative integer");
  if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
    fail_field(path, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail_field(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_field(path, "expected a string");
  return v.get<std::string>();
}

// An integer, or a list of integers; scalars broadcast to all players later.
std::vector<int> as_int_list(const json& v, const std::string& path) {
  std::vector<int> out;
  if (v.is_number_integer()) {
    out.push_back(as_int(v, path));
    return out;
  }
  if (!v.is_array() || v.empty()) {
    fail_field(path, "expected an integer or a non-empty integer array");
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(as_int(v[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::string normalized_tag(std::string s) {
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

GameConfig parse_game(const json& node) {
  ObjectReader reader(node, "game");
  GameConfig out;
  out.kind = normalized_tag(as_string(reader.require("kind"), "game.kind"));
  if (const json* params = reader.get("params")) {
    if (!params->is_object()) fail_field("game.params", "expected an object");
    for (auto it = params->begin(); it != params->end(); ++it) {
      out.params[it.key()] =
          as_double(it.value(), "game.params." + it.key());
    }
  }
  reader.finish();
  return out;
}

QuantizerConfig parse_quantizer(const json& node, bool& seed_explicit) {
  ObjectReader reader(node, "quantizer");
  QuantizerConfig out;
  std::string mode = "grid";
  if (const json* m = reader.get("mode")) {
    mode = normalized_tag(as_string(*m, "quantizer.mode"));
  }
  // counts/draws may be omitted when a sample-size study derives them from
  // its levels; commands that need them insist via resolve_quantizer.
  if (mode == "grid" || mode == "grid_voronoi") {
    out.mode = QuantizerConfig::Mode::kGridVoronoi;
    if (const json* counts = reader.get("counts")) {
      out.counts = as_int_list(*counts, "quantizer.counts");
      for (int c : out.counts) {
        if (c < 1) {
          fail_field("quantizer.counts",
                     "every count must be >= 1, got " + std::to_string(c));
        }
      }
    }
  } else if (mode == "monte_carlo" || mode == "mc") {
    out.mode = QuantizerConfig::Mode::kMonteCarlo;
    if (const json* draws = reader.get("draws")) {
      if (!draws->is_number_integer()) {
        fail_field("quantizer.draws", "expected an integer");
      }
      out.mc_count = draws->get<std::int64_t>();
      if (out.mc_count < 1) {
        fail_field("quantizer.draws",
                   "must be >= 1, got " + std::to_string(out.mc_count));
      }
    }
  } else {
    fail_field("quantizer.mode",
               "expected \"grid\" or \"monte_carlo\", got \"" + mode + "\"");
  }
  seed_explicit = false;
  if (const json* s = reader.get("seed")) {
    out.seed = as_seed(*s, "quantizer.seed");
    seed_explicit = true;
  }
  reader.finish();
  return out;
}

SolverConfig parse_solver(const json& node) {
  ObjectReader reader(node, "solver");
  SolverConfig out;
  if (const json* v = reader.get("degree")) {
    out.degree = as_int(*v, "solver.degree");
  }
  if (const json* v = reader.get("outer_tol")) {
    out.outer_tol = as_double(*v, "solver.outer_tol");
  }
  if (const json* v = reader.get("outer_max_sweeps")) {
    out.outer_max_sweeps = as_int(*v, "solver.outer_max_sweeps");
  }
  if (const json* v = reader.get("inner_tol")) {
    out.inner_tol = as_double(*v, "solver.inner_tol");
  }
  if (const json* v = reader.get("inner_max_newton")) {
    out.inner_max_newton = as_int(*v, "solver.inner_max_newton");
  }
  if (const json* v = reader.get("coeff_box")) {
    out.coeff_box = as_double(*v, "solver.coeff_box");
  }
  if (const json* v = reader.get("damping")) {
    out.damping = as_double(*v, "solver.damping");
  }
  if (const json* v = reader.get("normalize_domain")) {
    out.normalize_domain = as_bool(*v, "solver.normalize_domain");
  }
  reader.finish();
  try {
    out.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config field 'solver': ") + e.what());
  }
  return out;
}

StudyRequest parse_study(const json& node) {
  ObjectReader reader(node, "study");
  StudyRequest out;
  if (const json* axis = reader.get("axis")) {
    std::string tag = normalized_tag(as_string(*axis, "study.axis"));
    if (tag == "degree") {
      out.axis = StudyRequest::Axis::kDegree;
    } else if (tag == "sample_size") {
      out.axis = StudyRequest::Axis::kSampleSize;
    } else {
      fail_field("study.axis",
                 "expected \"degree\" or \"sample_size\", got \"" + tag + "\"");
    }
  }
  const json& levels = reader.require("levels");
  if (!levels.is_array() || levels.empty()) {
    fail_field("study.levels", "expected a non-empty integer array");
  }
  out.levels = as_int_list(levels, "study.levels");
  if (const json* pattern = reader.get("grid_pattern")) {
    out.grid_pattern = as_int_list(*pattern, "study.grid_pattern");
    for (int p : out.grid_pattern) {
      if (p < 1) fail_field("study.grid_pattern", "entries must be >= 1");
    }
  }
  reader.finish();
  return out;
}

OracleConfig parse_oracle(const json& node) {
  ObjectReader reader(node, "oracle");
  OracleConfig out;
  out.type_counts =
      as_int_list(reader.require("type_counts"), "oracle.type_counts");
  out.action_counts =
      as_int_list(reader.require("action_counts"), "oracle.action_counts");
  for (int c : out.type_counts) {
    if (c < 1) fail_field("oracle.type_counts", "entries must be >= 1");
  }
  for (int c : out.action_counts) {
    if (c < 1) fail_field("oracle.action_counts", "entries must be >= 1");
  }
  if (const json* v = reader.get("compare_with_solver")) {
    out.compare_with_solver = as_bool(*v, "oracle.compare_with_solver");
  }
  reader.finish();
  return out;
}

}  // namespace

// ==== Loading ===============================================================

ExperimentConfig load_config(const std::filesystem::path& path,
                             const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }

  ObjectReader reader(doc, "");
  ExperimentConfig out;
  out.game = parse_game(reader.require("game"));
  out.quantizer =
      parse_quantizer(reader.require("quantizer"), out.quantizer_seed_explicit);
  if (const json* solver = reader.get("solver")) {
    out.solver = parse_solver(*solver);
  }
  if (const json* study = reader.get("study")) {
    out.study = parse_study(*study);
  }
  if (const json* oracle = reader.get("oracle")) {
    out.oracle = parse_oracle(*oracle);
  }
  if (const json* dir = reader.get("output_dir")) {
    out.output_dir = as_string(*dir, "output_dir");
  }
  if (const json* seed = reader.get("seed")) {
    out.seed = as_seed(*seed, "seed");
  }
  if (const json* threads = reader.get("threads")) {
    out.threads = as_int(*threads, "threads");
    if (out.threads < 0) fail_field("threads", "must be >= 0 (0 = auto)");
  }
  reader.finish();

  if (overrides.output_dir) out.output_dir = *overrides.output_dir;
  if (overrides.seed) out.seed = *overrides.seed;
  if (overrides.threads) {
    if (*overrides.threads < 0) {
      throw ConfigError("--threads must be >= 0 (0 = auto)");
    }
    out.threads = *overrides.threads;
  }
  if (out.output_dir.empty()) {
    fail_field("output_dir", "required (or pass --output-dir)");
  }
  if (!out.quantizer_seed_explicit) {
    out.quantizer.seed = out.seed;
  }
  return out;
}

// ==== Construction helpers ==================================================

GameSpec build_game(const GameConfig& game_config) {
  try {
    return make_registered_game(game_config.kind, game_config.params);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("game: ") + e.what());
  }
}

void resolve_quantizer(const GameSpec& game, ExperimentConfig& config) {
  const int n = game.num_players();
  if (config.quantizer.mode == QuantizerConfig::Mode::kGridVoronoi) {
    std::vector<int>& counts = config.quantizer.counts;
    if (counts.empty()) {
      fail_field("quantizer.counts", "required for this command");
    }
    if (counts.size() == 1 && n > 1) {
      counts.assign(static_cast<std::size_t>(n), counts.front());
    }
    if (counts.size() != static_cast<std::size_t>(n)) {
      fail_field("quantizer.counts",
                 "expected " + std::to_string(n) +
                     " entries (one per player), got " +
                     std::to_string(counts.size()));
    }
    return;
  }
  if (config.quantizer.mc_count < 1) {
    fail_field("quantizer.draws", "required for this command");
  }
}

QuantizedMeasure build_sample(const GameSpec& game, ExperimentConfig& config) {
  resolve_quantizer(game, config);
  QuantizedMeasure sample =
      config.quantizer.mode == QuantizerConfig::Mode::kGridVoronoi
          ? grid_quantize(game, config.quantizer.counts)
          : mc_quantize(game, config.quantizer.mc_count,
                        config.quantizer.seed);
  check_measure(sample, game.type_domains());
  return sample;
}

json config_to_json(const ExperimentConfig& config) {
  json game;
  game["kind"] = config.game.kind;
  json params = json::object();
  for (const auto& [key, value] : config.game.params) {
    params[key] = value;
  }
  game["params"] = params;

  json quantizer;
  if (config.quantizer.mode == QuantizerConfig::Mode::kGridVoronoi) {
    quantizer["mode"] = "grid";
    if (!config.quantizer.counts.empty()) {
      quantizer["counts"] = config.quantizer.counts;
    }
  } else {
    quantizer["mode"] = "monte_carlo";
    if (config.quantizer.mc_count > 0) {
      quantizer["draws"] = config.quantizer.mc_count;
    }
    quantizer["seed"] = config.quantizer.seed;
  }

  json solver;
  solver["degree"] = config.solver.degree;
  solver["outer_tol"] = config.solver.outer_tol;
  solver["outer_max_sweeps"] = config.solver.outer_max_sweeps;
  solver["inner_tol"] = config.solver.inner_tol;
  solver["inner_max_newton"] = config.solver.inner_max_newton;
  solver["coeff_box"] = config.solver.coeff_box;
  solver["damping"] = config.solver.damping;
  solver["normalize_domain"] = config.solver.normalize_domain;

  json out;
  out["game"] = game;
  out["quantizer"] = quantizer;
  out["solver"] = solver;
  if (config.study) {
    json study;
    study["axis"] = config.study->axis == StudyRequest::Axis::kDegree
                        ? "degree"
                        : "sample_size";
    study["levels"] = config.study->levels;
    if (!config.study->grid_pattern.empty()) {
      study["grid_pattern"] = config.study->grid_pattern;
    }
    out["study"] = study;
  }
  if (config.oracle) {
    json oracle;
    oracle["type_counts"] = config.oracle->type_counts;
    oracle["action_counts"] = config.oracle->action_counts;
    oracle["compare_with_solver"] = config.oracle->compare_with_solver;
    out["oracle"] = oracle;
  }
  out["output_dir"] = config.output_dir.string();
  out["seed"] = config.seed;
  out["threads"] = config.threads;
  return out;
}

}  // namespace polyeq::cli
