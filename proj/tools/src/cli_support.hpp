// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_TOOLS_CLI_SUPPORT_HPP_
#define POLYEQ_TOOLS_CLI_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyeq/diagnostics.hpp"
#include "polyeq/game.hpp"
#include "polyeq/games.hpp"
#include "polyeq/quantize.hpp"
#include "polyeq/solver.hpp"

namespace polyeq::cli {

// Field order in emitted JSON follows insertion order so reruns are
// byte-identical and diffs stay readable.
using json = nlohmann::ordered_json;

// ==== Experiment configuration =============================================

struct GameConfig {
  std::string kind;  // registry name: rent_seeking, bilinear_quadratic, ...
  std::map<std::string, double> params;
};

// Grid sizes for the brute-force table oracle. Scalars in the config file
// broadcast to all players.
struct OracleConfig {
  std::vector<int> type_counts;
  std::vector<int> action_counts;
  bool compare_with_solver = true;
};

struct ExperimentConfig {
  GameConfig game;
  QuantizerConfig quantizer;
  bool quantizer_seed_explicit = false;  // quantizer.seed given in the file
  SolverConfig solver;
  std::optional<StudyRequest> study;
  std::optional<OracleConfig> oracle;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

// Flag values that override the corresponding config file fields.
struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

// Parses the JSON experiment file. Unknown keys, wrong types, and invalid
// values throw ConfigError whose message names the offending field path
// (e.g. "quantizer.counts"). Applies the overrides, then resolves defaults
// that depend on other fields (monte-carlo quantizer seed <- experiment
// seed unless given explicitly).
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path,
                                           const Overrides& overrides);

// Instantiates the configured game from the registry; per-player list
// lengths in the config are validated against it downstream.
[[nodiscard]] GameSpec build_game(const GameConfig& game_config);

// Verifies that the quantizer section carries what the command needs (grid
// counts or draw count), broadcasting scalar grid counts to one entry per
// player in place so embedded configs record resolved values.
void resolve_quantizer(const GameSpec& game, ExperimentConfig& config);

// Builds the quantized measure per the config and validates it against the
// game's type domains.
[[nodiscard]] QuantizedMeasure build_sample(const GameSpec& game,
                                            ExperimentConfig& config);

// Fully resolved config (defaults filled in) for embedding into result files.
[[nodiscard]] json config_to_json(const ExperimentConfig& config);

// ==== Output files ==========================================================

// Exclusive ownership of an output directory for the lifetime of one command:
// creates the directory if needed and an exclusive lock file inside it,
// removed on destruction. A pre-existing lock file (concurrent or crashed
// run) is a ConfigError naming the file.
class LockFile {
 public:
  explicit LockFile(const std::filesystem::path& output_dir);
  ~LockFile();
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

// Writes `doc` as 2-space indented JSON plus trailing newline.
void write_json_file(const std::filesystem::path& path, const json& doc);

// Tabulates every player's rule on a 1000-point inclusive grid over its own
// type domain and writes CSV files under `dir`. Shared type domain: one file
// `<stem>.csv` with header theta,f_1,...,f_n. Differing domains: one file
// `<stem>_player<i>.csv` per player with header theta,f_<i>. Values carry 12
// significant digits. Returns the files written.
std::vector<std::filesystem::path> write_curves_csv(
    const std::filesystem::path& dir, const std::string& stem,
    const GameSpec& game, const StrategyProfile& profile);

// Same file layout for pre-tabulated study curves (grids[i] / curves[i] are
// player i's evaluation grid and values).
std::vector<std::filesystem::path> write_curves_csv(
    const std::filesystem::path& dir, const std::string& stem,
    const std::vector<std::vector<double>>& grids,
    const std::vector<std::vector<double>>& curves, bool shared_domain);

// ==== Commands ==============================================================

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;         // usage / config / IO
inline constexpr int kExitNotConverged = 2;  // solver budget exhausted

int run_solve(ExperimentConfig config);
int run_study(ExperimentConfig config);
int run_oracle(ExperimentConfig config);
int run_quantize(ExperimentConfig config);

// One-line progress note on standard error; data never goes there.
void log_line(const std::string& message);

}  // namespace polyeq::cli

#endif  // POLYEQ_TOOLS_CLI_SUPPORT_HPP_
