// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "polyeq/errors.hpp"

namespace {

using polyeq::cli::ExperimentConfig;

int dispatch(const std::string& command, ExperimentConfig config) {
  if (command == "solve") return polyeq::cli::run_solve(std::move(config));
  if (command == "study") return polyeq::cli::run_study(std::move(config));
  if (command == "oracle") return polyeq::cli::run_oracle(std::move(config));
  return polyeq::cli::run_quantize(std::move(config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Approximate equilibria of Bayesian games with interval type and "
      "action spaces via polynomial decision rules"};
  app.require_subcommand(1);

  std::string output_dir_flag;
  std::uint64_t seed_flag = 0;
  int threads_flag = 0;
  auto* dir_opt = app.add_option("--output-dir", output_dir_flag,
                                 "Override the config file's output_dir");
  auto* seed_opt =
      app.add_option("--seed", seed_flag, "Override the config file's seed");
  auto* threads_opt = app.add_option(
      "--threads", threads_flag,
      "Override the config file's threads (0 = hardware concurrency)");

  const std::map<std::string, std::string> descriptions = {
      {"solve",
       "Run one Gauss-Seidel solve; writes result.json and curve CSVs"},
      {"study",
       "Sweep polynomial degree or sample size; writes study.json and "
       "per-level curve CSVs"},
      {"oracle",
       "Brute-force table equilibria and compare against the polynomial "
       "solver; writes oracle.json"},
      {"quantize",
       "Quantize the type distribution only; writes quantize.json"}};
  std::map<std::string, std::string> config_paths;
  for (const auto& [name, description] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->fallthrough();
    sub->add_option("config", config_paths[name],
                    "Experiment configuration JSON file")
        ->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? polyeq::cli::kExitOk : polyeq::cli::kExitError;
  }

  polyeq::cli::Overrides overrides;
  if (dir_opt->count() > 0) overrides.output_dir = output_dir_flag;
  if (seed_opt->count() > 0) overrides.seed = seed_flag;
  if (threads_opt->count() > 0) overrides.threads = threads_flag;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig config =
        polyeq::cli::load_config(config_paths[command], overrides);
    return dispatch(command, std::move(config));
  } catch (const polyeq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polyeq::cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return polyeq::cli::kExitError;
  }
}
