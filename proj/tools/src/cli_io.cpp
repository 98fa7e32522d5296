// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "polyeq/errors.hpp"
#include "polyeq/poly.hpp"

namespace polyeq::cli {

namespace {

// 12 significant digits; enough to round-trip the plotted curves while
// keeping the files diffable.
std::string format_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Inclusive 1000-point grid with an exact upper endpoint.
std::vector<double> theta_grid(const Interval& domain) {
  constexpr int kPoints = 1000;
  std::vector<double> grid(kPoints);
  const double step = domain.width() / (kPoints - 1);
  for (int j = 0; j < kPoints; ++j) {
    grid[static_cast<std::size_t>(j)] =
        j + 1 == kPoints ? domain.hi() : domain.lo() + j * step;
  }
  return grid;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<const std::vector<double>*>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file: " + path.string());
  }
  out << header << '\n';
  const std::size_t rows = columns.front()->size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out << ',';
      out << format_value((*columns[c])[r]);
    }
    out << '\n';
  }
  if (!out) {
    throw ConfigError("failed writing output file: " + path.string());
  }
}

}  // namespace

// ==== Lock file =============================================================

LockFile::LockFile(const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + output_dir.string() +
                      ": " + ec.message());
  }
  path_ = output_dir / ".polyeq.lock";
  fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd_ < 0) {
    if (errno == EEXIST) {
      throw ConfigError(
          "output directory " + output_dir.string() +
          " is in use by another run; if that run crashed, remove " +
          path_.string());
    }
    throw ConfigError("cannot create lock file " + path_.string() + ": " +
                      std::strerror(errno));
  }
}

LockFile::~LockFile() {
  if (fd_ >= 0) {
    ::close(fd_);
    ::unlink(path_.c_str());
  }
}

// ==== Writers ===============================================================

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file: " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw ConfigError("failed writing output file: " + path.string());
  }
}

std::vector<std::filesystem::path> write_curves_csv(
    const std::filesystem::path& dir, const std::string& stem,
    const GameSpec& game, const StrategyProfile& profile) {
  const int n = game.num_players();
  std::vector<std::vector<double>> grids;
  std::vector<std::vector<double>> values;
  grids.reserve(static_cast<std::size_t>(n));
  values.reserve(static_cast<std::size_t>(n));
  bool shared = true;
  for (int i = 0; i < n; ++i) {
    if (!(game.type_domain(i) == game.type_domain(0))) shared = false;
    grids.push_back(theta_grid(game.type_domain(i)));
    std::vector<double> column;
    column.reserve(grids.back().size());
    for (double theta : grids.back()) {
      column.push_back(eval_coeffs(profile.strategy(i).coeffs(), theta));
    }
    values.push_back(std::move(column));
  }
  return write_curves_csv(dir, stem, grids, values, shared);
}

std::vector<std::filesystem::path> write_curves_csv(
    const std::filesystem::path& dir, const std::string& stem,
    const std::vector<std::vector<double>>& grids,
    const std::vector<std::vector<double>>& curves, bool shared_domain) {
  const std::size_t n = curves.size();
  std::vector<std::filesystem::path> written;
  if (shared_domain) {
    std::string header = "theta";
    std::vector<const std::vector<double>*> columns = {&grids.front()};
    for (std::size_t i = 0; i < n; ++i) {
      header += ",f_" + std::to_string(i + 1);
      columns.push_back(&curves[i]);
    }
    const auto path = dir / (stem + ".csv");
    write_csv(path, header, columns);
    written.push_back(path);
    return written;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = dir / (stem + "_player" + std::to_string(i + 1) + ".csv");
    write_csv(path, "theta,f_" + std::to_string(i + 1),
              {&grids[i], &curves[i]});
    written.push_back(path);
  }
  return written;
}

void log_line(const std::string& message) {
  std::cerr << "[polyeq] " << message << '\n';
}

}  // namespace polyeq::cli
