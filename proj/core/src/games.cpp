// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyeq/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "polyeq/errors.hpp"

namespace polyeq {

// ==== Built-in games =======================================================

GameSpec rent_seeking(const ContestParams& params) {
  int n = params.n;
  if (n < 2) {
    throw ConfigError("contest needs at least 2 players, got " +
                      std::to_string(n));
  }
  if (static_cast<int>(params.type_domains.size()) != n) {
    throw ConfigError("contest needs one type domain per player");
  }
  for (const Interval& dom : params.type_domains) {
    if (!(dom.lo() > 0.0)) {
      throw ConfigError(
          "contest marginal costs must be positive; type domain starts at " +
          std::to_string(dom.lo()));
    }
  }
  std::vector<double> caps = params.effort_cap;
  if (caps.empty()) {
    caps.reserve(static_cast<std::size_t>(n));
    for (const Interval& dom : params.type_domains) {
      caps.push_back(1.0 / dom.lo());
    }
  }
  if (static_cast<int>(caps.size()) != n) {
    throw ConfigError("contest needs one effort cap per player");
  }
  double floor = params.effort_floor;
  if (!(floor >= 0.0)) {
    throw ConfigError("contest effort floor must be >= 0");
  }
  for (double cap : caps) {
    if (!std::isfinite(cap) || !(cap > floor)) {
      throw ConfigError("contest effort caps must exceed the effort floor");
    }
  }

  std::vector<Interval> action_domains;
  action_domains.reserve(static_cast<std::size_t>(n));
  std::vector<Marginal> marginals;
  marginals.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    action_domains.emplace_back(floor, caps[static_cast<std::size_t>(i)]);
    marginals.push_back(
        Marginal::uniform(params.type_domains[static_cast<std::size_t>(i)]));
  }

  auto utility = [n](int i, std::span<const double> actions,
                     std::span<const double> types) {
    double total = 0.0;
    for (double a : actions) total += a;
    double ai = actions[static_cast<std::size_t>(i)];
    // Fair split only at the all-zero profile; a_i = 0 against active
    // opponents takes the continuous limit 0 of a_i / total.
    double share = (total > 0.0) ? ai / total : 1.0 / n;
    return -ai * types[static_cast<std::size_t>(i)] + share;
  };
  auto partial = [](int i, std::span<const double> actions,
                    std::span<const double> types) {
    double ai = actions[static_cast<std::size_t>(i)];
    double others = 0.0;
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (static_cast<int>(j) != i) others += actions[j];
    }
    double ti = types[static_cast<std::size_t>(i)];
    if (others <= 0.0) return -ti;  // share is locally constant in a_i
    double total = ai + others;
    return -ti + others / (total * total);
  };
  auto second = [](int i, std::span<const double> actions,
                   std::span<const double>) {
    double ai = actions[static_cast<std::size_t>(i)];
    double others = 0.0;
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (static_cast<int>(j) != i) others += actions[j];
    }
    if (others <= 0.0) return 0.0;
    double total = ai + others;
    return -2.0 * others / (total * total * total);
  };

  GameSpec::Options options;
  options.own_partial = partial;
  options.own_second = second;
  options.curvature = floor > 0.0 ? OwnCurvature::kStronglyConcave
                                  : OwnCurvature::kConcaveWhenOpponentsActive;
  options.name = "rent_seeking";
  return GameSpec(params.type_domains, std::move(action_domains),
                  std::move(marginals), utility, std::move(options));
}

GameSpec bilinear_quadratic() {
  std::vector<Interval> types(2, Interval(-1.0, 1.0));
  std::vector<Interval> actions(2, Interval(0.0, 10.0));
  std::vector<Marginal> marginals(2, Marginal::uniform(Interval(-1.0, 1.0)));

  auto utility = [](int i, std::span<const double> a,
                    std::span<const double> t) {
    return a[0] * a[1] * t[static_cast<std::size_t>(i)] -
           a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  };
  auto partial = [](int i, std::span<const double> a,
                    std::span<const double> t) {
    return a[static_cast<std::size_t>(1 - i)] * t[static_cast<std::size_t>(i)] -
           2.0 * a[static_cast<std::size_t>(i)];
  };
  auto second = [](int, std::span<const double>, std::span<const double>) {
    return -2.0;
  };

  GameSpec::Options options;
  options.own_partial = partial;
  options.own_second = second;
  options.curvature = OwnCurvature::kStronglyConcave;
  options.name = "bilinear_quadratic";
  std::vector<PolynomialStrategy> zero;
  zero.reserve(2);
  for (int i = 0; i < 2; ++i) {
    zero.emplace_back(std::vector<double>{0.0}, Interval(-1.0, 1.0),
                      Interval(0.0, 10.0));
  }
  options.reference_equilibrium = StrategyProfile(std::move(zero));
  return GameSpec(std::move(types), std::move(actions), std::move(marginals),
                  utility, std::move(options));
}

GameSpec bilinear() {
  std::vector<Interval> types(2, Interval(-1.0, 1.0));
  std::vector<Interval> actions(2, Interval(0.0, 10.0));
  std::vector<Marginal> marginals(2, Marginal::uniform(Interval(-1.0, 1.0)));

  auto utility = [](int i, std::span<const double> a,
                    std::span<const double> t) {
    return a[0] * a[1] * t[static_cast<std::size_t>(i)];
  };
  auto partial = [](int i, std::span<const double> a,
                    std::span<const double> t) {
    return a[static_cast<std::size_t>(1 - i)] * t[static_cast<std::size_t>(i)];
  };
  auto second = [](int, std::span<const double>, std::span<const double>) {
    return 0.0;
  };

  GameSpec::Options options;
  options.own_partial = partial;
  options.own_second = second;
  options.curvature = OwnCurvature::kNone;
  options.continuous_equilibrium_guarantee = false;
  options.name = "bilinear";
  return GameSpec(std::move(types), std::move(actions), std::move(marginals),
                  utility, std::move(options));
}

// ==== Concavity witness ====================================================

bool strong_concavity_witness(const GameSpec& game,
                              const StrategyProfile& profile,
                              const QuantizedMeasure& sample) {
  int n = game.num_players();
  if (profile.num_players() != n || sample.dims != n) {
    throw ConfigError("concavity witness needs matching player counts");
  }
  std::vector<double> actions(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < sample.size(); ++k) {
    auto types = sample.atom(k);
    for (int i = 0; i < n; ++i) {
      const Interval& bounds = game.action_domain(i);
      actions[static_cast<std::size_t>(i)] =
          bounds.clamp(profile.strategy(i)(types[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < n; ++i) {
      if (!(game.own_second(i, actions, types) < 0.0)) return false;
    }
  }
  return true;
}

// ==== Registry =============================================================

namespace {

// Consumes recognized keys so unknown parameters surface as config errors.
class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, double>& params,
                       std::string game)
      : params_(params), game_(std::move(game)) {}

  std::optional<double> take(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) return std::nullopt;
    double v = it->second;
    params_.erase(it);
    return v;
  }

  [[nodiscard]] int take_count(const std::string& key, int fallback) {
    auto v = take(key);
    if (!v) return fallback;
    auto n = static_cast<int>(*v);
    if (static_cast<double>(n) != *v) {
      throw ConfigError("parameter \"" + key + "\" of game \"" + game_ +
                        "\" must be an integer");
    }
    return n;
  }

  void finish() const {
    if (!params_.empty()) {
      throw ConfigError("unknown parameter \"" + params_.begin()->first +
                        "\" for game \"" + game_ + "\"");
    }
  }

 private:
  std::map<std::string, double> params_;
  std::string game_;
};

GameSpec make_rent_seeking(const std::map<std::string, double>& params) {
  ParamReader reader(params, "rent_seeking");
  ContestParams cp;
  cp.n = reader.take_count("n", 2);
  if (cp.n < 2) {
    throw ConfigError("rent_seeking needs n >= 2");
  }
  double alpha_all = reader.take("alpha").value_or(0.01);
  double beta_all = reader.take("beta").value_or(1.01);
  cp.type_domains.reserve(static_cast<std::size_t>(cp.n));
  for (int i = 1; i <= cp.n; ++i) {
    double a = reader.take("alpha_" + std::to_string(i)).value_or(alpha_all);
    double b = reader.take("beta_" + std::to_string(i)).value_or(beta_all);
    cp.type_domains.emplace_back(a, b);
  }
  cp.effort_floor = reader.take("effort_floor").value_or(0.0);
  auto cap_all = reader.take("effort_cap");
  std::vector<std::optional<double>> cap_each(
      static_cast<std::size_t>(cp.n));
  bool any_cap = cap_all.has_value();
  for (int i = 1; i <= cp.n; ++i) {
    cap_each[static_cast<std::size_t>(i - 1)] =
        reader.take("effort_cap_" + std::to_string(i));
    any_cap = any_cap || cap_each[static_cast<std::size_t>(i - 1)].has_value();
  }
  if (any_cap) {
    cp.effort_cap.reserve(static_cast<std::size_t>(cp.n));
    for (int i = 0; i < cp.n; ++i) {
      double fallback = cap_all.value_or(
          1.0 / cp.type_domains[static_cast<std::size_t>(i)].lo());
      cp.effort_cap.push_back(
          cap_each[static_cast<std::size_t>(i)].value_or(fallback));
    }
  }
  reader.finish();
  return rent_seeking(cp);
}

std::map<std::string, GameFactory>& registry() {
  static std::map<std::string, GameFactory> games = {
      {"rent_seeking", make_rent_seeking},
      {"bilinear_quadratic",
       [](const std::map<std::string, double>& params) {
         ParamReader(params, "bilinear_quadratic").finish();
         return bilinear_quadratic();
       }},
      {"bilinear",
       [](const std::map<std::string, double>& params) {
         ParamReader(params, "bilinear").finish();
         return bilinear();
       }},
  };
  return games;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_game(const std::string& name, GameFactory factory) {
  if (name.empty() || !factory) {
    throw ConfigError("game registration needs a name and a factory");
  }
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry().insert_or_assign(name, std::move(factory));
}

bool is_registered_game(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return registry().count(name) > 0;
}

GameSpec make_registered_game(const std::string& name,
                              const std::map<std::string, double>& params) {
  GameFactory factory;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) {
      throw ConfigError("unknown game \"" + name + "\"");
    }
    factory = it->second;
  }
  return factory(params);
}

}  // namespace polyeq
