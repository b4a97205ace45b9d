#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "moagg/dataset.hpp"
#include "moagg/errors.hpp"
#include "moagg/scalarize.hpp"
#include "moagg/solvers.hpp"

namespace moagg {

// How the true aggregation parameter depends on the situation:
// parameter = clamp(intercept + slope * velocity) to the parameter's domain.
struct ParameterLaw {
  double intercept = 0.0;
  double slope = 0.0;

  double operator()(double velocity, Aggregation agg) const {
    double v = intercept + slope * velocity;
    return agg == Aggregation::Weighted ? std::clamp(v, 0.0, 1.0) : std::clamp(v, -1.0, 1.0);
  }

  // "const:<c>" or "linear:<intercept>,<slope>"
  static ParameterLaw parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("law must look like const:<c> or linear:<a>,<b>");
    std::string kind = text.substr(0, colon);
    std::string args = text.substr(colon + 1);
    auto number = [&](const std::string& s) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw InvalidArgument("bad number '" + s + "' in law '" + text + "'");
      return v;
    };
    if (kind == "const") return {number(args), 0.0};
    if (kind == "linear") {
      auto comma = args.find(',');
      if (comma == std::string::npos) throw InvalidArgument("linear law needs <intercept>,<slope>");
      return {number(args.substr(0, comma)), number(args.substr(comma + 1))};
    }
    throw InvalidArgument("unknown law kind '" + kind + "'");
  }
};

struct SyntheticConfig {
  std::size_t n_games = 100;
  std::size_t players = 2;
  std::size_t actions_per_player = 2;
  EstimationModel true_model = EstimationModel::Nash;
  Aggregation aggregation = Aggregation::Satisficing;
  ParameterLaw law;
  std::uint64_t seed = 0;
  double max_velocity = 15.0;
};

inline const std::vector<std::string>& scenario_vocabulary() {
  static const std::vector<std::string> v{"intersection", "roundabout", "crosswalk"};
  return v;
}

inline const std::vector<std::string>& task_vocabulary(const std::string& scenario) {
  static const std::vector<std::string> intersection{"left-turn", "right-turn", "straight-through"};
  static const std::vector<std::string> roundabout{"enter", "straight-through"};
  static const std::vector<std::string> crosswalk{"wait-for-pedestrian", "right-turn"};
  if (scenario == "intersection") return intersection;
  if (scenario == "roundabout") return roundabout;
  return crosswalk;
}

inline AggregationParameter make_parameter(Aggregation agg, double value) {
  if (agg == Aggregation::Weighted) return WeightVector::from_safety(value);
  return AspirationLevel(value);
}

// Profile every player would pick under `model` in the scalarized game;
// nullopt when a Nash model has no pure equilibrium.
inline std::optional<StrategyProfile> model_optimal_profile(const ScalarGame& game,
                                                            EstimationModel model) {
  switch (model) {
    case EstimationModel::Nash: {
      auto eq = solve_pure_nash(game);
      if (eq.empty()) return std::nullopt;
      return select_welfare_max(game, eq);
    }
    case EstimationModel::Maxmax: return solve_level_k(game, 0, LevelZero::Maxmax);
    case EstimationModel::Maxmin: return solve_level_k(game, 0, LevelZero::Maxmin);
  }
  return std::nullopt;
}

inline MultiObjectiveGame random_game(std::mt19937_64& rng, const std::vector<std::size_t>& counts,
                                      std::size_t objectives = 2) {
  std::vector<std::vector<std::string>> labels;
  for (std::size_t n : counts) {
    std::vector<std::string> l;
    for (std::size_t a = 0; a < n; ++a) {
      l.push_back(a == 0 ? "wait" : a == 1 ? "proceed" : "act" + std::to_string(a));
    }
    labels.push_back(std::move(l));
  }
  std::vector<std::string> names{"safety", "progress"};
  for (std::size_t j = names.size(); j < objectives; ++j) names.push_back("objective" + std::to_string(j));
  names.resize(objectives);
  MultiObjectiveGame game(std::move(labels), std::move(names));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(objectives);
  for (std::size_t idx = 0; idx < game.space().size(); ++idx) {
    for (PlayerIndex p = 0; p < game.player_count(); ++p) {
      for (double& v : values) v = u(rng);
      game.set_payoff(p, idx, values);
    }
  }
  for (PlayerIndex p = 0; p < game.player_count(); ++p) game.set_rule_action(p, 0);
  return game;
}

// Games with uniform payoffs whose observed profile is optimal for the true
// model under the true (hidden) parameter. Player 0 is the focal agent.
inline std::vector<ObservationRecord> generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.players == 0 || cfg.actions_per_player == 0) {
    throw InvalidArgument("players and actions_per_player must be >= 1");
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> velocity(0.0, cfg.max_velocity);
  const std::vector<std::size_t> counts(cfg.players, cfg.actions_per_player);
  constexpr int kMaxResamples = 10000;

  std::vector<ObservationRecord> out;
  out.reserve(cfg.n_games);
  for (std::size_t g = 0; g < cfg.n_games; ++g) {
    const auto& scenarios = scenario_vocabulary();
    std::string scenario = scenarios[std::uniform_int_distribution<std::size_t>(0, scenarios.size() - 1)(rng)];
    const auto& tasks = task_vocabulary(scenario);
    std::string task = tasks[std::uniform_int_distribution<std::size_t>(0, tasks.size() - 1)(rng)];
    double v = velocity(rng);
    double parameter = cfg.law(v, cfg.aggregation);
    AggregationParameter param = make_parameter(cfg.aggregation, parameter);

    std::optional<ObservationRecord> record;
    for (int attempt = 0; attempt < kMaxResamples && !record; ++attempt) {
      auto game = random_game(rng, counts);
      auto observed = model_optimal_profile(scalarize(game, param), cfg.true_model);
      if (!observed) continue;
      char id[32];
      std::snprintf(id, sizeof(id), "syn-%06zu", g);
      record = ObservationRecord{id, std::move(game), 0, std::move(*observed), {}, std::nullopt};
    }
    if (!record) throw NoSolution("could not draw a game with a pure equilibrium");
    record->features.scenario = scenario;
    record->features.task = task;
    record->features.velocity = v;
    record->truth = GroundTruth{cfg.aggregation, cfg.true_model, parameter};
    out.push_back(std::move(*record));
  }
  return out;
}

}  // namespace moagg
