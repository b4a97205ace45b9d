#pragma once

#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "moagg/errors.hpp"
#include "moagg/game.hpp"

namespace moagg {

// Non-negative objective weights summing to one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidArgument("weight vector is empty");
    double sum = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidArgument("weights must be finite and non-negative");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw InvalidArgument("weights sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  // (w_safety, 1 - w_safety)
  static WeightVector from_safety(double safety_weight) {
    return WeightVector({safety_weight, 1.0 - safety_weight});
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t j) const { return weights_[j]; }
  const std::vector<double>& values() const { return weights_; }

  double dot(std::span<const double> u) const {
    if (u.size() != weights_.size()) {
      throw InvalidArgument("weight vector has " + std::to_string(weights_.size()) +
                            " entries, objective vector has " + std::to_string(u.size()));
    }
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += weights_[j] * u[j];
    return s;
  }

 private:
  std::vector<double> weights_;
};

// Safety aspiration level: the satisficing threshold, in [-1, 1].
class AspirationLevel {
 public:
  explicit AspirationLevel(double gamma) : gamma_(gamma) {
    if (!(gamma >= -1.0 && gamma <= 1.0)) {
      throw InvalidArgument("aspiration level " + std::to_string(gamma) + " outside [-1,1]");
    }
  }
  double value() const { return gamma_; }

 private:
  double gamma_;
};

using AggregationParameter = std::variant<WeightVector, AspirationLevel>;

// Safety if it does not exceed the aspiration level, progress otherwise.
inline double satisficing_value(double safety, double progress, double gamma) {
  return safety <= gamma ? safety : progress;
}

inline std::vector<double> scalarize_weighted(const MultiObjectiveGame& game, PlayerIndex player,
                                              const WeightVector& w) {
  game.check_player(player);
  if (w.size() != game.objective_count()) {
    throw InvalidArgument("weight vector has " + std::to_string(w.size()) +
                          " entries, game has " + std::to_string(game.objective_count()) +
                          " objectives");
  }
  std::vector<double> out(game.space().size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = w.dot(game.payoff(player, idx));
  return out;
}

inline void require_two_objectives(const MultiObjectiveGame& game) {
  if (game.objective_count() != 2) {
    throw UnsupportedConfiguration("satisficing aggregation needs exactly 2 objectives (safety, "
                                   "progress), game has " +
                                   std::to_string(game.objective_count()));
  }
}

inline std::vector<double> scalarize_satisficing(const MultiObjectiveGame& game,
                                                 PlayerIndex player, AspirationLevel gamma) {
  game.check_player(player);
  require_two_objectives(game);
  std::vector<double> out(game.space().size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] = satisficing_value(game.payoff(player, idx, 0), game.payoff(player, idx, 1),
                                 gamma.value());
  }
  return out;
}

inline std::vector<double> scalarize_player(const MultiObjectiveGame& game, PlayerIndex player,
                                            const AggregationParameter& param) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeightVector>) {
          return scalarize_weighted(game, player, p);
        } else {
          return scalarize_satisficing(game, player, p);
        }
      },
      param);
}

// Whole-game scalarization with one parameter per player.
inline ScalarGame scalarize(const MultiObjectiveGame& game,
                            std::span<const AggregationParameter> per_player) {
  if (per_player.size() != game.player_count()) {
    throw InvalidArgument("need one aggregation parameter per player");
  }
  ScalarGame out(game.space(), game.rule_actions());
  for (PlayerIndex p = 0; p < game.player_count(); ++p) {
    auto values = scalarize_player(game, p, per_player[p]);
    for (std::size_t idx = 0; idx < values.size(); ++idx) out.set_utility(p, idx, values[idx]);
  }
  return out;
}

// Same parameter for every player.
inline ScalarGame scalarize(const MultiObjectiveGame& game, const AggregationParameter& shared) {
  std::vector<AggregationParameter> params(game.player_count(), shared);
  return scalarize(game, params);
}

}  // namespace moagg
