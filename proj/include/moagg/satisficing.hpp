#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "moagg/errors.hpp"
#include "moagg/game.hpp"
#include "moagg/interval.hpp"
#include "moagg/scalarize.hpp"
#include "moagg/solvers.hpp"

namespace moagg {

// Models under which an aspiration level (or weight vector) can be estimated.
enum class EstimationModel { Nash, Maxmax, Maxmin };

inline NonStrategicMode to_mode(EstimationModel m) {
  if (m == EstimationModel::Nash) throw InvalidArgument("Nash is not a non-strategic model");
  return m == EstimationModel::Maxmax ? NonStrategicMode::Maxmax : NonStrategicMode::Maxmin;
}

// Ordered partition of [-1, 1] at safety-utility breakpoints.
//
// With distinct breakpoints b1 < ... < bk the cells are
//   [-1, b1), [b1, b2), ..., [bk, 1]
// A breakpoint belongs to the cell on its right since satisficing uses safety
// when u_s <= gamma. A breakpoint at -1 produces no empty leading
// cell, and a breakpoint at 1 leaves the single point [1, 1] as its own cell.
struct Partition {
  std::vector<double> breakpoints;
  std::vector<Interval> cells;

  std::size_t size() const { return cells.size(); }

  // Sample point used for a cell: midpoint of its closure.
  static double sample(const Interval& cell) { return cell.midpoint(); }
};

inline Partition make_partition(std::vector<double> values) {
  Partition out;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  out.breakpoints = values;
  std::vector<double> starts;
  starts.push_back(-1.0);
  for (double v : values) {
    if (v > starts.back()) starts.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    out.cells.push_back(Interval::right_open(starts[i], starts[i + 1]));
  }
  out.cells.push_back(Interval::closed(starts.back(), 1.0));
  return out;
}

// Partition from player's safety values against the observed opponents.
inline Partition build_partition_eq(const MultiObjectiveGame& game, PlayerIndex player,
                                    const StrategyProfile& observed_others) {
  game.check_player(player);
  require_two_objectives(game);
  const auto& space = game.space();
  std::size_t base = space.index_of(observed_others);
  std::vector<double> values;
  for (ActionIndex a = 0; a < game.action_count(player); ++a) {
    values.push_back(game.payoff(player, space.deviate(base, player, a), 0));
  }
  return make_partition(std::move(values));
}

// Partition from every safety value of the player in the whole game.
inline Partition build_partition_ns(const MultiObjectiveGame& game, PlayerIndex player) {
  game.check_player(player);
  require_two_objectives(game);
  std::vector<double> values;
  for (std::size_t idx = 0; idx < game.space().size(); ++idx) {
    values.push_back(game.payoff(player, idx, 0));
  }
  return make_partition(std::move(values));
}

// Nash mode: observed action is a best response to the observed opponents.
inline bool is_rationalisable(const MultiObjectiveGame& game, PlayerIndex player,
                              const StrategyProfile& observed, AspirationLevel gamma) {
  require_two_objectives(game);
  const auto& space = game.space();
  const double g = gamma.value();
  std::size_t obs = space.index_of(observed);
  double own = satisficing_value(game.payoff(player, obs, 0), game.payoff(player, obs, 1), g);
  for (ActionIndex a = 0; a < game.action_count(player); ++a) {
    std::size_t alt = space.deviate(obs, player, a);
    if (satisficing_value(game.payoff(player, alt, 0), game.payoff(player, alt, 1), g) > own) {
      return false;
    }
  }
  return true;
}

// Maxmax / maxmin mode: observed action has the best own-utility envelope.
inline bool is_rationalisable(const MultiObjectiveGame& game, PlayerIndex player,
                              ActionIndex observed, AspirationLevel gamma, NonStrategicMode mode) {
  require_two_objectives(game);
  if (observed >= game.action_count(player)) throw InvalidArgument("observed action out of range");
  const auto& space = game.space();
  const double g = gamma.value();
  std::vector<double> env(game.action_count(player),
                          mode == NonStrategicMode::Maxmax
                              ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    ActionIndex a = space.action_of(idx, player);
    double v = satisficing_value(game.payoff(player, idx, 0), game.payoff(player, idx, 1), g);
    env[a] = mode == NonStrategicMode::Maxmax ? std::max(env[a], v) : std::min(env[a], v);
  }
  return std::all_of(env.begin(), env.end(), [&](double v) { return env[observed] >= v; });
}

inline bool is_rationalisable(const MultiObjectiveGame& game, PlayerIndex player,
                              const StrategyProfile& observed, AspirationLevel gamma,
                              EstimationModel model) {
  if (model == EstimationModel::Nash) return is_rationalisable(game, player, observed, gamma);
  if (player >= observed.size()) throw InvalidArgument("observed profile too short");
  return is_rationalisable(game, player, observed[player], gamma, to_mode(model));
}

// Exact set of rationalisable aspiration levels: rationalisability is constant
// on each partition cell, so one sample per cell decides the whole cell.
inline IntervalSet estimate_gamma(const MultiObjectiveGame& game, PlayerIndex player,
                                  const StrategyProfile& observed, EstimationModel model) {
  game.check_player(player);
  Partition partition = model == EstimationModel::Nash ? build_partition_eq(game, player, observed)
                                                       : build_partition_ns(game, player);
  IntervalSet out;
  for (const auto& cell : partition.cells) {
    if (is_rationalisable(game, player, observed, AspirationLevel(Partition::sample(cell)), model)) {
      out.add(cell);
    }
  }
  return out;
}

inline IntervalSet estimate_gamma(const MultiObjectiveGame& game, PlayerIndex player,
                                  ActionIndex observed, NonStrategicMode mode) {
  game.check_player(player);
  StrategyProfile profile(game.player_count(), 0);
  profile[player] = observed;
  return estimate_gamma(game, player, profile,
                        mode == NonStrategicMode::Maxmax ? EstimationModel::Maxmax
                                                         : EstimationModel::Maxmin);
}

}  // namespace moagg
