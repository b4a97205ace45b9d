#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moagg/errors.hpp"
#include "moagg/game.hpp"
#include "moagg/scalarize.hpp"

namespace moagg {

enum class NonStrategicMode { Maxmax, Maxmin };

// Where level-0 behaviour comes from in a level-k model.
enum class LevelZero { Maxmax, Maxmin, Rule };

// Solution concept used to predict play.
struct ReasoningModel {
  enum class Kind { Nash, Maxmax, Maxmin, LevelK, Stackelberg, Rule, LkRule };

  Kind kind = Kind::Nash;
  int k = 0;                             // LevelK only
  LevelZero l0 = LevelZero::Maxmax;      // LevelK only
  PlayerIndex leader = 0;                // Stackelberg only

  static ReasoningModel nash() { return {Kind::Nash}; }
  static ReasoningModel maxmax() { return {Kind::Maxmax}; }
  static ReasoningModel maxmin() { return {Kind::Maxmin}; }
  static ReasoningModel level_k(int k, LevelZero l0) { return {Kind::LevelK, k, l0}; }
  static ReasoningModel stackelberg(PlayerIndex leader) {
    return {Kind::Stackelberg, 0, LevelZero::Maxmax, leader};
  }
  static ReasoningModel rule() { return {Kind::Rule}; }
  // Level-1 against rule-following level-0 opponents.
  static ReasoningModel lk_rule() { return {Kind::LkRule, 1, LevelZero::Rule}; }
};

struct SolutionSet {
  std::vector<StrategyProfile> profiles;

  bool empty() const { return profiles.empty(); }
  std::size_t size() const { return profiles.size(); }
};

namespace detail {

// All indices attaining the maximum of `values` (exact comparison).
inline std::vector<ActionIndex> argmax_set(const std::vector<double>& values) {
  std::vector<ActionIndex> out;
  double best = -std::numeric_limits<double>::infinity();
  for (ActionIndex a = 0; a < values.size(); ++a) {
    if (values[a] > best) {
      best = values[a];
      out.assign(1, a);
    } else if (values[a] == best) {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace detail

// Player's best replies to the other entries of `others` (its own entry is ignored).
inline std::vector<ActionIndex> best_response(const ScalarGame& game, PlayerIndex player,
                                              const StrategyProfile& others) {
  const auto& space = game.space();
  std::size_t base = space.index_of(others);
  std::vector<double> values(game.action_count(player));
  for (ActionIndex a = 0; a < values.size(); ++a) {
    values[a] = game.utility(player, space.deviate(base, player, a));
  }
  return detail::argmax_set(values);
}

inline bool is_best_response(const ScalarGame& game, PlayerIndex player, std::size_t profile_index) {
  const auto& space = game.space();
  double own = game.utility(player, profile_index);
  for (ActionIndex a = 0; a < game.action_count(player); ++a) {
    if (game.utility(player, space.deviate(profile_index, player, a)) > own) return false;
  }
  return true;
}

// Every pure-strategy Nash equilibrium, by full profile enumeration.
inline SolutionSet solve_pure_nash(const ScalarGame& game) {
  SolutionSet out;
  const auto& space = game.space();
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    bool stable = true;
    for (PlayerIndex p = 0; p < game.player_count() && stable; ++p) {
      stable = is_best_response(game, p, idx);
    }
    if (stable) out.profiles.push_back(space.profile_at(idx));
  }
  return out;
}

inline double welfare(const ScalarGame& game, const StrategyProfile& profile) {
  std::size_t idx = game.space().index_of(profile);
  double sum = 0.0;
  for (PlayerIndex p = 0; p < game.player_count(); ++p) sum += game.utility(p, idx);
  return sum;
}

// Welfare-maximizing candidate; ties go to the lexicographically smallest profile.
inline StrategyProfile select_welfare_max(const ScalarGame& game, const SolutionSet& candidates) {
  if (candidates.empty()) throw NoSolution("no candidate profiles to select from");
  const StrategyProfile* best = nullptr;
  double best_welfare = -std::numeric_limits<double>::infinity();
  for (const auto& prof : candidates.profiles) {
    double w = welfare(game, prof);
    if (best == nullptr || w > best_welfare || (w == best_welfare && prof < *best)) {
      best = &prof;
      best_welfare = w;
    }
  }
  return *best;
}

// Own-utility envelope (best or worst case over opponents) for each action.
inline std::vector<double> nonstrategic_values(const ScalarGame& game, PlayerIndex player,
                                               NonStrategicMode mode) {
  const auto& space = game.space();
  const std::size_t n = game.action_count(player);
  std::vector<double> env(n, mode == NonStrategicMode::Maxmax
                                 ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    ActionIndex a = space.action_of(idx, player);
    double u = game.utility(player, idx);
    env[a] = mode == NonStrategicMode::Maxmax ? std::max(env[a], u) : std::min(env[a], u);
  }
  return env;
}

inline std::vector<ActionIndex> solve_nonstrategic(const ScalarGame& game, PlayerIndex player,
                                                   NonStrategicMode mode) {
  return detail::argmax_set(nonstrategic_values(game, player, mode));
}

inline StrategyProfile solve_rule_based(const ScalarGame& game) {
  StrategyProfile out(game.player_count());
  for (PlayerIndex p = 0; p < game.player_count(); ++p) {
    auto rule = game.rule_action(p);
    if (!rule) {
      throw InvalidConfiguration("player " + std::to_string(p) + " has no rule action");
    }
    out[p] = *rule;
  }
  return out;
}

inline StrategyProfile solve_rule_based(const MultiObjectiveGame& game) {
  return solve_rule_based(ScalarGame(game.space(), game.rule_actions()));
}

// Pure level-k: level 0 per `l0`, level j best-responds to everyone else at
// level j-1. Ties resolve to the lowest action index at every level.
inline StrategyProfile solve_level_k(const ScalarGame& game, int k, LevelZero l0) {
  if (k < 0 || k > 2) throw InvalidArgument("level k must be 0, 1 or 2");
  StrategyProfile current;
  if (l0 == LevelZero::Rule) {
    current = solve_rule_based(game);
  } else {
    auto mode = l0 == LevelZero::Maxmax ? NonStrategicMode::Maxmax : NonStrategicMode::Maxmin;
    current.resize(game.player_count());
    for (PlayerIndex p = 0; p < game.player_count(); ++p) {
      current[p] = solve_nonstrategic(game, p, mode).front();
    }
  }
  for (int level = 1; level <= k; ++level) {
    StrategyProfile next(game.player_count());
    for (PlayerIndex p = 0; p < game.player_count(); ++p) {
      next[p] = best_response(game, p, current).front();
    }
    current = std::move(next);
  }
  return current;
}

inline StrategyProfile solve_level_k(const MultiObjectiveGame& game,
                                     std::span<const AggregationParameter> params, int k,
                                     LevelZero l0) {
  return solve_level_k(scalarize(game, params), k, l0);
}

// Strong Stackelberg: the follower best-responds, breaking its own ties in the
// leader's favour and then by lowest index; the leader takes the best outcome.
inline StrategyProfile solve_stackelberg(const ScalarGame& game, PlayerIndex leader) {
  if (game.player_count() != 2) {
    throw UnsupportedConfiguration("Stackelberg needs a 2-player game, got " +
                                   std::to_string(game.player_count()));
  }
  if (leader > 1) throw InvalidArgument("leader must be player 0 or 1");
  const PlayerIndex follower = 1 - leader;
  StrategyProfile best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (ActionIndex la = 0; la < game.action_count(leader); ++la) {
    StrategyProfile prof(2, 0);
    prof[leader] = la;
    auto replies = best_response(game, follower, prof);
    ActionIndex chosen = replies.front();
    double chosen_value = -std::numeric_limits<double>::infinity();
    for (ActionIndex fa : replies) {
      prof[follower] = fa;
      double v = game.utility(leader, prof);
      if (v > chosen_value) {
        chosen_value = v;
        chosen = fa;
      }
    }
    prof[follower] = chosen;
    if (best.empty() || chosen_value > best_value) {
      best = prof;
      best_value = chosen_value;
    }
  }
  return best;
}

// Predicted profile under `model`; nullopt when a Nash model finds no pure equilibrium.
inline std::optional<StrategyProfile> solve(const ScalarGame& game, const ReasoningModel& model) {
  using Kind = ReasoningModel::Kind;
  switch (model.kind) {
    case Kind::Nash: {
      auto eq = solve_pure_nash(game);
      if (eq.empty()) return std::nullopt;
      return select_welfare_max(game, eq);
    }
    case Kind::Maxmax:
      return solve_level_k(game, 0, LevelZero::Maxmax);
    case Kind::Maxmin:
      return solve_level_k(game, 0, LevelZero::Maxmin);
    case Kind::LevelK:
      return solve_level_k(game, model.k, model.l0);
    case Kind::Stackelberg:
      return solve_stackelberg(game, model.leader);
    case Kind::Rule:
      return solve_rule_based(game);
    case Kind::LkRule:
      return solve_level_k(game, 1, LevelZero::Rule);
  }
  return std::nullopt;
}

}  // namespace moagg
