#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moagg/errors.hpp"

namespace moagg {

using PlayerIndex = std::size_t;
using ActionIndex = std::size_t;

// One action index per player.
using StrategyProfile = std::vector<ActionIndex>;

// Enumerates joint action profiles in row-major order (player 0 varies
// slowest), so linear order coincides with lexicographic profile order.
class ProfileSpace {
 public:
  ProfileSpace() = default;

  explicit ProfileSpace(std::vector<std::size_t> action_counts)
      : counts_(std::move(action_counts)), strides_(counts_.size(), 1) {
    if (counts_.empty()) throw InvalidArgument("game needs at least one player");
    for (std::size_t c : counts_) {
      if (c == 0) throw InvalidArgument("every player needs at least one action");
    }
    size_ = 1;
    for (std::size_t p = counts_.size(); p-- > 0;) {
      strides_[p] = size_;
      size_ *= counts_[p];
    }
  }

  std::size_t player_count() const { return counts_.size(); }
  std::size_t action_count(PlayerIndex p) const { return counts_.at(p); }
  const std::vector<std::size_t>& action_counts() const { return counts_; }
  std::size_t size() const { return size_; }

  bool contains(const StrategyProfile& profile) const {
    if (profile.size() != counts_.size()) return false;
    for (std::size_t p = 0; p < counts_.size(); ++p) {
      if (profile[p] >= counts_[p]) return false;
    }
    return true;
  }

  std::size_t index_of(const StrategyProfile& profile) const {
    if (!contains(profile)) throw InvalidArgument("strategy profile does not fit the game");
    std::size_t idx = 0;
    for (std::size_t p = 0; p < counts_.size(); ++p) idx += profile[p] * strides_[p];
    return idx;
  }

  StrategyProfile profile_at(std::size_t index) const {
    StrategyProfile out(counts_.size());
    for (std::size_t p = 0; p < counts_.size(); ++p) {
      out[p] = index / strides_[p];
      index %= strides_[p];
    }
    return out;
  }

  // Index of `profile` with player p's action replaced by `action`.
  std::size_t deviate(std::size_t index, PlayerIndex p, ActionIndex action) const {
    std::size_t current = (index / strides_[p]) % counts_[p];
    return index - current * strides_[p] + action * strides_[p];
  }

  ActionIndex action_of(std::size_t index, PlayerIndex p) const {
    return (index / strides_[p]) % counts_[p];
  }

  // Indices of every profile in which player p plays `action`.
  std::vector<std::size_t> profiles_with(PlayerIndex p, ActionIndex action) const {
    std::vector<std::size_t> out;
    out.reserve(size_ / counts_[p]);
    for (std::size_t i = 0; i < size_; ++i) {
      if (action_of(i, p) == action) out.push_back(i);
    }
    return out;
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

// Normal-form game whose payoffs are objective vectors, ordered by priority
// (index 0 = safety, index 1 = progress for the two-objective case).
// Payoffs start unset (NaN); validate_game reports any that stay unset.
class MultiObjectiveGame {
 public:
  MultiObjectiveGame(std::vector<std::vector<std::string>> action_labels,
                     std::vector<std::string> objective_names)
      : labels_(std::move(action_labels)), objectives_(std::move(objective_names)) {
    if (objectives_.empty()) throw InvalidArgument("game needs at least one objective");
    std::vector<std::size_t> counts;
    counts.reserve(labels_.size());
    for (const auto& l : labels_) counts.push_back(l.size());
    space_ = ProfileSpace(std::move(counts));
    rule_actions_.assign(labels_.size(), std::nullopt);
    payoffs_.assign(space_.size() * player_count() * objective_count(),
                    std::numeric_limits<double>::quiet_NaN());
  }

  // Convenience: unlabeled actions "a0", "a1", ...
  static MultiObjectiveGame with_counts(const std::vector<std::size_t>& action_counts,
                                        std::vector<std::string> objective_names = {"safety",
                                                                                    "progress"}) {
    std::vector<std::vector<std::string>> labels;
    for (std::size_t n : action_counts) {
      std::vector<std::string> l;
      for (std::size_t a = 0; a < n; ++a) l.push_back("a" + std::to_string(a));
      labels.push_back(std::move(l));
    }
    return MultiObjectiveGame(std::move(labels), std::move(objective_names));
  }

  const ProfileSpace& space() const { return space_; }
  std::size_t player_count() const { return space_.player_count(); }
  std::size_t action_count(PlayerIndex p) const { return space_.action_count(p); }
  std::size_t objective_count() const { return objectives_.size(); }
  const std::vector<std::string>& objective_names() const { return objectives_; }
  const std::vector<std::string>& action_labels(PlayerIndex p) const { return labels_.at(p); }

  void set_payoff(PlayerIndex player, const StrategyProfile& profile,
                  std::span<const double> values) {
    set_payoff(player, space_.index_of(profile), values);
  }

  void set_payoff(PlayerIndex player, std::size_t profile_index, std::span<const double> values) {
    check_player(player);
    if (values.size() != objective_count()) {
      throw InvalidArgument("objective vector has " + std::to_string(values.size()) +
                            " entries, game has " + std::to_string(objective_count()));
    }
    if (profile_index >= space_.size()) throw InvalidArgument("profile index out of range");
    std::copy(values.begin(), values.end(), payoffs_.begin() + offset(player, profile_index));
  }

  void set_payoff(PlayerIndex player, const StrategyProfile& profile,
                  std::initializer_list<double> values) {
    set_payoff(player, profile, std::span<const double>(values.begin(), values.size()));
  }

  std::span<const double> payoff(PlayerIndex player, std::size_t profile_index) const {
    return {payoffs_.data() + offset(player, profile_index), objective_count()};
  }

  std::span<const double> payoff(PlayerIndex player, const StrategyProfile& profile) const {
    return payoff(player, space_.index_of(profile));
  }

  double payoff(PlayerIndex player, std::size_t profile_index, std::size_t objective) const {
    return payoffs_[offset(player, profile_index) + objective];
  }

  void set_rule_action(PlayerIndex player, ActionIndex action) {
    check_player(player);
    if (action >= action_count(player)) {
      throw InvalidArgument("rule action " + std::to_string(action) + " out of range for player " +
                            std::to_string(player));
    }
    rule_actions_[player] = action;
  }

  std::optional<ActionIndex> rule_action(PlayerIndex player) const {
    return rule_actions_.at(player);
  }

  const std::vector<std::optional<ActionIndex>>& rule_actions() const { return rule_actions_; }

  void check_player(PlayerIndex player) const {
    if (player >= player_count()) {
      throw InvalidArgument("player " + std::to_string(player) + " out of range");
    }
  }

 private:
  std::size_t offset(PlayerIndex player, std::size_t profile_index) const {
    return (profile_index * player_count() + player) * objective_count();
  }

  std::vector<std::vector<std::string>> labels_;
  std::vector<std::string> objectives_;
  ProfileSpace space_;
  std::vector<std::optional<ActionIndex>> rule_actions_;
  std::vector<double> payoffs_;
};

// Game after scalarization: one real utility per player per profile.
class ScalarGame {
 public:
  explicit ScalarGame(ProfileSpace space,
                      std::vector<std::optional<ActionIndex>> rule_actions = {})
      : space_(std::move(space)), rule_actions_(std::move(rule_actions)) {
    if (rule_actions_.empty()) rule_actions_.assign(space_.player_count(), std::nullopt);
    utilities_.assign(space_.size() * space_.player_count(), 0.0);
  }

  const ProfileSpace& space() const { return space_; }
  std::size_t player_count() const { return space_.player_count(); }
  std::size_t action_count(PlayerIndex p) const { return space_.action_count(p); }

  double utility(PlayerIndex player, std::size_t profile_index) const {
    return utilities_[profile_index * player_count() + player];
  }
  double utility(PlayerIndex player, const StrategyProfile& profile) const {
    return utility(player, space_.index_of(profile));
  }
  void set_utility(PlayerIndex player, std::size_t profile_index, double value) {
    utilities_[profile_index * player_count() + player] = value;
  }
  void set_utility(PlayerIndex player, const StrategyProfile& profile, double value) {
    set_utility(player, space_.index_of(profile), value);
  }

  std::optional<ActionIndex> rule_action(PlayerIndex player) const {
    return rule_actions_.at(player);
  }
  void set_rule_action(PlayerIndex player, ActionIndex action) { rule_actions_.at(player) = action; }

 private:
  ProfileSpace space_;
  std::vector<std::optional<ActionIndex>> rule_actions_;
  std::vector<double> utilities_;
};

struct Violation {
  enum class Kind { OutOfRange, NotTotal, NonFinite, BadRuleAction };
  Kind kind;
  PlayerIndex player = 0;
  StrategyProfile profile;  // empty for non-payoff violations
  std::string message;
};

// Reports every violated game invariant; an empty result means the game is valid.
inline std::vector<Violation> validate_game(const MultiObjectiveGame& game) {
  std::vector<Violation> out;
  const auto& space = game.space();
  auto describe = [&](const StrategyProfile& prof) {
    std::string s = "(";
    for (std::size_t i = 0; i < prof.size(); ++i) s += (i ? "," : "") + std::to_string(prof[i]);
    return s + ")";
  };
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    for (PlayerIndex p = 0; p < game.player_count(); ++p) {
      auto values = game.payoff(p, idx);
      for (double v : values) {
        if (std::isnan(v)) {
          auto prof = space.profile_at(idx);
          out.push_back({Violation::Kind::NotTotal, p, prof,
                         "payoff tensor not total: player " + std::to_string(p) + " profile " +
                             describe(prof)});
          break;
        }
        if (!std::isfinite(v)) {
          auto prof = space.profile_at(idx);
          out.push_back({Violation::Kind::NonFinite, p, prof,
                         "non-finite payoff: player " + std::to_string(p) + " profile " +
                             describe(prof)});
          break;
        }
        if (v < -1.0 || v > 1.0) {
          auto prof = space.profile_at(idx);
          out.push_back({Violation::Kind::OutOfRange, p, prof,
                         "value out of [-1,1]: " + std::to_string(v) + " at player " +
                             std::to_string(p) + " profile " + describe(prof)});
          break;
        }
      }
    }
  }
  for (PlayerIndex p = 0; p < game.player_count(); ++p) {
    auto rule = game.rule_action(p);
    if (rule && *rule >= game.action_count(p)) {
      out.push_back({Violation::Kind::BadRuleAction, p, {},
                     "rule action " + std::to_string(*rule) + " out of range for player " +
                         std::to_string(p)});
    }
  }
  return out;
}

}  // namespace moagg
