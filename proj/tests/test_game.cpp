#include <gtest/gtest.h>

#include <cmath>

#include "moagg/game.hpp"
#include "support/fig1.hpp"

using namespace moagg;

TEST(ProfileSpace, RowMajorWithFirstPlayerSlowest) {
  ProfileSpace s({2, 3});
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.index_of({0, 0}), 0u);
  EXPECT_EQ(s.index_of({0, 2}), 2u);
  EXPECT_EQ(s.index_of({1, 0}), 3u);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.index_of(s.profile_at(i)), i);
}

TEST(ProfileSpace, DeviateChangesOnlyOnePlayer) {
  ProfileSpace s({2, 3, 2});
  std::size_t idx = s.index_of({1, 2, 0});
  EXPECT_EQ(s.profile_at(s.deviate(idx, 1, 0)), (StrategyProfile{1, 0, 0}));
  EXPECT_EQ(s.action_of(idx, 1), 2u);
  EXPECT_EQ(s.profiles_with(2, 1).size(), 6u);
}

TEST(ProfileSpace, RejectsBadShapes) {
  EXPECT_THROW(ProfileSpace(std::vector<std::size_t>{}), InvalidArgument);
  EXPECT_THROW(ProfileSpace({2, 0}), InvalidArgument);
  ProfileSpace s({2, 2});
  EXPECT_FALSE(s.contains({0, 2}));
  EXPECT_FALSE(s.contains({0}));
  EXPECT_THROW(s.index_of({2, 0}), InvalidArgument);
}

TEST(ValidateGame, RightTurnGameIsValid) {
  auto g = fixtures::right_turn_game();
  EXPECT_TRUE(validate_game(g).empty());
  EXPECT_DOUBLE_EQ(g.payoff(0, {1, 0})[0], -0.9);
  EXPECT_DOUBLE_EQ(g.payoff(0, g.space().index_of({0, 1}), 1), 0.1);
}

TEST(ValidateGame, ReportsOutOfRangeValue) {
  auto g = fixtures::right_turn_game();
  g.set_payoff(1, {1, 1}, {1.5, 0.0});
  auto v = validate_game(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::OutOfRange);
  EXPECT_EQ(v[0].player, 1u);
  EXPECT_EQ(v[0].profile, (StrategyProfile{1, 1}));
  EXPECT_NE(v[0].message.find("value out of [-1,1]"), std::string::npos);
}

TEST(ValidateGame, ReportsMissingEntry) {
  MultiObjectiveGame g({{"W", "T"}, {"U", "D"}}, {"safety", "progress"});
  for (std::size_t idx = 0; idx < 4; ++idx) {
    g.set_payoff(0, idx, std::vector<double>{0.0, 0.0});
    if (idx != 3) g.set_payoff(1, idx, std::vector<double>{0.0, 0.0});
  }
  auto v = validate_game(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::NotTotal);
  EXPECT_NE(v[0].message.find("payoff tensor not total"), std::string::npos);
}

TEST(ValidateGame, ReportsNonFiniteValue) {
  auto g = fixtures::right_turn_game();
  g.set_payoff(0, {0, 0}, {INFINITY, 0.0});
  auto v = validate_game(g);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, Violation::Kind::NonFinite);
}

TEST(ValidateGame, ExtremeValuesAllowed) {
  auto g = fixtures::right_turn_game();
  g.set_payoff(0, {0, 0}, {1.0, -1.0});
  g.set_payoff(0, {0, 1}, {1.0, 1.0});
  EXPECT_TRUE(validate_game(g).empty());
}

TEST(MultiObjectiveGame, RejectsWrongObjectiveCount) {
  auto g = fixtures::right_turn_game();
  EXPECT_THROW(g.set_payoff(0, {0, 0}, {0.1, 0.2, 0.3}), InvalidArgument);
  EXPECT_THROW(MultiObjectiveGame({{"a"}}, {}), InvalidArgument);
}

TEST(MultiObjectiveGame, RuleActionMustBeValid) {
  auto g = fixtures::right_turn_game();
  EXPECT_THROW(g.set_rule_action(0, 2), InvalidArgument);
  EXPECT_THROW(g.set_rule_action(2, 0), InvalidArgument);
  EXPECT_EQ(g.rule_action(1), ActionIndex{0});
}

TEST(MultiObjectiveGame, WithCountsLabelsActions) {
  auto g = MultiObjectiveGame::with_counts({3, 1});
  EXPECT_EQ(g.player_count(), 2u);
  EXPECT_EQ(g.action_labels(0), (std::vector<std::string>{"a0", "a1", "a2"}));
  EXPECT_EQ(g.objective_count(), 2u);
}
