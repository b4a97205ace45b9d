#include <gtest/gtest.h>

#include <sstream>

#include "moagg/interval.hpp"

using namespace moagg;

TEST(Interval, ContainsRespectsClosure) {
  auto i = Interval::right_open(-0.9, 0.2);
  EXPECT_TRUE(i.contains(-0.9));
  EXPECT_FALSE(i.contains(0.2));
  EXPECT_TRUE(Interval::point(1.0).contains(1.0));
  EXPECT_TRUE(Interval::right_open(0.5, 0.5).empty());
  EXPECT_TRUE(Interval::open(0.2, 0.1).empty());
}

TEST(IntervalSet, MergesTouchingIntervals) {
  IntervalSet s;
  s.add(Interval::right_open(-0.9, 0.5));
  s.add(Interval::closed(0.5, 1.0));
  ASSERT_EQ(s.intervals().size(), 1u);
  EXPECT_EQ(s.intervals()[0], Interval::closed(-0.9, 1.0));
}

TEST(IntervalSet, KeepsGapAtOpenEnds) {
  IntervalSet s{Interval::right_open(0.0, 0.2), Interval::open(0.2, 0.4)};
  ASSERT_EQ(s.intervals().size(), 2u);
  EXPECT_FALSE(s.contains(0.2));
  s.add(Interval::point(0.2));
  EXPECT_EQ(s.intervals().size(), 1u);
}

TEST(IntervalSet, SortedAndMeasured) {
  IntervalSet s{Interval::closed(0.5, 1.0), Interval::right_open(-0.9, 0.2)};
  ASSERT_EQ(s.intervals().size(), 2u);
  EXPECT_LT(s.intervals()[0].hi, s.intervals()[1].lo);
  EXPECT_NEAR(s.measure(), 1.6, 1e-12);
  std::ostringstream os;
  os << s;
  EXPECT_EQ(os.str(), "[-0.9, 0.2) U [0.5, 1]");
}

TEST(Representative, WidestIntervalMidpoint) {
  EXPECT_NEAR(*representative(IntervalSet{Interval::closed(-0.9, 1.0)}), 0.05, 1e-12);
  IntervalSet split{Interval::right_open(-0.9, 0.2), Interval::closed(0.5, 1.0)};
  EXPECT_NEAR(*representative(split), -0.35, 1e-12);
  EXPECT_FALSE(representative(IntervalSet{}).has_value());
}

TEST(Representative, TieGoesLeft) {
  IntervalSet s{Interval::closed(0.0, 0.1), Interval::closed(0.5, 0.6)};
  EXPECT_NEAR(*representative(s), 0.05, 1e-12);
  EXPECT_DOUBLE_EQ(*representative(IntervalSet{Interval::point(1.0)}), 1.0);
}
