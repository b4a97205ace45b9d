#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <vector>

namespace moagg {

// Real interval with independent endpoint closure. A degenerate closed
// interval [c, c] is a single point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval right_open(double lo, double hi) { return {lo, hi, true, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval point(double x) { return {x, x, true, true}; }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  double width() const { return hi - lo; }
  double midpoint() const { return lo + 0.5 * (hi - lo); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Interval& i) {
  return os << (i.lo_closed ? '[' : '(') << i.lo << ", " << i.hi << (i.hi_closed ? ']' : ')');
}

// Sorted union of pairwise disjoint, non-adjacent intervals. Inserting an
// interval that touches or overlaps existing members merges them.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> items) {
    for (const auto& i : items) add(i);
  }

  void add(Interval next) {
    if (next.empty()) return;
    std::vector<Interval> out;
    out.reserve(items_.size() + 1);
    bool placed = false;
    for (const auto& cur : items_) {
      if (placed || ends_before(cur, next)) {
        out.push_back(cur);
      } else if (ends_before(next, cur)) {
        out.push_back(next);
        out.push_back(cur);
        placed = true;
      } else {
        next = hull(cur, next);
      }
    }
    if (!placed) out.push_back(next);
    items_ = std::move(out);
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<Interval>& intervals() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool contains(double x) const {
    return std::any_of(items_.begin(), items_.end(), [x](const Interval& i) { return i.contains(x); });
  }

  double measure() const {
    double m = 0.0;
    for (const auto& i : items_) m += i.width();
    return m;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  // True when `a` lies strictly left of `b` with a gap (not even touching).
  static bool ends_before(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return true;
    if (a.hi == b.lo) return !a.hi_closed && !b.lo_closed;
    return false;
  }

  static Interval hull(const Interval& a, const Interval& b) {
    Interval h;
    if (a.lo < b.lo) {
      h.lo = a.lo;
      h.lo_closed = a.lo_closed;
    } else if (b.lo < a.lo) {
      h.lo = b.lo;
      h.lo_closed = b.lo_closed;
    } else {
      h.lo = a.lo;
      h.lo_closed = a.lo_closed || b.lo_closed;
    }
    if (a.hi > b.hi) {
      h.hi = a.hi;
      h.hi_closed = a.hi_closed;
    } else if (b.hi > a.hi) {
      h.hi = b.hi;
      h.hi_closed = b.hi_closed;
    } else {
      h.hi = a.hi;
      h.hi_closed = a.hi_closed || b.hi_closed;
    }
    return h;
  }

  std::vector<Interval> items_;
};

inline std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
  if (s.empty()) return os << "{}";
  bool first = true;
  for (const auto& i : s) {
    if (!first) os << " U ";
    os << i;
    first = false;
  }
  return os;
}

// Center of the widest member interval (leftmost on ties); nullopt when empty.
inline std::optional<double> representative(const IntervalSet& set) {
  if (set.empty()) return std::nullopt;
  const Interval* best = &set.intervals().front();
  for (const auto& i : set) {
    if (i.width() > best->width()) best = &i;
  }
  return best->midpoint();
}

}  // namespace moagg
