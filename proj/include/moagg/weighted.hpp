#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "moagg/errors.hpp"
#include "moagg/game.hpp"
#include "moagg/interval.hpp"
#include "moagg/scalarize.hpp"
#include "moagg/solvers.hpp"

namespace moagg {

// Rationalisable weights for one observation.
//
// With two objectives the region is exact: a union of disjoint intervals of
// the safety weight w_s (progress weight is 1 - w_s). With any other objective
// count only feasibility plus one witness is reported. `witness` is present
// iff the region is nonempty; `approximate` marks grid-search witnesses.
struct WeightRegion {
  std::size_t objective_count = 2;
  IntervalSet safety_weights;
  std::optional<WeightVector> witness;
  bool approximate = false;

  bool empty() const { return !witness.has_value(); }
};

// Direct check of the defining inequalities at one weight vector.
inline bool weights_rationalise_strategic(const MultiObjectiveGame& game, PlayerIndex player,
                                          const StrategyProfile& observed, const WeightVector& w) {
  const auto& space = game.space();
  std::size_t obs = space.index_of(observed);
  double own = w.dot(game.payoff(player, obs));
  for (ActionIndex a = 0; a < game.action_count(player); ++a) {
    if (w.dot(game.payoff(player, space.deviate(obs, player, a))) > own) return false;
  }
  return true;
}

inline bool weights_rationalise_nonstrategic(const MultiObjectiveGame& game, PlayerIndex player,
                                             ActionIndex observed, const WeightVector& w,
                                             NonStrategicMode mode) {
  ScalarGame scalar(game.space());
  auto values = scalarize_weighted(game, player, w);
  for (std::size_t idx = 0; idx < values.size(); ++idx) scalar.set_utility(player, idx, values[idx]);
  auto env = nonstrategic_values(scalar, player, mode);
  return std::all_of(env.begin(), env.end(), [&](double v) { return env[observed] >= v; });
}

namespace detail {

constexpr double kFeasibilityTolerance = 1e-9;

// Maximizes c.w over {w >= 0, sum w = 1, D w >= 0} by enumerating vertices:
// every choice of m-1 active inequalities together with the simplex equality.
// Returns nullopt when the polytope is empty.
inline std::optional<std::vector<double>> simplex_lp_vertex_max(
    const std::vector<double>& objective, const std::vector<std::vector<double>>& constraints) {
  const std::size_t m = objective.size();
  // Inequalities as rows g.w >= 0: first the m bounds w_j >= 0, then `constraints`.
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    rows.push_back(std::move(e));
  }
  rows.insert(rows.end(), constraints.begin(), constraints.end());

  auto feasible = [&](const Eigen::VectorXd& w) {
    for (const auto& g : rows) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += g[j] * w[static_cast<Eigen::Index>(j)];
      if (s < -kFeasibilityTolerance) return false;
    }
    return std::abs(w.sum() - 1.0) <= kFeasibilityTolerance;
  };

  std::optional<std::vector<double>> best;
  double best_value = -std::numeric_limits<double>::infinity();
  const std::size_t choose = m - 1;
  std::vector<bool> mask(rows.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(choose), true);
  const auto dim = static_cast<Eigen::Index>(m);
  do {
    Eigen::MatrixXd a(dim, dim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!mask[i]) continue;
      for (Eigen::Index j = 0; j < dim; ++j) a(r, j) = rows[i][static_cast<std::size_t>(j)];
      ++r;
    }
    a.row(r).setOnes();
    b[r] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < dim) continue;
    Eigen::VectorXd w = lu.solve(b);
    if (!feasible(w)) continue;
    double value = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) value += objective[static_cast<std::size_t>(j)] * w[j];
    if (!best || value > best_value) {
      std::vector<double> out(m);
      for (std::size_t j = 0; j < m; ++j) out[j] = std::max(0.0, w[static_cast<Eigen::Index>(j)]);
      double s = 0.0;
      for (double x : out) s += x;
      for (double& x : out) x /= s;
      best = std::move(out);
      best_value = value;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// Scalarized value of a cell as a line in w_s: progress + w_s * (safety - progress).
struct Line {
  double intercept;
  double slope;
  double at(double ws) const { return intercept + ws * slope; }
};

inline Line cell_line(const MultiObjectiveGame& game, PlayerIndex player, std::size_t idx) {
  double s = game.payoff(player, idx, 0);
  double p = game.payoff(player, idx, 1);
  return {p, s - p};
}

}  // namespace detail

// Strategic (best response to the observed opponents) weight estimation.
inline WeightRegion estimate_weights_strategic(const MultiObjectiveGame& game, PlayerIndex player,
                                               const StrategyProfile& observed) {
  game.check_player(player);
  const auto& space = game.space();
  const std::size_t obs = space.index_of(observed);
  const std::size_t m = game.objective_count();
  const auto own = game.payoff(player, obs);

  WeightRegion region;
  region.objective_count = m;

  if (m == 2) {
    // Each alternative gives dp + ws * (ds - dp) >= 0, a half-line in ws.
    double lo = 0.0;
    double hi = 1.0;
    bool feasible = true;
    for (ActionIndex a = 0; a < game.action_count(player); ++a) {
      std::size_t alt = space.deviate(obs, player, a);
      if (alt == obs) continue;
      double ds = own[0] - game.payoff(player, alt, 0);
      double dp = own[1] - game.payoff(player, alt, 1);
      double slope = ds - dp;
      if (slope == 0.0) {
        if (dp < 0.0) feasible = false;
      } else if (slope > 0.0) {
        lo = std::max(lo, -dp / slope);
      } else {
        hi = std::min(hi, -dp / slope);
      }
    }
    if (!feasible || lo > hi) return region;
    region.safety_weights.add(Interval::closed(lo, hi));
    // LP objective ws*us + (1-ws)*up is linear: maximized at an endpoint.
    double ws = own[0] > own[1] ? hi : lo;
    region.witness = WeightVector::from_safety(ws);
    return region;
  }

  std::vector<std::vector<double>> constraints;
  for (ActionIndex a = 0; a < game.action_count(player); ++a) {
    std::size_t alt = space.deviate(obs, player, a);
    if (alt == obs) continue;
    std::vector<double> d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = own[j] - game.payoff(player, alt, j);
    constraints.push_back(std::move(d));
  }
  auto best = detail::simplex_lp_vertex_max({own.begin(), own.end()}, constraints);
  if (best) region.witness = WeightVector(std::move(*best));
  return region;
}

// Exact two-objective non-strategic weight estimation.
//
// Every scalarized cell value is a line in w_s. Between consecutive crossing
// points of those lines the ordering of all cell values is fixed, so the
// envelope comparison is decided by one interior sample per cell; crossing
// points themselves are evaluated on their own.
inline WeightRegion estimate_weights_nonstrategic(const MultiObjectiveGame& game,
                                                  PlayerIndex player, ActionIndex observed,
                                                  NonStrategicMode mode) {
  game.check_player(player);
  if (game.objective_count() != 2) {
    throw UnsupportedConfiguration(
        "exact non-strategic weight estimation needs 2 objectives; use "
        "estimate_weights_nonstrategic_grid");
  }
  if (observed >= game.action_count(player)) throw InvalidArgument("observed action out of range");
  const auto& space = game.space();
  const std::size_t n_actions = game.action_count(player);

  std::vector<std::vector<detail::Line>> lines(n_actions);
  for (ActionIndex a = 0; a < n_actions; ++a) {
    for (std::size_t idx : space.profiles_with(player, a)) {
      lines[a].push_back(detail::cell_line(game, player, idx));
    }
  }

  // Crossings that can change a decision: within one action's envelope, or
  // between the observed action and any alternative.
  std::vector<double> breaks;
  auto add_crossing = [&](const detail::Line& x, const detail::Line& y) {
    if (x.slope == y.slope) return;
    double ws = (y.intercept - x.intercept) / (x.slope - y.slope);
    if (ws > 0.0 && ws < 1.0) breaks.push_back(ws);
  };
  for (ActionIndex a = 0; a < n_actions; ++a) {
    for (std::size_t i = 0; i < lines[a].size(); ++i) {
      for (std::size_t j = i + 1; j < lines[a].size(); ++j) add_crossing(lines[a][i], lines[a][j]);
      if (a == observed) continue;
      for (const auto& o : lines[observed]) add_crossing(o, lines[a][i]);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto envelope = [&](ActionIndex a, double ws) {
    double v = lines[a].front().at(ws);
    for (const auto& l : lines[a]) {
      v = mode == NonStrategicMode::Maxmax ? std::max(v, l.at(ws)) : std::min(v, l.at(ws));
    }
    return v;
  };
  auto holds = [&](double ws, double slack) {
    double own = envelope(observed, ws);
    for (ActionIndex a = 0; a < n_actions; ++a) {
      if (a != observed && envelope(a, ws) > own + slack) return false;
    }
    return true;
  };

  // Points 0 = p0 < p1 < ... < pk = 1 and the open cells between them.
  std::vector<double> points;
  points.push_back(0.0);
  points.insert(points.end(), breaks.begin(), breaks.end());
  points.push_back(1.0);
  std::vector<bool> cell_ok(points.size() - 1);
  for (std::size_t c = 0; c + 1 < points.size(); ++c) {
    cell_ok[c] = holds(points[c] + 0.5 * (points[c + 1] - points[c]), 0.0);
  }

  WeightRegion region;
  region.objective_count = 2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    // The feasible set is closed, so a point bordering a feasible cell belongs to it;
    // isolated points get a direct check with a rounding allowance.
    bool left = i > 0 && cell_ok[i - 1];
    bool right = i + 1 < points.size() && cell_ok[i];
    if (left || right || holds(points[i], 1e-12)) region.safety_weights.add(Interval::point(points[i]));
    if (right) region.safety_weights.add(Interval::open(points[i], points[i + 1]));
  }
  if (region.safety_weights.empty()) return region;

  // Witness: the feasible weight with the best observed-action envelope value.
  // The envelope is piecewise linear, so endpoints and interior breakpoints suffice.
  std::vector<double> candidates;
  for (const auto& iv : region.safety_weights) {
    candidates.push_back(iv.lo);
    candidates.push_back(iv.hi);
  }
  for (double b : breaks) {
    if (region.safety_weights.contains(b)) candidates.push_back(b);
  }
  std::sort(candidates.begin(), candidates.end());
  double best_ws = candidates.front();
  double best_val = envelope(observed, best_ws);
  for (double ws : candidates) {
    double v = envelope(observed, ws);
    if (v > best_val) {
      best_val = v;
      best_ws = ws;
    }
  }
  region.witness = WeightVector::from_safety(best_ws);
  return region;
}

// Approximate non-strategic estimation for any objective count: scans the
// simplex grid with the given step and keeps the feasible point with the best
// observed-action envelope value.
inline WeightRegion estimate_weights_nonstrategic_grid(const MultiObjectiveGame& game,
                                                       PlayerIndex player, ActionIndex observed,
                                                       NonStrategicMode mode,
                                                       double resolution = 0.01) {
  game.check_player(player);
  if (observed >= game.action_count(player)) throw InvalidArgument("observed action out of range");
  if (!(resolution > 0.0 && resolution <= 1.0)) throw InvalidArgument("grid resolution must be in (0,1]");
  const std::size_t m = game.objective_count();
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
  const auto& space = game.space();

  WeightRegion region;
  region.objective_count = m;
  region.approximate = true;
  double best_val = -std::numeric_limits<double>::infinity();

  std::vector<double> env(game.action_count(player));
  std::vector<std::size_t> parts(m, 0);
  // Enumerate compositions of `steps` into m parts in lexicographic order.
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t j, std::size_t left) {
    if (j + 1 == m) {
      parts[j] = left;
      std::vector<double> w(m);
      for (std::size_t k = 0; k < m; ++k) w[k] = static_cast<double>(parts[k]) / static_cast<double>(steps);
      std::fill(env.begin(), env.end(), mode == NonStrategicMode::Maxmax
                                            ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity());
      for (std::size_t idx = 0; idx < space.size(); ++idx) {
        auto u = game.payoff(player, idx);
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) v += w[k] * u[k];
        ActionIndex a = space.action_of(idx, player);
        env[a] = mode == NonStrategicMode::Maxmax ? std::max(env[a], v) : std::min(env[a], v);
      }
      bool ok = std::all_of(env.begin(), env.end(), [&](double v) { return env[observed] >= v; });
      if (ok && env[observed] > best_val) {
        best_val = env[observed];
        double s = 0.0;
        for (double x : w) s += x;
        for (double& x : w) x /= s;
        region.witness = WeightVector(std::move(w));
      }
      return;
    }
    for (std::size_t take = 0; take <= left; ++take) {
      parts[j] = take;
      visit(j + 1, left - take);
    }
  };
  visit(0, steps);
  return region;
}

}  // namespace moagg
