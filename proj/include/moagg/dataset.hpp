#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moagg/cart.hpp"
#include "moagg/errors.hpp"
#include "moagg/game.hpp"
#include "moagg/satisficing.hpp"

namespace moagg {

enum class Aggregation { Weighted, Satisficing };

inline const char* to_string(Aggregation a) {
  return a == Aggregation::Weighted ? "weighted" : "satisficing";
}

inline const char* to_string(EstimationModel m) {
  switch (m) {
    case EstimationModel::Nash: return "nash";
    case EstimationModel::Maxmax: return "maxmax";
    case EstimationModel::Maxmin: return "maxmin";
  }
  return "?";
}

inline Aggregation parse_aggregation(const std::string& s) {
  if (s == "weighted") return Aggregation::Weighted;
  if (s == "satisficing") return Aggregation::Satisficing;
  throw InvalidArgument("unknown aggregation '" + s + "' (expected weighted|satisficing)");
}

inline EstimationModel parse_estimation_model(const std::string& s) {
  if (s == "nash") return EstimationModel::Nash;
  if (s == "maxmax") return EstimationModel::Maxmax;
  if (s == "maxmin") return EstimationModel::Maxmin;
  throw InvalidArgument("unknown model '" + s + "' (expected nash|maxmax|maxmin)");
}

// Hidden ground truth attached by the synthetic generator.
struct GroundTruth {
  Aggregation aggregation = Aggregation::Satisficing;
  EstimationModel model = EstimationModel::Nash;
  double parameter = 0.0;  // safety weight or aspiration level
};

// One observed game from the focal agent's perspective.
struct ObservationRecord {
  std::string id;
  MultiObjectiveGame game;
  PlayerIndex focal = 0;
  StrategyProfile observed;
  FeatureRecord features;  // `model` is left empty; it is set per estimate
  std::optional<GroundTruth> truth;
};

inline std::string profile_key(const StrategyProfile& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s;
}

inline nlohmann::json record_to_json(const ObservationRecord& r) {
  using nlohmann::json;
  const auto& g = r.game;
  json players = json::array();
  for (PlayerIndex p = 0; p < g.player_count(); ++p) {
    json jp;
    jp["actions"] = g.action_labels(p);
    if (auto rule = g.rule_action(p)) jp["rule_action"] = g.action_labels(p).at(*rule);
    players.push_back(std::move(jp));
  }
  json payoffs = json::object();
  for (PlayerIndex p = 0; p < g.player_count(); ++p) {
    json table = json::object();
    for (std::size_t idx = 0; idx < g.space().size(); ++idx) {
      auto u = g.payoff(p, idx);
      table[profile_key(g.space().profile_at(idx))] = std::vector<double>(u.begin(), u.end());
    }
    payoffs[std::to_string(p)] = std::move(table);
  }
  json j;
  j["id"] = r.id;
  j["scenario"] = r.features.scenario;
  j["task"] = r.features.task;
  j["velocity_mps"] = r.features.velocity;
  j["players"] = std::move(players);
  j["objectives"] = g.objective_names();
  j["payoffs"] = std::move(payoffs);
  j["observed"] = r.observed;
  j["focal"] = r.focal;
  if (r.truth) {
    j["truth"] = {{"aggregation", to_string(r.truth->aggregation)},
                  {"model", to_string(r.truth->model)},
                  {"parameter", r.truth->parameter}};
  }
  return j;
}

namespace detail {

inline StrategyProfile parse_profile_key(const std::string& key, std::size_t players) {
  StrategyProfile out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad profile key '" + key + "'");
    }
    if (used != part.size()) throw InvalidArgument("bad profile key '" + key + "'");
    out.push_back(v);
  }
  if (out.size() != players) {
    throw InvalidArgument("profile key '" + key + "' has " + std::to_string(out.size()) +
                          " entries, game has " + std::to_string(players) + " players");
  }
  return out;
}

}  // namespace detail

// Parses and validates one record. Throws InvalidArgument / json errors on bad input.
inline ObservationRecord record_from_json(const nlohmann::json& j) {
  std::vector<std::vector<std::string>> labels;
  const auto& players = j.at("players");
  if (!players.is_array() || players.empty()) throw InvalidArgument("'players' must be a nonempty array");
  for (const auto& jp : players) labels.push_back(jp.at("actions").get<std::vector<std::string>>());
  auto objectives = j.at("objectives").get<std::vector<std::string>>();

  MultiObjectiveGame game(labels, objectives);
  for (PlayerIndex p = 0; p < labels.size(); ++p) {
    const auto& jp = players[p];
    if (!jp.contains("rule_action") || jp["rule_action"].is_null()) continue;
    const auto& ra = jp["rule_action"];
    if (ra.is_number_unsigned()) {
      game.set_rule_action(p, ra.get<std::size_t>());
    } else {
      auto label = ra.get<std::string>();
      auto it = std::find(labels[p].begin(), labels[p].end(), label);
      if (it == labels[p].end()) {
        throw InvalidArgument("rule_action '" + label + "' is not an action of player " +
                              std::to_string(p));
      }
      game.set_rule_action(p, static_cast<ActionIndex>(it - labels[p].begin()));
    }
  }

  const auto& payoffs = j.at("payoffs");
  for (auto it = payoffs.begin(); it != payoffs.end(); ++it) {
    std::size_t used = 0;
    unsigned long p = 0;
    try {
      p = std::stoul(it.key(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it.key().size() || p >= labels.size()) {
      throw InvalidArgument("payoffs key '" + it.key() + "' is not a player index");
    }
    for (auto cell = it.value().begin(); cell != it.value().end(); ++cell) {
      auto profile = detail::parse_profile_key(cell.key(), labels.size());
      if (!game.space().contains(profile)) {
        throw InvalidArgument("profile '" + cell.key() + "' is outside the action sets");
      }
      game.set_payoff(p, profile, cell.value().get<std::vector<double>>());
    }
  }

  auto violations = validate_game(game);
  if (!violations.empty()) throw InvalidArgument(violations.front().message);

  ObservationRecord r{j.at("id").get<std::string>(), std::move(game), 0, {}, {}, std::nullopt};
  r.focal = j.at("focal").get<std::size_t>();
  if (r.focal >= r.game.player_count()) throw InvalidArgument("focal player out of range");
  r.observed = j.at("observed").get<StrategyProfile>();
  if (!r.game.space().contains(r.observed)) throw InvalidArgument("observed profile is not valid in the game");
  r.features.scenario = j.at("scenario").get<std::string>();
  r.features.task = j.at("task").get<std::string>();
  r.features.velocity = j.at("velocity_mps").get<double>();
  if (!std::isfinite(r.features.velocity) || r.features.velocity < 0.0) {
    throw InvalidArgument("velocity_mps must be finite and >= 0");
  }
  if (j.contains("truth") && !j["truth"].is_null()) {
    const auto& t = j["truth"];
    r.truth = GroundTruth{parse_aggregation(t.at("aggregation").get<std::string>()),
                          parse_estimation_model(t.at("model").get<std::string>()),
                          t.at("parameter").get<double>()};
  }
  return r;
}

// JSON-lines reader; blank lines are skipped. Errors carry the 1-based line.
inline std::vector<ObservationRecord> read_dataset(std::istream& in) {
  std::vector<ObservationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw DatasetError(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<ObservationRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

inline void write_dataset(std::ostream& out, const std::vector<ObservationRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

inline void save_dataset(const std::string& path, const std::vector<ObservationRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_dataset(out, records);
}

}  // namespace moagg
