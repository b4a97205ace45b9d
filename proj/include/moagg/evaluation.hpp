#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "moagg/cart.hpp"
#include "moagg/dataset.hpp"
#include "moagg/errors.hpp"
#include "moagg/interval.hpp"
#include "moagg/satisficing.hpp"
#include "moagg/scalarize.hpp"
#include "moagg/solvers.hpp"
#include "moagg/weighted.hpp"

namespace moagg {

inline constexpr std::array<EstimationModel, 3> kEstimationModels{
    EstimationModel::Nash, EstimationModel::Maxmax, EstimationModel::Maxmin};
inline constexpr std::array<Aggregation, 2> kAggregations{Aggregation::Weighted,
                                                          Aggregation::Satisficing};

// Rationalisable parameter set for one record under one (model, aggregation).
// For weighted aggregation `set` holds safety weights; for satisficing it holds
// aspiration levels. With more than two objectives only `witness` is filled.
struct Estimate {
  IntervalSet set;
  std::optional<WeightVector> witness;
  bool approximate = false;
  bool supported = true;  // false when the aggregation cannot apply to this game

  bool empty() const { return set.empty() && !witness; }

  std::optional<double> representative_value() const {
    if (!set.empty()) return representative(set);
    if (witness) return (*witness)[0];
    return std::nullopt;
  }
};

inline Estimate estimate(const ObservationRecord& r, EstimationModel model, Aggregation agg) {
  Estimate out;
  const auto& g = r.game;
  if (agg == Aggregation::Satisficing) {
    if (g.objective_count() != 2) {
      out.supported = false;
      return out;
    }
    out.set = estimate_gamma(g, r.focal, r.observed, model);
    return out;
  }
  WeightRegion region;
  if (model == EstimationModel::Nash) {
    region = estimate_weights_strategic(g, r.focal, r.observed);
  } else if (g.objective_count() == 2) {
    region = estimate_weights_nonstrategic(g, r.focal, r.observed[r.focal], to_mode(model));
  } else {
    region = estimate_weights_nonstrategic_grid(g, r.focal, r.observed[r.focal], to_mode(model));
  }
  out.set = region.safety_weights;
  out.witness = region.witness;
  out.approximate = region.approximate;
  return out;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Canonical scenario order for reports: the three known scenarios first, then
// any others alphabetically.
inline std::vector<std::string> ordered_scenarios(const std::vector<ObservationRecord>& dataset) {
  std::vector<std::string> seen;
  for (const auto& r : dataset) {
    if (std::find(seen.begin(), seen.end(), r.features.scenario) == seen.end()) {
      seen.push_back(r.features.scenario);
    }
  }
  auto rank = [](const std::string& s) {
    static const std::vector<std::string> known{"intersection", "roundabout", "crosswalk"};
    auto it = std::find(known.begin(), known.end(), s);
    return static_cast<std::size_t>(it - known.begin());
  };
  std::sort(seen.begin(), seen.end(), [&](const std::string& a, const std::string& b) {
    return std::make_pair(rank(a), a) < std::make_pair(rank(b), b);
  });
  return seen;
}

// ---------------------------------------------------------------------------
// Pass rate

struct RateCount {
  std::size_t passed = 0;
  std::size_t total = 0;
  double rate() const { return total == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(total); }
};

// Fraction of records (per scenario) with a nonempty rationalisable set.
// Records the aggregation cannot apply to are left out of the denominator.
inline std::map<std::string, RateCount> compute_pass_rate(const std::vector<ObservationRecord>& dataset,
                                                          EstimationModel model, Aggregation agg) {
  std::map<std::string, RateCount> out;
  for (const auto& r : dataset) {
    auto e = estimate(r, model, agg);
    if (!e.supported) continue;
    auto& c = out[r.features.scenario];
    ++c.total;
    if (!e.empty()) ++c.passed;
  }
  return out;
}

// Rows = model, columns = scenario x aggregation.
inline void write_pass_rate_csv(std::ostream& out, const std::vector<ObservationRecord>& dataset) {
  auto scenarios = ordered_scenarios(dataset);
  out << "model";
  for (const auto& s : scenarios) {
    for (auto agg : kAggregations) out << ',' << s << ':' << to_string(agg);
  }
  out << '\n';
  for (auto model : kEstimationModels) {
    std::map<Aggregation, std::map<std::string, RateCount>> rates;
    for (auto agg : kAggregations) rates[agg] = compute_pass_rate(dataset, model, agg);
    out << to_string(model);
    for (const auto& s : scenarios) {
      for (auto agg : kAggregations) {
        auto it = rates[agg].find(s);
        out << ',' << (it == rates[agg].end() || it->second.total == 0 ? "NA" : format_number(it->second.rate()));
      }
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Estimates file (JSON lines)

struct EstimateRow {
  std::string id;
  EstimationModel model = EstimationModel::Nash;
  Aggregation aggregation = Aggregation::Weighted;
  std::optional<double> representative;
};

inline nlohmann::json estimate_to_json(const ObservationRecord& r, EstimationModel model,
                                       Aggregation agg, const Estimate& e) {
  nlohmann::json set = nlohmann::json::array();
  for (const auto& iv : e.set) set.push_back({iv.lo, iv.hi, iv.lo_closed, iv.hi_closed});
  nlohmann::json j;
  j["id"] = r.id;
  j["focal"] = r.focal;
  j["model"] = to_string(model);
  j["aggregation"] = to_string(agg);
  j["supported"] = e.supported;
  j["set"] = std::move(set);
  j["witness"] = e.witness ? nlohmann::json(e.witness->values()) : nlohmann::json(nullptr);
  j["approximate"] = e.approximate;
  auto rep = e.representative_value();
  j["representative"] = rep ? nlohmann::json(*rep) : nlohmann::json(nullptr);
  return j;
}

inline void write_estimates(std::ostream& out, const std::vector<ObservationRecord>& dataset,
                            EstimationModel model, Aggregation agg) {
  for (const auto& r : dataset) out << estimate_to_json(r, model, agg, estimate(r, model, agg)).dump() << '\n';
}

inline std::vector<EstimateRow> read_estimates(std::istream& in) {
  std::vector<EstimateRow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      EstimateRow row;
      row.id = j.at("id").get<std::string>();
      row.model = parse_estimation_model(j.at("model").get<std::string>());
      row.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
      if (!j.at("representative").is_null()) row.representative = j["representative"].get<double>();
      out.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw DatasetError(line_no, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stratified summary

struct SummaryRow {
  std::string scenario;
  std::string model;
  std::string aggregation;
  std::string velocity_bin;
  std::size_t count = 0;
  double median = 0.0;
  double mean = 0.0;
  bool insufficient = false;
};

inline std::string velocity_bin_label(const std::vector<double>& edges, std::size_t bin) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return std::string(buf);
  };
  if (edges.empty()) return "all";
  if (bin == 0) return "(-inf," + num(edges.front()) + ")";
  if (bin == edges.size()) return "[" + num(edges.back()) + ",inf)";
  return "[" + num(edges[bin - 1]) + "," + num(edges[bin]) + ")";
}

// Median and mean of the representative parameter per (scenario, model,
// aggregation, velocity bin). Bins are [e_k, e_{k+1}) plus the two open tails.
// Strata with fewer than `min_count` values are flagged; empty strata are omitted.
inline std::vector<SummaryRow> stratified_summary(const std::vector<ObservationRecord>& dataset,
                                                  const std::vector<EstimateRow>& estimates,
                                                  std::vector<double> edges,
                                                  std::size_t min_count = 5) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::map<std::string, const ObservationRecord*> by_id;
  for (const auto& r : dataset) by_id[r.id] = &r;

  auto scenarios = ordered_scenarios(dataset);
  auto scenario_rank = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(scenarios.begin(), scenarios.end(), s) - scenarios.begin());
  };
  using Key = std::tuple<std::size_t, int, int, std::size_t>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& e : estimates) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) throw InvalidArgument("estimate for unknown record id '" + e.id + "'");
    if (!e.representative) continue;
    const auto& f = it->second->features;
    auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), f.velocity) - edges.begin());
    groups[{scenario_rank(f.scenario), static_cast<int>(e.model), static_cast<int>(e.aggregation), bin}]
        .push_back(*e.representative);
  }

  std::vector<SummaryRow> out;
  for (auto& [key, values] : groups) {
    auto [s, m, a, bin] = key;
    std::sort(values.begin(), values.end());
    SummaryRow row;
    row.scenario = scenarios[s];
    row.model = to_string(static_cast<EstimationModel>(m));
    row.aggregation = to_string(static_cast<Aggregation>(a));
    row.velocity_bin = velocity_bin_label(edges, bin);
    row.count = values.size();
    std::size_t n = values.size();
    row.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(n);
    row.insufficient = n < min_count;
    out.push_back(std::move(row));
  }
  return out;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "scenario,model,aggregation,velocity_bin,count,median,mean,status\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.model << ',' << r.aggregation << ',' << '"' << r.velocity_bin << '"' << ','
        << r.count << ',' << format_number(r.median) << ',' << format_number(r.mean) << ','
        << (r.insufficient ? "insufficient" : "ok") << '\n';
  }
}

// ---------------------------------------------------------------------------
// Prediction experiment

// A named solution concept plus the reasoning-model tag whose estimates feed
// its parameter prediction.
struct Concept {
  std::string name;
  EstimationModel feature_model = EstimationModel::Nash;
};

inline const std::vector<std::string>& known_concepts() {
  static const std::vector<std::string> v{"L0:MX", "L0:MM", "L1", "L2", "PNE", "Stack.", "Rule", "LkR"};
  return v;
}

inline Concept parse_concept(const std::string& name) {
  if (name == "L0:MX") return {name, EstimationModel::Maxmax};
  if (name == "L0:MM") return {name, EstimationModel::Maxmin};
  if (name == "L1" || name == "L2" || name == "PNE" || name == "Rule" || name == "LkR") {
    return {name, EstimationModel::Nash};
  }
  if (name == "Stack." || name == "Stack") return {"Stack.", EstimationModel::Nash};
  throw InvalidArgument("unknown solution concept '" + name + "'");
}

// The reasoning model behind a concept for one record. The focal agent is the
// Stackelberg follower.
inline ReasoningModel concept_model(const Concept& c, const ObservationRecord& r) {
  if (c.name == "L0:MX") return ReasoningModel::level_k(0, LevelZero::Maxmax);
  if (c.name == "L0:MM") return ReasoningModel::level_k(0, LevelZero::Maxmin);
  if (c.name == "L1") return ReasoningModel::level_k(1, LevelZero::Maxmax);
  if (c.name == "L2") return ReasoningModel::level_k(2, LevelZero::Maxmax);
  if (c.name == "PNE") return ReasoningModel::nash();
  if (c.name == "Stack.") return ReasoningModel::stackelberg(r.focal == 0 ? 1 : 0);
  if (c.name == "Rule") return ReasoningModel::rule();
  if (c.name == "LkR") return ReasoningModel::lk_rule();
  throw InvalidArgument("unknown solution concept '" + c.name + "'");
}

enum class ParameterSource { Weighted, Satisficing, Baseline };

inline const char* to_string(ParameterSource s) {
  switch (s) {
    case ParameterSource::Weighted: return "weighted";
    case ParameterSource::Satisficing: return "satisficing";
    case ParameterSource::Baseline: return "baseline";
  }
  return "?";
}

inline constexpr std::array<ParameterSource, 3> kParameterSources{
    ParameterSource::Weighted, ParameterSource::Satisficing, ParameterSource::Baseline};

struct ExperimentConfig {
  std::size_t runs = 30;
  double split = 0.8;
  std::vector<std::string> concepts = known_concepts();
  std::uint64_t seed = 0;
  TreeParams tree;
};

struct AccuracyRow {
  std::string concept_name;
  ParameterSource source = ParameterSource::Baseline;
  std::size_t run = 0;
  double accuracy = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // test games the concept cannot apply to
};

struct AccuracySummary {
  std::string concept_name;
  ParameterSource source = ParameterSource::Baseline;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

struct ExperimentReport {
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::vector<AccuracyRow> rows;         // concept-major, then source, then run
  std::vector<AccuracySummary> summary;  // concept-major, then source
  std::vector<std::pair<RegressionTree, RegressionTree>> trees;  // (weighted, satisficing) per run

  const AccuracyRow& row(const std::string& concept_name, ParameterSource src, std::size_t run) const {
    for (const auto& r : rows) {
      if (r.concept_name == concept_name && r.source == src && r.run == run) return r;
    }
    throw InvalidArgument("no such report row");
  }
};

namespace detail {

// Per scenario: shuffle, put round(split * n) records in training (keeping at
// least one on each side when the scenario has two or more records).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<ObservationRecord>& dataset, double split, std::mt19937_64& rng) {
  std::map<std::string, std::vector<std::size_t>> by_scenario;
  for (std::size_t i = 0; i < dataset.size(); ++i) by_scenario[dataset[i].features.scenario].push_back(i);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (auto& [name, idx] : by_scenario) {
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(split * static_cast<double>(idx.size())));
    if (idx.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

}  // namespace detail

// Train/test evaluation of predicted aggregation parameters against the fixed
// w = [0.5, 0.5] baseline, repeated over `runs` random stratified splits.
inline ExperimentReport run_prediction_experiment(const std::vector<ObservationRecord>& dataset,
                                                  const ExperimentConfig& cfg) {
  if (dataset.empty()) throw InvalidArgument("prediction experiment needs a nonempty dataset");
  if (cfg.runs == 0) throw InvalidArgument("runs must be >= 1");
  if (!(cfg.split > 0.0 && cfg.split < 1.0)) throw InvalidArgument("split must be in (0,1)");
  std::vector<Concept> concepts;
  for (const auto& name : cfg.concepts) concepts.push_back(parse_concept(name));
  if (concepts.empty()) throw InvalidArgument("no solution concepts requested");
  for (const auto& r : dataset) {
    if (r.game.objective_count() != 2) {
      throw UnsupportedConfiguration("record '" + r.id + "' does not have exactly 2 objectives");
    }
  }

  // Estimates do not depend on the split: compute once. targets[agg][model][record]
  std::array<std::array<std::vector<std::optional<double>>, 3>, 2> targets;
  for (std::size_t a = 0; a < kAggregations.size(); ++a) {
    for (std::size_t m = 0; m < kEstimationModels.size(); ++m) {
      auto& col = targets[a][m];
      col.reserve(dataset.size());
      for (const auto& r : dataset) {
        col.push_back(estimate(r, kEstimationModels[m], kAggregations[a]).representative_value());
      }
    }
  }

  ExperimentReport report;
  report.runs = cfg.runs;
  report.seed = cfg.seed;
  // results[concept][source][run]
  std::vector<std::array<std::vector<AccuracyRow>, 3>> results(concepts.size());

  for (std::size_t run = 0; run < cfg.runs; ++run) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(run)};
    std::mt19937_64 rng(seq);
    auto [train, test] = detail::stratified_split(dataset, cfg.split, rng);

    std::array<std::optional<RegressionTree>, 2> trees;
    for (std::size_t a = 0; a < kAggregations.size(); ++a) {
      std::vector<FeatureRecord> x;
      std::vector<double> y;
      for (std::size_t i : train) {
        for (std::size_t m = 0; m < kEstimationModels.size(); ++m) {
          if (!targets[a][m][i]) continue;
          FeatureRecord f = dataset[i].features;
          f.model = to_string(kEstimationModels[m]);
          x.push_back(std::move(f));
          y.push_back(*targets[a][m][i]);
        }
      }
      if (!x.empty()) trees[a] = fit(x, y, cfg.tree);
    }
    report.trees.emplace_back(trees[0].value_or(RegressionTree{}), trees[1].value_or(RegressionTree{}));

    for (std::size_t c = 0; c < concepts.size(); ++c) {
      for (std::size_t s = 0; s < kParameterSources.size(); ++s) {
        const ParameterSource src = kParameterSources[s];
        AccuracyRow row{concepts[c].name, src, run, 0.0, 0, 0};
        std::size_t correct = 0;
        for (std::size_t i : test) {
          const auto& r = dataset[i];
          AggregationParameter param = WeightVector::from_safety(0.5);
          if (src != ParameterSource::Baseline) {
            const auto& tree = trees[src == ParameterSource::Weighted ? 0 : 1];
            FeatureRecord f = r.features;
            f.model = to_string(concepts[c].feature_model);
            if (src == ParameterSource::Weighted) {
              double ws = tree ? std::clamp(tree->predict(f), 0.0, 1.0) : 0.5;
              param = WeightVector::from_safety(ws);
            } else {
              double g = tree ? std::clamp(tree->predict(f), -1.0, 1.0) : 0.0;
              param = AspirationLevel(g);
            }
          }
          std::optional<StrategyProfile> predicted;
          try {
            predicted = solve(scalarize(r.game, param), concept_model(concepts[c], r));
          } catch (const UnsupportedConfiguration&) {
            ++row.skipped;
            continue;
          } catch (const InvalidConfiguration&) {
            ++row.skipped;
            continue;
          }
          ++row.evaluated;
          if (predicted && (*predicted)[r.focal] == r.observed[r.focal]) ++correct;
        }
        row.accuracy = row.evaluated == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(row.evaluated);
        results[c][s].push_back(row);
      }
    }
  }

  for (std::size_t c = 0; c < concepts.size(); ++c) {
    for (std::size_t s = 0; s < kParameterSources.size(); ++s) {
      const auto& rows = results[c][s];
      AccuracySummary sum{concepts[c].name, kParameterSources[s], 0.0, 0.0, 0, 0};
      for (const auto& r : rows) {
        sum.mean += r.accuracy;
        sum.evaluated += r.evaluated;
        sum.skipped += r.skipped;
      }
      sum.mean /= static_cast<double>(rows.size());
      if (rows.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rows) ss += (r.accuracy - sum.mean) * (r.accuracy - sum.mean);
        sum.sd = std::sqrt(ss / static_cast<double>(rows.size() - 1));
      }
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      report.summary.push_back(sum);
    }
  }
  return report;
}

// One row per (concept, source, run), then one "mean" row per (concept, source)
// carrying the mean accuracy and its standard deviation over runs.
inline void write_experiment_csv(std::ostream& out, const ExperimentReport& report) {
  out << "concept,source,run,accuracy,sd,evaluated,skipped\n";
  for (const auto& r : report.rows) {
    out << r.concept_name << ',' << to_string(r.source) << ',' << r.run << ',' << format_number(r.accuracy)
        << ",," << r.evaluated << ',' << r.skipped << '\n';
  }
  for (const auto& s : report.summary) {
    out << s.concept_name << ',' << to_string(s.source) << ",mean," << format_number(s.mean) << ','
        << format_number(s.sd) << ',' << s.evaluated << ',' << s.skipped << '\n';
  }
}

}  // namespace moagg
