#include <gtest/gtest.h>

#include <sstream>

#include "moagg/evaluation.hpp"
#include "moagg/synthetic.hpp"

using namespace moagg;

namespace {

std::vector<ObservationRecord> synthetic(EstimationModel model, Aggregation agg, const std::string& law,
                                         std::size_t n, std::uint64_t seed, std::size_t players = 2) {
  SyntheticConfig cfg;
  cfg.n_games = n;
  cfg.players = players;
  cfg.actions_per_player = 2;
  cfg.true_model = model;
  cfg.aggregation = agg;
  cfg.law = ParameterLaw::parse(law);
  cfg.seed = seed;
  return generate_synthetic(cfg);
}

std::string dump(const std::vector<ObservationRecord>& d) {
  std::ostringstream out;
  write_dataset(out, d);
  return out.str();
}

// Focal player's first action is worse than the second in both objectives.
ObservationRecord dominated(const std::string& id, const std::string& scenario) {
  auto g = MultiObjectiveGame::with_counts({2, 1});
  g.set_payoff(0, {0, 0}, {-0.5, -0.5});
  g.set_payoff(0, {1, 0}, {0.5, 0.5});
  g.set_payoff(1, {0, 0}, {0.0, 0.0});
  g.set_payoff(1, {1, 0}, {0.0, 0.0});
  return {id, std::move(g), 0, {0, 0}, {1.0, scenario, "enter", ""}, std::nullopt};
}

}  // namespace

TEST(ParameterLaw, Parsing) {
  auto l = ParameterLaw::parse("linear:0.9,-0.12");
  EXPECT_NEAR(l(5.0, Aggregation::Satisficing), 0.3, 1e-12);
  EXPECT_EQ(l(20.0, Aggregation::Satisficing), -1.0);
  EXPECT_EQ(l(20.0, Aggregation::Weighted), 0.0);
  EXPECT_EQ(ParameterLaw::parse("const:0.25")(7.0, Aggregation::Weighted), 0.25);
  EXPECT_THROW(ParameterLaw::parse("linear:1"), InvalidArgument);
  EXPECT_THROW(ParameterLaw::parse("const:x"), InvalidArgument);
  EXPECT_THROW(ParameterLaw::parse("cubic:1"), InvalidArgument);
}

TEST(Generate, DeterministicPerSeed) {
  auto a = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "linear:0.9,-0.12", 100, 3);
  auto b = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "linear:0.9,-0.12", 100, 3);
  auto c = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "linear:0.9,-0.12", 100, 4);
  EXPECT_EQ(dump(a), dump(b));
  EXPECT_NE(dump(a), dump(c));
}

TEST(Generate, ConstantLawTruth) {
  for (const auto& r : synthetic(EstimationModel::Maxmin, Aggregation::Satisficing, "const:0.0", 40, 1)) {
    EXPECT_EQ(r.truth->parameter, 0.0);
    EXPECT_TRUE(validate_game(r.game).empty());
  }
}

TEST(Generate, MaxmaxObservationIsRationalisableAtTruth) {
  for (const auto& r : synthetic(EstimationModel::Maxmax, Aggregation::Satisficing, "linear:0.9,-0.12", 100, 2, 3)) {
    EXPECT_TRUE(is_rationalisable(r.game, 0, r.observed[0], AspirationLevel(r.truth->parameter),
                                  NonStrategicMode::Maxmax));
  }
}

TEST(Generate, NashObservationIsEquilibrium) {
  for (const auto& r : synthetic(EstimationModel::Nash, Aggregation::Weighted, "const:0.7", 50, 8, 3)) {
    auto s = scalarize(r.game, AggregationParameter{WeightVector::from_safety(0.7)});
    for (PlayerIndex p = 0; p < 3; ++p) EXPECT_TRUE(is_best_response(s, p, s.space().index_of(r.observed)));
  }
}

TEST(PassRate, GeneratingModelPassesEverywhere) {
  for (auto model : kEstimationModels) {
    for (auto agg : kAggregations) {
      auto d = synthetic(model, agg, agg == Aggregation::Weighted ? "linear:1,-0.07" : "linear:0.9,-0.12", 120, 21);
      for (const auto& [scenario, c] : compute_pass_rate(d, model, agg)) {
        EXPECT_EQ(c.passed, c.total) << scenario;
        EXPECT_EQ(c.rate(), 1.0);
      }
    }
  }
}

TEST(PassRate, DominatedObservationsFailAndMixHalves) {
  std::vector<ObservationRecord> d{dominated("x", "roundabout"), dominated("y", "roundabout")};
  EXPECT_EQ(compute_pass_rate(d, EstimationModel::Nash, Aggregation::Weighted)["roundabout"].rate(), 0.0);
  auto good = dominated("z", "roundabout");
  good.observed = {1, 0};
  auto good2 = good;
  good2.id = "w";
  d.push_back(good);
  d.push_back(good2);
  auto rates = compute_pass_rate(d, EstimationModel::Nash, Aggregation::Weighted);
  EXPECT_EQ(rates["roundabout"].total, 4u);
  EXPECT_EQ(rates["roundabout"].rate(), 0.5);
}

TEST(PassRate, CsvShape) {
  std::vector<ObservationRecord> d{dominated("x", "roundabout"), dominated("y", "crosswalk"),
                                   dominated("z", "harbour")};
  d[1].observed = {1, 0};
  std::ostringstream out;
  write_pass_rate_csv(out, d);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "model,roundabout:weighted,roundabout:satisficing,crosswalk:weighted,crosswalk:satisficing,"
            "harbour:weighted,harbour:satisficing");
  std::string nash;
  std::getline(lines, nash);
  EXPECT_EQ(nash, "nash,0.000000,0.000000,1.000000,1.000000,0.000000,0.000000");
}

TEST(Estimate, ThreeObjectiveRecords) {
  auto g = MultiObjectiveGame({{"a", "b"}}, {"safety", "progress", "comfort"});
  g.set_payoff(0, {0}, {0.2, 0.2, 0.2});
  g.set_payoff(0, {1}, {0.1, 0.1, 0.1});
  ObservationRecord r{"t", g, 0, {0}, {1.0, "crosswalk", "enter", ""}, std::nullopt};
  auto sat = estimate(r, EstimationModel::Nash, Aggregation::Satisficing);
  EXPECT_FALSE(sat.supported);
  auto w = estimate(r, EstimationModel::Maxmax, Aggregation::Weighted);
  EXPECT_TRUE(w.approximate);
  EXPECT_FALSE(w.empty());
  auto rates = compute_pass_rate({r}, EstimationModel::Nash, Aggregation::Satisficing);
  EXPECT_TRUE(rates.empty());
}

TEST(Estimate, JsonLinesRoundTrip) {
  auto d = synthetic(EstimationModel::Maxmax, Aggregation::Satisficing, "linear:0.9,-0.12", 20, 6);
  std::stringstream io;
  write_estimates(io, d, EstimationModel::Maxmax, Aggregation::Satisficing);
  auto first = nlohmann::json::parse(io.str().substr(0, io.str().find('\n')));
  EXPECT_EQ(first["id"], d[0].id);
  ASSERT_TRUE(first["set"].is_array());
  EXPECT_EQ(first["set"][0].size(), 4u);
  auto rows = read_estimates(io);
  ASSERT_EQ(rows.size(), d.size());
  auto e = estimate(d[3], EstimationModel::Maxmax, Aggregation::Satisficing);
  EXPECT_EQ(rows[3].representative, e.representative_value());
}

TEST(Summary, MedianMeanAndFlags) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "const:0", 8, 1);
  for (auto& r : d) r.features.scenario = "roundabout";
  d[0].features.velocity = 1.0;
  d[1].features.velocity = 2.0;
  for (std::size_t i = 2; i < d.size(); ++i) d[i].features.velocity = 12.0;
  std::vector<EstimateRow> est;
  const std::vector<double> values{0.2, 0.4, 0.1, 0.1, 0.1, 0.3, 0.5, 0.9};
  for (std::size_t i = 0; i < d.size(); ++i) {
    est.push_back({d[i].id, EstimationModel::Maxmax, Aggregation::Satisficing, values[i]});
  }
  auto rows = stratified_summary(d, est, {5.0, 10.0}, 5);
  ASSERT_EQ(rows.size(), 2u);  // the [5,10) bin is empty
  EXPECT_EQ(rows[0].velocity_bin, "(-inf,5)");
  EXPECT_EQ(rows[0].count, 2u);
  EXPECT_NEAR(rows[0].median, 0.3, 1e-12);
  EXPECT_TRUE(rows[0].insufficient);
  EXPECT_EQ(rows[1].velocity_bin, "[10,inf)");
  EXPECT_EQ(rows[1].count, 6u);
  EXPECT_NEAR(rows[1].median, 0.2, 1e-12);
  EXPECT_NEAR(rows[1].mean, 2.0 / 6.0, 1e-12);
  EXPECT_FALSE(rows[1].insufficient);

  std::ostringstream out;
  write_summary_csv(out, rows);
  EXPECT_NE(out.str().find("roundabout,maxmax,satisficing,\"(-inf,5)\",2,0.300000,0.300000,insufficient"),
            std::string::npos);
  est.push_back({"missing", EstimationModel::Nash, Aggregation::Weighted, 0.5});
  EXPECT_THROW(stratified_summary(d, est, {}), InvalidArgument);
}

TEST(Experiment, ReportShapeAndRanges) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "linear:0.9,-0.12", 150, 17);
  ExperimentConfig cfg;
  cfg.runs = 3;
  cfg.seed = 5;
  auto rep = run_prediction_experiment(d, cfg);
  EXPECT_EQ(rep.rows.size(), known_concepts().size() * 3 * cfg.runs);
  EXPECT_EQ(rep.summary.size(), known_concepts().size() * 3);
  EXPECT_EQ(rep.runs, 3u);
  for (const auto& r : rep.rows) {
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    EXPECT_EQ(r.skipped, 0u);
    EXPECT_GT(r.evaluated, 0u);
  }
  std::ostringstream out;
  write_experiment_csv(out, rep);
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  EXPECT_EQ(lines, 1 + rep.rows.size() + rep.summary.size());
}

TEST(Experiment, DeterministicForSeed) {
  auto d = synthetic(EstimationModel::Maxmax, Aggregation::Satisficing, "linear:0.9,-0.12", 120, 2);
  ExperimentConfig cfg;
  cfg.runs = 1;
  cfg.seed = 11;
  std::ostringstream a;
  std::ostringstream b;
  write_experiment_csv(a, run_prediction_experiment(d, cfg));
  write_experiment_csv(b, run_prediction_experiment(d, cfg));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, RuleFollowersArePredictedExactly) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Weighted, "const:0.5", 80, 4);
  for (auto& r : d) r.observed[r.focal] = *r.game.rule_action(r.focal);
  ExperimentConfig cfg;
  cfg.runs = 2;
  cfg.concepts = {"Rule"};
  auto rep = run_prediction_experiment(d, cfg);
  for (const auto& r : rep.rows) EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Experiment, StackelbergSkipsNonTwoPlayerGames) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "const:0.2", 60, 9, 3);
  ExperimentConfig cfg;
  cfg.runs = 2;
  cfg.concepts = {"Stack", "PNE"};
  auto rep = run_prediction_experiment(d, cfg);
  for (const auto& r : rep.rows) {
    if (r.concept_name == "Stack.") {
      EXPECT_EQ(r.evaluated, 0u);
      EXPECT_GT(r.skipped, 0u);
    } else {
      EXPECT_EQ(r.skipped, 0u);
    }
  }
}

TEST(Experiment, MaxmaxVelocityLawBeatsBaselineForLevelZero) {
  auto d = synthetic(EstimationModel::Maxmax, Aggregation::Satisficing, "linear:0.9,-0.12", 1000, 31);
  ExperimentConfig cfg;
  cfg.concepts = {"L0:MX"};
  cfg.seed = 8;
  auto rep = run_prediction_experiment(d, cfg);
  std::size_t wins = 0;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    wins += rep.row("L0:MX", ParameterSource::Satisficing, run).accuracy >=
            rep.row("L0:MX", ParameterSource::Baseline, run).accuracy;
  }
  EXPECT_GE(wins, 25u);
}

TEST(Experiment, RejectsBadConfig) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "const:0.2", 10, 1);
  ExperimentConfig cfg;
  cfg.concepts = {"QRE"};
  EXPECT_THROW(run_prediction_experiment(d, cfg), InvalidArgument);
  cfg = {};
  cfg.split = 1.0;
  EXPECT_THROW(run_prediction_experiment(d, cfg), InvalidArgument);
  EXPECT_THROW(run_prediction_experiment({}, ExperimentConfig{}), InvalidArgument);
}

TEST(Experiment, StratifiedSplitKeepsEveryScenarioOnBothSides) {
  auto d = synthetic(EstimationModel::Nash, Aggregation::Satisficing, "const:0.2", 60, 12);
  std::mt19937_64 rng(1);
  auto [train, test] = detail::stratified_split(d, 0.8, rng);
  EXPECT_EQ(train.size() + test.size(), d.size());
  for (const auto& s : scenario_vocabulary()) {
    auto has = [&](const std::vector<std::size_t>& idx) {
      return std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return d[i].features.scenario == s; });
    };
    EXPECT_TRUE(has(train)) << s;
    EXPECT_TRUE(has(test)) << s;
  }
}
