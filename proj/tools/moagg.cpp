#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moagg/moagg.hpp"

namespace {

// Validation problems in user input (bad dataset, bad flag value) exit with 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::vector<double> parse_edges(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw UsageError("bad bin edge '" + part + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::vector<moagg::ObservationRecord> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return moagg::read_dataset(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregation-parameter estimation for multi-objective games"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string model = "nash";
  std::string aggregation = "satisficing";
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "check a dataset file");
  validate->add_option("--input", input)->required();

  moagg::SyntheticConfig gen;
  std::string law = "const:0";
  auto* generate = app.add_subcommand("generate", "write a synthetic dataset");
  generate->add_option("--n", gen.n_games)->required();
  generate->add_option("--players", gen.players)->capture_default_str();
  generate->add_option("--actions", gen.actions_per_player)->capture_default_str();
  generate->add_option("--model", model)->capture_default_str();
  generate->add_option("--aggregation", aggregation)->capture_default_str();
  generate->add_option("--law", law, "const:<c> or linear:<intercept>,<slope> in velocity")
      ->capture_default_str();
  generate->add_option("--seed", seed)->required();
  generate->add_option("--output", output)->required();

  auto* estimate = app.add_subcommand("estimate", "rationalisable parameter set per record");
  estimate->add_option("--input", input)->required();
  estimate->add_option("--model", model)->required();
  estimate->add_option("--aggregation", aggregation)->required();
  estimate->add_option("--output", output)->required();

  auto* passrate = app.add_subcommand("passrate", "pass rate per model, scenario and aggregation");
  passrate->add_option("--input", input)->required();
  passrate->add_option("--output", output)->required();

  moagg::ExperimentConfig exp;
  std::string concepts;
  std::string trees_path;
  auto* experiment = app.add_subcommand("experiment", "parameter prediction accuracy vs baseline");
  experiment->add_option("--input", input)->required();
  experiment->add_option("--runs", exp.runs)->capture_default_str();
  experiment->add_option("--split", exp.split)->capture_default_str();
  experiment->add_option("--concepts", concepts, "comma-separated, default all");
  experiment->add_option("--seed", seed)->required();
  experiment->add_option("--max-depth", exp.tree.max_depth)->capture_default_str();
  experiment->add_option("--min-leaf", exp.tree.min_leaf)->capture_default_str();
  experiment->add_option("--trees", trees_path, "write the fitted trees of every run as JSON lines");
  experiment->add_option("--output", output)->required();

  std::string estimates_path;
  std::string bins;
  std::size_t min_count = 5;
  auto* summary = app.add_subcommand("summary", "median/mean parameter per scenario, model and velocity bin");
  summary->add_option("--input", input)->required();
  summary->add_option("--estimates", estimates_path)->required();
  summary->add_option("--bins", bins, "comma-separated velocity edges")->required();
  summary->add_option("--min-count", min_count)->capture_default_str();
  summary->add_option("--output", output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      auto data = load(input);
      std::cout << data.size() << " records ok\n";
    } else if (*generate) {
      gen.true_model = moagg::parse_estimation_model(model);
      gen.aggregation = moagg::parse_aggregation(aggregation);
      gen.law = moagg::ParameterLaw::parse(law);
      gen.seed = seed;
      auto data = moagg::generate_synthetic(gen);
      auto out = open_output(output);
      moagg::write_dataset(out, data);
    } else if (*estimate) {
      auto m = moagg::parse_estimation_model(model);
      auto a = moagg::parse_aggregation(aggregation);
      auto data = load(input);
      auto out = open_output(output);
      moagg::write_estimates(out, data, m, a);
    } else if (*passrate) {
      auto data = load(input);
      auto out = open_output(output);
      moagg::write_pass_rate_csv(out, data);
    } else if (*experiment) {
      if (!concepts.empty()) exp.concepts = split_list(concepts);
      exp.seed = seed;
      auto data = load(input);
      auto report = moagg::run_prediction_experiment(data, exp);
      auto out = open_output(output);
      moagg::write_experiment_csv(out, report);
      if (!trees_path.empty()) {
        auto tout = open_output(trees_path);
        for (std::size_t run = 0; run < report.trees.size(); ++run) {
          nlohmann::json j{{"run", run},
                           {"weighted", moagg::tree_to_json(report.trees[run].first)},
                           {"satisficing", moagg::tree_to_json(report.trees[run].second)}};
          tout << j.dump() << '\n';
        }
      }
    } else if (*summary) {
      auto data = load(input);
      std::ifstream ein(estimates_path);
      if (!ein) throw UsageError("cannot open '" + estimates_path + "'");
      auto est = moagg::read_estimates(ein);
      auto rows = moagg::stratified_summary(data, est, parse_edges(bins), min_count);
      auto out = open_output(output);
      moagg::write_summary_csv(out, rows);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const moagg::DatasetError& e) {
    std::cerr << "error: " << input << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
