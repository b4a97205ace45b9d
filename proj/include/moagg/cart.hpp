#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "moagg/errors.hpp"

namespace moagg {

// Situational features of one observation.
struct FeatureRecord {
  double velocity = 0.0;  // m/s
  std::string scenario;   // intersection | roundabout | crosswalk
  std::string task;       // left-turn, right-turn, ...
  std::string model;      // reasoning-model tag the target was estimated under
};

enum class Feature : int { Velocity = 0, Scenario = 1, Task = 2, Model = 3 };

inline const char* feature_name(Feature f) {
  switch (f) {
    case Feature::Velocity: return "velocity";
    case Feature::Scenario: return "scenario";
    case Feature::Task: return "task";
    case Feature::Model: return "model";
  }
  return "?";
}

inline Feature feature_from_name(const std::string& name) {
  for (Feature f : {Feature::Velocity, Feature::Scenario, Feature::Task, Feature::Model}) {
    if (name == feature_name(f)) return f;
  }
  throw InvalidArgument("unknown feature '" + name + "'");
}

inline const std::string& categorical_value(const FeatureRecord& r, Feature f) {
  switch (f) {
    case Feature::Scenario: return r.scenario;
    case Feature::Task: return r.task;
    case Feature::Model: return r.model;
    default: throw InvalidArgument("velocity is not categorical");
  }
}

struct TreeParams {
  int max_depth = 6;
  std::size_t min_leaf = 5;
  // Categorical features with at most this many levels at a node get
  // exhaustive subset splits; wider ones get one-vs-rest splits.
  std::size_t max_subset_levels = 8;
};

struct TreeNode {
  int parent = -1;
  int left = -1;
  int right = -1;
  int depth = 0;
  double value = 0.0;      // mean training target of the samples that reached the node
  std::size_t count = 0;
  Feature feature = Feature::Velocity;
  double threshold = 0.0;  // velocity <= threshold goes left
  std::vector<std::string> left_categories;
  std::vector<std::string> right_categories;
  bool unseen_left = true;  // categories not seen at this node follow the larger branch

  bool is_leaf() const { return left < 0; }
};

class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(std::vector<TreeNode> nodes, TreeParams params)
      : nodes_(std::move(nodes)), params_(params) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeParams& params() const { return params_; }

  const TreeNode& leaf_for(const FeatureRecord& r) const {
    if (nodes_.empty()) throw InvalidArgument("tree has no nodes");
    const TreeNode* node = &nodes_.front();
    while (!node->is_leaf()) {
      bool go_left;
      if (node->feature == Feature::Velocity) {
        go_left = r.velocity <= node->threshold;
      } else {
        const auto& v = categorical_value(r, node->feature);
        if (std::binary_search(node->left_categories.begin(), node->left_categories.end(), v)) {
          go_left = true;
        } else if (std::binary_search(node->right_categories.begin(),
                                      node->right_categories.end(), v)) {
          go_left = false;
        } else {
          go_left = node->unseen_left;
        }
      }
      node = &nodes_[static_cast<std::size_t>(go_left ? node->left : node->right)];
    }
    return *node;
  }

  double predict(const FeatureRecord& r) const { return leaf_for(r).value; }

  int depth() const {
    int d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
  }

 private:
  std::vector<TreeNode> nodes_;
  TreeParams params_;
};

namespace detail {

// Mean that is exact when all values are equal.
inline double stable_mean(const std::vector<double>& targets, const std::vector<std::size_t>& idx) {
  double first = targets[idx.front()];
  double acc = 0.0;
  for (std::size_t i : idx) acc += targets[i] - first;
  return first + acc / static_cast<double>(idx.size());
}

struct SplitCandidate {
  double gain = 0.0;
  Feature feature = Feature::Velocity;
  double threshold = 0.0;
  std::vector<std::string> left_categories;
  std::vector<std::string> right_categories;
};

class TreeBuilder {
 public:
  static constexpr double kMinGain = 1e-12;

  TreeBuilder(const std::vector<FeatureRecord>& records, const std::vector<double>& targets,
              TreeParams params)
      : records_(records), targets_(targets), params_(params) {
    params_.min_leaf = std::max<std::size_t>(1, params_.min_leaf);
  }

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(records_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(std::move(all), -1, 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t> idx, int parent, int depth) {
    const int id = static_cast<int>(nodes_.size());
    TreeNode node;
    node.parent = parent;
    node.depth = depth;
    node.count = idx.size();
    node.value = stable_mean(targets_, idx);
    nodes_.push_back(node);

    if (depth >= params_.max_depth || idx.size() < 2 * params_.min_leaf) {
      return id;
    }
    std::vector<double> centered(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) centered[k] = targets_[idx[k]] - node.value;
    double parent_sse = 0.0;
    for (double c : centered) parent_sse += c * c;
    if (parent_sse <= 0.0) return id;
    SplitCandidate best;
    best.gain = std::max(kMinGain, kMinGain * parent_sse);
    bool found = false;

    found |= numeric_split(idx, centered, parent_sse, best);
    for (Feature f : {Feature::Scenario, Feature::Task, Feature::Model}) {
      found |= categorical_split(idx, centered, parent_sse, f, best);
    }
    if (!found) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t j : idx) {
      const auto& r = records_[j];
      bool go_left = best.feature == Feature::Velocity
                         ? r.velocity <= best.threshold
                         : std::binary_search(best.left_categories.begin(),
                                              best.left_categories.end(),
                                              categorical_value(r, best.feature));
      (go_left ? left : right).push_back(j);
    }
    {
      TreeNode& n = nodes_[static_cast<std::size_t>(id)];
      n.feature = best.feature;
      n.threshold = best.threshold;
      n.left_categories = std::move(best.left_categories);
      n.right_categories = std::move(best.right_categories);
      n.unseen_left = left.size() >= right.size();
    }
    int l = grow(std::move(left), id, depth + 1);
    int r = grow(std::move(right), id, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  static double sse(double sum, double sumsq, std::size_t n) {
    return std::max(0.0, sumsq - sum * sum / static_cast<double>(n));
  }

  bool numeric_split(const std::vector<std::size_t>& idx, const std::vector<double>& centered,
                     double parent_sse, SplitCandidate& best) const {
    std::vector<std::size_t> order(idx.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return records_[idx[a]].velocity < records_[idx[b]].velocity;
    });
    double total = 0.0;
    double total_sq = 0.0;
    for (double c : centered) {
      total += c;
      total_sq += c * c;
    }
    double sum = 0.0;
    double sumsq = 0.0;
    bool found = false;
    const std::size_t n = idx.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double c = centered[order[k]];
      sum += c;
      sumsq += c * c;
      double v = records_[idx[order[k]]].velocity;
      double next = records_[idx[order[k + 1]]].velocity;
      if (v == next) continue;
      std::size_t nl = k + 1;
      std::size_t nr = n - nl;
      if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
      double gain = parent_sse - sse(sum, sumsq, nl) - sse(total - sum, total_sq - sumsq, nr);
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = Feature::Velocity;
        best.threshold = v + 0.5 * (next - v);
        if (best.threshold >= next) best.threshold = v;
        best.left_categories.clear();
        best.right_categories.clear();
        found = true;
      }
    }
    return found;
  }

  bool categorical_split(const std::vector<std::size_t>& idx, const std::vector<double>& centered,
                         double parent_sse, Feature f, SplitCandidate& best) const {
    struct Level {
      double sum = 0.0;
      double sumsq = 0.0;
      std::size_t n = 0;
    };
    std::map<std::string, Level> levels;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto& lv = levels[categorical_value(records_[idx[k]], f)];
      lv.sum += centered[k];
      lv.sumsq += centered[k] * centered[k];
      ++lv.n;
    }
    if (levels.size() < 2) return false;
    std::vector<std::string> names;
    std::vector<Level> stats;
    for (auto& [name, lv] : levels) {
      names.push_back(name);
      stats.push_back(lv);
    }
    const std::size_t k = names.size();

    bool found = false;
    auto consider = [&](const std::vector<bool>& in_left) {
      Level l;
      Level r;
      for (std::size_t c = 0; c < k; ++c) {
        Level& dst = in_left[c] ? l : r;
        dst.sum += stats[c].sum;
        dst.sumsq += stats[c].sumsq;
        dst.n += stats[c].n;
      }
      if (l.n < params_.min_leaf || r.n < params_.min_leaf) return;
      double gain = parent_sse - sse(l.sum, l.sumsq, l.n) - sse(r.sum, r.sumsq, r.n);
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = f;
        best.threshold = 0.0;
        best.left_categories.clear();
        best.right_categories.clear();
        for (std::size_t c = 0; c < k; ++c) {
          (in_left[c] ? best.left_categories : best.right_categories).push_back(names[c]);
        }
        found = true;
      }
    };

    std::vector<bool> in_left(k, false);
    if (k <= params_.max_subset_levels) {
      // Each bipartition once: the last level always stays right.
      const std::uint32_t limit = 1u << (k - 1);
      for (std::uint32_t mask = 1; mask < limit; ++mask) {
        for (std::size_t c = 0; c < k; ++c) in_left[c] = c + 1 < k && ((mask >> c) & 1u);
        consider(in_left);
      }
    } else {
      for (std::size_t c = 0; c < k; ++c) {
        std::fill(in_left.begin(), in_left.end(), false);
        in_left[c] = true;
        consider(in_left);
      }
    }
    return found;
  }

  const std::vector<FeatureRecord>& records_;
  const std::vector<double>& targets_;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

}  // namespace detail

// Greedy top-down CART growth on squared error. Deterministic: candidate splits
// are scanned in a fixed order and only strict improvements replace the best.
inline RegressionTree fit(const std::vector<FeatureRecord>& records,
                          const std::vector<double>& targets, const TreeParams& params = {}) {
  if (records.empty()) throw InvalidArgument("cannot fit a tree on an empty training set");
  if (records.size() != targets.size()) throw InvalidArgument("records and targets differ in size");
  for (double t : targets) {
    if (!std::isfinite(t)) throw InvalidArgument("training targets must be finite");
  }
  if (params.max_depth < 0) throw InvalidArgument("max_depth must be >= 0");
  if (params.max_subset_levels > 20) throw InvalidArgument("max_subset_levels too large");
  detail::TreeBuilder builder(records, targets, params);
  return RegressionTree(builder.build(), params);
}

inline double predict(const RegressionTree& tree, const FeatureRecord& record) {
  return tree.predict(record);
}

// JSON form: {"params": {...}, "nodes": [{id, parent, depth, ...}, ...]} with
// nodes in creation (pre-order) order; node 0 is the root.
inline nlohmann::json tree_to_json(const RegressionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& n = tree.nodes()[i];
    nlohmann::json j;
    j["id"] = i;
    j["parent"] = n.parent;
    j["depth"] = n.depth;
    j["value"] = n.value;
    j["count"] = n.count;
    j["leaf"] = n.is_leaf();
    if (!n.is_leaf()) {
      j["feature"] = feature_name(n.feature);
      if (n.feature == Feature::Velocity) {
        j["threshold"] = n.threshold;
      } else {
        j["left_categories"] = n.left_categories;
        j["right_categories"] = n.right_categories;
        j["unseen_left"] = n.unseen_left;
      }
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  return {{"params",
           {{"max_depth", tree.params().max_depth},
            {"min_leaf", tree.params().min_leaf},
            {"max_subset_levels", tree.params().max_subset_levels}}},
          {"nodes", std::move(nodes)}};
}

inline RegressionTree tree_from_json(const nlohmann::json& j) {
  TreeParams params;
  params.max_depth = j.at("params").at("max_depth").get<int>();
  params.min_leaf = j.at("params").at("min_leaf").get<std::size_t>();
  params.max_subset_levels = j.at("params").at("max_subset_levels").get<std::size_t>();
  std::vector<TreeNode> nodes;
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    n.parent = jn.at("parent").get<int>();
    n.depth = jn.at("depth").get<int>();
    n.value = jn.at("value").get<double>();
    n.count = jn.at("count").get<std::size_t>();
    if (!jn.at("leaf").get<bool>()) {
      n.feature = feature_from_name(jn.at("feature").get<std::string>());
      if (n.feature == Feature::Velocity) {
        n.threshold = jn.at("threshold").get<double>();
      } else {
        n.left_categories = jn.at("left_categories").get<std::vector<std::string>>();
        n.right_categories = jn.at("right_categories").get<std::vector<std::string>>();
        n.unseen_left = jn.at("unseen_left").get<bool>();
      }
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    }
    nodes.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) continue;
    auto bad = [&](int c) { return c <= static_cast<int>(i) || c >= static_cast<int>(nodes.size()); };
    if (bad(n.left) || bad(n.right)) throw InvalidArgument("tree JSON has invalid child links");
  }
  return RegressionTree(std::move(nodes), params);
}

}  // namespace moagg
