/*
 * Copyright 2026 The vprex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vprex/gbdt.h"

#include <algorithm>

#include "json.hpp"
#include "vprex/error.h"

namespace vprex::gbdt {
namespace {

using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void Malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedModel, why);
}

}  // namespace

std::string_view ObjectiveName(Objective objective) {
  return objective == Objective::kSoftmax ? "softmax" : "binary-logistic";
}

int Tree::LeafIndex(std::span<const double> row) const {
  int i = 0;
  while (!nodes[i].IsLeaf()) {
    const TreeNode& n = nodes[i];
    const double v = row[n.feature];
    if (IsMissing(v)) {
      i = n.missing_left ? n.left : n.right;
    } else {
      i = v < n.threshold ? n.left : n.right;
    }
  }
  return i;
}

int Tree::Depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].IsLeaf()) continue;
    depth[nodes[i].left] = depth[i] + 1;
    depth[nodes[i].right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

void FeatureMatrix::AppendRow(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row has " + std::to_string(row.size()) + " columns, expected " +
                    std::to_string(cols_));
  }
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

double Sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

std::vector<double> Softmax(std::span<const double> margins) {
  std::vector<double> p(margins.begin(), margins.end());
  const double max = *std::max_element(p.begin(), p.end());
  double sum = 0;
  for (double& v : p) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> GbdtEnsemble::Margins(std::span<const double> row) const {
  const int k = TreesPerRound();
  std::vector<double> margins(k, base_score);
  for (size_t t = 0; t < trees.size(); ++t) {
    margins[t % k] += trees[t].Predict(row);
  }
  return margins;
}

std::vector<double> GbdtEnsemble::PredictProba(std::span<const double> row) const {
  if (row.size() != feature_names.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row has " + std::to_string(row.size()) + " features, model has " +
                    std::to_string(feature_names.size()));
  }
  const std::vector<double> margins = Margins(row);
  if (objective == Objective::kBinaryLogistic) {
    const double p = Sigmoid(margins[0]);
    return {1.0 - p, p};
  }
  return Softmax(margins);
}

std::string SaveModel(const GbdtEnsemble& model) {
  OrderedJson out;
  out["version"] = kModelVersion;
  out["objective"] = ObjectiveName(model.objective);
  out["numClasses"] = model.num_classes;
  out["baseScore"] = model.base_score;
  out["learningRate"] = model.learning_rate;
  out["featureNames"] = model.feature_names;
  OrderedJson trees = OrderedJson::array();
  for (const Tree& tree : model.trees) {
    OrderedJson nodes = OrderedJson::array();
    for (const TreeNode& n : tree.nodes) {
      OrderedJson j;
      if (n.IsLeaf()) {
        j["leaf"] = n.leaf;
      } else {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["missingLeft"] = n.missing_left;
        j["left"] = n.left;
        j["right"] = n.right;
      }
      nodes.push_back(std::move(j));
    }
    OrderedJson t;
    t["nodes"] = std::move(nodes);
    trees.push_back(std::move(t));
  }
  out["trees"] = std::move(trees);
  return out.dump();
}

GbdtEnsemble LoadModel(std::string_view json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Malformed(e.what());
  }
  if (!root.is_object()) Malformed("top level is not an object");
  if (!root.contains("version") || !root["version"].is_string()) {
    Malformed("missing version");
  }
  if (root["version"].get<std::string>() != kModelVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, root["version"].get<std::string>());
  }
  GbdtEnsemble model;
  try {
    const std::string objective = root.at("objective").get<std::string>();
    if (objective == "binary-logistic") {
      model.objective = Objective::kBinaryLogistic;
    } else if (objective == "softmax") {
      model.objective = Objective::kSoftmax;
    } else {
      Malformed("unknown objective " + objective);
    }
    model.num_classes = root.at("numClasses").get<int>();
    model.base_score = root.at("baseScore").get<double>();
    model.learning_rate = root.at("learningRate").get<double>();
    model.feature_names = root.at("featureNames").get<std::vector<std::string>>();
    for (const auto& t : root.at("trees")) {
      Tree tree;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        if (n.contains("leaf")) {
          node.leaf = n.at("leaf").get<double>();
        } else {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.missing_left = n.at("missingLeft").get<bool>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
        }
        tree.nodes.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    Malformed(e.what());
  }

  if (model.num_classes < 1) Malformed("numClasses < 1");
  if (model.objective == Objective::kBinaryLogistic && model.num_classes != 1) {
    Malformed("binary-logistic requires numClasses 1");
  }
  if (model.trees.size() % model.TreesPerRound() != 0) {
    Malformed("tree count is not a multiple of numClasses");
  }
  const int num_features = static_cast<int>(model.feature_names.size());
  for (const Tree& tree : model.trees) {
    if (tree.nodes.empty()) Malformed("empty tree");
    const int n = static_cast<int>(tree.nodes.size());
    for (int i = 0; i < n; ++i) {
      const TreeNode& node = tree.nodes[i];
      if (node.IsLeaf()) {
        if (!std::isfinite(node.leaf)) Malformed("non-finite leaf");
        continue;
      }
      if (node.feature >= num_features) Malformed("feature index out of range");
      // Children follow their parent, which also rules out cycles.
      if (node.left <= i || node.left >= n || node.right <= i || node.right >= n) {
        Malformed("child reference out of range");
      }
    }
  }
  return model;
}

void CheckFeatureSchema(const GbdtEnsemble& model,
                        const std::vector<std::string>& expected) {
  if (model.feature_names != expected) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model features do not match the featurizer (" +
                    std::to_string(model.feature_names.size()) + " vs " +
                    std::to_string(expected.size()) + ")");
  }
}

}  // namespace vprex::gbdt
