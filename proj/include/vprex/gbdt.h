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

#ifndef VPREX_GBDT_H_
#define VPREX_GBDT_H_

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vprex::gbdt {

// Missing feature values are NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool IsMissing(double v) { return std::isnan(v); }

enum class Objective { kBinaryLogistic, kSoftmax };

std::string_view ObjectiveName(Objective objective);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  bool missing_left = false;
  int left = -1;
  int right = -1;
  double leaf = 0.0;

  bool IsLeaf() const { return feature < 0; }
};

// Goes left when value < threshold; missing follows missing_left.
struct Tree {
  std::vector<TreeNode> nodes;

  int LeafIndex(std::span<const double> row) const;
  double Predict(std::span<const double> row) const {
    return nodes[LeafIndex(row)].leaf;
  }
  int Depth() const;
};

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  double& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  void AppendRow(std::span<const double> row);

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// Additive tree ensemble. Trees are stored round-major: with K trees per
// round, trees[r * K + k] belongs to class k of round r. Binary logistic
// models have num_classes == 1 and one tree per round.
struct GbdtEnsemble {
  Objective objective = Objective::kBinaryLogistic;
  int num_classes = 1;
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<std::string> feature_names;
  std::vector<Tree> trees;

  int TreesPerRound() const {
    return objective == Objective::kSoftmax ? num_classes : 1;
  }
  int Rounds() const {
    return static_cast<int>(trees.size()) / TreesPerRound();
  }

  // Raw margins, one per tree group.
  std::vector<double> Margins(std::span<const double> row) const;

  // Binary: {1 - p, p}. Softmax: one probability per class. Throws
  // Error(kDimensionMismatch) if the row width differs from feature_names.
  std::vector<double> PredictProba(std::span<const double> row) const;

  // Positive-class probability of a binary model.
  double PredictPositive(std::span<const double> row) const {
    return PredictProba(row)[1];
  }
};

double Sigmoid(double margin);
std::vector<double> Softmax(std::span<const double> margins);

// Versioned JSON with full-precision numbers. LoadModel throws
// Error(kUnsupportedVersion) or Error(kMalformedModel).
inline constexpr char kModelVersion[] = "1";
std::string SaveModel(const GbdtEnsemble& model);
GbdtEnsemble LoadModel(std::string_view json_text);

// Rejects a model whose feature list differs from `expected`.
void CheckFeatureSchema(const GbdtEnsemble& model,
                        const std::vector<std::string>& expected);

}  // namespace vprex::gbdt

#endif  // VPREX_GBDT_H_
