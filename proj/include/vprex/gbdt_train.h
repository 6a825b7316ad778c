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

#ifndef VPREX_GBDT_TRAIN_H_
#define VPREX_GBDT_TRAIN_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vprex/gbdt.h"

namespace vprex::gbdt {

struct TrainConfig {
  int rounds = 200;
  int max_depth = 6;
  double learning_rate = 0.1;
  double lambda_l2 = 1.0;
  double gamma = 0.0;
  double min_child_hessian = 1.0;
  Objective objective = Objective::kBinaryLogistic;
  int num_classes = 1;  // K for softmax
  double base_score = 0.0;
};

struct GradHess {
  double g = 0.0;
  double h = 0.0;
};

// Second-order terms of the logistic loss -log p (label 1) or -log(1-p).
GradHess LogisticGradHess(double margin, int label);
double LogisticLoss(double margin, int label);

// 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)] - gamma
double SplitGain(double gl, double hl, double gr, double hr, double lambda,
                 double gamma);

struct SplitResult {
  double threshold = 0.0;
  double gain = 0.0;
  bool missing_left = false;
};

// Exact greedy search over one feature column: thresholds are midpoints of
// consecutive distinct values, missing rows go to whichever side scores
// higher (right on ties). nullopt when no split has positive gain or every
// candidate leaves a child below min_child_hessian.
std::optional<SplitResult> BestSplit(std::span<const double> values,
                                     std::span<const GradHess> grad,
                                     const TrainConfig& config);

enum class Execution { kSerial, kParallel };

// Level-wise exact greedy boosting. Rows are put in a canonical order first,
// so the result depends only on the multiset of (row, label) pairs; the
// parallel split search produces the same model as the serial one.
// Throws Error(kEmptyDataset) or Error(kLabelOutOfRange).
GbdtEnsemble Train(const FeatureMatrix& features, std::span<const int> labels,
                   const TrainConfig& config,
                   std::vector<std::string> feature_names = {},
                   Execution execution = Execution::kParallel);

// Mean training loss (log loss / cross-entropy) of the first `rounds` rounds.
double MeanLoss(const GbdtEnsemble& model, const FeatureMatrix& features,
                std::span<const int> labels, int rounds = -1);

}  // namespace vprex::gbdt

#endif  // VPREX_GBDT_TRAIN_H_
