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

#ifndef VPREX_THRESHOLD_H_
#define VPREX_THRESHOLD_H_

#include <cstddef>
#include <vector>

namespace vprex {

struct ThresholdPoint {
  double threshold = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  // Precision is 1 when nothing is predicted; recall is 1 with no positives.
  double precision = 1.0;
  double recall = 1.0;
};

// Confusion counts for "score >= threshold" against boolean labels.
ThresholdPoint EvaluateThreshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels, double threshold);

// Smallest cut-off among the observed scores and 0 that reaches
// `target_precision` with recall >= `min_recall`. When no cut-off qualifies,
// the one with the highest precision subject to the recall floor (smallest on
// ties). Throws kEmptyValidation on empty input and kDimensionMismatch when
// sizes differ.
double TunePrecisionThreshold(const std::vector<double>& scores,
                              const std::vector<int>& labels, double target_precision,
                              double min_recall = 0.0);

// Every candidate cut-off with its counts, ascending by threshold.
std::vector<ThresholdPoint> ThresholdCurve(const std::vector<double>& scores,
                                           const std::vector<int>& labels);

}  // namespace vprex

#endif  // VPREX_THRESHOLD_H_
