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

#include "vprex/threshold.h"

#include <algorithm>
#include <numeric>

#include "vprex/error.h"

namespace vprex {
namespace {

void CheckInput(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyValidation, "no validation scores");
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  }
}

void FillRates(ThresholdPoint& p) {
  p.precision = p.tp + p.fp == 0 ? 1.0 : static_cast<double>(p.tp) / (p.tp + p.fp);
  p.recall = p.tp + p.fn == 0 ? 1.0 : static_cast<double>(p.tp) / (p.tp + p.fn);
}

}  // namespace

ThresholdPoint EvaluateThreshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  }
  ThresholdPoint p;
  p.threshold = threshold;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] != 0) {
      predicted ? ++p.tp : ++p.fn;
    } else if (predicted) {
      ++p.fp;
    }
  }
  FillRates(p);
  return p;
}

std::vector<ThresholdPoint> ThresholdCurve(const std::vector<double>& scores,
                                           const std::vector<int>& labels) {
  CheckInput(scores, labels);
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  size_t positives = 0;
  for (int l : labels) positives += l != 0;

  // Sweep from the highest score down; each distinct score is a cut-off.
  std::vector<ThresholdPoint> curve;
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      labels[order[i]] != 0 ? ++tp : ++fp;
      ++i;
    }
    ThresholdPoint p;
    p.threshold = t;
    p.tp = tp;
    p.fp = fp;
    p.fn = positives - tp;
    FillRates(p);
    curve.push_back(p);
  }
  std::reverse(curve.begin(), curve.end());
  if (std::none_of(curve.begin(), curve.end(),
                   [](const ThresholdPoint& p) { return p.threshold == 0.0; })) {
    curve.push_back(EvaluateThreshold(scores, labels, 0.0));
    std::sort(curve.begin(), curve.end(),
              [](const ThresholdPoint& a, const ThresholdPoint& b) {
                return a.threshold < b.threshold;
              });
  }
  return curve;
}

double TunePrecisionThreshold(const std::vector<double>& scores,
                              const std::vector<int>& labels, double target_precision,
                              double min_recall) {
  const std::vector<ThresholdPoint> curve = ThresholdCurve(scores, labels);
  for (const ThresholdPoint& p : curve) {
    if (p.precision >= target_precision && p.recall >= min_recall) return p.threshold;
  }
  const ThresholdPoint* best = nullptr;
  for (const ThresholdPoint& p : curve) {
    if (p.recall < min_recall) continue;
    // Ties go to the higher cut-off: same precision, fewer predictions.
    if (best == nullptr || p.precision >= best->precision) best = &p;
  }
  return best == nullptr ? curve.front().threshold : best->threshold;
}

}  // namespace vprex
