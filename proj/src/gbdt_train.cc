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

#include "vprex/gbdt_train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "vprex/error.h"

namespace vprex::gbdt {
namespace {

struct Candidate {
  double gain = 0.0;
  double threshold = 0.0;
  bool missing_left = false;
  bool valid = false;
};

using SortedColumn = std::vector<std::pair<double, int>>;

// Split search kernel for one feature over every active node ("slot") of the
// current level. `slot_of_row` is -1 for rows in inactive nodes.
void ScanFeature(const SortedColumn& sorted, const std::vector<int>& missing_rows,
                 const std::vector<int>& slot_of_row,
                 std::span<const GradHess> grad, const std::vector<double>& node_g,
                 const std::vector<double>& node_h, const TrainConfig& config,
                 Candidate* out) {
  const size_t slots = node_g.size();
  std::vector<double> gm(slots, 0.0), hm(slots, 0.0);
  for (int r : missing_rows) {
    const int s = slot_of_row[r];
    if (s < 0) continue;
    gm[s] += grad[r].g;
    hm[s] += grad[r].h;
  }

  struct State {
    double gl = 0.0;
    double hl = 0.0;
    double last = 0.0;
    bool any = false;
  };
  std::vector<State> state(slots);
  const double lambda = config.lambda_l2;
  const double mch = config.min_child_hessian;

  auto evaluate = [&](int s, double threshold) {
    const State& st = state[s];
    const double g = node_g[s];
    const double h = node_h[s];
    Candidate best;
    // Missing rows to the right.
    {
      const double gl = st.gl, hl = st.hl, gr = g - gl, hr = h - hl;
      if (hl >= mch && hr >= mch) {
        best = {SplitGain(gl, hl, gr, hr, lambda, config.gamma), threshold, false,
                true};
      }
    }
    if (hm[s] > 0.0 || gm[s] != 0.0) {
      const double gl = st.gl + gm[s], hl = st.hl + hm[s];
      const double gr = g - gl, hr = h - hl;
      if (hl >= mch && hr >= mch) {
        const double gain = SplitGain(gl, hl, gr, hr, lambda, config.gamma);
        if (!best.valid || gain > best.gain) best = {gain, threshold, true, true};
      }
    }
    if (best.valid && best.gain > out[s].gain) out[s] = best;
  };

  for (const auto& [v, r] : sorted) {
    const int s = slot_of_row[r];
    if (s < 0) continue;
    State& st = state[s];
    if (st.any && v != st.last) {
      double threshold = st.last + (v - st.last) / 2.0;
      if (!(threshold > st.last)) threshold = v;
      evaluate(s, threshold);
    }
    st.gl += grad[r].g;
    st.hl += grad[r].h;
    st.last = v;
    st.any = true;
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<SortedColumn>& columns,
              const std::vector<std::vector<int>>& missing,
              const FeatureMatrix& data, const TrainConfig& config,
              Execution execution)
      : columns_(columns),
        missing_(missing),
        data_(data),
        config_(config),
        execution_(execution) {}

  // Builds one tree and writes each row's leaf value into `leaf_out`.
  Tree Build(std::span<const GradHess> grad, std::vector<double>& leaf_out) {
    const size_t n = data_.rows();
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<double> node_g{0.0}, node_h{0.0};
    std::vector<int> node_of_row(n, 0);
    for (size_t r = 0; r < n; ++r) {
      node_g[0] += grad[r].g;
      node_h[0] += grad[r].h;
    }

    std::vector<int> frontier{0};
    for (int depth = 0; depth < config_.max_depth && !frontier.empty(); ++depth) {
      const size_t slots = frontier.size();
      std::vector<int> slot_of_node(tree.nodes.size(), -1);
      std::vector<double> slot_g(slots), slot_h(slots);
      for (size_t s = 0; s < slots; ++s) {
        slot_of_node[frontier[s]] = static_cast<int>(s);
        slot_g[s] = node_g[frontier[s]];
        slot_h[s] = node_h[frontier[s]];
      }
      std::vector<int> slot_of_row(n);
      for (size_t r = 0; r < n; ++r) slot_of_row[r] = slot_of_node[node_of_row[r]];

      const int num_features = static_cast<int>(columns_.size());
      std::vector<Candidate> found(static_cast<size_t>(num_features) * slots);
      const bool parallel = execution_ == Execution::kParallel;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
      for (int f = 0; f < num_features; ++f) {
        ScanFeature(columns_[f], missing_[f], slot_of_row, grad, slot_g, slot_h,
                    config_, found.data() + static_cast<size_t>(f) * slots);
      }

      // Ties keep the lowest feature index; within a feature the scan already
      // kept the lowest threshold.
      std::vector<int> split_feature(slots, -1);
      std::vector<Candidate> split(slots);
      for (int f = 0; f < num_features; ++f) {
        for (size_t s = 0; s < slots; ++s) {
          const Candidate& c = found[static_cast<size_t>(f) * slots + s];
          if (c.valid && c.gain > 0.0 && c.gain > split[s].gain) {
            split[s] = c;
            split_feature[s] = f;
          }
        }
      }

      std::vector<int> next;
      for (size_t s = 0; s < slots; ++s) {
        if (split_feature[s] < 0) continue;
        const int id = frontier[s];
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        node_g.resize(tree.nodes.size(), 0.0);
        node_h.resize(tree.nodes.size(), 0.0);
        TreeNode& node = tree.nodes[id];
        node.feature = split_feature[s];
        node.threshold = split[s].threshold;
        node.missing_left = split[s].missing_left;
        node.left = left;
        node.right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      for (size_t r = 0; r < n; ++r) {
        const TreeNode& node = tree.nodes[node_of_row[r]];
        if (node.IsLeaf()) continue;
        const double v = data_.at(r, node.feature);
        const bool go_left = IsMissing(v) ? node.missing_left : v < node.threshold;
        const int child = go_left ? node.left : node.right;
        node_of_row[r] = child;
        node_g[child] += grad[r].g;
        node_h[child] += grad[r].h;
      }
      frontier = std::move(next);
    }

    for (size_t i = 0; i < tree.nodes.size(); ++i) {
      TreeNode& node = tree.nodes[i];
      if (node.IsLeaf()) {
        node.leaf = -node_g[i] / (node_h[i] + config_.lambda_l2) * config_.learning_rate;
      }
    }
    leaf_out.resize(n);
    for (size_t r = 0; r < n; ++r) leaf_out[r] = tree.nodes[node_of_row[r]].leaf;
    return tree;
  }

 private:
  const std::vector<SortedColumn>& columns_;
  const std::vector<std::vector<int>>& missing_;
  const FeatureMatrix& data_;
  const TrainConfig& config_;
  Execution execution_;
};

// Lexicographic row order with missing values last, then by label.
std::vector<int> CanonicalOrder(const FeatureMatrix& x, std::span<const int> labels) {
  std::vector<int> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    for (size_t c = 0; c < x.cols(); ++c) {
      const double va = x.at(a, c), vb = x.at(b, c);
      const bool ma = IsMissing(va), mb = IsMissing(vb);
      if (ma != mb) return mb;
      if (!ma && va != vb) return va < vb;
    }
    return labels[a] < labels[b];
  });
  return order;
}

}  // namespace

GradHess LogisticGradHess(double margin, int label) {
  const double p = Sigmoid(margin);
  return {p - label, p * (1.0 - p)};
}

double LogisticLoss(double margin, int label) {
  // log(1 + exp(-m)) for label 1, log(1 + exp(m)) for label 0, stably.
  const double z = label == 1 ? -margin : margin;
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double SplitGain(double gl, double hl, double gr, double hr, double lambda,
                 double gamma) {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                g * g / (h + lambda)) -
         gamma;
}

std::optional<SplitResult> BestSplit(std::span<const double> values,
                                     std::span<const GradHess> grad,
                                     const TrainConfig& config) {
  SortedColumn sorted;
  std::vector<int> missing;
  std::vector<double> g{0.0}, h{0.0};
  for (size_t r = 0; r < values.size(); ++r) {
    if (IsMissing(values[r])) {
      missing.push_back(static_cast<int>(r));
    } else {
      sorted.emplace_back(values[r], static_cast<int>(r));
    }
    g[0] += grad[r].g;
    h[0] += grad[r].h;
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> slot_of_row(values.size(), 0);
  Candidate best;
  ScanFeature(sorted, missing, slot_of_row, grad, g, h, config, &best);
  if (!best.valid || best.gain <= 0.0) return std::nullopt;
  return SplitResult{best.threshold, best.gain, best.missing_left};
}

GbdtEnsemble Train(const FeatureMatrix& features, std::span<const int> labels,
                   const TrainConfig& config,
                   std::vector<std::string> feature_names, Execution execution) {
  if (features.rows() == 0) throw Error(ErrorCode::kEmptyDataset, "no rows");
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels and rows differ in count");
  }
  if (config.rounds < 0 || config.max_depth < 1) {
    throw Error(ErrorCode::kBadConfig, "rounds >= 0 and max_depth >= 1 required");
  }
  const bool softmax = config.objective == Objective::kSoftmax;
  const int num_labels = softmax ? config.num_classes : 2;
  if (softmax && config.num_classes < 2) {
    throw Error(ErrorCode::kBadConfig, "softmax needs num_classes >= 2");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_labels) {
      throw Error(ErrorCode::kLabelOutOfRange, std::to_string(y));
    }
  }
  if (feature_names.empty()) {
    for (size_t c = 0; c < features.cols(); ++c) {
      feature_names.push_back("f" + std::to_string(c));
    }
  }
  if (feature_names.size() != features.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature_names size");
  }

  // Canonical copy of the data.
  const std::vector<int> order = CanonicalOrder(features, labels);
  const size_t n = features.rows();
  const size_t cols = features.cols();
  FeatureMatrix x(n, cols);
  std::vector<int> y(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < cols; ++c) x.at(i, c) = features.at(order[i], c);
    y[i] = labels[order[i]];
  }

  std::vector<SortedColumn> columns(cols);
  std::vector<std::vector<int>> missing(cols);
  for (size_t c = 0; c < cols; ++c) {
    for (size_t r = 0; r < n; ++r) {
      const double v = x.at(r, c);
      if (IsMissing(v)) {
        missing[c].push_back(static_cast<int>(r));
      } else {
        columns[c].emplace_back(v, static_cast<int>(r));
      }
    }
    std::stable_sort(columns[c].begin(), columns[c].end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  GbdtEnsemble model;
  model.objective = config.objective;
  model.num_classes = softmax ? config.num_classes : 1;
  model.base_score = config.base_score;
  model.learning_rate = config.learning_rate;
  model.feature_names = std::move(feature_names);

  const int k = model.TreesPerRound();
  std::vector<double> margins(n * k, config.base_score);
  std::vector<GradHess> grad(n);
  std::vector<double> leaf;
  TreeBuilder builder(columns, missing, x, config, execution);

  for (int round = 0; round < config.rounds; ++round) {
    // Gradients for every class come from the margins at the start of the
    // round.
    std::vector<std::vector<GradHess>> round_grad(k, std::vector<GradHess>(n));
    for (size_t r = 0; r < n; ++r) {
      if (!softmax) {
        round_grad[0][r] = LogisticGradHess(margins[r], y[r]);
        continue;
      }
      const std::vector<double> p =
          Softmax(std::span<const double>(margins.data() + r * k, k));
      for (int c = 0; c < k; ++c) {
        round_grad[c][r] = {p[c] - (y[r] == c ? 1.0 : 0.0), p[c] * (1.0 - p[c])};
      }
    }
    for (int c = 0; c < k; ++c) {
      model.trees.push_back(builder.Build(round_grad[c], leaf));
      for (size_t r = 0; r < n; ++r) margins[r * k + c] += leaf[r];
    }
  }
  return model;
}

double MeanLoss(const GbdtEnsemble& model, const FeatureMatrix& features,
                std::span<const int> labels, int rounds) {
  GbdtEnsemble prefix = model;
  if (rounds >= 0 && rounds < model.Rounds()) {
    prefix.trees.resize(static_cast<size_t>(rounds) * model.TreesPerRound());
  }
  double total = 0.0;
  for (size_t r = 0; r < features.rows(); ++r) {
    const std::vector<double> m = prefix.Margins(features.Row(r));
    if (model.objective == Objective::kBinaryLogistic) {
      total += LogisticLoss(m[0], labels[r]);
    } else {
      const double max = *std::max_element(m.begin(), m.end());
      double sum = 0.0;
      for (double v : m) sum += std::exp(v - max);
      total += -(m[labels[r]] - max - std::log(sum));
    }
  }
  return total / static_cast<double>(features.rows());
}

}  // namespace vprex::gbdt
