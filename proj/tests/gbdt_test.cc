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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "gbdt_oracle.h"
#include "vprex/error.h"
#include "vprex/gbdt_train.h"

namespace vprex::gbdt {
namespace {

TrainConfig Config(int rounds, int depth, double lr = 0.3) {
  TrainConfig c;
  c.rounds = rounds;
  c.max_depth = depth;
  c.learning_rate = lr;
  return c;
}

FeatureMatrix Column(const std::vector<double>& v) {
  FeatureMatrix x(v.size(), 1);
  for (size_t i = 0; i < v.size(); ++i) x.at(i, 0) = v[i];
  return x;
}

TEST(GradHess, AtZeroMargin) {
  EXPECT_DOUBLE_EQ(LogisticGradHess(0, 1).g, -0.5);
  EXPECT_DOUBLE_EQ(LogisticGradHess(0, 1).h, 0.25);
  EXPECT_DOUBLE_EQ(LogisticGradHess(0, 0).g, 0.5);
  EXPECT_DOUBLE_EQ(LogisticGradHess(0, 0).h, 0.25);
}

TEST(GradHess, MatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> m(-8, 8);
  for (int i = 0; i < 1000; ++i) {
    const double margin = i == 0 ? 2.0 : m(rng);
    const int label = i % 2;
    const auto [g, h] = oracle::FiniteDifferenceGradHess(margin, label);
    const GradHess a = LogisticGradHess(margin, label);
    EXPECT_LE(std::abs(a.g - g), 1e-6 * std::abs(g)) << margin << " " << label;
    EXPECT_LE(std::abs(a.h - h), 1e-6 * std::abs(h)) << margin << " " << label;
  }
}

TEST(BestSplit, TwoRowsSplitAtMidpoint) {
  // Zero margins: g = p - y = {0.5, -0.5}, h = 0.25 each; lambda 1.
  const std::vector<double> x{1, 2};
  const std::vector<GradHess> gh{LogisticGradHess(0, 0), LogisticGradHess(0, 1)};
  TrainConfig c;
  c.lambda_l2 = 1;
  c.min_child_hessian = 0;
  const auto s = BestSplit(x, gh, c);
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(s->threshold, 1.5);
  // 1/2 [0.25/1.25 + 0.25/1.25 - 0] = 0.2
  EXPECT_NEAR(s->gain, 0.2, 1e-15);
}

TEST(BestSplit, PureNodeHasNoSplit) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<GradHess> gh(4, LogisticGradHess(0, 1));
  TrainConfig c;
  c.min_child_hessian = 0;
  EXPECT_FALSE(BestSplit(x, gh, c).has_value());
}

TEST(BestSplit, MinChildHessianBlocksSplit) {
  const std::vector<double> x{1, 2};
  const std::vector<GradHess> gh{LogisticGradHess(0, 0), LogisticGradHess(0, 1)};
  TrainConfig c;
  c.min_child_hessian = 0.3;
  EXPECT_FALSE(BestSplit(x, gh, c).has_value());
}

TEST(BestSplit, MissingDirectionIsLearned) {
  // Missing rows are positives like the high side, so they go right... unless
  // the low side is where they belong.
  const std::vector<double> x{1, 2, 3, 4, kMissing, kMissing};
  std::vector<GradHess> gh{LogisticGradHess(0, 1), LogisticGradHess(0, 1),
                           LogisticGradHess(0, 0), LogisticGradHess(0, 0),
                           LogisticGradHess(0, 1), LogisticGradHess(0, 1)};
  TrainConfig c;
  c.min_child_hessian = 0;
  auto s = BestSplit(x, gh, c);
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(s->threshold, 2.5);
  EXPECT_TRUE(s->missing_left);
  gh[4] = gh[5] = LogisticGradHess(0, 0);
  s = BestSplit(x, gh, c);
  ASSERT_TRUE(s.has_value());
  EXPECT_FALSE(s->missing_left);
}

TEST(BestSplit, EqualsExhaustiveSearchOnRandomColumns) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    FeatureMatrix x;
    std::vector<int> y;
    oracle::RandomDataset(rng, x, y);
    std::vector<GradHess> gh(x.rows());
    std::uniform_real_distribution<double> m(-2, 2);
    for (size_t r = 0; r < x.rows(); ++r) gh[r] = LogisticGradHess(m(rng), y[r]);
    std::vector<int> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    TrainConfig c;
    FeatureMatrix col(x.rows(), 1);
    std::vector<double> values(x.rows());
    for (size_t r = 0; r < x.rows(); ++r) col.at(r, 0) = values[r] = x.at(r, 0);
    const auto want = oracle::ExhaustiveSplit(col, rows, gh, c);
    const auto got = BestSplit(values, gh, c);
    ASSERT_EQ(got.has_value(), want.has_value()) << trial;
    if (got) {
      EXPECT_NEAR(got->gain, want->gain, 1e-9 * std::max(1.0, want->gain)) << trial;
      EXPECT_EQ(got->threshold, want->threshold) << trial;
    }
  }
}

TEST(Train, TreeSplitsMatchOracle) {
  std::mt19937_64 rng(11);
  oracle::SplitAgreement agreement;
  for (int trial = 0; trial < 100; ++trial) {
    FeatureMatrix x;
    std::vector<int> y;
    oracle::RandomDataset(rng, x, y);
    const TrainConfig c = Config(3, 1 + trial % 2);
    const GbdtEnsemble m = Train(x, y, c);
    oracle::CheckSplits(m, x, y, c, agreement);
  }
  EXPECT_EQ(agreement.agreed, agreement.checked) << agreement.first_mismatch;
}

TEST(Train, ConstantLabelGivesSingleLeaf) {
  const FeatureMatrix x = Column({1, 2, 3, 4});
  const std::vector<int> y{1, 1, 1, 1};
  const GbdtEnsemble m = Train(x, y, Config(1, 3));
  ASSERT_EQ(m.trees.size(), 1u);
  EXPECT_EQ(m.trees[0].nodes.size(), 1u);
  EXPECT_GT(m.PredictPositive(x.Row(0)), 0.5);
}

TEST(Train, ThresholdDatasetReachesFullAccuracy) {
  std::vector<double> v;
  std::vector<int> y;
  for (int i = 0; i < 500; ++i) {
    const double xv = -1.0 + 2.0 * i / 499.0;
    v.push_back(xv);
    y.push_back(xv >= 0 ? 1 : 0);
  }
  const FeatureMatrix x = Column(v);
  const GbdtEnsemble m = Train(x, y, Config(50, 1));
  int correct = 0;
  for (size_t r = 0; r < x.rows(); ++r) correct += (m.PredictPositive(x.Row(r)) >= 0.5) == y[r];
  EXPECT_EQ(correct, 500);
}

TEST(Train, LossNeverIncreases) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    FeatureMatrix x;
    std::vector<int> y;
    oracle::RandomDataset(rng, x, y);
    const GbdtEnsemble m = Train(x, y, Config(15, 3, 0.3));
    double prev = MeanLoss(m, x, y, 0);
    for (int r = 1; r <= m.Rounds(); ++r) {
      const double cur = MeanLoss(m, x, y, r);
      EXPECT_LE(cur, prev + 1e-9) << trial << " round " << r;
      prev = cur;
    }
  }
}

TEST(Train, PermutationDoesNotChangePredictions) {
  std::mt19937_64 rng(8);
  const int n = 120;
  FeatureMatrix x(n, 3);
  std::vector<int> y(n);
  std::uniform_real_distribution<double> u(0, 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < 3; ++c) x.at(r, c) = u(rng);
    y[r] = x.at(r, 0) + x.at(r, 1) * 0.5 > 0.7;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  FeatureMatrix xs(n, 3);
  std::vector<int> ys(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < 3; ++c) xs.at(r, c) = x.at(perm[r], c);
    ys[r] = y[perm[r]];
  }
  const GbdtEnsemble a = Train(x, y, Config(20, 3));
  const GbdtEnsemble b = Train(xs, ys, Config(20, 3));
  for (int r = 0; r < n; ++r) EXPECT_EQ(a.PredictProba(x.Row(r)), b.PredictProba(x.Row(r)));
}

TEST(Train, SerialAndParallelModelsAreIdentical) {
  std::mt19937_64 rng(21);
  FeatureMatrix x(400, 12);
  std::vector<int> y(400);
  std::uniform_real_distribution<double> u(0, 1);
  for (int r = 0; r < 400; ++r) {
    for (int c = 0; c < 12; ++c) x.at(r, c) = u(rng) < 0.05 ? kMissing : u(rng);
    y[r] = r % 3;
  }
  TrainConfig c = Config(10, 4);
  c.objective = Objective::kSoftmax;
  c.num_classes = 3;
  const GbdtEnsemble s = Train(x, y, c, {}, Execution::kSerial);
  const GbdtEnsemble p = Train(x, y, c, {}, Execution::kParallel);
  EXPECT_EQ(SaveModel(s), SaveModel(p));
}

TEST(Train, Errors) {
  const FeatureMatrix empty(0, 2);
  try {
    Train(empty, std::vector<int>{}, Config(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  try {
    Train(Column({1, 2}), std::vector<int>{0, 2}, Config(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelOutOfRange);
  }
}

TEST(Softmax, GradientsFollowClassProbabilities) {
  // Three separable classes on one feature.
  std::vector<double> v;
  std::vector<int> y;
  for (int i = 0; i < 90; ++i) {
    v.push_back(i);
    y.push_back(i / 30);
  }
  TrainConfig c = Config(30, 2);
  c.objective = Objective::kSoftmax;
  c.num_classes = 3;
  const FeatureMatrix x = Column(v);
  const GbdtEnsemble m = Train(x, y, c);
  EXPECT_EQ(m.TreesPerRound(), 3);
  EXPECT_EQ(m.Rounds(), 30);
  for (int i = 0; i < 90; ++i) {
    const auto p = m.PredictProba(x.Row(i));
    EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), y[i]);
  }
}

TEST(Predict, EmptyEnsembleIsHalf) {
  GbdtEnsemble m;
  m.feature_names = {"a"};
  const std::vector<double> row{1.0};
  EXPECT_EQ(m.PredictProba(row), (std::vector<double>{0.5, 0.5}));
}

TEST(Predict, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(4);
  FeatureMatrix x;
  std::vector<int> y;
  oracle::RandomDataset(rng, x, y);
  const GbdtEnsemble m = Train(x, y, Config(10, 3));
  for (size_t r = 0; r < x.rows(); ++r) {
    const auto p = m.PredictProba(x.Row(r));
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
    EXPECT_GE(p[1], 0.0);
    EXPECT_LE(p[1], 1.0);
  }
}

TEST(Predict, DimensionMismatch) {
  GbdtEnsemble m;
  m.feature_names = {"a", "b"};
  const std::vector<double> row{1.0};
  try {
    m.PredictProba(row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ModelFile, RoundTripIsExact) {
  std::mt19937_64 rng(9);
  FeatureMatrix x;
  std::vector<int> y;
  oracle::RandomDataset(rng, x, y);
  const GbdtEnsemble m = Train(x, y, Config(20, 3));
  const GbdtEnsemble back = LoadModel(SaveModel(m));
  std::uniform_real_distribution<double> u(-1, 12);
  std::vector<double> row(x.cols());
  for (int i = 0; i < 100; ++i) {
    for (double& v : row) v = u(rng);
    EXPECT_LE(std::abs(m.PredictPositive(row) - back.PredictPositive(row)), 1e-12);
  }
  EXPECT_EQ(SaveModel(back), SaveModel(m));
}

TEST(ModelFile, Golden) {
  GbdtEnsemble m;
  m.feature_names = {"f0"};
  m.learning_rate = 0.5;
  Tree t;
  t.nodes = {{0, 1.5, true, 1, 2, 0.0}, {-1, 0, false, -1, -1, -0.25}, {-1, 0, false, -1, -1, 0.125}};
  m.trees.push_back(t);
  const std::string want =
      R"({"version":"1","objective":"binary-logistic","numClasses":1,"baseScore":0.0,)"
      R"("learningRate":0.5,"featureNames":["f0"],"trees":[{"nodes":[)"
      R"({"feature":0,"threshold":1.5,"missingLeft":true,"left":1,"right":2},)"
      R"({"leaf":-0.25},{"leaf":0.125}]}]})";
  EXPECT_EQ(SaveModel(m), want);
  const std::vector<double> missing{kMissing};
  EXPECT_DOUBLE_EQ(LoadModel(want).Margins(missing)[0], -0.25);
}

TEST(ModelFile, Errors) {
  try {
    LoadModel(R"({"version":"1","objective":)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedModel);
  }
  try {
    LoadModel(R"({"version":"99","objective":"binary-logistic","numClasses":1,"baseScore":0,)"
              R"("learningRate":0.1,"featureNames":[],"trees":[]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedVersion);
  }
}

TEST(ModelFile, SchemaCheck) {
  GbdtEnsemble m;
  m.feature_names = {"a", "b"};
  EXPECT_NO_THROW(CheckFeatureSchema(m, {"a", "b"}));
  try {
    CheckFeatureSchema(m, {"a", "c"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

}  // namespace
}  // namespace vprex::gbdt
