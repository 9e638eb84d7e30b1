// Copyright 2026 The LBLL Attack Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Random forest of entropy-split decision trees.

#pragma once

#include <cstdint>
#include <vector>

#include "dataset.hpp"

namespace lbll {

struct ForestParams {
  int trees = 100;
  int max_depth = 12;
  int min_leaf = 1;
  int mtry = 0;              // features per split; 0 means round(sqrt(14))
  bool class_weights = true;  // inverse class frequency
  uint64_t seed = 0;
  int workers = 1;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  int label = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root first
  int Predict(const FeatureVector& x) const;
};

struct RandomForest {
  ForestParams params;
  int class_count = 0;
  std::vector<DecisionTree> trees;
  FeatureVector importance{};  // mean impurity decrease, sums to 1
  double oob_accuracy = 0;

  // Vote fractions.
  std::vector<double> PredictProba(const FeatureVector& x) const;
};

struct SplitResult {
  int feature = -1;  // -1 when no candidate separates the rows
  double threshold = 0;
  double entropy = 0;  // weighted conditional entropy in bits
};

// Minimises conditional entropy over `features` and all midpoints between
// consecutive distinct values leaving at least min_leaf rows per side. Ties
// keep the earlier feature, then the smaller threshold.
SplitResult BestSplit(const std::vector<const FeatureVector*>& rows, const std::vector<int>& labels,
                      const std::vector<double>& weights, int class_count,
                      const std::vector<int>& features, int min_leaf);

// Deterministic in (data, params). Rejects datasets with fewer than two
// classes present.
RandomForest TrainForest(const Dataset& data, const ForestParams& params);

}  // namespace lbll
