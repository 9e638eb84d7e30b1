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


#include "forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

namespace lbll {

namespace {

double Entropy(const std::vector<double>& counts, double total) {
  if (total <= 0) return 0;
  double h = 0;
  for (double c : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

struct TreeBuilder {
  const Dataset& data;
  const std::vector<double>& class_weight;
  const ForestParams& params;
  int mtry;
  Rng rng;
  DecisionTree tree;
  FeatureVector importance{};

  int Build(std::vector<int>& idx, int depth) {
    const int k = data.class_count();
    std::vector<double> counts(k, 0.0);
    for (int i : idx) counts[data.rows[i].label] += class_weight[data.rows[i].label];
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    TreeNode node;
    node.label = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    const int nonzero = static_cast<int>(std::count_if(counts.begin(), counts.end(),
                                                       [](double c) { return c > 0; }));
    if (nonzero <= 1 || depth >= params.max_depth ||
        static_cast<int>(idx.size()) < 2 * params.min_leaf) {
      return id;
    }
    std::vector<int> features(kFeatureCount);
    std::iota(features.begin(), features.end(), 0);
    for (int f = 0; f + 1 < kFeatureCount; ++f) {
      std::swap(features[f], features[f + UniformIndex(rng, kFeatureCount - f)]);
    }
    std::vector<const FeatureVector*> rows;
    std::vector<int> labels;
    std::vector<double> weights;
    for (int i : idx) {
      rows.push_back(&data.rows[i].x);
      labels.push_back(data.rows[i].label);
      weights.push_back(class_weight[data.rows[i].label]);
    }
    // Draw mtry features; if none of them splits, keep drawing one at a time.
    SplitResult split = BestSplit(rows, labels, weights, k,
                                  {features.begin(), features.begin() + mtry}, params.min_leaf);
    for (int f = mtry; split.feature < 0 && f < kFeatureCount; ++f) {
      split = BestSplit(rows, labels, weights, k, {features[f]}, params.min_leaf);
    }
    if (split.feature < 0) return id;
    importance[split.feature] += total * (Entropy(counts, total) - split.entropy);
    std::vector<int> left, right;
    for (int i : idx) {
      (data.rows[i].x[split.feature] <= split.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const int l = Build(left, depth + 1);
    const int r = Build(right, depth + 1);
    tree.nodes[id].feature = split.feature;
    tree.nodes[id].threshold = split.threshold;
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  }
};

}  // namespace

int DecisionTree::Predict(const FeatureVector& x) const {
  int n = 0;
  while (nodes[n].feature >= 0) {
    n = x[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
  }
  return nodes[n].label;
}

std::vector<double> RandomForest::PredictProba(const FeatureVector& x) const {
  std::vector<double> p(class_count, 0.0);
  if (trees.empty()) return p;
  for (const auto& t : trees) p[t.Predict(x)] += 1.0;
  for (double& v : p) v /= static_cast<double>(trees.size());
  return p;
}

SplitResult BestSplit(const std::vector<const FeatureVector*>& rows, const std::vector<int>& labels,
                      const std::vector<double>& weights, int class_count,
                      const std::vector<int>& features, int min_leaf) {
  SplitResult best;
  const int n = static_cast<int>(rows.size());
  std::vector<double> total(class_count, 0.0);
  for (int i = 0; i < n; ++i) total[labels[i]] += weights[i];
  const double w_total = std::accumulate(total.begin(), total.end(), 0.0);
  if (w_total <= 0) return best;
  std::vector<std::pair<double, int>> sorted(n);
  std::vector<double> left(class_count), right(class_count);
  for (int f : features) {
    for (int i = 0; i < n; ++i) sorted[i] = {(*rows[i])[f], i};
    std::sort(sorted.begin(), sorted.end());
    std::fill(left.begin(), left.end(), 0.0);
    double w_left = 0;
    for (int s = 0; s + 1 < n; ++s) {
      const int i = sorted[s].second;
      left[labels[i]] += weights[i];
      w_left += weights[i];
      if (sorted[s].first == sorted[s + 1].first) continue;
      if (s + 1 < min_leaf || n - s - 1 < min_leaf) continue;
      for (int c = 0; c < class_count; ++c) right[c] = total[c] - left[c];
      const double w_right = w_total - w_left;
      const double h = (w_left * Entropy(left, w_left) + w_right * Entropy(right, w_right)) / w_total;
      if (best.feature < 0 || h < best.entropy) {
        best.feature = f;
        best.entropy = h;
        best.threshold = sorted[s].first + (sorted[s + 1].first - sorted[s].first) / 2;
        // Guard against rounding onto the upper value.
        if (!(best.threshold < sorted[s + 1].first)) best.threshold = sorted[s].first;
      }
    }
  }
  return best;
}

RandomForest TrainForest(const Dataset& data, const ForestParams& params) {
  ValidateDataset(data);
  if (params.trees < 1 || params.max_depth < 1 || params.min_leaf < 1 || params.mtry < 0 ||
      params.mtry > kFeatureCount || params.workers < 1) {
    ValidationError("invalid forest parameters");
  }
  const auto counts = data.ClassCounts();
  if (std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) < 2) {
    ValidationError("forest training needs at least two classes present");
  }
  RandomForest forest;
  forest.params = params;
  forest.class_count = data.class_count();
  const int mtry =
      params.mtry > 0 ? params.mtry : static_cast<int>(std::lround(std::sqrt(kFeatureCount)));
  std::vector<double> class_weight =
      params.class_weights ? InverseFrequencyWeights(data) : std::vector<double>(forest.class_count, 1.0);
  const size_t n = data.rows.size();

  forest.trees.resize(params.trees);
  std::vector<FeatureVector> importance(params.trees);
  std::vector<std::vector<char>> in_bag(params.trees, std::vector<char>(n, 0));
  auto grow = [&](int t) {
    Rng rng(DeriveSeed(params.seed, static_cast<uint64_t>(t)));
    std::vector<int> idx(n);
    for (auto& i : idx) {
      i = static_cast<int>(UniformIndex(rng, n));
      in_bag[t][i] = 1;
    }
    TreeBuilder b{data, class_weight, params, mtry, Rng(rng()), {}, {}};
    b.Build(idx, 0);
    forest.trees[t] = std::move(b.tree);
    importance[t] = b.importance;
  };
  const int workers = std::min(params.workers, params.trees);
  if (workers <= 1) {
    for (int t = 0; t < params.trees; ++t) grow(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < params.trees; t += workers) grow(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0;
  for (const auto& imp : importance) {
    for (int f = 0; f < kFeatureCount; ++f) {
      forest.importance[f] += imp[f];
      sum += imp[f];
    }
  }
  for (double& v : forest.importance) v = sum > 0 ? v / sum : 1.0 / kFeatureCount;

  size_t oob_rows = 0, oob_correct = 0;
  std::vector<int> votes(forest.class_count);
  for (size_t i = 0; i < n; ++i) {
    std::fill(votes.begin(), votes.end(), 0);
    int cast = 0;
    for (int t = 0; t < params.trees; ++t) {
      if (in_bag[t][i]) continue;
      ++votes[forest.trees[t].Predict(data.rows[i].x)];
      ++cast;
    }
    if (cast == 0) continue;
    ++oob_rows;
    const int pred = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    oob_correct += pred == data.rows[i].label;
  }
  forest.oob_accuracy = oob_rows > 0 ? static_cast<double>(oob_correct) / oob_rows : 0.0;
  return forest;
}

}  // namespace lbll
