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


// Fully connected network: rectifier hidden layers, softmax output, trained
// on weighted cross-entropy with Adam.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dataset.hpp"

namespace lbll {

struct MlpParams {
  std::vector<int> hidden = {64, 32};
  int epochs = 50;
  int batch = 128;
  double learning_rate = 1e-3;
  double decay = 0.02;  // step = learning_rate / (1 + decay * epoch)
  int patience = 8;     // epochs without validation improvement
  bool class_weights = true;
  uint64_t seed = 0;
};

std::vector<double> Softmax(std::span<const double> logits);

class Mlp {
 public:
  Mlp() = default;
  // Zero weights, identity standardization.
  explicit Mlp(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int class_count() const { return sizes_.empty() ? 0 : sizes_.back(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Standardization: z = (x - mean) / scale.
  FeatureVector mean{};
  FeatureVector scale{};
  MlpParams train_params;
  int epochs_run = 0;
  double validation_loss = 0;

  std::vector<double> Standardize(const FeatureVector& x) const;
  std::vector<double> Logits(std::span<const double> z) const;
  std::vector<double> PredictProba(const FeatureVector& x) const;

  // Weighted mean cross-entropy over standardized rows; fills `grad` (same
  // layout as params) when non-null.
  double Loss(const std::vector<std::vector<double>>& z, const std::vector<int>& labels,
              const std::vector<double>& weights, std::vector<double>* grad) const;

  void InitRandom(Rng& rng);

 private:
  // Offsets of W (out x in, row-major) and b for layer l.
  size_t WeightOffset(int l) const { return offsets_[l]; }
  size_t BiasOffset(int l) const { return offsets_[l] + size_t(sizes_[l + 1]) * sizes_[l]; }

  std::vector<int> sizes_;
  std::vector<size_t> offsets_;
  std::vector<double> params_;
};

// Standardization is fit on `train`. With a non-empty validation set the
// weights with the lowest validation loss are kept and training stops after
// `patience` epochs without improvement. Throws on a non-finite loss.
Mlp TrainMlp(const Dataset& train, const Dataset* validation, const MlpParams& params);

// Accuracy drop when one feature column is shuffled, clipped at 0 and
// normalised to sum 1 (uniform when no feature matters).
FeatureVector PermutationImportance(const Mlp& model, const Dataset& data, uint64_t seed);

}  // namespace lbll
