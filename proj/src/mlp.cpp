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


#include "mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace lbll {

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0;
  for (double& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) ValidationError("a network needs input and output layers");
  for (int s : sizes_) {
    if (s < 1) ValidationError("layer sizes must be positive");
  }
  size_t off = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(off);
    off += size_t(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.assign(off, 0.0);
  scale.fill(1.0);
}

void Mlp::InitRandom(Rng& rng) {
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double limit = std::sqrt(6.0 / sizes_[l]);
    const size_t w = WeightOffset(int(l)), b = BiasOffset(int(l));
    for (size_t i = w; i < b; ++i) params_[i] = (2 * UniformReal(rng) - 1) * limit;
    for (int i = 0; i < sizes_[l + 1]; ++i) params_[b + i] = 0;
  }
}

std::vector<double> Mlp::Standardize(const FeatureVector& x) const {
  if (sizes_.empty() || sizes_[0] != kFeatureCount) {
    ValidationError(fmt::format("model expects {} inputs, features have {}",
                                sizes_.empty() ? 0 : sizes_[0], kFeatureCount));
  }
  std::vector<double> z(kFeatureCount);
  for (int f = 0; f < kFeatureCount; ++f) z[f] = (x[f] - mean[f]) / scale[f];
  return z;
}

std::vector<double> Mlp::Logits(std::span<const double> z) const {
  if (z.size() != static_cast<size_t>(sizes_[0])) ValidationError("input dimension mismatch");
  std::vector<double> a(z.begin(), z.end()), next;
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const double* W = params_.data() + WeightOffset(l);
    const double* b = params_.data() + BiasOffset(l);
    next.assign(out, 0.0);
    for (int o = 0; o < out; ++o) {
      double s = b[o];
      for (int i = 0; i < in; ++i) s += W[size_t(o) * in + i] * a[i];
      next[o] = l + 1 < layers ? std::max(0.0, s) : s;
    }
    a.swap(next);
  }
  return a;
}

std::vector<double> Mlp::PredictProba(const FeatureVector& x) const {
  return Softmax(Logits(Standardize(x)));
}

double Mlp::Loss(const std::vector<std::vector<double>>& z, const std::vector<int>& labels,
                 const std::vector<double>& weights, std::vector<double>* grad) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  if (grad) grad->assign(params_.size(), 0.0);
  const double w_total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (w_total <= 0) return 0;
  double loss = 0;
  std::vector<std::vector<double>> acts(layers + 1);
  std::vector<double> delta, prev;
  for (size_t r = 0; r < z.size(); ++r) {
    acts[0] = z[r];
    for (int l = 0; l < layers; ++l) {
      const int in = sizes_[l], out = sizes_[l + 1];
      const double* W = params_.data() + WeightOffset(l);
      const double* b = params_.data() + BiasOffset(l);
      auto& a = acts[l + 1];
      a.assign(out, 0.0);
      for (int o = 0; o < out; ++o) {
        double s = b[o];
        for (int i = 0; i < in; ++i) s += W[size_t(o) * in + i] * acts[l][i];
        a[o] = l + 1 < layers ? std::max(0.0, s) : s;
      }
    }
    const auto p = Softmax(acts[layers]);
    const double w = weights[r] / w_total;
    loss -= w * std::log(std::max(p[labels[r]], 1e-300));
    if (!grad) continue;
    delta = p;
    delta[labels[r]] -= 1.0;
    for (double& d : delta) d *= w;
    for (int l = layers - 1; l >= 0; --l) {
      const int in = sizes_[l], out = sizes_[l + 1];
      const double* W = params_.data() + WeightOffset(l);
      double* gW = grad->data() + WeightOffset(l);
      double* gb = grad->data() + BiasOffset(l);
      for (int o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (int i = 0; i < in; ++i) gW[size_t(o) * in + i] += delta[o] * acts[l][i];
      }
      if (l == 0) break;
      prev.assign(in, 0.0);
      for (int o = 0; o < out; ++o) {
        for (int i = 0; i < in; ++i) prev[i] += W[size_t(o) * in + i] * delta[o];
      }
      for (int i = 0; i < in; ++i) {
        if (acts[l][i] <= 0) prev[i] = 0;
      }
      delta.swap(prev);
    }
  }
  return loss;
}

namespace {

struct Prepared {
  std::vector<std::vector<double>> z;
  std::vector<int> labels;
  std::vector<double> weights;
};

Prepared Prepare(const Mlp& model, const Dataset& data, const std::vector<double>& class_weight) {
  Prepared p;
  for (const auto& r : data.rows) {
    p.z.push_back(model.Standardize(r.x));
    p.labels.push_back(r.label);
    p.weights.push_back(class_weight[r.label]);
  }
  return p;
}

}  // namespace

Mlp TrainMlp(const Dataset& train, const Dataset* validation, const MlpParams& params) {
  ValidateDataset(train);
  if (train.rows.empty()) ValidationError("empty training set");
  if (params.epochs < 1 || params.batch < 1 || !(params.learning_rate > 0) ||
      params.decay < 0 || params.patience < 1) {
    ValidationError("invalid network training parameters");
  }
  std::vector<int> sizes = {kFeatureCount};
  sizes.insert(sizes.end(), params.hidden.begin(), params.hidden.end());
  sizes.push_back(train.class_count());
  Mlp model(sizes);
  model.train_params = params;

  const double n = static_cast<double>(train.rows.size());
  for (int f = 0; f < kFeatureCount; ++f) {
    double mean = 0, var = 0;
    for (const auto& r : train.rows) mean += r.x[f];
    mean /= n;
    for (const auto& r : train.rows) var += (r.x[f] - mean) * (r.x[f] - mean);
    var /= n;
    model.mean[f] = mean;
    model.scale[f] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  const std::vector<double> class_weight = params.class_weights
                                               ? InverseFrequencyWeights(train)
                                               : std::vector<double>(train.class_count(), 1.0);
  Rng rng(params.seed);
  model.InitRandom(rng);
  const Prepared tr = Prepare(model, train, class_weight);
  const bool use_val = validation && !validation->rows.empty();
  Prepared va;
  if (use_val) {
    if (validation->scheme != train.scheme) ValidationError("validation set uses another label scheme");
    va = Prepare(model, *validation, class_weight);
  }

  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  std::vector<double> m1(model.params().size(), 0.0), m2(model.params().size(), 0.0), grad;
  std::vector<double> best = model.params();
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  long step = 0;
  std::vector<int> order(train.rows.size());
  std::iota(order.begin(), order.end(), 0);
  Prepared batch;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    Shuffle(order, rng);
    const double lr = params.learning_rate / (1.0 + params.decay * epoch);
    for (size_t start = 0; start < order.size(); start += params.batch) {
      const size_t end = std::min(order.size(), start + size_t(params.batch));
      batch.z.clear();
      batch.labels.clear();
      batch.weights.clear();
      for (size_t i = start; i < end; ++i) {
        batch.z.push_back(tr.z[order[i]]);
        batch.labels.push_back(tr.labels[order[i]]);
        batch.weights.push_back(tr.weights[order[i]]);
      }
      const double loss = model.Loss(batch.z, batch.labels, batch.weights, &grad);
      if (!std::isfinite(loss)) {
        ValidationError(fmt::format("training diverged: loss {} at epoch {} batch {}", loss,
                                    epoch, start / params.batch));
      }
      ++step;
      const double c1 = 1 - std::pow(b1, double(step)), c2 = 1 - std::pow(b2, double(step));
      auto& w = model.params();
      for (size_t i = 0; i < w.size(); ++i) {
        m1[i] = b1 * m1[i] + (1 - b1) * grad[i];
        m2[i] = b2 * m2[i] + (1 - b2) * grad[i] * grad[i];
        w[i] -= lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
      }
    }
    model.epochs_run = epoch + 1;
    if (!use_val) continue;
    const double vl = model.Loss(va.z, va.labels, va.weights, nullptr);
    if (!std::isfinite(vl)) {
      ValidationError(fmt::format("training diverged: validation loss {} at epoch {}", vl, epoch));
    }
    if (vl < best_loss) {
      best_loss = vl;
      best = model.params();
      since_best = 0;
    } else if (++since_best >= params.patience) {
      break;
    }
  }
  if (use_val) {
    model.params() = best;
    model.validation_loss = best_loss;
  }
  return model;
}

FeatureVector PermutationImportance(const Mlp& model, const Dataset& data, uint64_t seed) {
  FeatureVector imp{};
  if (data.rows.empty()) {
    imp.fill(1.0 / kFeatureCount);
    return imp;
  }
  auto accuracy = [&](const std::vector<FeatureVector>& xs) {
    size_t correct = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      auto p = model.PredictProba(xs[i]);
      correct += static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()) ==
                 data.rows[i].label;
    }
    return static_cast<double>(correct) / static_cast<double>(xs.size());
  };
  std::vector<FeatureVector> xs;
  for (const auto& r : data.rows) xs.push_back(r.x);
  const double base = accuracy(xs);
  double sum = 0;
  for (int f = 0; f < kFeatureCount; ++f) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(f)));
    std::vector<double> column;
    for (const auto& x : xs) column.push_back(x[f]);
    Shuffle(column, rng);
    auto permuted = xs;
    for (size_t i = 0; i < permuted.size(); ++i) permuted[i][f] = column[i];
    imp[f] = std::max(0.0, base - accuracy(permuted));
    sum += imp[f];
  }
  for (double& v : imp) v = sum > 0 ? v / sum : 1.0 / kFeatureCount;
  return imp;
}

}  // namespace lbll
