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


#include "eval.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "kbest.hpp"
#include "simplify.hpp"

namespace lbll {
namespace {

double MsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

const FeatureVector& FeaturesOf(const FeaturizedCircuit& fc, int latch_id) {
  for (const auto& l : fc.latches) {
    if (l.latch_id == latch_id) return l.values;
  }
  ValidationError(fmt::format("no features for latch {}", latch_id));
}

std::vector<double> CheckedPredict(const Classifier& c, int id, const FeatureVector& x) {
  std::vector<double> p = c.predict(id, x);
  if (static_cast<int>(p.size()) != ClassCount(c.scheme)) {
    ValidationError(fmt::format("classifier returned {} probabilities, scheme {} has {}",
                                p.size(), LabelSchemeName(c.scheme), ClassCount(c.scheme)));
  }
  return p;
}

// Simplify, solve and merge; shared by the attack and the single-phase
// ablation. `coefs` gives P/S/DD for a kept latch.
void SolveKept(const Netlist& locked, AttackReport& r,
               const std::function<std::array<double, 3>(int, const FeaturizedCircuit&)>& coefs,
               size_t k) {
  auto t0 = std::chrono::steady_clock::now();
  SimplifiedCircuit simple = SimplifyForPhase2(locked, r.predicted_ld);
  r.timings.simplify_ms = MsSince(t0);
  t0 = std::chrono::steady_clock::now();
  for (const auto& l : simple.features.latches) {
    r.probabilities[l.latch_id] = coefs(l.latch_id, simple.features);
  }
  r.timings.phase2_ms = MsSince(t0);
  t0 = std::chrono::steady_clock::now();
  r.model = BuildModel(simple.features.graph, r.probabilities);
  r.pool = SolveTopK(r.model, k);
  r.timings.ilp_ms = MsSince(t0);
  for (const auto& e : r.pool.entries) {
    KeyAssignment key;
    for (int id : r.predicted_ld) key[id] = LatchType::kLogicDecoy;
    for (int i = 0; i < r.model.latch_count(); ++i) {
      key[r.model.latch_ids[i]] = e.assignment.types[i];
    }
    r.keys.push_back(std::move(key));
  }
}

void Score(AttackReport& r, const GroundTruth& truth) {
  r.key_accuracy.clear();
  r.best_index = -1;
  r.best_accuracy = 0;
  for (size_t i = 0; i < r.keys.size(); ++i) {
    const double a = KeyAccuracy(r.keys[i], truth);
    r.key_accuracy.push_back(a);
    if (r.best_index < 0 || a > r.best_accuracy) {
      r.best_accuracy = a;
      r.best_index = static_cast<int>(i);
    }
  }
  r.t1_accuracy = r.key_accuracy.empty() ? 0 : r.key_accuracy[0];
  std::set<int> true_ld;
  for (const auto& [id, t] : truth) {
    if (t == LatchType::kLogicDecoy) true_ld.insert(id);
  }
  int phase1_ok = 0;
  for (const auto& [id, t] : truth) phase1_ok += true_ld.count(id) == r.predicted_ld.count(id);
  r.phase1_accuracy = truth.empty() ? 1.0 : double(phase1_ok) / double(truth.size());
  r.truth_feasible = -1;
  if (true_ld == r.predicted_ld) {
    std::vector<LatchType> types;
    for (int id : r.model.latch_ids) types.push_back(truth.at(id));
    auto colors = ColorsFor(r.model, types);
    r.truth_feasible = colors && CheckFeasible(r.model, {types, *colors}).feasible ? 1 : 0;
  }
}

}  // namespace

double KeyAccuracy(const KeyAssignment& key, const GroundTruth& truth) {
  if (key.size() != truth.size()) {
    ValidationError(fmt::format("key covers {} latches, ground truth {}", key.size(),
                                truth.size()));
  }
  if (truth.empty()) return 1.0;
  int correct = 0;
  for (const auto& [id, t] : truth) {
    auto it = key.find(id);
    if (it == key.end()) ValidationError(fmt::format("key does not cover latch {}", id));
    correct += it->second == t;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

Classifier Classifier::FromModel(const Model& model) {
  return {model.scheme, [&model](int, const FeatureVector& x) { return model.PredictProba(x); }};
}

int Argmax(const std::vector<double>& p) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(p.size()); ++c) {
    if (p[c] > p[best]) best = c;
  }
  return best;
}

std::array<double, 3> TypeCoefficients(LabelScheme scheme, const std::vector<double>& p) {
  switch (scheme) {
    case LabelScheme::kPsVsDd: return {p[0], p[0], p[1]};
    case LabelScheme::kPsDd:
    case LabelScheme::kAll4: return {p[0], p[1], p[2]};
    case LabelScheme::kLdVsRest: break;
  }
  ValidationError("ld-vs-rest outputs carry no P/S/DD probabilities");
}

AttackReport RunAttack(const Netlist& locked, const Classifier& phase1, const Classifier& phase2,
                       const AttackConfig& config, const GroundTruth* truth,
                       const Netlist* original) {
  if (phase1.scheme != LabelScheme::kLdVsRest) {
    ValidationError("phase-1 classifier must use the ld-vs-rest scheme");
  }
  if (phase2.scheme != LabelScheme::kPsVsDd && phase2.scheme != LabelScheme::kPsDd) {
    ValidationError("phase-2 classifier must use the ps-vs-dd or p-s-dd scheme");
  }
  AttackReport r;
  r.latch_count = static_cast<int>(locked.latches.size());
  auto t0 = std::chrono::steady_clock::now();
  FeaturizedCircuit features = Featurize(locked);
  for (const auto& l : features.latches) {
    if (Argmax(CheckedPredict(phase1, l.latch_id, l.values)) == 1) r.predicted_ld.insert(l.latch_id);
  }
  r.timings.phase1_ms = MsSince(t0);
  SolveKept(
      locked, r,
      [&](int id, const FeaturizedCircuit& simple) {
        return TypeCoefficients(phase2.scheme,
                                CheckedPredict(phase2, id, FeaturesOf(simple, id)));
      },
      config.topk);
  if (truth) Score(r, *truth);
  if (original && config.compute_fc && !r.keys.empty()) {
    t0 = std::chrono::steady_clock::now();
    const int pick = truth ? r.best_index : 0;
    r.fc = FunctionalCorruptibility(locked, r.keys[pick], *original, config.fc);
    r.timings.fc_ms = MsSince(t0);
  }
  return r;
}

KeyAssignment BaselineKey(const Netlist& locked, const Classifier& four_class) {
  if (four_class.scheme != LabelScheme::kAll4) {
    ValidationError("baseline classifier must use the all4 scheme");
  }
  constexpr LatchType kByClass[] = {LatchType::kPrimary, LatchType::kSecondary,
                                    LatchType::kDelayDecoy, LatchType::kLogicDecoy};
  KeyAssignment key;
  for (const auto& l : Featurize(locked).latches) {
    key[l.latch_id] = kByClass[Argmax(CheckedPredict(four_class, l.latch_id, l.values))];
  }
  return key;
}

std::vector<std::vector<LatchType>> ClosestKeys(const TypeProbabilities& probs, size_t k) {
  if (k == 0) ValidationError("k must be >= 1");
  constexpr LatchType kTypes[] = {LatchType::kPrimary, LatchType::kSecondary,
                                  LatchType::kDelayDecoy};
  std::vector<RankedList> lists;
  std::vector<std::array<int, 3>> order;
  for (const auto& [id, p] : probs) {
    std::array<int64_t, 3> v;
    for (int t = 0; t < 3; ++t) {
      if (!(p[t] >= 0.0 && p[t] <= 1.0)) {
        ValidationError(fmt::format("latch {}: probability out of [0,1]", id));
      }
      v[t] = std::llround(std::log(std::max(p[t], 1e-300)) * kCoefScale);
    }
    std::array<int, 3> o = {0, 1, 2};
    std::stable_sort(o.begin(), o.end(), [&](int a, int b) { return v[a] > v[b]; });
    RankedList list;
    for (int t : o) {
      list.value.push_back(v[t]);
      list.lex_rank.push_back(t);
    }
    lists.push_back(std::move(list));
    order.push_back(o);
  }
  std::vector<std::vector<LatchType>> keys;
  for (const auto& combo : KBestCombinations(lists, k)) {
    std::vector<LatchType> key;
    for (size_t i = 0; i < combo.size(); ++i) key.push_back(kTypes[order[i][combo[i]]]);
    keys.push_back(std::move(key));
  }
  return keys;
}

double AblationClosestKeys(const TypeProbabilities& probs, const std::set<int>& logic_decoys,
                           const GroundTruth& truth, size_t k) {
  double best = 0;
  for (const auto& types : ClosestKeys(probs, k)) {
    KeyAssignment key;
    for (int id : logic_decoys) key[id] = LatchType::kLogicDecoy;
    size_t i = 0;
    for (const auto& entry : probs) key[entry.first] = types[i++];
    best = std::max(best, KeyAccuracy(key, truth));
  }
  return best;
}

AttackReport AblationSinglePhase(const Netlist& locked, const Classifier& four_class, size_t k,
                                 const GroundTruth& truth) {
  if (four_class.scheme != LabelScheme::kAll4) {
    ValidationError("single-phase classifier must use the all4 scheme");
  }
  AttackReport r;
  r.latch_count = static_cast<int>(locked.latches.size());
  auto t0 = std::chrono::steady_clock::now();
  std::map<int, std::vector<double>> outputs;
  for (const auto& l : Featurize(locked).latches) {
    auto p = CheckedPredict(four_class, l.latch_id, l.values);
    if (Argmax(p) == 3) r.predicted_ld.insert(l.latch_id);
    outputs[l.latch_id] = std::move(p);
  }
  r.timings.phase1_ms = MsSince(t0);
  SolveKept(
      locked, r,
      [&](int id, const FeaturizedCircuit&) {
        return TypeCoefficients(LabelScheme::kAll4, outputs.at(id));
      },
      k);
  Score(r, truth);
  return r;
}

}  // namespace lbll
