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


// Attack pipeline and scoring: key accuracy, the two-phase attack, the
// 4-class baseline and the two ablations.

#pragma once

#include <functional>
#include <set>
#include <vector>

#include "dataset.hpp"
#include "ilp.hpp"
#include "model_io.hpp"
#include "sim.hpp"

namespace lbll {

// Fraction of latches whose type in `key` equals the ground truth. Both maps
// must cover the same latch ids.
double KeyAccuracy(const KeyAssignment& key, const GroundTruth& truth);

// Per-latch class probabilities under a label scheme.
struct Classifier {
  LabelScheme scheme = LabelScheme::kLdVsRest;
  std::function<std::vector<double>(int latch_id, const FeatureVector& x)> predict;

  // Keeps a reference to `model`.
  static Classifier FromModel(const Model& model);
};

// Lowest class index among the maxima.
int Argmax(const std::vector<double>& p);

// P / S / DD coefficients from a phase-2 or 4-class output. Two-level
// outputs duplicate the P/S probability onto both P and S.
std::array<double, 3> TypeCoefficients(LabelScheme scheme, const std::vector<double>& p);

struct AttackConfig {
  size_t topk = 1000;
  bool compute_fc = true;
  FcConfig fc;
};

struct AttackTimings {
  double phase1_ms = 0;
  double simplify_ms = 0;
  double phase2_ms = 0;
  double ilp_ms = 0;
  double fc_ms = 0;
};

struct AttackReport {
  int latch_count = 0;
  std::set<int> predicted_ld;
  TypeProbabilities probabilities;  // phase-2 coefficients of the kept latches
  IlpModel model;
  SolutionPool pool;
  std::vector<KeyAssignment> keys;  // one per pool entry, LD predictions merged
  // Filled when ground truth is supplied.
  double phase1_accuracy = 0;      // LD vs rest
  std::vector<double> key_accuracy;
  double t1_accuracy = 0;
  double best_accuracy = 0;        // best of pool
  int best_index = -1;
  int truth_feasible = -1;         // 1/0 when phase 1 was exact, else -1
  // Filled when the original netlist is supplied and compute_fc is set.
  FcResult fc;                     // of the best key (top-1 without truth)
  AttackTimings timings;
};

// Phase 1 on the locked netlist, removal of predicted logic decoys and
// constant propagation, phase 2 on the simplified netlist, top-k ILP, and
// scoring. `truth` and `original` are optional and only used for scoring.
AttackReport RunAttack(const Netlist& locked, const Classifier& phase1, const Classifier& phase2,
                       const AttackConfig& config, const GroundTruth* truth = nullptr,
                       const Netlist* original = nullptr);

// Straight 4-class argmax on the locked netlist.
KeyAssignment BaselineKey(const Netlist& locked, const Classifier& four_class);

// k best keys by the sum of per-latch log probabilities, with no structural
// constraints. Keys list types in the order of `probs`; ties go to the
// lexicographically smaller key (P < S < DD).
std::vector<std::vector<LatchType>> ClosestKeys(const TypeProbabilities& probs, size_t k);

// Best-of-pool accuracy of ClosestKeys with `logic_decoys` merged in.
double AblationClosestKeys(const TypeProbabilities& probs, const std::set<int>& logic_decoys,
                           const GroundTruth& truth, size_t k);

// 4-class predict, remove predicted LDs, simplify, and solve the ILP with
// the model's own P/S/DD outputs on the locked netlist. Returns the report
// of that pipeline (no FC).
AttackReport AblationSinglePhase(const Netlist& locked, const Classifier& four_class, size_t k,
                                 const GroundTruth& truth);

}  // namespace lbll
