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


#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "eval.hpp"
#include "locker.hpp"
#include "test_util.hpp"

namespace lbll {
namespace {

std::vector<double> OneHot(int k, int c) {
  std::vector<double> p(k, 0.0);
  p[c] = 1.0;
  return p;
}

// Classifiers that read the ground truth.
Classifier Oracle(const GroundTruth& truth, LabelScheme scheme) {
  return {scheme, [&truth, scheme](int id, const FeatureVector&) {
            return OneHot(ClassCount(scheme), *LabelFor(scheme, truth.at(id)));
          }};
}

LockResult LockedVariant(const std::string& name, uint64_t seed) {
  LockConfig c;
  c.seed = seed;
  return Lock(testing::LoadBenchmark(name), c);
}

TEST(KeyAccuracy, Basics) {
  GroundTruth t = {{0, LatchType::kPrimary}, {1, LatchType::kSecondary},
                   {2, LatchType::kDelayDecoy}, {3, LatchType::kLogicDecoy}};
  EXPECT_EQ(KeyAccuracy(t, t), 1.0);
  KeyAssignment k = t;
  k[2] = LatchType::kPrimary;
  EXPECT_EQ(KeyAccuracy(k, t), 0.75);
  k.erase(2);
  EXPECT_THROW(KeyAccuracy(k, t), Error);
  k[7] = LatchType::kPrimary;
  EXPECT_THROW(KeyAccuracy(k, t), Error);
}

TEST(Coefficients, TwoLevelDuplicatesPs) {
  auto c = TypeCoefficients(LabelScheme::kPsVsDd, {0.8, 0.2});
  EXPECT_EQ(c[0], 0.8);
  EXPECT_EQ(c[1], 0.8);
  EXPECT_EQ(c[2], 0.2);
  EXPECT_THROW(TypeCoefficients(LabelScheme::kLdVsRest, {0.5, 0.5}), Error);
}

TEST(RunAttack, OraclePerfectModelsRecoverKey) {
  for (const char* name : {"s27", "syn1", "syn3"}) {
    const Netlist original = testing::LoadBenchmark(name);
    for (uint64_t seed : {0, 1, 2}) {
      LockResult lr = LockedVariant(name, seed);
      AttackConfig cfg;
      cfg.topk = 50;
      cfg.fc = {50, 10, seed};
      AttackReport three = RunAttack(lr.netlist, Oracle(lr.truth, LabelScheme::kLdVsRest),
                                     Oracle(lr.truth, LabelScheme::kPsDd), cfg, &lr.truth,
                                     &original);
      EXPECT_EQ(three.phase1_accuracy, 1.0);
      EXPECT_EQ(three.truth_feasible, 1);
      EXPECT_EQ(three.t1_accuracy, 1.0) << name << " " << seed;
      EXPECT_EQ(three.best_index, 0);
      EXPECT_EQ(three.fc.fc, 0.0);
      AttackReport two = RunAttack(lr.netlist, Oracle(lr.truth, LabelScheme::kLdVsRest),
                                   Oracle(lr.truth, LabelScheme::kPsVsDd), cfg, &lr.truth,
                                   &original);
      EXPECT_EQ(two.best_accuracy, 1.0) << name << " " << seed;
      EXPECT_EQ(two.fc.fc, 0.0);
      for (double a : two.key_accuracy) EXPECT_LE(a, two.best_accuracy);
      EXPECT_EQ(static_cast<int>(two.keys[0].size()), two.latch_count);
    }
  }
}

TEST(RunAttack, MispredictedPhaseOneStillRuns) {
  LockResult lr = LockedVariant("syn2", 4);
  GroundTruth wrong = lr.truth;
  for (auto& [id, t] : wrong) {
    if (t == LatchType::kLogicDecoy) {
      t = LatchType::kPrimary;
      break;
    }
  }
  Classifier p1 = Oracle(wrong, LabelScheme::kLdVsRest);
  Classifier p2 = {LabelScheme::kPsVsDd,
                   [](int, const FeatureVector&) { return std::vector<double>{0.6, 0.4}; }};
  AttackConfig cfg;
  cfg.topk = 10;
  AttackReport r = RunAttack(lr.netlist, p1, p2, cfg, &lr.truth);
  EXPECT_EQ(r.truth_feasible, -1);
  EXPECT_LT(r.phase1_accuracy, 1.0);
  EXPECT_GE(r.best_accuracy, r.t1_accuracy);
  EXPECT_LE(r.pool.entries.size(), 10u);
}

TEST(RunAttack, RejectsWrongSchemes) {
  LockResult lr = LockedVariant("s27", 0);
  Classifier p1 = Oracle(lr.truth, LabelScheme::kLdVsRest);
  EXPECT_THROW(RunAttack(lr.netlist, p1, p1, {}), Error);
  EXPECT_THROW(RunAttack(lr.netlist, Oracle(lr.truth, LabelScheme::kAll4),
                         Oracle(lr.truth, LabelScheme::kPsDd), {}),
               Error);
}

TEST(Baseline, OracleArgmaxIsExact) {
  LockResult lr = LockedVariant("syn1", 5);
  EXPECT_EQ(KeyAccuracy(BaselineKey(lr.netlist, Oracle(lr.truth, LabelScheme::kAll4)), lr.truth),
            1.0);
}

TEST(SinglePhase, OracleEqualsTwoPhase) {
  LockResult lr = LockedVariant("syn2", 6);
  AttackConfig cfg;
  cfg.topk = 20;
  cfg.compute_fc = false;
  AttackReport two = RunAttack(lr.netlist, Oracle(lr.truth, LabelScheme::kLdVsRest),
                               Oracle(lr.truth, LabelScheme::kPsDd), cfg, &lr.truth);
  AttackReport one =
      AblationSinglePhase(lr.netlist, Oracle(lr.truth, LabelScheme::kAll4), 20, lr.truth);
  EXPECT_EQ(SerializePool(one.model, one.pool), SerializePool(two.model, two.pool));
  EXPECT_EQ(one.best_accuracy, 1.0);
}

TypeProbabilities RandomProbs(std::mt19937_64& rng, int n) {
  TypeProbabilities probs;
  std::uniform_int_distribution<int> d(0, 4);
  for (int i = 0; i < n; ++i) {
    // Coarse values so ties occur.
    std::array<double, 3> p = {d(rng) / 4.0, d(rng) / 4.0, d(rng) / 4.0};
    probs[10 * i + 3] = p;
  }
  return probs;
}

TEST(ClosestKeys, MatchesExhaustiveSort) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    TypeProbabilities probs = RandomProbs(rng, 5);
    struct Key {
      int64_t score;
      std::vector<int> types;
    };
    std::vector<Key> all;
    for (int code = 0; code < 243; ++code) {
      Key k{0, {}};
      int c = code;
      for (const auto& [id, p] : probs) {
        const int t = c % 3;
        c /= 3;
        k.types.push_back(t);
        k.score += std::llround(std::log(std::max(p[t], 1e-300)) * kCoefScale);
      }
      all.push_back(k);
    }
    std::sort(all.begin(), all.end(), [](const Key& a, const Key& b) {
      return a.score != b.score ? a.score > b.score : a.types < b.types;
    });
    for (size_t k : {1, 7, 243}) {
      auto got = ClosestKeys(probs, k);
      ASSERT_EQ(got.size(), k);
      for (size_t i = 0; i < k; ++i) {
        std::vector<int> types;
        for (LatchType t : got[i]) types.push_back(static_cast<int>(t));
        EXPECT_EQ(types, all[i].types) << "trial " << trial << " rank " << i;
      }
    }
  }
}

TEST(ClosestKeys, TopOneIsArgmaxAndFullSpaceFindsTruth) {
  std::mt19937_64 rng(2);
  TypeProbabilities probs = RandomProbs(rng, 6);
  GroundTruth truth;
  std::set<int> lds = {1000};
  truth[1000] = LatchType::kLogicDecoy;
  int i = 0;
  for (const auto& [id, p] : probs) truth[id] = static_cast<LatchType>(i++ % 3);
  auto top = ClosestKeys(probs, 1)[0];
  i = 0;
  for (const auto& [id, p] : probs) {
    std::vector<double> v(p.begin(), p.end());
    EXPECT_EQ(static_cast<int>(top[i++]), Argmax(v));
  }
  EXPECT_EQ(AblationClosestKeys(probs, lds, truth, 729), 1.0);
  EXPECT_LE(AblationClosestKeys(probs, lds, truth, 1), 1.0);
}

TEST(FunctionalCorruptibility, WrongTypeBehindLogicDecoyIsHarmless) {
  auto [nl, truth] = ParseLocked(
      "INPUT(a)\nINPUT(b)\nOUTPUT(o)\nOUTPUT(q)\n"
      "x = LATCH(a, K0)\ny = LATCH(x, K1)\no = OR(b, y)\n"
      "p = LATCH(b, K2)\nq = LATCH(p, K3)\n",
      "0\tPRIMARY\n1\tLOGIC_DECOY\n2\tPRIMARY\n3\tSECONDARY\n");
  Netlist original = ParseBench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\nOUTPUT(q)\no = BUF(b)\nq = DFF(b)\n");
  KeyAssignment key = truth;
  EXPECT_EQ(FunctionalCorruptibility(nl, key, original, {50, 64, 1}).fc, 0.0);
  for (LatchType t : {LatchType::kSecondary, LatchType::kDelayDecoy, LatchType::kLogicDecoy}) {
    key[0] = t;
    EXPECT_EQ(FunctionalCorruptibility(nl, key, original, {50, 64, 1}).fc, 0.0);
  }
  key = truth;
  key[3] = LatchType::kDelayDecoy;
  EXPECT_GT(FunctionalCorruptibility(nl, key, original, {50, 64, 1}).fc, 0.0);
}

}  // namespace
}  // namespace lbll
