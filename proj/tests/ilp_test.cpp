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

#include "ilp.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "kbest.hpp"
#include "locker.hpp"
#include "simplify.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace lbll {
namespace {

constexpr LatchType kP = LatchType::kPrimary;
constexpr LatchType kS = LatchType::kSecondary;
constexpr LatchType kDD = LatchType::kDelayDecoy;

using testing::BruteForce;
using testing::GraphSpec;
using testing::Instance;
using testing::MakeGraph;
using testing::RandomInstance;
using testing::SlotsOf;

TEST(IlpModel, EmptyModel) {
  IlpModel m = BuildModel(MakeGraph({1, 1, 0, {}, {{0, 1}}}), {});
  EXPECT_EQ(m.latch_count(), 0);
  EXPECT_TRUE(CheckFeasible(m, {}).feasible);
  SolutionPool pool = SolveTopK(m, 5);
  ASSERT_EQ(pool.entries.size(), 1u);
  EXPECT_EQ(pool.entries[0].objective, 0);
}

TEST(IlpModel, MissingProbabilitiesRejected) {
  EXPECT_THROW(BuildModel(MakeGraph({0, 0, 0, {7}, {}}), {}), Error);
  EXPECT_THROW(BuildModel(MakeGraph({0, 0, 0, {7}, {}}), {{7, {1.5, 0, 0}}}), Error);
}

TEST(IlpModel, FourVariablesPerLatch) {
  Instance inst = RandomInstance(3, 6);
  IlpModel m = BuildModel(inst.graph, inst.probs);
  for (const auto& c : m.constraints) {
    for (auto [v, coef] : c.terms) {
      EXPECT_GE(v, 0);
      EXPECT_LT(v, 4 * m.latch_count());
      EXPECT_NE(coef, 0);
    }
  }
}

TEST(IlpModel, DelayChainColors) {
  // P -> DD -> DD -> S, latch 3 drives a PO.
  GraphSpec s{0, 1, 0, {0, 1, 2, 3}, {{1, 2}, {2, 3}, {3, 4}, {4, 0}}};
  TypeProbabilities probs;
  for (int i = 0; i < 4; ++i) probs[i] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  IlpModel m = BuildModel(MakeGraph(s), probs);
  std::vector<LatchType> truth(4);
  const LatchType by_id[4] = {kP, kDD, kDD, kS};
  for (int i = 0; i < 4; ++i) truth[i] = by_id[m.latch_ids[i]];
  auto colors = ColorsFor(m, truth);
  ASSERT_TRUE(colors.has_value());
  const uint8_t expect_by_id[4] = {1, 1, 1, 0};
  for (int i = 0; i < 4; ++i) EXPECT_EQ((*colors)[i], expect_by_id[m.latch_ids[i]]);
  EXPECT_TRUE(CheckFeasible(m, {truth, *colors}).feasible);
}

TEST(IlpModel, MutualPoAdjacentPairNeedsDelayDecoy) {
  GraphSpec s{0, 1, 0, {0, 1}, {{1, 2}, {2, 1}, {1, 0}, {2, 0}}};
  IlpModel m = BuildModel(MakeGraph(s), {{0, {0.5, 0.5, 0.5}}, {1, {0.5, 0.5, 0.5}}});
  auto all = BruteForce(m);
  ASSERT_FALSE(all.empty());
  for (const auto& e : all) {
    EXPECT_NE(e.slots[0], 0);
    EXPECT_NE(e.slots[1], 0);
    EXPECT_TRUE(e.slots[0] == 2 || e.slots[1] == 2);
  }
}

TEST(IlpModel, AllDelayDecoysConstantColorsFeasible) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = RandomInstance(seed, 7);
    IlpModel m = BuildModel(inst.graph, inst.probs);
    IlpAssignment a{std::vector<LatchType>(m.latch_count(), kDD),
                    std::vector<uint8_t>(m.latch_count(), 0)};
    EXPECT_TRUE(CheckFeasible(m, a).feasible) << seed;
  }
}

TEST(IlpModel, PrimaryPrimaryReportsC0) {
  GraphSpec s{0, 0, 0, {0, 1}, {{0, 1}}};
  IlpModel m = BuildModel(MakeGraph(s), {{0, {1, 0, 0}}, {1, {1, 0, 0}}});
  auto r = CheckFeasible(m, {{kP, kP}, {1, 1}});
  EXPECT_FALSE(r.feasible);
  EXPECT_NE(std::find(r.violated.begin(), r.violated.end(), "C0"), r.violated.end());
}

TEST(IlpModel, C3TruthTable) {
  GraphSpec s{0, 0, 0, {0, 1}, {{0, 1}}};
  IlpModel m = BuildModel(MakeGraph(s), {{0, {0, 0, 0}}, {1, {0, 0, 0}}});
  ASSERT_EQ(m.latch_ids, (std::vector<int>{0, 1}));
  for (int bits = 0; bits < 16; ++bits) {
    std::vector<int> x(8, 0);
    const int ddi = bits & 1, ddj = bits >> 1 & 1, ci = bits >> 2 & 1, cj = bits >> 3 & 1;
    x[IlpModel::Var(0, kVarTDD)] = ddi;
    x[IlpModel::Var(1, kVarTDD)] = ddj;
    x[IlpModel::Var(0, kVarC)] = ci;
    x[IlpModel::Var(1, kVarC)] = cj;
    bool holds = true;
    for (const auto& c : m.constraints) {
      if (c.family != "C3") continue;
      int lhs = 0;
      for (auto [v, coef] : c.terms) lhs += coef * x[v];
      holds &= c.sense == LinearConstraint::Sense::kLe ? lhs <= c.rhs : lhs >= c.rhs;
    }
    const bool expected = !(ddi == 1 && ddj == 0) || ci + cj == 1;
    EXPECT_EQ(holds, expected) << bits;
  }
}

TEST(IlpSolver, MatchesBruteForce) {
  for (uint64_t seed = 0; seed < 200; ++seed) EXPECT_EQ(testing::CheckTopKAgainstBruteForce(seed), "");
}

TEST(IlpSolver, ColorsForAgreesWithLinearForm) {
  for (uint64_t seed = 500; seed < 530; ++seed) {
    Instance inst = RandomInstance(seed, 5);
    IlpModel m = BuildModel(inst.graph, inst.probs);
    auto brute = BruteForce(m);
    std::set<std::vector<int>> feasible;
    for (const auto& e : brute) feasible.insert(e.slots);
    const std::array<LatchType, 3> types = {kP, kS, kDD};
    for (int code = 0; code < 243; ++code) {
      std::vector<LatchType> t;
      for (int i = 0, c = code; i < 5; ++i, c /= 3) t.push_back(types[c % 3]);
      auto colors = ColorsFor(m, t);
      EXPECT_EQ(colors.has_value(), feasible.contains(SlotsOf(t))) << seed << " " << code;
      if (colors) EXPECT_TRUE(CheckFeasible(m, {t, *colors}).feasible);
    }
  }
}

TEST(IlpSolver, AlternationAfterContractingDelayChains) {
  for (uint64_t seed = 700; seed < 740; ++seed) {
    Instance inst = RandomInstance(seed, 6);
    IlpModel m = BuildModel(inst.graph, inst.probs);
    const int n = m.latch_count();
    std::vector<std::vector<int>> succ(n);
    for (auto [i, j] : m.edges) succ[i].push_back(j);
    for (const auto& e : BruteForce(m)) {
      for (int i = 0; i < n; ++i) {
        if (e.slots[i] == 2) continue;
        if (m.po_adjacent[i]) {
          EXPECT_EQ(e.slots[i], 1);
        }
        // Non-DD latches reachable from i through DD latches only.
        std::vector<char> seen(n, 0);
        std::vector<int> stack = succ[i];
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          if (seen[v]) continue;
          seen[v] = 1;
          if (e.slots[v] == 2) {
            stack.insert(stack.end(), succ[v].begin(), succ[v].end());
          } else {
            EXPECT_NE(e.slots[v], e.slots[i]) << seed;
          }
        }
      }
    }
  }
}

TEST(IlpSolver, NoGoodAgreesWithTopK) {
  for (uint64_t seed = 900; seed < 940; ++seed) {
    Instance inst = RandomInstance(seed, 6);
    IlpModel m = BuildModel(inst.graph, inst.probs);
    SolutionPool a = SolveTopK(m, 12);
    SolutionPool b = SolveNoGood(m, 12);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (size_t r = 0; r < a.entries.size(); ++r) {
      EXPECT_EQ(a.entries[r].objective, b.entries[r].objective);
      EXPECT_EQ(a.entries[r].assignment.types, b.entries[r].assignment.types);
    }
  }
}

TEST(IlpSolver, ScaleInvariantOrder) {
  for (uint64_t seed = 1000; seed < 1020; ++seed) {
    Instance inst = RandomInstance(seed, 7);
    TypeProbabilities half = inst.probs;
    for (auto& [id, p] : half) {
      for (double& v : p) v *= 0.5;
    }
    SolutionPool a = SolveTopK(BuildModel(inst.graph, inst.probs), 20);
    SolutionPool b = SolveTopK(BuildModel(inst.graph, half), 20);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (size_t r = 0; r < a.entries.size(); ++r) {
      // Halving can round an odd quantum; compare only where that cannot matter.
      if (seed % 2 == 0) EXPECT_EQ(a.entries[r].assignment.types, b.entries[r].assignment.types);
      EXPECT_NEAR(ObjectiveValue(a.entries[r].objective),
                  2 * ObjectiveValue(b.entries[r].objective), 1e-8);
    }
  }
}

TEST(IlpSolver, DeterministicSymmetricTies) {
  GraphSpec s{1, 1, 0, {0, 1}, {{0, 2}, {0, 3}, {2, 1}, {3, 1}}};
  TypeProbabilities probs = {{0, {0.3, 0.3, 0.3}}, {1, {0.3, 0.3, 0.3}}};
  IlpModel m = BuildModel(MakeGraph(s), probs);
  std::string first = SerializePool(m, SolveTopK(m, 10));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(SerializePool(m, SolveTopK(m, 10)), first);
}

TEST(IlpSolver, RejectsZeroK) {
  IlpModel m = BuildModel(MakeGraph({}), {});
  EXPECT_THROW(SolveTopK(m, 0), Error);
}

TEST(IlpSolver, SerializeFormat) {
  GraphSpec s{0, 1, 0, {1, 0}, {{1, 2}, {2, 0}}};
  IlpModel m = BuildModel(MakeGraph(s), {{0, {0, 1, 0}}, {1, {1, 0, 0}}});
  SolutionPool pool = SolveTopK(m, 1);
  EXPECT_EQ(SerializePool(m, pool), "2.0000000000\t0:SECONDARY:0 1:PRIMARY:1\n");
}

TEST(IlpSolver, GroundTruthFeasibleOnLockedCircuits) {
  for (const char* name : {"s27", "syn1", "syn2", "syn3", "syn4", "syn5", "syn6", "s13207"}) {
    for (uint64_t seed : {1, 2, 3}) {
      LockConfig cfg;
      cfg.seed = seed;
      LockResult locked = Lock(testing::LoadBenchmark(name), cfg);
      std::set<int> lds;
      for (auto [id, t] : locked.truth) {
        if (t == LatchType::kLogicDecoy) lds.insert(id);
      }
      SimplifiedCircuit simple = SimplifyForPhase2(locked.netlist, lds);
      SequentialGraph g = ExtractGraph(simple.netlist);
      TypeProbabilities probs;
      for (int id : g.latch_id) {
        LatchType t = locked.truth.at(id);
        probs[id] = {t == kP ? 1.0 : 0.0, t == kS ? 1.0 : 0.0, t == kDD ? 1.0 : 0.0};
      }
      IlpModel m = BuildModel(g, probs);
      std::vector<LatchType> truth;
      for (int id : m.latch_ids) truth.push_back(locked.truth.at(id));
      auto colors = ColorsFor(m, truth);
      ASSERT_TRUE(colors.has_value()) << name << " seed " << seed;
      auto report = CheckFeasible(m, {truth, *colors});
      EXPECT_TRUE(report.feasible) << name << " seed " << seed << " "
                                   << (report.violated.empty() ? "" : report.violated[0]);
      SolutionPool pool = SolveTopK(m, 1);
      ASSERT_EQ(pool.entries.size(), 1u);
      EXPECT_EQ(pool.entries[0].assignment.types, truth) << name;
    }
  }
}

std::vector<std::vector<int>> BruteCombos(const std::vector<RankedList>& lists, size_t k) {
  std::vector<std::vector<int>> all = {{}};
  for (const auto& l : lists) {
    std::vector<std::vector<int>> next;
    for (const auto& c : all) {
      for (size_t i = 0; i < l.value.size(); ++i) {
        auto d = c;
        d.push_back(static_cast<int>(i));
        next.push_back(d);
      }
    }
    all = std::move(next);
  }
  auto key = [&](const std::vector<int>& c) {
    int64_t sum = 0;
    std::vector<int> lex;
    for (size_t i = 0; i < c.size(); ++i) {
      sum += lists[i].value[c[i]];
      lex.push_back(lists[i].lex_rank[c[i]]);
    }
    return std::make_pair(-sum, lex);
  };
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  if (all.size() > k) all.resize(k);
  return all;
}

TEST(KBest, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RankedList> lists(1 + rng() % 4);
    for (auto& l : lists) {
      const int len = 1 + static_cast<int>(rng() % 5);
      std::vector<std::pair<int64_t, int>> entries;
      std::vector<int> lex(len);
      std::iota(lex.begin(), lex.end(), 0);
      std::shuffle(lex.begin(), lex.end(), rng);
      for (int i = 0; i < len; ++i) entries.push_back({static_cast<int64_t>(rng() % 4), lex[i]});
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      for (auto [v, r] : entries) {
        l.value.push_back(v);
        l.lex_rank.push_back(r);
      }
    }
    for (size_t k : {size_t{1}, size_t{7}, size_t{1000}}) {
      EXPECT_EQ(KBestCombinations(lists, k), BruteCombos(lists, k)) << trial << " k=" << k;
    }
  }
}

TEST(KBest, EmptyProductHasOneCombination) {
  auto r = KBestCombinations({}, 3);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].empty());
}

}  // namespace
}  // namespace lbll
