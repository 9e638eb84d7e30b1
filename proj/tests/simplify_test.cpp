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

#include "simplify.hpp"

#include <gtest/gtest.h>

#include "locker.hpp"
#include "oracles.hpp"
#include "sim.hpp"
#include "test_util.hpp"

namespace lbll {
namespace {

std::set<int> TruthDecoys(const GroundTruth& t) {
  std::set<int> ids;
  for (const auto& [id, type] : t) {
    if (type == LatchType::kLogicDecoy) ids.insert(id);
  }
  return ids;
}

TEST(RemoveLogicDecoys, EmptySetIsIdentity) {
  Netlist nl = Lock(testing::LoadBenchmark("syn1"), {}).netlist;
  EXPECT_EQ(RemoveLogicDecoys(nl, {}), nl);
}

TEST(RemoveLogicDecoys, TiesMuxSelectToZero) {
  auto [nl, truth] = ParseLocked(
      "INPUT(a)\nINPUT(b)\nOUTPUT(z)\np = LATCH(a, K0)\nq = LATCH(m, K1)\n"
      "ld = LATCH(b, K2)\nm = MUX(ld, p, b)\nz = BUF(q)\n",
      "0\tPRIMARY\n1\tSECONDARY\n2\tLOGIC_DECOY\n");
  Netlist r = RemoveLogicDecoys(nl, {2});
  EXPECT_EQ(r.latches.size(), 2u);
  bool found = false;
  for (const auto& g : r.gates) {
    if (g.output == "ld") {
      EXPECT_EQ(g.kind, GateKind::kConst0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  Netlist p = PropagateConstants(r);
  SequentialGraph g = ExtractGraph(p);
  // b no longer reaches q: the false path is gone.
  EXPECT_FALSE(g.HasEdge(1, g.latch_node[1]));
  EXPECT_TRUE(g.HasEdge(g.latch_node[0], g.latch_node[1]));
}

TEST(RemoveLogicDecoys, MispredictedLatchIsStillRemoved) {
  auto [nl, truth] = ParseLocked("INPUT(a)\nOUTPUT(q)\np = LATCH(a, K0)\nq = LATCH(p, K1)\n",
                                 "0\tPRIMARY\n1\tSECONDARY\n");
  Netlist r = RemoveLogicDecoys(nl, {0});
  ASSERT_EQ(r.latches.size(), 1u);
  EXPECT_EQ(r.latches[0].id, 1);
  EXPECT_THROW(RemoveLogicDecoys(nl, {7}), Error);
}

TEST(PropagateConstants, AndWithZero) {
  Netlist nl = ParseBench("INPUT(a)\nOUTPUT(z)\nc = CONST0\nz = AND(a, c)\n");
  Netlist p = PropagateConstants(nl);
  ASSERT_EQ(p.gates.size(), 1u);
  EXPECT_EQ(p.gates[0].output, "z");
  EXPECT_EQ(p.gates[0].kind, GateKind::kConst0);
}

TEST(PropagateConstants, IdentitiesAndDuals) {
  Netlist nl = ParseBench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(o1)\nOUTPUT(o2)\nOUTPUT(o3)\nOUTPUT(o4)\nOUTPUT(o5)\n"
      "OUTPUT(o6)\nOUTPUT(o7)\nOUTPUT(o8)\n"
      "z = CONST0\nu = CONST1\n"
      "o1 = OR(a, z)\no2 = XOR(a, z)\no3 = NOT(z)\no4 = MUX(z, a, b)\no5 = MUX(u, a, b)\n"
      "o6 = AND(a, u, b)\no7 = NOR(a, u)\no8 = XNOR(a, u)\n");
  Netlist p = PropagateConstants(nl);
  std::map<std::string, Gate> by_out;
  for (const auto& g : p.gates) by_out[g.output] = g;
  EXPECT_EQ(by_out["o1"].kind, GateKind::kBuf);
  EXPECT_EQ(by_out["o1"].inputs, std::vector<std::string>{"a"});
  EXPECT_EQ(by_out["o2"].kind, GateKind::kBuf);
  EXPECT_EQ(by_out["o3"].kind, GateKind::kConst1);
  EXPECT_EQ(by_out["o4"].inputs, std::vector<std::string>{"a"});
  EXPECT_EQ(by_out["o5"].inputs, std::vector<std::string>{"b"});
  EXPECT_EQ(by_out["o6"].kind, GateKind::kAnd);
  EXPECT_EQ(by_out["o6"].inputs, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(by_out["o7"].kind, GateKind::kConst0);
  EXPECT_EQ(by_out["o8"].kind, GateKind::kBuf);
  EXPECT_FALSE(by_out.contains("z"));
  EXPECT_FALSE(by_out.contains("u"));
}

TEST(PropagateConstants, SequentialElementsSurvive) {
  Netlist nl = ParseBench("INPUT(a)\nOUTPUT(z)\nc = CONST0\nq = DFF(c)\nz = AND(q, a)\n");
  Netlist p = PropagateConstants(nl);
  EXPECT_EQ(p.flipflops.size(), 1u);
  EXPECT_EQ(p.gates.size(), 2u);
}

using testing::TieToZero;

TEST(PropagateConstants, ExhaustiveEquivalenceOnCombinationalCircuits) {
  std::vector<std::vector<bool>> all;
  for (int v = 0; v < 16; ++v) all.push_back({bool(v & 1), bool(v & 2), bool(v & 4), bool(v & 8)});
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Netlist nl = testing::RandomNetlist(seed, 4, 25, 0, 3);
    Rng rng(seed);
    Netlist tied = TieToZero(nl, nl.gates[UniformIndex(rng, nl.gates.size())].output);
    Netlist p = PropagateConstants(tied);
    Validate(p);
    EXPECT_EQ(Simulate(p, {}, all), Simulate(tied, {}, all)) << seed;
    EXPECT_LE(p.gates.size(), tied.gates.size());
    EXPECT_EQ(PropagateConstants(p), p);
  }
}

TEST(PropagateConstants, RandomTiedCircuitsStayEquivalent) {
  for (uint64_t seed = 0; seed < 100; ++seed) EXPECT_EQ(testing::CheckConstantPropagation(seed), "");
}

TEST(SimplifyForPhase2, TruthDecoysLeaveAlternatingGraph) {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    LockConfig c;
    c.seed = seed;
    LockResult r = Lock(testing::LoadBenchmark("syn3"), c);
    SimplifiedCircuit s = SimplifyForPhase2(r.netlist, TruthDecoys(r.truth));
    const SequentialGraph& g = s.features.graph;
    // Walk through delay decoys from each non-decoy latch.
    for (size_t pos = 0; pos < g.latch_node.size(); ++pos) {
      LatchType from = r.truth.at(g.latch_id[pos]);
      if (from == LatchType::kDelayDecoy) continue;
      std::vector<int> stack = {g.latch_node[pos]};
      std::set<int> seen;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : g.succ[u]) {
          if (g.kind[v] != NodeKind::kLatch || !seen.insert(v).second) continue;
          LatchType t = r.truth.at(g.latch_id[g.ref[v]]);
          ASSERT_NE(t, LatchType::kLogicDecoy);
          if (t == LatchType::kDelayDecoy) {
            stack.push_back(v);
          } else {
            EXPECT_NE(t, from);
          }
        }
      }
    }
  }
}

TEST(SimplifyForPhase2, NoDecoysKeepsFeatures) {
  for (const char* name : {"syn1", "s13207"}) {
    LockResult r = Lock(testing::LoadBenchmark(name), {});
    SimplifiedCircuit s = SimplifyForPhase2(r.netlist, {});
    FeaturizedCircuit f = Featurize(r.netlist);
    ASSERT_EQ(s.features.latches.size(), f.latches.size());
    for (size_t i = 0; i < f.latches.size(); ++i) {
      EXPECT_EQ(s.features.latches[i].latch_id, f.latches[i].latch_id);
      EXPECT_EQ(s.features.latches[i].values, f.latches[i].values);
    }
  }
}

TEST(SimplifyForPhase2, AllLatchesRemoved) {
  LockResult r = Lock(testing::LoadBenchmark("syn1"), {});
  std::set<int> all;
  for (const auto& [id, t] : r.truth) all.insert(id);
  SimplifiedCircuit s = SimplifyForPhase2(r.netlist, all);
  EXPECT_TRUE(s.features.latches.empty());
  for (NodeKind k : s.features.graph.kind) EXPECT_NE(k, NodeKind::kLatch);
}

}  // namespace
}  // namespace lbll
