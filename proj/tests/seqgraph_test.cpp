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

#include "seqgraph.hpp"

#include <gtest/gtest.h>

#include <queue>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"

namespace lbll {
namespace {

// All-latch graph from an edge list.
SequentialGraph MakeGraph(int n, const std::vector<std::pair<int, int>>& edges) {
  SequentialGraph g;
  g.kind.assign(n, NodeKind::kLatch);
  g.succ.assign(n, {});
  g.pred.assign(n, {});
  for (int i = 0; i < n; ++i) {
    g.ref.push_back(i);
    g.latch_node.push_back(i);
    g.latch_id.push_back(i);
  }
  for (auto [u, v] : edges) g.succ[u].push_back(v);
  for (auto& s : g.succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  for (int u = 0; u < n; ++u) {
    for (int v : g.succ[u]) g.pred[v].push_back(u);
  }
  return g;
}

TEST(ExtractGraph, InputThroughGateToOutput) {
  SequentialGraph g = ExtractGraph(ParseBench("INPUT(a)\nOUTPUT(z)\nz = NOT(a)"));
  ASSERT_EQ(g.node_count(), 2);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.HasEdge(0, 1));
}

TEST(ExtractGraph, LatchChainThroughThreeGates) {
  auto [nl, truth] = ParseLocked(
      "INPUT(a)\nOUTPUT(z)\np = LATCH(a, K0)\ns = LATCH(n3, K1)\n"
      "n1 = NOT(p)\nn2 = BUF(n1)\nn3 = NOT(n2)\nz = BUF(s)\n",
      "0\tPRIMARY\n1\tSECONDARY\n");
  SequentialGraph g = ExtractGraph(nl);
  const int p = g.latch_node[0], s = g.latch_node[1];
  EXPECT_EQ(g.succ[p], std::vector<int>{s});
  EXPECT_EQ(g.edge_count(), 3u);  // a->p, p->s, s->z
}

// Per-source BFS over the gate DAG, written independently of ExtractGraph.
std::set<std::pair<std::string, std::string>> OracleEdges(const Netlist& nl) {
  std::map<std::string, std::vector<std::string>> gate_fanout;  // net -> gate outputs
  std::map<std::string, std::vector<std::string>> sinks;        // net -> sink names
  for (const auto& g : nl.gates) {
    for (const auto& in : g.inputs) gate_fanout[in].push_back(g.output);
  }
  for (const auto& f : nl.flipflops) sinks[f.data].push_back("ff:" + f.output);
  for (const auto& l : nl.latches) sinks[l.data].push_back("l:" + l.output);
  for (const auto& o : nl.outputs) sinks[o].push_back("po:" + o);
  std::vector<std::pair<std::string, std::string>> sources;
  for (const auto& i : nl.inputs) sources.push_back({"pi:" + i, i});
  for (const auto& f : nl.flipflops) sources.push_back({"ff:" + f.output, f.output});
  for (const auto& l : nl.latches) sources.push_back({"l:" + l.output, l.output});
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& [label, net] : sources) {
    std::set<std::string> seen = {net};
    std::queue<std::string> q;
    q.push(net);
    while (!q.empty()) {
      std::string n = q.front();
      q.pop();
      for (const auto& s : sinks[n]) edges.insert({label, s});
      for (const auto& o : gate_fanout[n]) {
        if (seen.insert(o).second) q.push(o);
      }
    }
  }
  return edges;
}

std::string NodeLabel(const Netlist& nl, const SequentialGraph& g, int v) {
  switch (g.kind[v]) {
    case NodeKind::kInput: return "pi:" + nl.inputs[g.ref[v]];
    case NodeKind::kOutput: return "po:" + nl.outputs[g.ref[v]];
    case NodeKind::kFlipFlop: return "ff:" + nl.flipflops[g.ref[v]].output;
    case NodeKind::kLatch: return "l:" + nl.latches[g.ref[v]].output;
  }
  return "";
}

TEST(ExtractGraph, AgreesWithBfsOracle) {
  for (const char* name : {"s27", "syn1", "syn3", "s13207"}) {
    Netlist nl = testing::LoadBenchmark(name);
    SequentialGraph g = ExtractGraph(nl);
    std::set<std::pair<std::string, std::string>> got;
    for (int u = 0; u < g.node_count(); ++u) {
      for (int v : g.succ[u]) got.insert({NodeLabel(nl, g, u), NodeLabel(nl, g, v)});
    }
    EXPECT_EQ(got, OracleEdges(nl)) << name;
    EXPECT_EQ(got.size(), g.edge_count());
  }
}

TEST(Triangle, EmptyFaninIsZero) {
  SequentialGraph g = MakeGraph(2, {{0, 1}});
  EXPECT_EQ(Triangle(g, 0), 0.0);
}

TEST(Triangle, SingleFaninSharingFanout) {
  // v1=0, v2=1, w=2
  SequentialGraph g = MakeGraph(3, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(Triangle(g, 1), 1.0);
}

TEST(Triangle, HalfOfFaninsShare) {
  // fan-ins 0 and 3 of v2=1; only 0 also reaches w=2; 3 reaches 4.
  SequentialGraph g = MakeGraph(5, {{0, 1}, {3, 1}, {0, 2}, {1, 2}, {3, 4}});
  EXPECT_EQ(Triangle(g, 1), 0.5);
}

TEST(Trapezoids, IsolatedLatch) {
  SequentialGraph g = MakeGraph(1, {});
  EXPECT_EQ(Trapezoids(g, 0), std::make_pair(0.0, 0.0));
}

TEST(Trapezoids, DelayDecoyChainWithShortcut) {
  // P=0 -> DD1=1 -> DD2=2 -> S=3, and P -> x=4 where x is also fed by DD2.
  SequentialGraph g = MakeGraph(5, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {2, 4}});
  EXPECT_EQ(Trapezoids(g, 1).first, 1.0);
}

TEST(Trapezoids, NoTwoHopOverlap) {
  SequentialGraph g = MakeGraph(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(Trapezoids(g, 1), std::make_pair(0.0, 0.0));
  EXPECT_EQ(Trapezoids(g, 2), std::make_pair(0.0, 0.0));
}

TEST(Trapezoids, MirrorOverFanins) {
  // v2=2 with FI={1}, FI(FI)={0}; fan-out v1=3 also fed by 0.
  SequentialGraph g = MakeGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  EXPECT_EQ(Trapezoids(g, 2).second, 1.0);
}

TEST(LocalFeatures, SelfLoopFreeHasNoFalseSelfLoop) {
  SequentialGraph g = MakeGraph(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(ComputeLocalFeatures(g, 0).false_self_loop, 0.0);
}

TEST(LocalFeatures, FalseSelfLoopHalf) {
  SequentialGraph g = MakeGraph(2, {{0, 1}, {1, 1}});
  EXPECT_EQ(ComputeLocalFeatures(g, 0).false_self_loop, 0.5);
}

TEST(LocalFeatures, Loop3NeedsThreeDistinctNodes) {
  EXPECT_EQ(ComputeLocalFeatures(MakeGraph(3, {{0, 1}, {1, 2}, {2, 0}}), 0).loop3, 1.0);
  EXPECT_EQ(ComputeLocalFeatures(MakeGraph(2, {{0, 1}, {1, 0}}), 0).loop3, 0.0);
  EXPECT_EQ(ComputeLocalFeatures(MakeGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 0).loop3, 0.0);
}

TEST(LocalFeatures, LatchBetweenInputAndOutput) {
  auto [nl, truth] = ParseLocked("INPUT(a)\nOUTPUT(l)\nl = LATCH(a, K0)\n", "0\tDELAY_DECOY\n");
  FeaturizedCircuit fc = Featurize(nl);
  const FeatureVector& f = fc.latches[0].values;
  std::vector<double> counts(f.begin() + kFaninLatches, f.begin() + kFanoutOutputs + 1);
  EXPECT_EQ(counts, (std::vector<double>{0, 0, 1, 0, 0, 1}));
  EXPECT_EQ(f[kSingleFanio], 1.0);
}

TEST(DelayFeatures, DirectOutputHasZeroDepth) {
  auto [nl, truth] = ParseLocked(
      "INPUT(a)\nOUTPUT(l)\nOUTPUT(z)\nl = LATCH(a, K0)\nm = LATCH(a, K1)\n"
      "n1 = NOT(m)\nn2 = NOT(n1)\nz = BUF(n2)\n",
      "0\tPRIMARY\n1\tSECONDARY\n");
  FeaturizedCircuit fc = Featurize(nl);
  EXPECT_EQ(fc.latches[0].values[kMaxFanoutDelay], 0.0);
  EXPECT_EQ(fc.latches[1].values[kMaxFanoutDelay], 1.0);
}

TEST(DelayFeatures, HalfOfMaximum) {
  // latch 0 reaches z through 3 gates, latch 1 through 6.
  auto [nl, truth] = ParseLocked(
      "INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\nl = LATCH(a, K0)\nm = LATCH(a, K1)\n"
      "a1 = NOT(l)\na2 = NOT(a1)\ny = NOT(a2)\n"
      "b1 = NOT(m)\nb2 = NOT(b1)\nb3 = NOT(b2)\nb4 = NOT(b3)\nb5 = NOT(b4)\nz = NOT(b5)\n",
      "0\tPRIMARY\n1\tSECONDARY\n");
  FeaturizedCircuit fc = Featurize(nl);
  EXPECT_EQ(fc.latches[0].values[kMaxFanoutDelay], 0.5);
  EXPECT_EQ(fc.latches[1].values[kMaxFanoutDelay], 1.0);
}

TEST(Featurize, RangesAndDegreeIdentity) {
  Netlist nl = testing::LoadBenchmark("syn2");
  // Turn every FF into a latch to get a latch-rich graph.
  for (size_t i = 0; i < nl.flipflops.size(); ++i) {
    nl.latches.push_back({int(i), nl.flipflops[i].output, nl.flipflops[i].data, int(i)});
  }
  nl.flipflops.clear();
  FeaturizedCircuit fc = Featurize(nl);
  for (size_t pos = 0; pos < fc.latches.size(); ++pos) {
    const FeatureVector& f = fc.latches[pos].values;
    for (int k : {kTriangle, kTrapezoidA, kTrapezoidB, kMaxFanoutDelay, kMaxFaninDelay,
                  kFalseSelfLoop}) {
      EXPECT_GE(f[k], 0.0);
      EXPECT_LE(f[k], 1.0);
    }
    int node = fc.graph.latch_node[pos];
    EXPECT_EQ(f[kFaninLatches] + f[kFaninFlipFlops] + f[kFaninInputs],
              double(fc.graph.pred[node].size()));
    EXPECT_EQ(f[kFanoutLatches] + f[kFanoutFlipFlops] + f[kFanoutOutputs],
              double(fc.graph.succ[node].size()));
  }
}

TEST(Featurize, GoldenTenLatchCircuit) {
  // l3 and l8 carry self-loops, l2 -> l3 -> l4 -> l2 is a three-cycle.
  auto [nl, truth] = ParseLocked(testing::kTenLatchBench, testing::kTenLatchSidecar);
  const std::vector<FeatureVector> golden = testing::TenLatchGolden();
  FeaturizedCircuit fc = Featurize(nl);
  ASSERT_EQ(fc.latches.size(), golden.size());
  for (size_t pos = 0; pos < golden.size(); ++pos) {
    EXPECT_EQ(fc.latches[pos].latch_id, int(pos));
    for (int k = 0; k < kFeatureCount; ++k) {
      EXPECT_EQ(fc.latches[pos].values[k], golden[pos][k])
          << "latch " << pos << " feature " << FeatureNames()[k];
    }
  }
}

}  // namespace
}  // namespace lbll
