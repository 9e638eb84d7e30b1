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

// Sequential graph: nodes are PIs, POs, flip-flops and latches; an edge u->v
// means a gate-only path from u's output to v's data input (or to PO v).
// Per-latch structural features are computed on this abstraction.

#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "netlist.hpp"

namespace lbll {

enum class NodeKind : uint8_t { kInput, kOutput, kFlipFlop, kLatch };

struct SequentialGraph {
  std::vector<NodeKind> kind;
  std::vector<int> ref;  // position in the netlist's inputs/outputs/flipflops/latches
  std::vector<std::vector<int>> succ;  // sorted, unique
  std::vector<std::vector<int>> pred;  // sorted, unique
  std::vector<int> latch_node;         // latch position -> node
  std::vector<int> latch_id;           // latch position -> latch id

  int node_count() const { return static_cast<int>(kind.size()); }
  size_t edge_count() const;
  bool HasEdge(int u, int v) const;
};

// Node numbering: PIs, then POs, then flip-flops, then latches, each in
// netlist order.
SequentialGraph ExtractGraph(const NetlistIndex& index);
SequentialGraph ExtractGraph(const Netlist& netlist);

inline constexpr int kFeatureCount = 14;
using FeatureVector = std::array<double, kFeatureCount>;

enum Feature : int {
  kTriangle = 0,
  kTrapezoidA,
  kTrapezoidB,
  kMaxFanoutDelay,
  kMaxFaninDelay,
  kLoop3,
  kSingleFanio,
  kFaninLatches,
  kFaninFlipFlops,
  kFaninInputs,
  kFanoutLatches,
  kFanoutFlipFlops,
  kFanoutOutputs,
  kFalseSelfLoop,
};

const std::array<std::string_view, kFeatureCount>& FeatureNames();

// Fraction of fan-ins that share a fan-out with the node; 0 without fan-ins.
double Triangle(const SequentialGraph& g, int node);

// (fan-ins v1 with FO(FO(node)) meeting FO(v1), fan-outs v1 with FI(FI(node))
// meeting FI(v1)), each normalised by the respective degree.
std::pair<double, double> Trapezoids(const SequentialGraph& g, int node);

// Unit-delay path depths (gate counts) per latch position. -1 means no path.
struct DelayProfile {
  std::vector<int> fanout_depth;
  std::vector<int> fanin_depth;
  int max_fanout = 0;
  int max_fanin = 0;
};
DelayProfile ComputeDelays(const NetlistIndex& index);

// Normalised (max fan-out delay, max fan-in delay) for one latch position.
std::pair<double, double> DelayFeatures(const DelayProfile& delays, int latch_pos);

struct LocalFeatures {
  double loop3 = 0;
  double single_fanio = 0;
  std::array<double, 6> counts{};  // fan-in latch/FF/PI, fan-out latch/FF/PO
  double false_self_loop = 0;
};
LocalFeatures ComputeLocalFeatures(const SequentialGraph& g, int node);

struct LatchFeatures {
  int latch_id;
  FeatureVector values;
};

struct FeaturizedCircuit {
  SequentialGraph graph;
  std::vector<LatchFeatures> latches;  // netlist latch order
};

FeaturizedCircuit Featurize(const Netlist& netlist);

}  // namespace lbll
