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

#include <algorithm>

namespace lbll {

namespace {

bool Intersects(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

std::vector<int> UnionOf(const std::vector<std::vector<int>>& adj, const std::vector<int>& nodes) {
  std::vector<int> out;
  for (int n : nodes) out.insert(out.end(), adj[n].begin(), adj[n].end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

size_t SequentialGraph::edge_count() const {
  size_t n = 0;
  for (const auto& s : succ) n += s.size();
  return n;
}

bool SequentialGraph::HasEdge(int u, int v) const {
  return std::binary_search(succ[u].begin(), succ[u].end(), v);
}

SequentialGraph ExtractGraph(const NetlistIndex& index) {
  const Netlist& nl = index.netlist();
  SequentialGraph g;
  const int n_in = static_cast<int>(nl.inputs.size());
  const int n_out = static_cast<int>(nl.outputs.size());
  const int n_ff = static_cast<int>(nl.flipflops.size());
  const int n_latch = static_cast<int>(nl.latches.size());
  const int total = n_in + n_out + n_ff + n_latch;
  g.kind.reserve(total);
  for (int i = 0; i < n_in; ++i) g.kind.push_back(NodeKind::kInput), g.ref.push_back(i);
  for (int i = 0; i < n_out; ++i) g.kind.push_back(NodeKind::kOutput), g.ref.push_back(i);
  for (int i = 0; i < n_ff; ++i) g.kind.push_back(NodeKind::kFlipFlop), g.ref.push_back(i);
  for (int i = 0; i < n_latch; ++i) {
    g.kind.push_back(NodeKind::kLatch);
    g.ref.push_back(i);
    g.latch_node.push_back(n_in + n_out + n_ff + i);
    g.latch_id.push_back(nl.latches[i].id);
  }
  g.succ.assign(total, {});
  g.pred.assign(total, {});

  const int ff_base = n_in + n_out;
  const int latch_base = ff_base + n_ff;
  std::vector<int> stamp(index.net_count(), -1);
  std::vector<int> stack;
  auto sweep = [&](int node, int start_net) {
    std::vector<int>& out = g.succ[node];
    stack.assign(1, start_net);
    stamp[start_net] = node;
    while (!stack.empty()) {
      int net = stack.back();
      stack.pop_back();
      for (const auto& r : index.readers(net)) {
        using RK = NetlistIndex::Reader::Kind;
        switch (r.kind) {
          case RK::kGate: {
            int next = index.gate_output(r.index);
            if (stamp[next] != node) {
              stamp[next] = node;
              stack.push_back(next);
            }
            break;
          }
          case RK::kFlipFlop: out.push_back(ff_base + r.index); break;
          case RK::kLatch: out.push_back(latch_base + r.index); break;
          case RK::kOutput: out.push_back(n_in + r.index); break;
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  };
  for (int i = 0; i < n_in; ++i) sweep(i, index.input_net(i));
  for (int i = 0; i < n_ff; ++i) sweep(ff_base + i, index.ff_output(i));
  for (int i = 0; i < n_latch; ++i) sweep(latch_base + i, index.latch_output(i));
  for (int u = 0; u < total; ++u) {
    for (int v : g.succ[u]) g.pred[v].push_back(u);
  }
  return g;
}

SequentialGraph ExtractGraph(const Netlist& netlist) {
  NetlistIndex index(netlist);
  return ExtractGraph(index);
}

const std::array<std::string_view, kFeatureCount>& FeatureNames() {
  static constexpr std::array<std::string_view, kFeatureCount> kNames = {
      "triangle",        "trapezoid_a",      "trapezoid_b",     "max_fanout_delay",
      "max_fanin_delay", "loop3",            "single_fanio",    "fanin_latches",
      "fanin_ffs",       "fanin_pis",        "fanout_latches",  "fanout_ffs",
      "fanout_pos",      "false_self_loop"};
  return kNames;
}

double Triangle(const SequentialGraph& g, int node) {
  const auto& fi = g.pred[node];
  if (fi.empty()) return 0.0;
  int hits = 0;
  for (int v1 : fi) {
    if (Intersects(g.succ[node], g.succ[v1])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(fi.size());
}

std::pair<double, double> Trapezoids(const SequentialGraph& g, int node) {
  double first = 0.0, second = 0.0;
  const auto& fi = g.pred[node];
  const auto& fo = g.succ[node];
  if (!fi.empty()) {
    std::vector<int> fo2 = UnionOf(g.succ, fo);
    int hits = 0;
    for (int v1 : fi) {
      if (Intersects(fo2, g.succ[v1])) ++hits;
    }
    first = static_cast<double>(hits) / static_cast<double>(fi.size());
  }
  if (!fo.empty()) {
    std::vector<int> fi2 = UnionOf(g.pred, fi);
    int hits = 0;
    for (int v1 : fo) {
      if (Intersects(fi2, g.pred[v1])) ++hits;
    }
    second = static_cast<double>(hits) / static_cast<double>(fo.size());
  }
  return {first, second};
}

DelayProfile ComputeDelays(const NetlistIndex& index) {
  const Netlist& nl = index.netlist();
  using RK = NetlistIndex::Reader::Kind;
  using DK = NetlistIndex::Driver::Kind;
  const int nets = index.net_count();

  // Longest gate count from a net to any sequential sink or PO.
  std::vector<int> to_sink(nets, -1);
  for (int n = 0; n < nets; ++n) {
    for (const auto& r : index.readers(n)) {
      if (r.kind != RK::kGate) {
        to_sink[n] = 0;
        break;
      }
    }
  }
  const auto& topo = index.topo_gates();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int d = to_sink[index.gate_output(*it)];
    if (d < 0) continue;
    for (int in : index.gate_inputs(*it)) to_sink[in] = std::max(to_sink[in], d + 1);
  }

  // Longest gate count from any PI / flip-flop / latch output to a net.
  // Constant gates start no path.
  std::vector<int> from_source(nets, -1);
  for (int n = 0; n < nets; ++n) {
    DK k = index.driver(n).kind;
    if (k == DK::kInput || k == DK::kFlipFlop || k == DK::kLatch) from_source[n] = 0;
  }
  for (int gate : topo) {
    int best = -1;
    for (int in : index.gate_inputs(gate)) best = std::max(best, from_source[in]);
    from_source[index.gate_output(gate)] = best < 0 ? -1 : best + 1;
  }

  DelayProfile p;
  for (size_t i = 0; i < nl.latches.size(); ++i) {
    int fo = to_sink[index.latch_output(int(i))];
    int fi = from_source[index.latch_data(int(i))];
    p.fanout_depth.push_back(fo);
    p.fanin_depth.push_back(fi);
    p.max_fanout = std::max(p.max_fanout, fo);
    p.max_fanin = std::max(p.max_fanin, fi);
  }
  return p;
}

std::pair<double, double> DelayFeatures(const DelayProfile& delays, int latch_pos) {
  auto norm = [](int v, int max) {
    return (v <= 0 || max <= 0) ? 0.0 : static_cast<double>(v) / static_cast<double>(max);
  };
  return {norm(delays.fanout_depth[latch_pos], delays.max_fanout),
          norm(delays.fanin_depth[latch_pos], delays.max_fanin)};
}

LocalFeatures ComputeLocalFeatures(const SequentialGraph& g, int node) {
  LocalFeatures f;
  const auto& fi = g.pred[node];
  const auto& fo = g.succ[node];

  for (int a : fo) {
    if (a == node) continue;
    for (int b : g.succ[a]) {
      if (b == node || b == a) continue;
      if (g.HasEdge(b, node)) {
        f.loop3 = 1.0;
        break;
      }
    }
    if (f.loop3 > 0) break;
  }

  f.single_fanio = (fi.size() == 1 || fo.size() == 1) ? 1.0 : 0.0;

  for (int v : fi) {
    switch (g.kind[v]) {
      case NodeKind::kLatch: f.counts[0] += 1; break;
      case NodeKind::kFlipFlop: f.counts[1] += 1; break;
      case NodeKind::kInput: f.counts[2] += 1; break;
      case NodeKind::kOutput: break;
    }
  }
  for (int v : fo) {
    switch (g.kind[v]) {
      case NodeKind::kLatch: f.counts[3] += 1; break;
      case NodeKind::kFlipFlop: f.counts[4] += 1; break;
      case NodeKind::kOutput: f.counts[5] += 1; break;
      case NodeKind::kInput: break;
    }
  }

  for (int v2 : fo) {
    if (g.kind[v2] != NodeKind::kLatch || !g.HasEdge(v2, v2)) continue;
    f.false_self_loop =
        std::max(f.false_self_loop, 1.0 / static_cast<double>(g.pred[v2].size()));
  }
  return f;
}

FeaturizedCircuit Featurize(const Netlist& netlist) {
  NetlistIndex index(netlist);
  FeaturizedCircuit out;
  out.graph = ExtractGraph(index);
  DelayProfile delays = ComputeDelays(index);
  const SequentialGraph& g = out.graph;
  out.latches.reserve(netlist.latches.size());
  for (size_t pos = 0; pos < netlist.latches.size(); ++pos) {
    const int node = g.latch_node[pos];
    FeatureVector v{};
    v[kTriangle] = Triangle(g, node);
    auto [ta, tb] = Trapezoids(g, node);
    v[kTrapezoidA] = ta;
    v[kTrapezoidB] = tb;
    auto [fo_delay, fi_delay] = DelayFeatures(delays, static_cast<int>(pos));
    v[kMaxFanoutDelay] = fo_delay;
    v[kMaxFaninDelay] = fi_delay;
    LocalFeatures local = ComputeLocalFeatures(g, node);
    v[kLoop3] = local.loop3;
    v[kSingleFanio] = local.single_fanio;
    for (int i = 0; i < 6; ++i) v[kFaninLatches + i] = local.counts[i];
    v[kFalseSelfLoop] = local.false_self_loop;
    out.latches.push_back({netlist.latches[pos].id, v});
  }
  return out;
}

}  // namespace lbll
