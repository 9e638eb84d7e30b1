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

#include <fmt/format.h>

namespace lbll {

Netlist RemoveLogicDecoys(const Netlist& netlist, const std::set<int>& latch_ids) {
  for (int id : latch_ids) {
    if (netlist.FindLatch(id) == nullptr) ValidationError(fmt::format("{} is not a latch id", id));
  }
  Netlist out = netlist;
  out.latches.clear();
  for (const auto& l : netlist.latches) {
    if (latch_ids.contains(l.id)) {
      out.gates.push_back({l.output, GateKind::kConst0, {}});
    } else {
      out.latches.push_back(l);
    }
  }
  return out;
}

namespace {

constexpr int8_t kUnknown = -1;

// Rewrites `g` given the constant values of its inputs. Returns the constant
// output value, or kUnknown when the gate stays live.
int8_t Fold(Gate& g, const std::vector<int8_t>& inputs_const) {
  auto make_const = [&](bool v) {
    g.kind = v ? GateKind::kConst1 : GateKind::kConst0;
    g.inputs.clear();
    return static_cast<int8_t>(v);
  };
  auto keep_live = [&](std::vector<std::string> live, GateKind multi, GateKind single) {
    g.inputs = std::move(live);
    g.kind = g.inputs.size() == 1 ? single : multi;
    return kUnknown;
  };
  std::vector<std::string> live;
  switch (g.kind) {
    case GateKind::kConst0: return 0;
    case GateKind::kConst1: return 1;
    case GateKind::kBuf:
    case GateKind::kNot:
      if (inputs_const[0] == kUnknown) return kUnknown;
      return make_const((inputs_const[0] == 1) != (g.kind == GateKind::kNot));
    case GateKind::kAnd:
    case GateKind::kNand:
    case GateKind::kOr:
    case GateKind::kNor: {
      const bool is_and = g.kind == GateKind::kAnd || g.kind == GateKind::kNand;
      const bool invert = g.kind == GateKind::kNand || g.kind == GateKind::kNor;
      // Controlling value is 0 for AND, 1 for OR.
      const int8_t controlling = is_and ? 0 : 1;
      bool changed = false;
      for (size_t k = 0; k < g.inputs.size(); ++k) {
        if (inputs_const[k] == controlling) return make_const((controlling == 1) != invert);
        if (inputs_const[k] == kUnknown) {
          live.push_back(g.inputs[k]);
        } else {
          changed = true;
        }
      }
      if (live.empty()) return make_const((controlling == 0) != invert);
      if (!changed) return kUnknown;
      return keep_live(std::move(live), g.kind, invert ? GateKind::kNot : GateKind::kBuf);
    }
    case GateKind::kXor:
    case GateKind::kXnor: {
      bool parity = g.kind == GateKind::kXnor;
      bool changed = false;
      for (size_t k = 0; k < g.inputs.size(); ++k) {
        if (inputs_const[k] == kUnknown) {
          live.push_back(g.inputs[k]);
        } else {
          parity ^= inputs_const[k] == 1;
          changed = true;
        }
      }
      if (live.empty()) return make_const(parity);
      if (!changed) return kUnknown;
      return keep_live(std::move(live), parity ? GateKind::kXnor : GateKind::kXor,
                       parity ? GateKind::kNot : GateKind::kBuf);
    }
    case GateKind::kMux: {
      if (inputs_const[0] == kUnknown) return kUnknown;
      const size_t pick = inputs_const[0] == 1 ? 2 : 1;
      if (inputs_const[pick] != kUnknown) return make_const(inputs_const[pick] == 1);
      return keep_live({g.inputs[pick]}, GateKind::kBuf, GateKind::kBuf);
    }
  }
  return kUnknown;
}

}  // namespace

Netlist PropagateConstants(const Netlist& netlist) {
  NetlistIndex index(netlist);
  Netlist out = netlist;
  std::vector<int8_t> value(index.net_count(), kUnknown);
  std::vector<int8_t> ins;
  for (int gate : index.topo_gates()) {
    ins.clear();
    for (int in : index.gate_inputs(gate)) ins.push_back(value[in]);
    value[index.gate_output(gate)] = Fold(out.gates[gate], ins);
  }

  // Drop gates whose output feeds nothing, to a fixpoint.
  NetlistIndex rewritten(out);
  const int nets = rewritten.net_count();
  std::vector<int> uses(nets, 0);
  for (int n = 0; n < nets; ++n) uses[n] = static_cast<int>(rewritten.readers(n).size());
  std::vector<char> dead(out.gates.size(), 0);
  std::vector<int> stack;
  for (size_t g = 0; g < out.gates.size(); ++g) {
    if (uses[rewritten.gate_output(int(g))] == 0) stack.push_back(int(g));
  }
  while (!stack.empty()) {
    int g = stack.back();
    stack.pop_back();
    if (dead[g]) continue;
    dead[g] = 1;
    for (int in : rewritten.gate_inputs(g)) {
      if (--uses[in] == 0) {
        const auto& d = rewritten.driver(in);
        if (d.kind == NetlistIndex::Driver::Kind::kGate) stack.push_back(d.index);
      }
    }
  }
  std::vector<Gate> kept;
  for (size_t g = 0; g < out.gates.size(); ++g) {
    if (!dead[g]) kept.push_back(std::move(out.gates[g]));
  }
  out.gates = std::move(kept);
  return out;
}

SimplifiedCircuit SimplifyForPhase2(const Netlist& netlist, const std::set<int>& logic_decoys) {
  SimplifiedCircuit s;
  s.netlist = PropagateConstants(RemoveLogicDecoys(netlist, logic_decoys));
  s.features = Featurize(s.netlist);
  return s;
}

}  // namespace lbll
