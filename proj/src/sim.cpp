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

#include "sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace lbll {

Simulator::Simulator(const Netlist& netlist, const KeyAssignment& key) {
  NetlistIndex index(netlist);
  values_.assign(index.net_count(), 0);
  for (size_t i = 0; i < netlist.inputs.size(); ++i) input_nets_.push_back(index.input_net(int(i)));
  for (size_t i = 0; i < netlist.outputs.size(); ++i) {
    output_nets_.push_back(index.output_net(int(i)));
  }
  for (size_t f = 0; f < netlist.flipflops.size(); ++f) {
    ff_out_.push_back(index.ff_output(int(f)));
    ff_data_.push_back(index.ff_data(int(f)));
  }
  const size_t n_latch = netlist.latches.size();
  std::vector<char> low(n_latch, 0), high(n_latch, 0);
  for (size_t pos = 0; pos < n_latch; ++pos) {
    auto it = key.find(netlist.latches[pos].id);
    if (it == key.end()) {
      ValidationError(fmt::format("key does not cover latch {}", netlist.latches[pos].id));
    }
    switch (it->second) {
      case LatchType::kPrimary: low[pos] = 1; break;
      case LatchType::kSecondary: high[pos] = 1; break;
      case LatchType::kDelayDecoy: low[pos] = high[pos] = 1; break;
      case LatchType::kLogicDecoy: zero_nets_.push_back(index.latch_output(int(pos))); break;
    }
  }
  low_ = BuildPhase(netlist, index, low);
  high_ = BuildPhase(netlist, index, high);
}

Simulator::Phase Simulator::BuildPhase(const Netlist& netlist, const NetlistIndex& index,
                                       const std::vector<char>& transparent) {
  Phase phase;
  std::vector<Op> ops;
  for (size_t g = 0; g < netlist.gates.size(); ++g) {
    auto ins = index.gate_inputs(int(g));
    ops.push_back({netlist.gates[g].kind, index.gate_output(int(g)),
                   static_cast<int>(op_inputs_.size()), static_cast<int>(ins.size()), false});
    op_inputs_.insert(op_inputs_.end(), ins.begin(), ins.end());
  }
  for (size_t pos = 0; pos < netlist.latches.size(); ++pos) {
    if (!transparent[pos]) continue;
    ops.push_back({GateKind::kBuf, index.latch_output(int(pos)),
                   static_cast<int>(op_inputs_.size()), 1, true});
    op_inputs_.push_back(index.latch_data(int(pos)));
  }

  // Tarjan over dependency edges (op -> driver op of each input), which
  // yields strongly connected components drivers-first.
  const int n = static_cast<int>(ops.size());
  std::vector<int> driver_op(index.net_count(), -1);
  for (int i = 0; i < n; ++i) driver_op[ops[i].out] = i;
  std::vector<int> order_idx(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, int>> call;  // (op, next input)
  int counter = 0;
  std::vector<int> sequence;
  for (int root = 0; root < n; ++root) {
    if (order_idx[root] >= 0) continue;
    call.push_back({root, 0});
    order_idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const Op& op = ops[v];
      if (next < op.in_count) {
        int w = driver_op[op_inputs_[op.in_begin + next]];
        ++next;
        if (w < 0) continue;
        if (order_idx[w] < 0) {
          order_idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order_idx[w]);
        }
        continue;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] != order_idx[done]) continue;
      const int begin = static_cast<int>(sequence.size());
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        sequence.push_back(w);
      } while (w != done);
      std::reverse(sequence.begin() + begin, sequence.end());
      const int end = static_cast<int>(sequence.size());
      bool cyclic = end - begin > 1;
      if (!cyclic) {
        const Op& single = ops[done];
        for (int k = 0; k < single.in_count; ++k) {
          if (op_inputs_[single.in_begin + k] == single.out) cyclic = true;
        }
      }
      if (cyclic || phase.blocks.empty() || phase.blocks.back().cyclic) {
        phase.blocks.push_back({begin, end, cyclic});
      } else {
        phase.blocks.back().end = end;
      }
    }
  }
  for (int i : sequence) phase.ops.push_back(ops[i]);
  return phase;
}

void Simulator::Reset() {
  std::fill(values_.begin(), values_.end(), 0);
  unsettled_ = 0;
}

uint64_t Simulator::Eval(const Op& op) const {
  const int* in = op_inputs_.data() + op.in_begin;
  auto v = [&](int k) { return values_[in[k]]; };
  uint64_t acc = 0;
  switch (op.kind) {
    case GateKind::kAnd:
    case GateKind::kNand:
      acc = ~uint64_t{0};
      for (int k = 0; k < op.in_count; ++k) acc &= v(k);
      return op.kind == GateKind::kNand ? ~acc : acc;
    case GateKind::kOr:
    case GateKind::kNor:
      for (int k = 0; k < op.in_count; ++k) acc |= v(k);
      return op.kind == GateKind::kNor ? ~acc : acc;
    case GateKind::kXor:
    case GateKind::kXnor:
      for (int k = 0; k < op.in_count; ++k) acc ^= v(k);
      return op.kind == GateKind::kXnor ? ~acc : acc;
    case GateKind::kNot: return ~v(0);
    case GateKind::kBuf: return v(0);
    case GateKind::kMux: return (~v(0) & v(1)) | (v(0) & v(2));
    case GateKind::kConst0: return 0;
    case GateKind::kConst1: return ~uint64_t{0};
  }
  return 0;
}

void Simulator::RunPhase(const Phase& phase) {
  for (const Block& b : phase.blocks) {
    if (!b.cyclic) {
      for (int i = b.begin; i < b.end; ++i) values_[phase.ops[i].out] = Eval(phase.ops[i]);
      continue;
    }
    scratch_.clear();
    for (int i = b.begin; i < b.end; ++i) scratch_.push_back(values_[phase.ops[i].out]);
    const int limit = 2 * (b.end - b.begin) + 8;
    uint64_t changed = 0;
    for (int pass = 0; pass <= limit; ++pass) {
      changed = 0;
      for (int i = b.begin; i < b.end; ++i) {
        uint64_t nv = Eval(phase.ops[i]);
        changed |= nv ^ values_[phase.ops[i].out];
        values_[phase.ops[i].out] = nv;
      }
      if (changed == 0) break;
    }
    if (changed != 0) {
      unsettled_ |= changed;
      for (int i = b.begin; i < b.end; ++i) {
        if (!phase.ops[i].is_latch) continue;
        uint64_t& val = values_[phase.ops[i].out];
        val = (val & ~changed) | (scratch_[i - b.begin] & changed);
      }
    }
  }
}

void Simulator::Step(std::span<const uint64_t> inputs, std::span<uint64_t> outputs) {
  if (inputs.size() != input_nets_.size() || outputs.size() != output_nets_.size()) {
    ValidationError("simulator input/output width mismatch");
  }
  for (size_t i = 0; i < inputs.size(); ++i) values_[input_nets_[i]] = inputs[i];
  for (int z : zero_nets_) values_[z] = 0;
  RunPhase(low_);
  for (size_t o = 0; o < outputs.size(); ++o) outputs[o] = values_[output_nets_[o]];
  std::vector<uint64_t> captured(ff_out_.size());
  for (size_t f = 0; f < ff_out_.size(); ++f) captured[f] = values_[ff_data_[f]];
  for (size_t f = 0; f < ff_out_.size(); ++f) values_[ff_out_[f]] = captured[f];
  RunPhase(high_);
}

std::vector<std::vector<bool>> Simulate(const Netlist& netlist, const KeyAssignment& key,
                                        const std::vector<std::vector<bool>>& inputs) {
  Simulator sim(netlist, key);
  sim.Reset();
  std::vector<uint64_t> in(sim.input_count()), out(sim.output_count());
  std::vector<std::vector<bool>> trace;
  for (const auto& vec : inputs) {
    if (vec.size() != in.size()) ValidationError("input vector width mismatch");
    for (size_t i = 0; i < in.size(); ++i) in[i] = vec[i] ? 1 : 0;
    sim.Step(in, out);
    std::vector<bool> row(out.size());
    for (size_t o = 0; o < out.size(); ++o) row[o] = out[o] & 1;
    trace.push_back(std::move(row));
  }
  return trace;
}

FcResult FunctionalCorruptibility(const Netlist& locked, const KeyAssignment& key,
                                  const Netlist& original, const FcConfig& config) {
  if (config.cycles < 1 || config.runs < 1) ValidationError("fc cycles and runs must be >= 1");
  if (locked.inputs != original.inputs || locked.outputs != original.outputs) {
    ValidationError("locked and original circuits have different primary inputs/outputs");
  }
  Simulator a(locked, key);
  Simulator b(original, {});
  const size_t n_in = a.input_count(), n_out = a.output_count();
  std::vector<uint64_t> in(n_in), out_a(n_out), out_b(n_out);
  std::vector<double> per_run;
  FcResult result;
  for (int base = 0; base < config.runs; base += 64) {
    const int lanes = std::min(64, config.runs - base);
    const uint64_t mask = lanes == 64 ? ~uint64_t{0} : (uint64_t{1} << lanes) - 1;
    Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(base / 64)));
    a.Reset();
    b.Reset();
    std::vector<long long> mism(lanes, 0);
    for (int c = 0; c < config.cycles; ++c) {
      for (auto& w : in) w = rng();
      a.Step(in, out_a);
      b.Step(in, out_b);
      for (size_t o = 0; o < n_out; ++o) {
        uint64_t diff = (out_a[o] ^ out_b[o]) & mask;
        while (diff) {
          ++mism[std::countr_zero(diff)];
          diff &= diff - 1;
        }
      }
    }
    const double bits = static_cast<double>(config.cycles) * static_cast<double>(n_out);
    for (int l = 0; l < lanes; ++l) {
      double fc = bits > 0 ? static_cast<double>(mism[l]) / bits : 0.0;
      if ((a.unsettled() >> l) & 1) {
        fc = 1.0;
        ++result.flagged_runs;
      }
      per_run.push_back(fc);
    }
  }
  double sum = 0;
  for (double v : per_run) sum += v;
  result.fc = sum / static_cast<double>(per_run.size());
  double var = 0;
  for (double v : per_run) var += (v - result.fc) * (v - result.fc);
  result.stddev = std::sqrt(var / static_cast<double>(per_run.size()));
  return result;
}

}  // namespace lbll
