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

// Keyed two-phase sequential simulation, 64 independent lanes per word.
//
// One clock cycle is phase L (clock low) followed by phase H (clock high):
//   L: PRIMARY and DELAY_DECOY keyed latches are transparent; outputs are
//      sampled at the end of L.
//   rising edge: flip-flops capture their data from the end of L.
//   H: SECONDARY and DELAY_DECOY keyed latches are transparent.
// LOGIC_DECOY keyed latches output 0 in both phases. All state resets to 0.
// A wrong key can close a combinational loop; loops that do not settle keep
// their latches' values from before the phase and the lane is flagged.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netlist.hpp"

namespace lbll {

using KeyAssignment = std::map<int, LatchType>;

class Simulator {
 public:
  // `key` must name every latch; ignored when the netlist has none.
  Simulator(const Netlist& netlist, const KeyAssignment& key);

  void Reset();
  // inputs[i] / outputs[i] follow netlist.inputs / netlist.outputs.
  void Step(std::span<const uint64_t> inputs, std::span<uint64_t> outputs);

  // Lanes that saw a non-settling loop since the last Reset.
  uint64_t unsettled() const { return unsettled_; }
  size_t input_count() const { return input_nets_.size(); }
  size_t output_count() const { return output_nets_.size(); }

 private:
  struct Op {
    GateKind kind;
    int out;
    int in_begin;
    int in_count;
    bool is_latch;
  };
  struct Block {
    int begin;
    int end;
    bool cyclic;
  };
  struct Phase {
    std::vector<Op> ops;
    std::vector<Block> blocks;
  };

  Phase BuildPhase(const Netlist& netlist, const NetlistIndex& index,
                   const std::vector<char>& transparent);
  uint64_t Eval(const Op& op) const;
  void RunPhase(const Phase& phase);

  std::vector<uint64_t> values_;
  std::vector<int> op_inputs_;
  std::vector<int> input_nets_, output_nets_;
  std::vector<int> ff_out_, ff_data_;
  std::vector<int> zero_nets_;  // logic-decoy keyed latch outputs
  Phase low_, high_;
  uint64_t unsettled_ = 0;
  std::vector<uint64_t> scratch_;
};

// Single-lane trace: outputs per cycle for the given input vectors.
std::vector<std::vector<bool>> Simulate(const Netlist& netlist, const KeyAssignment& key,
                                        const std::vector<std::vector<bool>>& inputs);

struct FcConfig {
  int cycles = 100;
  int runs = 100;
  uint64_t seed = 0;
};

struct FcResult {
  double fc = 0.0;       // mean over runs
  double stddev = 0.0;   // across runs
  int flagged_runs = 0;  // counted as fully corrupted
};

// Fraction of primary-output bits that differ between the keyed locked
// circuit and the original under identical random input streams.
FcResult FunctionalCorruptibility(const Netlist& locked, const KeyAssignment& key,
                                  const Netlist& original, const FcConfig& config);

}  // namespace lbll
