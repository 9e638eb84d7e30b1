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

// Logic-decoy removal and constant propagation.

#pragma once

#include <set>

#include "netlist.hpp"
#include "seqgraph.hpp"

namespace lbll {

// Deletes the listed latches and drives each output net with CONST0. The
// remaining latches keep their ids.
Netlist RemoveLogicDecoys(const Netlist& netlist, const std::set<int>& latch_ids);

// Rewrites gates to a fixpoint of the constant identities (AND/OR/XOR/NOT/
// MUX with constant inputs, plus NAND/NOR/XNOR/BUF and CONST1 duals), then
// deletes gates whose output reaches nothing. Flip-flops and latches are
// never deleted, and constants do not propagate through them. A gate left
// with one live input becomes BUF or NOT of it.
Netlist PropagateConstants(const Netlist& netlist);

struct SimplifiedCircuit {
  Netlist netlist;
  FeaturizedCircuit features;
};

SimplifiedCircuit SimplifyForPhase2(const Netlist& netlist, const std::set<int>& logic_decoys);

}  // namespace lbll
