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

// Latch-based locking: flip-flop selection, primary/secondary splitting,
// delay-decoy and logic-decoy insertion.

#pragma once

#include <cstdint>
#include <vector>

#include "netlist.hpp"

namespace lbll {

enum class DecoyStyle : uint8_t { kMux, kOr, kXor };

struct LockConfig {
  uint64_t seed = 0;
  double ff_fraction = 0.5;
  double delay_decoy_rate = 0.25;  // per selected flip-flop
  double logic_decoy_rate = 0.25;  // per selected flip-flop
  std::vector<DecoyStyle> logic_decoy_styles = {DecoyStyle::kMux, DecoyStyle::kOr,
                                                DecoyStyle::kXor};
};

void ValidateLockConfig(const LockConfig& config);

// Two-bit key value per latch type: 00 LD, 01 DD, 10 P, 11 S.
int KeyBits(LatchType type);
LatchType TypeFromKeyBits(int bits);
std::string KeyEncodingText();

// Reserved prefix for generated nets.
inline constexpr std::string_view kGeneratedPrefix = "__lbll_";

// Positions into netlist.flipflops, sorted.
std::vector<int> SelectFlipFlops(const Netlist& netlist, const LockConfig& config);

// Each selected q = DFF(d) becomes p = LATCH(d) (primary) and q = LATCH(p)
// (secondary). New latches take ids and key slots after the existing ones.
void SplitToLatches(Netlist& netlist, GroundTruth& truth, const std::vector<int>& selected);

struct InsertStats {
  int requested = 0;
  int inserted = 0;
  int fallbacks = 0;  // MUX style requested but no eligible 1-input net
};

// `name_counter` numbers generated nets; callers share it across steps.
InsertStats InsertDelayDecoys(Netlist& netlist, GroundTruth& truth, int count, Rng& rng,
                              int& name_counter);
InsertStats InsertLogicDecoys(Netlist& netlist, GroundTruth& truth, int count,
                              const std::vector<DecoyStyle>& styles, Rng& rng,
                              int& name_counter);

struct LockResult {
  Netlist netlist;
  GroundTruth truth;
  KeyValueFile manifest;
};

// select -> split -> delay decoys -> logic decoys, then latch ids, key slots
// and generated net names are permuted. Deterministic in (netlist, config).
LockResult Lock(const Netlist& netlist, const LockConfig& config);

}  // namespace lbll
