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

// Gate-level netlist model and the .bench dialect reader/writer.
//
// The dialect is the ISCAS'89 one (`INPUT(x)`, `OUTPUT(x)`, `y = NAND(a,b)`,
// `q = DFF(d)`, `#` comments) extended with keyed latches:
//
//     q = LATCH(d, K7)
//
// where K7 names the latch's two-bit key slot. Latch ids are implicit: the
// i-th LATCH line in canonical order has id i. Ground truth lives in a
// sidecar of `id<TAB>TYPE` lines.

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"

namespace lbll {

enum class GateKind : uint8_t {
  kAnd,
  kNand,
  kOr,
  kNor,
  kXor,
  kXnor,
  kNot,
  kBuf,
  kMux,  // inputs: select, in0, in1; out = in0 when select = 0
  kConst0,
  kConst1,
};

std::string_view GateKindName(GateKind kind);
std::optional<GateKind> ParseGateKind(std::string_view token);
bool ArityOk(GateKind kind, size_t arity);

struct Gate {
  std::string output;
  GateKind kind = GateKind::kBuf;
  std::vector<std::string> inputs;

  bool operator==(const Gate&) const = default;
};

// Rising-edge flip-flop, reset to 0.
struct FlipFlop {
  std::string output;
  std::string data;

  bool operator==(const FlipFlop&) const = default;
};

struct KeyedLatch {
  int id = 0;
  std::string output;
  std::string data;
  int key_index = 0;

  bool operator==(const KeyedLatch&) const = default;
};

struct Netlist {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;
  std::vector<FlipFlop> flipflops;
  std::vector<KeyedLatch> latches;

  bool operator==(const Netlist&) const = default;

  const KeyedLatch* FindLatch(int id) const;
};

using GroundTruth = std::map<int, LatchType>;

// Throws a validation Error when a structural invariant is broken: every
// referenced net defined, one driver per net, gate arity, no combinational
// cycle, distinct latch ids and key indices.
void Validate(const Netlist& netlist);

// Sorted-declaration form: flip-flops and gates by output name, latches by id.
Netlist Canonicalize(Netlist netlist);

Netlist ParseBench(std::string_view text, std::string name = "");
// Keyed latches allowed, no ground truth (the attacker's view).
Netlist ParseLockedNetlist(std::string_view text, std::string name = "");
std::pair<Netlist, GroundTruth> ParseLocked(std::string_view text,
                                            std::string_view sidecar,
                                            std::string name = "");

struct LockedText {
  std::string netlist;
  std::string sidecar;
};

// Requires dense latch ids 0..n-1 and a ground truth covering exactly them.
LockedText WriteLocked(const Netlist& netlist, const GroundTruth& truth);
std::string WriteBench(const Netlist& netlist);

GroundTruth ParseSidecar(std::string_view sidecar);
std::string WriteSidecar(const GroundTruth& truth);

// Ordered `key = value` text used for manifests and run files.
class KeyValueFile {
 public:
  static KeyValueFile Parse(std::string_view text);
  std::string Serialize() const;

  void Set(const std::string& key, const std::string& value);
  template <typename T>
  void Set(const std::string& key, T value) {
    Set(key, std::to_string(value));
  }
  void SetReal(const std::string& key, double value);

  bool Has(const std::string& key) const;
  const std::string& Get(const std::string& key) const;
  std::string GetOr(const std::string& key, const std::string& fallback) const;
  long long GetInt(const std::string& key) const;
  long long GetIntOr(const std::string& key, long long fallback) const;
  double GetRealOr(const std::string& key, double fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// Integer-indexed connectivity view over a validated netlist.
class NetlistIndex {
 public:
  struct Driver {
    enum class Kind : uint8_t { kNone, kInput, kGate, kFlipFlop, kLatch };
    Kind kind = Kind::kNone;
    int index = -1;
  };
  struct Reader {
    enum class Kind : uint8_t { kGate, kFlipFlop, kLatch, kOutput };
    Kind kind;
    int index;
    int pin;
  };

  explicit NetlistIndex(const Netlist& netlist);

  const Netlist& netlist() const { return *netlist_; }
  int net_count() const { return static_cast<int>(names_.size()); }
  int NetId(std::string_view name) const;
  const std::string& NetName(int net) const { return names_[net]; }

  const Driver& driver(int net) const { return drivers_[net]; }
  std::span<const Reader> readers(int net) const {
    return {readers_.data() + reader_begin_[net],
            readers_.data() + reader_begin_[net + 1]};
  }

  std::span<const int> gate_inputs(int gate) const {
    return {gate_in_.data() + gate_in_begin_[gate],
            gate_in_.data() + gate_in_begin_[gate + 1]};
  }
  int gate_output(int gate) const { return gate_out_[gate]; }
  int ff_output(int ff) const { return ff_out_[ff]; }
  int ff_data(int ff) const { return ff_data_[ff]; }
  int latch_output(int pos) const { return latch_out_[pos]; }
  int latch_data(int pos) const { return latch_data_[pos]; }
  int input_net(int i) const { return input_net_[i]; }
  int output_net(int i) const { return output_net_[i]; }

  // Gates ordered so every gate follows the drivers of its inputs.
  const std::vector<int>& topo_gates() const { return topo_; }

 private:
  const Netlist* netlist_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  std::vector<Driver> drivers_;
  std::vector<int> reader_begin_;
  std::vector<Reader> readers_;
  std::vector<int> gate_in_begin_, gate_in_, gate_out_;
  std::vector<int> ff_out_, ff_data_, latch_out_, latch_data_;
  std::vector<int> input_net_, output_net_;
  std::vector<int> topo_;
};

}  // namespace lbll
