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

#include "test_util.hpp"

#include <fmt/core.h>

namespace lbll::testing {

std::string BenchmarkPath(const std::string& name) {
  return std::string(LBLL_SOURCE_DIR) + "/benchmarks/" + name + ".bench";
}

Netlist LoadBenchmark(const std::string& name) {
  return ParseBench(ReadFile(BenchmarkPath(name)), name);
}

Netlist RandomNetlist(uint64_t seed, int inputs, int gates, int ffs, int outputs) {
  Rng rng(seed);
  Netlist nl;
  nl.name = fmt::format("rand{}", seed);
  std::vector<std::string> pool;
  for (int i = 0; i < inputs; ++i) {
    nl.inputs.push_back(fmt::format("i{}", i));
    pool.push_back(nl.inputs.back());
  }
  for (int i = 0; i < ffs; ++i) pool.push_back(fmt::format("q{}", i));
  static constexpr GateKind kKinds[] = {GateKind::kAnd, GateKind::kNand, GateKind::kOr,
                                        GateKind::kNor, GateKind::kXor,  GateKind::kXnor,
                                        GateKind::kNot, GateKind::kBuf,  GateKind::kMux};
  auto pick = [&] { return pool[UniformIndex(rng, pool.size())]; };
  for (int g = 0; g < gates; ++g) {
    Gate gate;
    gate.output = fmt::format("g{}", g);
    gate.kind = kKinds[UniformIndex(rng, std::size(kKinds))];
    size_t arity = 2;
    if (gate.kind == GateKind::kNot || gate.kind == GateKind::kBuf) arity = 1;
    if (gate.kind == GateKind::kMux) arity = 3;
    if (arity == 2 && UniformIndex(rng, 4) == 0) arity = 3;
    for (size_t a = 0; a < arity; ++a) gate.inputs.push_back(pick());
    pool.push_back(gate.output);
    nl.gates.push_back(std::move(gate));
  }
  for (int i = 0; i < ffs; ++i) nl.flipflops.push_back({fmt::format("q{}", i), pick()});
  for (int i = 0; i < outputs; ++i) {
    // Prefer late gates so outputs see deep logic.
    size_t lo = pool.size() > 4 ? pool.size() / 2 : 0;
    nl.outputs.push_back(pool[lo + UniformIndex(rng, pool.size() - lo)]);
  }
  std::sort(nl.outputs.begin(), nl.outputs.end());
  nl.outputs.erase(std::unique(nl.outputs.begin(), nl.outputs.end()), nl.outputs.end());
  Validate(nl);
  return nl;
}

}  // namespace lbll::testing
