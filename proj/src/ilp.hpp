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

// 0-1 program over latch types and colors, and an exact top-k solver.
//
// Per latch i: binaries T_P, T_S, T_DD, C. Maximise
//   sum_i Pr_P(i) T_P(i) + Pr_S(i) T_S(i) + Pr_DD(i) T_DD(i)
// subject to
//   F0  T_P + T_S + T_DD = 1
//   F1  C >= T_P
//   F2  C <= 1 - T_S
// and for every latch edge i -> j
//   C0  T_P(i) + T_P(j) <= 1
//   C1  T_S(i) + T_S(j) <= 1
//   C2  -(1 - T_DD(j)) <= C(j) - C(i) <= 1 - T_DD(j)
//   C3  1 - (1 - T_DD(i)) - T_DD(j) <= C(i) + C(j) <= 1 + (1 - T_DD(i)) + T_DD(j)
// Boundary rules (flip-flops count as PIs on the fan-in side and as POs on
// the fan-out side):
//   B0  PO-adjacent latch: T_P = 0
//   B1  PO-adjacent latch: C = 0
//   B2  latch adjacent to both a PI and a PO: T_DD = 1
//
// The solver uses the equivalent form: non-DD types fix C (P = 1, S = 0),
// and each edge i -> j imposes C(i) xor C(j) = [j is not DD].

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "seqgraph.hpp"

namespace lbll {

// Objective coefficients are stored as integer multiples of 2^-32.
inline constexpr double kCoefScale = 4294967296.0;
int64_t QuantizeCoef(double p);
double ObjectiveValue(int64_t quantized);

enum IlpVar : int { kVarTP = 0, kVarTS = 1, kVarTDD = 2, kVarC = 3 };

struct LinearConstraint {
  enum class Sense : uint8_t { kLe, kEq, kGe };
  std::string family;                       // F0..F2, C0..C3, B0..B2
  std::vector<std::pair<int, int>> terms;   // (variable, coefficient)
  Sense sense = Sense::kLe;
  int rhs = 0;
};

// Per-latch P / S / DD probabilities keyed by latch id.
using TypeProbabilities = std::map<int, std::array<double, 3>>;

struct IlpModel {
  std::vector<int> latch_ids;                 // model order
  std::vector<std::array<int64_t, 3>> coef;   // P, S, DD; quantized
  std::vector<std::pair<int, int>> edges;     // model indices i -> j
  std::vector<char> po_adjacent;
  std::vector<char> pi_adjacent;
  std::vector<int8_t> fixed_color;           // implied color, -1 when free
  std::vector<int> component_begin;           // plus a final end sentinel
  std::vector<LinearConstraint> constraints;

  int latch_count() const { return static_cast<int>(latch_ids.size()); }
  static int Var(int latch, IlpVar v) { return 4 * latch + v; }
};

// Implied colors come from two rules: latch fan-ins of one latch share a
// color, and PO-adjacent latches have color 0. Latches then fall into
// independent clusters: each latch ties its own color class to its fan-in
// class, and classes of implied color tie nothing.
//
// Model order: clusters ordered by their smallest latch id; inside a cluster,
// breadth-first over latch edges from the smallest id, neighbours in
// ascending id.
IlpModel BuildModel(const SequentialGraph& graph, const TypeProbabilities& probs);

// P, S or DD per model latch, plus colors.
struct IlpAssignment {
  std::vector<LatchType> types;
  std::vector<uint8_t> colors;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violated;  // family names, one per violated row
};

// Evaluates every linear constraint of the model.
FeasibilityReport CheckFeasible(const IlpModel& model, const IlpAssignment& assignment);

// A coloring that makes `types` feasible under the parity form, if any.
std::optional<std::vector<uint8_t>> ColorsFor(const IlpModel& model,
                                              const std::vector<LatchType>& types);

int64_t Objective(const IlpModel& model, const std::vector<LatchType>& types);

struct PoolEntry {
  int64_t objective = 0;
  IlpAssignment assignment;
};

struct SolutionPool {
  std::vector<PoolEntry> entries;
};

// Exact k best assignments distinct in types, sorted by objective
// descending, ties by types in model order (P < S < DD).
SolutionPool SolveTopK(const IlpModel& model, size_t k);

// Cross-check: repeated single-best solves with each found type assignment
// excluded. Exponential in the worst case; meant for small instances.
SolutionPool SolveNoGood(const IlpModel& model, size_t k);

// One line per entry: objective, then latch_id:TYPE:C in ascending id.
std::string SerializePool(const IlpModel& model, const SolutionPool& pool);

}  // namespace lbll
