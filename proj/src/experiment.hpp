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


// Leave-one-circuit-out experiment: lock every circuit of a suite into
// variants, train phase-1, phase-2 and baseline models on the other
// circuits, then attack and score every variant of the held-out circuit.

#pragma once

#include <string>
#include <vector>

#include "forest.hpp"
#include "locker.hpp"
#include "mlp.hpp"
#include "sim.hpp"

namespace lbll {

struct RunConfig {
  std::string suite = "small";
  std::vector<std::string> circuits;  // overrides the suite when non-empty
  std::string bench_dir;              // empty: $LBLL_BENCH_DIR, then "benchmarks"
  int variants = 11;
  size_t topk = 1000;
  uint64_t lock_seed = 0;
  uint64_t train_seed = 0;
  uint64_t fc_seed = 0;
  LockConfig lock;
  FcConfig fc;
  ForestParams forest;
  MlpParams mlp;
  LabelScheme phase2_scheme = LabelScheme::kPsVsDd;
  bool ablations = true;
  int workers = 1;
};

// Circuits of a named suite: small, large or smoke.
std::vector<std::string> SuiteCircuits(const std::string& suite);

// `key = value` run file. Unknown keys are rejected.
RunConfig ParseRunFile(std::string_view text);
// Every setting, including derived defaults; parses back to the same config.
std::string WriteRunFile(const RunConfig& config);

// Resolved benchmark directory and circuit list.
std::string BenchDir(const RunConfig& config);
std::vector<std::string> RunCircuits(const RunConfig& config);

// Stable per-stage seeds.
uint64_t LockSeed(const RunConfig& config, const std::string& circuit, int variant);
uint64_t TrainSeed(const RunConfig& config, const std::string& held_out, int stage);
uint64_t FcSeed(const RunConfig& config, const std::string& circuit, int variant);

struct VariantResult {
  std::string circuit;
  int variant = 0;
  int latches = 0;
  double phase1_acc = 0;
  double t1_acc = 0;
  double tk_acc = 0;
  double fc = 0;
  double fc_std = 0;
  int fc_flagged = 0;
  int truth_feasible = -1;
  size_t pool = 0;
  double baseline_acc = 0;
  double single_phase_acc = 0;
  double closest_acc = 0;
  double attack_ms = 0;  // phase 1 through ILP
  double fc_ms = 0;
  double ablation_ms = 0;
};

struct FoldResult {
  std::string held_out;
  size_t train_rows = 0;
  double phase1_oob = 0;
  FeatureVector phase1_importance{};
  FeatureVector phase2_importance{};
  double phase1_ms = 0;
  double phase2_ms = 0;
  double baseline_ms = 0;
};

struct ExperimentResult {
  RunConfig config;
  std::vector<VariantResult> variants;  // circuit order, then variant
  std::vector<FoldResult> folds;
  double lock_ms = 0;
};

// Writes locked variants (netlist, sidecar, manifest), models and the run
// manifest under `artifact_dir` when it is non-empty.
ExperimentResult RunExperiment(const RunConfig& config, const std::string& artifact_dir = "");

struct SuiteAverages {
  double phase1_acc = 0, t1_acc = 0, tk_acc = 0, fc = 0;
  double baseline_acc = 0, single_phase_acc = 0, closest_acc = 0;
};
// Mean over circuits of the per-circuit means.
SuiteAverages Averages(const ExperimentResult& result);

// Deterministic given the run file; runtimes are kept out of these two.
std::string ReportText(const ExperimentResult& result);
std::string ReportTsv(const ExperimentResult& result);
std::string ImportanceTsv(const ExperimentResult& result);
std::string TimingsTsv(const ExperimentResult& result);

// report.txt, report.tsv, importance.tsv and timings.tsv under `dir`.
void WriteReports(const ExperimentResult& result, const std::string& dir);

}  // namespace lbll
