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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "common.hpp"
#include "dataset.hpp"
#include "eval.hpp"
#include "experiment.hpp"
#include "forest.hpp"
#include "ilp.hpp"
#include "locker.hpp"
#include "mlp.hpp"
#include "model_io.hpp"
#include "oracles.hpp"
#include "seqgraph.hpp"
#include "sim.hpp"
#include "simplify.hpp"
#include "test_util.hpp"

namespace lbll {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig BaseConfig() {
  RunConfig c;
  c.bench_dir = std::string(LBLL_SOURCE_DIR) + "/benchmarks";
  return c;
}

std::set<int> LogicDecoys(const GroundTruth& truth) {
  std::set<int> ids;
  for (const auto& [id, t] : truth) {
    if (t == LatchType::kLogicDecoy) ids.insert(id);
  }
  return ids;
}

LockResult LockVariant(const RunConfig& config, const std::string& circuit, int v) {
  LockConfig lc = config.lock;
  lc.seed = LockSeed(config, circuit, v);
  return Lock(testing::LoadBenchmark(circuit), lc);
}

Outcome LockingSoundness() {
  const RunConfig config = BaseConfig();
  const auto t0 = std::chrono::steady_clock::now();
  int variants = 0, nonzero = 0, control_zero = 0;
  for (const auto& name : SuiteCircuits("small")) {
    Netlist original = testing::LoadBenchmark(name);
    for (int v = 0; v < config.variants; ++v) {
      LockResult locked = LockVariant(config, name, v);
      FcConfig fc{100, 10, FcSeed(config, name, v)};
      FcResult r = FunctionalCorruptibility(locked.netlist, locked.truth, original, fc);
      ++variants;
      if (r.fc != 0.0 || r.flagged_runs != 0) ++nonzero;
      // Control: logic decoys keyed as delay decoys pass their input through.
      KeyAssignment wrong = locked.truth;
      for (auto& [id, t] : wrong) {
        if (t == LatchType::kLogicDecoy) t = LatchType::kDelayDecoy;
      }
      if (FunctionalCorruptibility(locked.netlist, wrong, original, fc).fc == 0.0) ++control_zero;
    }
  }
  const double s = Seconds(t0);
  return {nonzero == 0 && s < 120.0,
          fmt::format("{} variants, {} with nonzero FC, {:.1f} s (limit 120 s); "
                      "wrong-key control corrupts {} of {}",
                      variants, nonzero, s, variants - control_zero, variants)};
}

Outcome IlpExactness() {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  std::string first;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    std::string err = testing::CheckTopKAgainstBruteForce(seed);
    if (!err.empty() && failures++ == 0) first = err;
  }
  const double s = Seconds(t0);
  return {failures == 0 && s < 60.0,
          fmt::format("200 instances, {} mismatches{}, {:.1f} s (limit 60 s)", failures,
                      first.empty() ? "" : " (" + first + ")", s)};
}

Outcome ConstraintSoundness() {
  const RunConfig config = BaseConfig();
  int variants = 0, infeasible = 0;
  std::vector<std::string> circuits = SuiteCircuits("small");
  for (const auto& name : SuiteCircuits("large")) circuits.push_back(name);
  for (const auto& name : circuits) {
    for (int v = 0; v < config.variants; ++v) {
      LockResult locked = LockVariant(config, name, v);
      SimplifiedCircuit simple = SimplifyForPhase2(locked.netlist, LogicDecoys(locked.truth));
      TypeProbabilities probs;
      for (int id : simple.features.graph.latch_id) {
        LatchType t = locked.truth.at(id);
        probs[id] = {t == LatchType::kPrimary ? 1.0 : 0.0, t == LatchType::kSecondary ? 1.0 : 0.0,
                     t == LatchType::kDelayDecoy ? 1.0 : 0.0};
      }
      IlpModel m = BuildModel(simple.features.graph, probs);
      std::vector<LatchType> truth;
      for (int id : m.latch_ids) truth.push_back(locked.truth.at(id));
      auto colors = ColorsFor(m, truth);
      ++variants;
      if (!colors || !CheckFeasible(m, {truth, *colors}).feasible) ++infeasible;
    }
  }
  return {infeasible == 0,
          fmt::format("{} variants over {} circuits, {} infeasible", variants, circuits.size(),
                      infeasible)};
}

struct Reproduction {
  Outcome a, b, c;
};

Reproduction SuiteAccuracy() {
  RunConfig config = BaseConfig();
  config.suite = "small";
  const auto t0 = std::chrono::steady_clock::now();
  SuiteAverages avg = Averages(RunExperiment(config));
  const double s = Seconds(t0);
  Reproduction r;
  r.a = {avg.phase1_acc >= 0.90,
         fmt::format("phase-1 held-out accuracy {:.2f}% (need >= 90%), {:.0f} s",
                     100 * avg.phase1_acc, s)};
  const double gain = avg.tk_acc - avg.baseline_acc;
  r.b = {gain >= 0.05 && avg.tk_acc >= avg.single_phase_acc &&
             avg.single_phase_acc >= avg.baseline_acc,
         fmt::format("T-{} {:.2f}%, single-phase {:.2f}%, baseline {:.2f}%, gain {:+.2f} points "
                     "(need >= 5 and ordered)",
                     config.topk, 100 * avg.tk_acc, 100 * avg.single_phase_acc,
                     100 * avg.baseline_acc, 100 * gain)};
  r.c = {avg.tk_acc >= avg.closest_acc,
         fmt::format("ILP {:.2f}% vs closest-key {:.2f}%", 100 * avg.tk_acc,
                     100 * avg.closest_acc)};
  return r;
}

Outcome LearningChecks() {
  double worst = 0;
  for (int config = 0; config < 20; ++config) {
    worst = std::max(worst, testing::MlpGradientError(config));
  }
  int split_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    if (!testing::CheckBestSplit(trial).empty()) ++split_failures;
  }
  return {worst < 1e-4 && split_failures == 0,
          fmt::format("max gradient relative error {:.2e} over 20 nets (need < 1e-4), "
                      "{} of 50 split-entropy checks failed",
                      worst, split_failures)};
}

Outcome SimplificationSoundness() {
  int failures = 0;
  std::string first;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    std::string err = testing::CheckConstantPropagation(seed);
    if (!err.empty() && failures++ == 0) first = err;
  }
  return {failures == 0, fmt::format("100 tied circuits, {} failures{}", failures,
                                     first.empty() ? "" : " (" + first + ")")};
}

SequentialGraph LatchGraph(int n, const std::vector<std::pair<int, int>>& edges) {
  testing::GraphSpec s;
  for (int i = 0; i < n; ++i) s.latch_ids.push_back(i);
  s.edges = edges;
  return testing::MakeGraph(s);
}

Outcome FeatureCorrectness() {
  auto [nl, truth] = ParseLocked(testing::kTenLatchBench, testing::kTenLatchSidecar);
  FeaturizedCircuit fc = Featurize(nl);
  const std::vector<FeatureVector> golden = testing::TenLatchGolden();
  int wrong = 0;
  for (size_t pos = 0; pos < golden.size(); ++pos) {
    for (int k = 0; k < kFeatureCount; ++k) {
      if (pos >= fc.latches.size() || fc.latches[pos].values[k] != golden[pos][k]) ++wrong;
    }
  }
  if (fc.latches.size() != golden.size()) ++wrong;

  int unit_failures = 0;
  auto expect = [&](bool ok) { unit_failures += ok ? 0 : 1; };
  expect(Triangle(LatchGraph(2, {{0, 1}}), 0) == 0.0);
  expect(Triangle(LatchGraph(3, {{0, 1}, {0, 2}, {1, 2}}), 1) == 1.0);
  expect(Triangle(LatchGraph(5, {{0, 1}, {3, 1}, {0, 2}, {1, 2}, {3, 4}}), 1) == 0.5);
  expect(Trapezoids(LatchGraph(1, {}), 0) == std::make_pair(0.0, 0.0));
  expect(Trapezoids(LatchGraph(5, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {2, 4}}), 1).first == 1.0);
  expect(Trapezoids(LatchGraph(4, {{0, 1}, {1, 2}, {2, 3}}), 1) == std::make_pair(0.0, 0.0));
  expect(Trapezoids(LatchGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 2).second == 1.0);
  expect(ComputeLocalFeatures(LatchGraph(2, {{0, 1}, {1, 1}}), 0).false_self_loop == 0.5);
  expect(ComputeLocalFeatures(LatchGraph(3, {{0, 1}, {1, 2}, {2, 0}}), 0).loop3 == 1.0);
  expect(ComputeLocalFeatures(LatchGraph(2, {{0, 1}, {1, 0}}), 0).loop3 == 0.0);
  return {wrong == 0 && unit_failures == 0,
          fmt::format("{} golden feature mismatches over 10 latches, {} of 10 unit cases failed",
                      wrong, unit_failures)};
}

Outcome Performance() {
  RunConfig config = BaseConfig();
  Dataset p1{LabelScheme::kLdVsRest, {}};
  Dataset p2{config.phase2_scheme, {}}, p2_val{config.phase2_scheme, {}};
  for (const auto& name : SuiteCircuits("small")) {
    for (int v = 0; v < config.variants; ++v) {
      LockResult locked = LockVariant(config, name, v);
      const std::string tag = fmt::format("{}_v{:02}", name, v);
      const bool val = v % 10 == 9;
      if (!val) AppendCircuit(p1, tag, Featurize(locked.netlist), locked.truth);
      AppendCircuit(val ? p2_val : p2, tag,
                    SimplifyForPhase2(locked.netlist, LogicDecoys(locked.truth)).features,
                    locked.truth);
    }
  }
  const std::string target = "s38417";
  Model phase1{Model::Kind::kForest, LabelScheme::kLdVsRest, {}, {}, {}};
  ForestParams fp = config.forest;
  fp.seed = TrainSeed(config, target, 1);
  phase1.forest = TrainForest(p1, fp);
  Model phase2{Model::Kind::kMlp, config.phase2_scheme, {}, {}, {}};
  MlpParams mp = config.mlp;
  mp.seed = TrainSeed(config, target, 2);
  phase2.mlp = TrainMlp(p2, &p2_val, mp);

  Netlist original = testing::LoadBenchmark(target);
  LockResult locked = LockVariant(config, target, 0);
  AttackConfig ac;
  ac.topk = 1000;
  ac.fc = config.fc;
  ac.fc.seed = FcSeed(config, target, 0);
  const auto t0 = std::chrono::steady_clock::now();
  AttackReport report = RunAttack(locked.netlist, Classifier::FromModel(phase1),
                                  Classifier::FromModel(phase2), ac, &locked.truth, &original);
  const double s = Seconds(t0);
  return {s < 900.0,
          fmt::format("{} with {} latches, k=1000 attack in {:.1f} s (limit 900 s), pool {}, "
                      "best-of-pool accuracy {:.2f}%",
                      target, report.latch_count, s, report.pool.entries.size(),
                      100 * report.best_accuracy)};
}

Outcome Determinism() {
  RunConfig config = BaseConfig();
  config.suite = "smoke";
  config.variants = 4;
  const std::string run_file = WriteRunFile(config);
  const auto root = std::filesystem::temp_directory_path() / "lbll_acceptance_determinism";
  std::filesystem::remove_all(root);
  for (const char* dir : {"a", "b"}) {
    WriteReports(RunExperiment(ParseRunFile(run_file)), (root / dir).string());
  }
  int differing = 0;
  for (const char* file : {"report.txt", "report.tsv", "importance.tsv"}) {
    if (ReadFile((root / "a" / file).string()) != ReadFile((root / "b" / file).string())) {
      ++differing;
    }
  }
  std::filesystem::remove_all(root);
  return {differing == 0, fmt::format("two runs of the same run file, {} of 3 reports differ",
                                      differing)};
}

}  // namespace
}  // namespace lbll

int main() {
  using lbll::Outcome;
  bool all = true;
  auto print = [&](const std::string& id, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    std::printf("criterion %-2s %s  %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };
  print("1", lbll::LockingSoundness);
  print("2", lbll::IlpExactness);
  print("3", lbll::ConstraintSoundness);
  lbll::Reproduction r;
  bool reproduced = false;
  print("4a", [&] {
    r = lbll::SuiteAccuracy();
    reproduced = true;
    return r.a;
  });
  print("4b", [&] { return reproduced ? r.b : Outcome{false, "experiment did not run"}; });
  print("4c", [&] { return reproduced ? r.c : Outcome{false, "experiment did not run"}; });
  print("5", lbll::LearningChecks);
  print("6", lbll::SimplificationSoundness);
  print("7", lbll::FeatureCorrectness);
  print("8", lbll::Performance);
  print("9", lbll::Determinism);
  return all ? 0 : 1;
}
