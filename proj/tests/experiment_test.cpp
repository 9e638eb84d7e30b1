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


#include <filesystem>

#include <gtest/gtest.h>

#include "experiment.hpp"
#include "netlist.hpp"

namespace lbll {
namespace {

RunConfig SmallRun() {
  RunConfig c = ParseRunFile(
      "suite = smoke\nvariants = 3\ntopk = 20\nforest_trees = 10\nmlp_epochs = 4\n"
      "fc_cycles = 20\nfc_runs = 16\n");
  c.bench_dir = std::string(LBLL_SOURCE_DIR) + "/benchmarks";
  return c;
}

TEST(RunFile, RoundTripsAndRejectsUnknownKeys) {
  RunConfig c = ParseRunFile(
      "# comment\ncircuits = syn1, syn2\nmlp_hidden = 16,8\nphase2_scheme = p-s-dd\n"
      "delay_decoy_rate = 0.3\nworkers = 2\nablations = 0\n");
  EXPECT_EQ(c.circuits, (std::vector<std::string>{"syn1", "syn2"}));
  EXPECT_EQ(c.mlp.hidden, (std::vector<int>{16, 8}));
  EXPECT_EQ(c.phase2_scheme, LabelScheme::kPsDd);
  EXPECT_FALSE(c.ablations);
  const std::string text = WriteRunFile(c);
  EXPECT_EQ(WriteRunFile(ParseRunFile(text)), text);
  EXPECT_THROW(ParseRunFile("colour = blue\n"), Error);
  EXPECT_THROW(ParseRunFile("variants = 0\n"), Error);
  EXPECT_THROW(ParseRunFile("topk = many\n"), Error);
  EXPECT_THROW(ParseRunFile("suite = huge\n"), Error);
  EXPECT_THROW(ParseRunFile("phase2_scheme = all4\n"), Error);
  EXPECT_THROW(ParseRunFile("delay_decoy_rate = -1\n"), Error);
}

TEST(RunFile, SuitesAndSeeds) {
  EXPECT_EQ(SuiteCircuits("small").size(), 7u);
  EXPECT_EQ(SuiteCircuits("large"), (std::vector<std::string>{"s38417", "s38584"}));
  RunConfig c;
  EXPECT_EQ(LockSeed(c, "syn1", 3), LockSeed(c, "syn1", 3));
  EXPECT_NE(LockSeed(c, "syn1", 3), LockSeed(c, "syn1", 4));
  EXPECT_NE(LockSeed(c, "syn1", 3), LockSeed(c, "syn2", 3));
  RunConfig d = c;
  d.train_seed = 1;
  EXPECT_EQ(LockSeed(c, "syn1", 0), LockSeed(d, "syn1", 0));
  EXPECT_NE(TrainSeed(c, "syn1", 1), TrainSeed(d, "syn1", 1));
}

TEST(Experiment, ReportsAreDeterministic) {
  RunConfig c = SmallRun();
  ExperimentResult a = RunExperiment(c);
  c.workers = 3;
  ExperimentResult b = RunExperiment(c);
  EXPECT_EQ(ReportText(a), ReportText(b));
  EXPECT_EQ(ReportTsv(a), ReportTsv(b));
  EXPECT_EQ(ImportanceTsv(a), ImportanceTsv(b));
  ASSERT_EQ(a.variants.size(), 9u);
  for (const auto& v : a.variants) {
    EXPECT_GE(v.tk_acc, v.t1_acc);
    EXPECT_NE(v.truth_feasible, 0);
    EXPECT_GE(v.fc, 0.0);
    EXPECT_LE(v.fc, 1.0);
    EXPECT_LE(v.pool, 20u);
  }
  EXPECT_EQ(a.folds.size(), 3u);
  EXPECT_NE(ReportText(a).find("Average"), std::string::npos);
}

TEST(Experiment, WritesArtifactsAndReports) {
  const std::string dir = ::testing::TempDir() + "/lbll_experiment_test";
  std::filesystem::remove_all(dir);
  RunConfig c = SmallRun();
  c.circuits = {"s27", "syn1"};
  c.variants = 2;
  c.ablations = false;
  ExperimentResult r = RunExperiment(c, dir + "/artifacts");
  WriteReports(r, dir);
  for (const char* f : {"report.txt", "report.tsv", "importance.tsv", "timings.tsv",
                        "artifacts/run_manifest.txt", "artifacts/locked/syn1_v01.bench",
                        "artifacts/locked/syn1_v01.key", "artifacts/models/s27.phase1.model"}) {
    EXPECT_TRUE(std::filesystem::exists(dir + "/" + f)) << f;
  }
  const KeyValueFile m = KeyValueFile::Parse(ReadFile(dir + "/artifacts/run_manifest.txt"));
  EXPECT_EQ(m.Get("variants"), "2");
  EXPECT_TRUE(m.Has("variant.syn1_v01.lock_seed"));
  EXPECT_TRUE(m.Has("fold.syn1.phase2_seed"));
  EXPECT_FALSE(m.Has("fold.syn1.baseline"));
}

TEST(Experiment, RejectsBadSetups) {
  RunConfig c = SmallRun();
  c.circuits = {"syn1"};
  EXPECT_THROW(RunExperiment(c), Error);
  c.circuits = {"syn1", "missing_circuit"};
  EXPECT_THROW(RunExperiment(c), Error);
}

}  // namespace
}  // namespace lbll
