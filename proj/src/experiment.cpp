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


#include "experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "dataset.hpp"
#include "eval.hpp"
#include "model_io.hpp"
#include "simplify.hpp"

namespace lbll {
namespace {

double MsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// FNV-1a; keeps seeds independent of suite order.
uint64_t NameHash(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Runs fn(0..n-1) on up to `workers` threads; rethrows the lowest-index error.
template <typename Fn>
void ParallelFor(size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t threads = std::min<size_t>(std::max(workers, 1), n);
  std::vector<std::thread> pool;
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    std::string item(s.substr(start, end - start));
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    start = end + 1;
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

long long ParseInt(const std::string& key, const std::string& v) {
  long long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    ValidationError(fmt::format("run file: {} must be an integer, got '{}'", key, v));
  }
  return x;
}

uint64_t ParseUnsigned(const std::string& key, const std::string& v) {
  uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    ValidationError(fmt::format("run file: {} must be a non-negative integer, got '{}'", key, v));
  }
  return x;
}

double ParseReal(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
    ValidationError(fmt::format("run file: {} must be a real number, got '{}'", key, v));
  }
  return x;
}

int ParsePositive(const std::string& key, const std::string& v) {
  const long long x = ParseInt(key, v);
  if (x < 1 || x > 1'000'000'000) ValidationError(fmt::format("run file: {} must be >= 1", key));
  return static_cast<int>(x);
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  ValidationError(fmt::format("run file: {} must be 0 or 1, got '{}'", key, v));
}

struct Variant {
  std::string circuit;
  int index = 0;
  LockResult lock;
  FeaturizedCircuit locked_features;
  FeaturizedCircuit simplified_features;  // ground-truth logic decoys removed
};

std::string VariantName(const std::string& circuit, int v) {
  return fmt::format("{}_v{:02d}", circuit, v);
}

bool IsValidation(int variant) { return variant % 10 == 9; }

}  // namespace

std::vector<std::string> SuiteCircuits(const std::string& suite) {
  if (suite == "small") return {"syn1", "syn2", "syn3", "syn4", "syn5", "syn6", "s13207"};
  if (suite == "large") return {"s38417", "s38584"};
  if (suite == "smoke") return {"s27", "syn1", "syn2"};
  ValidationError(fmt::format("unknown suite '{}' (expected small, large or smoke)", suite));
}

RunConfig ParseRunFile(std::string_view text) {
  const KeyValueFile kv = KeyValueFile::Parse(text);
  RunConfig c;
  for (const auto& [key, v] : kv.entries()) {
    if (key == "suite") {
      c.suite = v;
    } else if (key == "circuits") {
      c.circuits = SplitList(v);
    } else if (key == "bench_dir") {
      c.bench_dir = v;
    } else if (key == "variants") {
      c.variants = ParsePositive(key, v);
    } else if (key == "topk") {
      c.topk = static_cast<size_t>(ParsePositive(key, v));
    } else if (key == "lock_seed") {
      c.lock_seed = ParseUnsigned(key, v);
    } else if (key == "train_seed") {
      c.train_seed = ParseUnsigned(key, v);
    } else if (key == "fc_seed") {
      c.fc_seed = ParseUnsigned(key, v);
    } else if (key == "ff_fraction") {
      c.lock.ff_fraction = ParseReal(key, v);
    } else if (key == "delay_decoy_rate") {
      c.lock.delay_decoy_rate = ParseReal(key, v);
    } else if (key == "logic_decoy_rate") {
      c.lock.logic_decoy_rate = ParseReal(key, v);
    } else if (key == "fc_cycles") {
      c.fc.cycles = ParsePositive(key, v);
    } else if (key == "fc_runs") {
      c.fc.runs = ParsePositive(key, v);
    } else if (key == "forest_trees") {
      c.forest.trees = ParsePositive(key, v);
    } else if (key == "forest_max_depth") {
      c.forest.max_depth = ParsePositive(key, v);
    } else if (key == "forest_min_leaf") {
      c.forest.min_leaf = ParsePositive(key, v);
    } else if (key == "forest_mtry") {
      c.forest.mtry = static_cast<int>(ParseInt(key, v));
    } else if (key == "mlp_hidden") {
      c.mlp.hidden.clear();
      for (const auto& h : SplitList(v)) c.mlp.hidden.push_back(ParsePositive(key, h));
    } else if (key == "mlp_epochs") {
      c.mlp.epochs = ParsePositive(key, v);
    } else if (key == "mlp_batch") {
      c.mlp.batch = ParsePositive(key, v);
    } else if (key == "mlp_learning_rate") {
      c.mlp.learning_rate = ParseReal(key, v);
    } else if (key == "mlp_decay") {
      c.mlp.decay = ParseReal(key, v);
    } else if (key == "mlp_patience") {
      c.mlp.patience = ParsePositive(key, v);
    } else if (key == "class_weights") {
      c.forest.class_weights = c.mlp.class_weights = ParseBool(key, v);
    } else if (key == "phase2_scheme") {
      c.phase2_scheme = ParseLabelScheme(v);
      if (c.phase2_scheme != LabelScheme::kPsVsDd && c.phase2_scheme != LabelScheme::kPsDd) {
        ValidationError("run file: phase2_scheme must be ps-vs-dd or p-s-dd");
      }
    } else if (key == "ablations") {
      c.ablations = ParseBool(key, v);
    } else if (key == "workers") {
      c.workers = ParsePositive(key, v);
    } else {
      ValidationError(fmt::format("run file: unknown key '{}'", key));
    }
  }
  ValidateLockConfig(c.lock);
  if (c.forest.mtry < 0 || c.forest.mtry > kFeatureCount) {
    ValidationError("run file: forest_mtry must be in [0, 14]");
  }
  if (c.mlp.hidden.empty()) ValidationError("run file: mlp_hidden needs at least one layer");
  if (!(c.mlp.learning_rate > 0) || c.mlp.decay < 0) {
    ValidationError("run file: mlp_learning_rate must be > 0 and mlp_decay >= 0");
  }
  if (c.circuits.empty()) SuiteCircuits(c.suite);
  return c;
}

std::string WriteRunFile(const RunConfig& c) {
  KeyValueFile kv;
  kv.Set("suite", c.suite);
  if (!c.circuits.empty()) kv.Set("circuits", JoinList(c.circuits));
  if (!c.bench_dir.empty()) kv.Set("bench_dir", c.bench_dir);
  kv.Set("variants", c.variants);
  kv.Set("topk", c.topk);
  kv.Set("lock_seed", c.lock_seed);
  kv.Set("train_seed", c.train_seed);
  kv.Set("fc_seed", c.fc_seed);
  kv.Set("ff_fraction", fmt::format("{}", c.lock.ff_fraction));
  kv.Set("delay_decoy_rate", fmt::format("{}", c.lock.delay_decoy_rate));
  kv.Set("logic_decoy_rate", fmt::format("{}", c.lock.logic_decoy_rate));
  kv.Set("fc_cycles", c.fc.cycles);
  kv.Set("fc_runs", c.fc.runs);
  kv.Set("forest_trees", c.forest.trees);
  kv.Set("forest_max_depth", c.forest.max_depth);
  kv.Set("forest_min_leaf", c.forest.min_leaf);
  kv.Set("forest_mtry", c.forest.mtry);
  std::string hidden;
  for (int h : c.mlp.hidden) hidden += (hidden.empty() ? "" : ",") + std::to_string(h);
  kv.Set("mlp_hidden", hidden);
  kv.Set("mlp_epochs", c.mlp.epochs);
  kv.Set("mlp_batch", c.mlp.batch);
  kv.Set("mlp_learning_rate", fmt::format("{}", c.mlp.learning_rate));
  kv.Set("mlp_decay", fmt::format("{}", c.mlp.decay));
  kv.Set("mlp_patience", c.mlp.patience);
  kv.Set("class_weights", c.mlp.class_weights ? 1 : 0);
  kv.Set("phase2_scheme", std::string(LabelSchemeName(c.phase2_scheme)));
  kv.Set("ablations", c.ablations ? 1 : 0);
  kv.Set("workers", c.workers);
  return kv.Serialize();
}

std::string BenchDir(const RunConfig& c) {
  if (!c.bench_dir.empty()) return c.bench_dir;
  if (const char* env = std::getenv("LBLL_BENCH_DIR"); env && *env) return env;
  return "benchmarks";
}

std::vector<std::string> RunCircuits(const RunConfig& c) {
  return c.circuits.empty() ? SuiteCircuits(c.suite) : c.circuits;
}

uint64_t LockSeed(const RunConfig& c, const std::string& circuit, int variant) {
  return DeriveSeed(c.lock_seed ^ NameHash(circuit), static_cast<uint64_t>(variant));
}

uint64_t TrainSeed(const RunConfig& c, const std::string& held_out, int stage) {
  return DeriveSeed(c.train_seed ^ NameHash(held_out), static_cast<uint64_t>(stage));
}

uint64_t FcSeed(const RunConfig& c, const std::string& circuit, int variant) {
  return DeriveSeed(c.fc_seed ^ NameHash(circuit), static_cast<uint64_t>(variant));
}

ExperimentResult RunExperiment(const RunConfig& config, const std::string& artifact_dir) {
  const std::vector<std::string> circuits = RunCircuits(config);
  if (circuits.size() < 2) ValidationError("experiment needs at least two circuits");
  if (std::set<std::string>(circuits.begin(), circuits.end()).size() != circuits.size()) {
    ValidationError("experiment circuits must be distinct");
  }
  const std::string bench_dir = BenchDir(config);
  ExperimentResult result;
  result.config = config;

  std::vector<Netlist> originals;
  for (const auto& name : circuits) {
    originals.push_back(ParseBench(ReadFile(bench_dir + "/" + name + ".bench"), name));
  }

  // Lock and featurize every (circuit, variant).
  auto t0 = std::chrono::steady_clock::now();
  const size_t nv = static_cast<size_t>(config.variants);
  std::vector<Variant> variants(circuits.size() * nv);
  ParallelFor(variants.size(), config.workers, [&](size_t i) {
    Variant& v = variants[i];
    v.circuit = circuits[i / nv];
    v.index = static_cast<int>(i % nv);
    LockConfig lc = config.lock;
    lc.seed = LockSeed(config, v.circuit, v.index);
    v.lock = Lock(originals[i / nv], lc);
    v.locked_features = Featurize(v.lock.netlist);
    std::set<int> lds;
    for (const auto& [id, t] : v.lock.truth) {
      if (t == LatchType::kLogicDecoy) lds.insert(id);
    }
    v.simplified_features = SimplifyForPhase2(v.lock.netlist, lds).features;
  });
  result.lock_ms = MsSince(t0);

  KeyValueFile manifest;
  const bool write = !artifact_dir.empty();
  if (write) {
    std::filesystem::create_directories(artifact_dir + "/locked");
    std::filesystem::create_directories(artifact_dir + "/models");
    manifest = KeyValueFile::Parse(WriteRunFile(config));
    manifest.Set("bench_dir_resolved", bench_dir);
    for (const Variant& v : variants) {
      const std::string base = artifact_dir + "/locked/" + VariantName(v.circuit, v.index);
      LockedText text = WriteLocked(v.lock.netlist, v.lock.truth);
      WriteFile(base + ".bench", text.netlist);
      WriteFile(base + ".key", text.sidecar);
      WriteFile(base + ".manifest", v.lock.manifest.Serialize());
      const std::string tag = "variant." + VariantName(v.circuit, v.index);
      manifest.Set(tag + ".netlist", base + ".bench");
      manifest.Set(tag + ".lock_seed", v.lock.manifest.Get("seed"));
      manifest.Set(tag + ".fc_seed", std::to_string(FcSeed(config, v.circuit, v.index)));
    }
  }

  for (size_t held = 0; held < circuits.size(); ++held) {
    const std::string& name = circuits[held];
    Dataset p1{LabelScheme::kLdVsRest, {}};
    Dataset p2{config.phase2_scheme, {}}, p2_val{config.phase2_scheme, {}};
    Dataset base{LabelScheme::kAll4, {}}, base_val{LabelScheme::kAll4, {}};
    for (const Variant& v : variants) {
      if (v.circuit == name) continue;
      const std::string tag = VariantName(v.circuit, v.index);
      const bool val = IsValidation(v.index);
      if (!val) AppendCircuit(p1, tag, v.locked_features, v.lock.truth);
      AppendCircuit(val ? p2_val : p2, tag, v.simplified_features, v.lock.truth);
      AppendCircuit(val ? base_val : base, tag, v.locked_features, v.lock.truth);
    }
    FoldResult fold;
    fold.held_out = name;
    fold.train_rows = p1.rows.size();

    Model phase1{Model::Kind::kForest, LabelScheme::kLdVsRest, {}, {}, {}};
    t0 = std::chrono::steady_clock::now();
    ForestParams fp = config.forest;
    fp.seed = TrainSeed(config, name, 1);
    fp.workers = config.workers;
    phase1.forest = TrainForest(p1, fp);
    phase1.forest.params.workers = 1;
    phase1.importance = phase1.forest.importance;
    fold.phase1_ms = MsSince(t0);
    fold.phase1_oob = phase1.forest.oob_accuracy;
    fold.phase1_importance = phase1.importance;

    const Dataset* p2v = p2_val.rows.empty() ? nullptr : &p2_val;
    Model phase2{Model::Kind::kMlp, config.phase2_scheme, {}, {}, {}};
    t0 = std::chrono::steady_clock::now();
    MlpParams mp = config.mlp;
    mp.seed = TrainSeed(config, name, 2);
    phase2.mlp = TrainMlp(p2, p2v, mp);
    phase2.importance = PermutationImportance(phase2.mlp, p2v ? *p2v : p2, mp.seed);
    fold.phase2_ms = MsSince(t0);
    fold.phase2_importance = phase2.importance;

    Model baseline{Model::Kind::kMlp, LabelScheme::kAll4, {}, {}, {}};
    if (config.ablations) {
      t0 = std::chrono::steady_clock::now();
      mp.seed = TrainSeed(config, name, 3);
      baseline.mlp = TrainMlp(base, base_val.rows.empty() ? nullptr : &base_val, mp);
      fold.baseline_ms = MsSince(t0);
    }
    if (write) {
      const std::string prefix = artifact_dir + "/models/" + name;
      SaveModel(prefix + ".phase1.model", phase1);
      SaveModel(prefix + ".phase2.model", phase2);
      manifest.Set("fold." + name + ".phase1", prefix + ".phase1.model");
      manifest.Set("fold." + name + ".phase1_seed", std::to_string(TrainSeed(config, name, 1)));
      manifest.Set("fold." + name + ".phase2", prefix + ".phase2.model");
      manifest.Set("fold." + name + ".phase2_seed", std::to_string(TrainSeed(config, name, 2)));
      if (config.ablations) {
        SaveModel(prefix + ".baseline.model", baseline);
        manifest.Set("fold." + name + ".baseline", prefix + ".baseline.model");
        manifest.Set("fold." + name + ".baseline_seed", std::to_string(TrainSeed(config, name, 3)));
      }
    }
    result.folds.push_back(fold);

    const Classifier c1 = Classifier::FromModel(phase1);
    const Classifier c2 = Classifier::FromModel(phase2);
    const Classifier c4 = Classifier::FromModel(baseline);
    std::vector<VariantResult> rows(nv);
    ParallelFor(nv, config.workers, [&](size_t vi) {
      const Variant& v = variants[held * nv + vi];
      VariantResult& row = rows[vi];
      row.circuit = name;
      row.variant = v.index;
      row.latches = static_cast<int>(v.lock.netlist.latches.size());
      AttackConfig ac;
      ac.topk = config.topk;
      ac.fc = config.fc;
      ac.fc.seed = FcSeed(config, name, v.index);
      AttackReport r = RunAttack(v.lock.netlist, c1, c2, ac, &v.lock.truth, &originals[held]);
      row.phase1_acc = r.phase1_accuracy;
      row.t1_acc = r.t1_accuracy;
      row.tk_acc = r.best_accuracy;
      row.fc = r.fc.fc;
      row.fc_std = r.fc.stddev;
      row.fc_flagged = r.fc.flagged_runs;
      row.truth_feasible = r.truth_feasible;
      row.pool = r.pool.entries.size();
      row.attack_ms = r.timings.phase1_ms + r.timings.simplify_ms + r.timings.phase2_ms +
                      r.timings.ilp_ms;
      row.fc_ms = r.timings.fc_ms;
      if (r.truth_feasible == 0) {
        throw std::logic_error(fmt::format("{}: ground truth infeasible for the built model",
                                           VariantName(name, v.index)));
      }
      if (config.ablations) {
        const auto ta = std::chrono::steady_clock::now();
        row.baseline_acc = KeyAccuracy(BaselineKey(v.lock.netlist, c4), v.lock.truth);
        row.single_phase_acc =
            AblationSinglePhase(v.lock.netlist, c4, config.topk, v.lock.truth).best_accuracy;
        row.closest_acc =
            AblationClosestKeys(r.probabilities, r.predicted_ld, v.lock.truth, config.topk);
        row.ablation_ms = MsSince(ta);
      }
    });
    result.variants.insert(result.variants.end(), rows.begin(), rows.end());
  }
  if (write) WriteFile(artifact_dir + "/run_manifest.txt", manifest.Serialize());
  return result;
}

SuiteAverages Averages(const ExperimentResult& result) {
  SuiteAverages avg;
  std::vector<std::string> order;
  std::map<std::string, std::pair<SuiteAverages, int>> per;
  for (const auto& v : result.variants) {
    auto [it, fresh] = per.try_emplace(v.circuit);
    if (fresh) order.push_back(v.circuit);
    SuiteAverages& s = it->second.first;
    s.phase1_acc += v.phase1_acc;
    s.t1_acc += v.t1_acc;
    s.tk_acc += v.tk_acc;
    s.fc += v.fc;
    s.baseline_acc += v.baseline_acc;
    s.single_phase_acc += v.single_phase_acc;
    s.closest_acc += v.closest_acc;
    ++it->second.second;
  }
  if (order.empty()) return avg;
  for (const auto& name : order) {
    const auto& [s, n] = per[name];
    avg.phase1_acc += s.phase1_acc / n;
    avg.t1_acc += s.t1_acc / n;
    avg.tk_acc += s.tk_acc / n;
    avg.fc += s.fc / n;
    avg.baseline_acc += s.baseline_acc / n;
    avg.single_phase_acc += s.single_phase_acc / n;
    avg.closest_acc += s.closest_acc / n;
  }
  const double c = static_cast<double>(order.size());
  avg.phase1_acc /= c;
  avg.t1_acc /= c;
  avg.tk_acc /= c;
  avg.fc /= c;
  avg.baseline_acc /= c;
  avg.single_phase_acc /= c;
  avg.closest_acc /= c;
  return avg;
}

std::string ReportText(const ExperimentResult& result) {
  const RunConfig& c = result.config;
  const auto circuits = RunCircuits(c);
  const std::string tk = fmt::format("T-{}", c.topk);
  std::string out = fmt::format(
      "Leave-one-circuit-out attack: {} circuits x {} variants, pool {}, FC {} cycles x {} runs\n"
      "Accuracies and FC in percent; per-circuit means over variants.\n\n",
      circuits.size(), c.variants, c.topk, c.fc.cycles, c.fc.runs);
  out += fmt::format("{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7}", "circuit", "latches", "keys",
                     "phase1", "T-1", tk, "FC");
  if (c.ablations) out += fmt::format(" {:>9} {:>8} {:>8}", "baseline", "single", "closest");
  out += "\n";
  for (const auto& name : circuits) {
    ExperimentResult one;
    one.config = c;
    double latches = 0;
    for (const auto& v : result.variants) {
      if (v.circuit != name) continue;
      one.variants.push_back(v);
      latches += v.latches;
    }
    if (one.variants.empty()) continue;
    latches /= static_cast<double>(one.variants.size());
    const SuiteAverages a = Averages(one);
    out += fmt::format("{:<10} {:>8.1f} {:>8.1f} {:>8.2f} {:>8.2f} {:>8.2f} {:>7.2f}", name,
                       latches, 2 * latches, 100 * a.phase1_acc, 100 * a.t1_acc, 100 * a.tk_acc,
                       100 * a.fc);
    if (c.ablations) {
      out += fmt::format(" {:>9.2f} {:>8.2f} {:>8.2f}", 100 * a.baseline_acc,
                         100 * a.single_phase_acc, 100 * a.closest_acc);
    }
    out += "\n";
  }
  const SuiteAverages a = Averages(result);
  out += fmt::format("{:<10} {:>8} {:>8} {:>8.2f} {:>8.2f} {:>8.2f} {:>7.2f}", "Average", "", "",
                     100 * a.phase1_acc, 100 * a.t1_acc, 100 * a.tk_acc, 100 * a.fc);
  if (c.ablations) {
    out += fmt::format(" {:>9.2f} {:>8.2f} {:>8.2f}", 100 * a.baseline_acc,
                       100 * a.single_phase_acc, 100 * a.closest_acc);
  }
  out += "\n\nFolds (phase-1 forest out-of-bag accuracy on the training circuits):\n";
  for (const auto& f : result.folds) {
    out += fmt::format("  {:<10} train_rows={} oob={:.4f}\n", f.held_out, f.train_rows,
                       f.phase1_oob);
  }
  return out;
}

std::string ReportTsv(const ExperimentResult& result) {
  std::string out =
      "circuit\tvariant\tlatches\tkeys\tphase1_acc\tt1_acc\ttk_acc\tfc\tfc_std\tfc_flagged\t"
      "truth_feasible\tpool\tbaseline_acc\tsingle_phase_acc\tclosest_acc\n";
  for (const auto& v : result.variants) {
    out += fmt::format("{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\t{}\t{}\t{:.6f}\t"
                       "{:.6f}\t{:.6f}\n",
                       v.circuit, v.variant, v.latches, 2 * v.latches, v.phase1_acc, v.t1_acc,
                       v.tk_acc, v.fc, v.fc_std, v.fc_flagged, v.truth_feasible, v.pool,
                       v.baseline_acc, v.single_phase_acc, v.closest_acc);
  }
  return out;
}

std::string ImportanceTsv(const ExperimentResult& result) {
  std::string out = "held_out\tmodel\tfeature\timportance\n";
  for (const auto& f : result.folds) {
    for (int i = 0; i < kFeatureCount; ++i) {
      out += fmt::format("{}\tphase1\t{}\t{:.6f}\n", f.held_out, FeatureNames()[i],
                         f.phase1_importance[i]);
    }
    for (int i = 0; i < kFeatureCount; ++i) {
      out += fmt::format("{}\tphase2\t{}\t{:.6f}\n", f.held_out, FeatureNames()[i],
                         f.phase2_importance[i]);
    }
  }
  return out;
}

std::string TimingsTsv(const ExperimentResult& result) {
  std::string out = "kind\tcircuit\tvariant\tstage\tms\n";
  out += fmt::format("lock\t*\t*\tlock_featurize\t{:.3f}\n", result.lock_ms);
  for (const auto& f : result.folds) {
    out += fmt::format("train\t{}\t*\tphase1\t{:.3f}\n", f.held_out, f.phase1_ms);
    out += fmt::format("train\t{}\t*\tphase2\t{:.3f}\n", f.held_out, f.phase2_ms);
    out += fmt::format("train\t{}\t*\tbaseline\t{:.3f}\n", f.held_out, f.baseline_ms);
  }
  for (const auto& v : result.variants) {
    out += fmt::format("attack\t{}\t{}\tattack\t{:.3f}\n", v.circuit, v.variant, v.attack_ms);
    out += fmt::format("attack\t{}\t{}\tfc\t{:.3f}\n", v.circuit, v.variant, v.fc_ms);
    out += fmt::format("attack\t{}\t{}\tablations\t{:.3f}\n", v.circuit, v.variant, v.ablation_ms);
  }
  return out;
}

void WriteReports(const ExperimentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  WriteFile(dir + "/report.txt", ReportText(result));
  WriteFile(dir + "/report.tsv", ReportTsv(result));
  WriteFile(dir + "/importance.tsv", ImportanceTsv(result));
  WriteFile(dir + "/timings.tsv", TimingsTsv(result));
}

}  // namespace lbll
