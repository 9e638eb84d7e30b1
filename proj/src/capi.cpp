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


#include "lbll/lbll.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "dataset.hpp"
#include "eval.hpp"
#include "experiment.hpp"
#include "locker.hpp"
#include "model_io.hpp"
#include "simplify.hpp"

struct lbll_netlist {
  lbll::Netlist netlist;
  std::optional<lbll::GroundTruth> truth;
  lbll::KeyValueFile manifest;
};

struct lbll_dataset {
  lbll::Dataset data;
};

struct lbll_model {
  lbll::Model model;
};

struct lbll_attack {
  lbll::AttackReport report;
  bool has_truth = false;
  bool has_fc = false;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
lbll_status Guard(Fn fn) {
  try {
    fn();
    return LBLL_OK;
  } catch (const lbll::Error& e) {
    g_last_error = e.what();
    return e.kind() == lbll::Error::Kind::kIo ? LBLL_ERR_IO : LBLL_ERR_VALIDATION;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return LBLL_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = fmt::format("internal error: {}", e.what());
  } catch (...) {
    g_last_error = "internal error";
  }
  return LBLL_ERR_INTERNAL;
}

template <typename T>
void Require(const T* p, const char* what) {
  if (!p) lbll::ValidationError(fmt::format("{} must not be null", what));
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

const lbll::GroundTruth& TruthOf(const lbll_netlist* n) {
  if (!n->truth) lbll::ValidationError("netlist has no ground truth (load it with its sidecar)");
  return *n->truth;
}

lbll::FeaturizedCircuit FeaturesOf(const lbll_netlist* n, int simplified) {
  if (!simplified) return lbll::Featurize(n->netlist);
  std::set<int> lds;
  for (const auto& [id, t] : TruthOf(n)) {
    if (t == lbll::LatchType::kLogicDecoy) lds.insert(id);
  }
  return lbll::SimplifyForPhase2(n->netlist, lds).features;
}

lbll::FcConfig FcFrom(const lbll_fc_options* o) {
  lbll::FcConfig c;
  if (o) c = {o->cycles, o->runs, o->seed};
  return c;
}

}  // namespace

extern "C" {

const char* lbll_version(void) { return "1.0.0"; }

const char* lbll_last_error(void) { return g_last_error.c_str(); }

void lbll_string_free(char* s) { std::free(s); }

lbll_status lbll_netlist_load(const char* bench_path, const char* sidecar_path,
                              lbll_netlist** out) {
  return Guard([&] {
    Require(bench_path, "bench_path");
    Require(out, "out");
    *out = nullptr;
    auto n = std::make_unique<lbll_netlist>();
    const std::string text = lbll::ReadFile(bench_path);
    std::string name = bench_path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name.erase(dot);
    if (sidecar_path) {
      auto [nl, truth] = lbll::ParseLocked(text, lbll::ReadFile(sidecar_path), name);
      n->netlist = std::move(nl);
      n->truth = std::move(truth);
    } else {
      n->netlist = lbll::ParseLockedNetlist(text, name);
    }
    *out = n.release();
  });
}

void lbll_netlist_free(lbll_netlist* netlist) { delete netlist; }

lbll_status lbll_netlist_stats_get(const lbll_netlist* n, lbll_netlist_stats* out) {
  return Guard([&] {
    Require(n, "netlist");
    Require(out, "out");
    out->inputs = static_cast<int>(n->netlist.inputs.size());
    out->outputs = static_cast<int>(n->netlist.outputs.size());
    out->gates = static_cast<int>(n->netlist.gates.size());
    out->flipflops = static_cast<int>(n->netlist.flipflops.size());
    out->latches = static_cast<int>(n->netlist.latches.size());
    out->has_truth = n->truth ? 1 : 0;
  });
}

lbll_status lbll_netlist_write(const lbll_netlist* n, const char* bench_path,
                               const char* sidecar_path) {
  return Guard([&] {
    Require(n, "netlist");
    Require(bench_path, "bench_path");
    if (n->truth && sidecar_path) {
      lbll::LockedText text = lbll::WriteLocked(n->netlist, *n->truth);
      lbll::WriteFile(bench_path, text.netlist);
      lbll::WriteFile(sidecar_path, text.sidecar);
    } else {
      lbll::WriteFile(bench_path, lbll::WriteBench(n->netlist));
    }
  });
}

lbll_status lbll_netlist_manifest(const lbll_netlist* n, char** out) {
  return Guard([&] {
    Require(n, "netlist");
    Require(out, "out");
    *out = CopyString(n->manifest.Serialize());
  });
}

void lbll_lock_options_init(lbll_lock_options* o) {
  if (!o) return;
  const lbll::LockConfig c;
  o->seed = c.seed;
  o->ff_fraction = c.ff_fraction;
  o->delay_decoy_rate = c.delay_decoy_rate;
  o->logic_decoy_rate = c.logic_decoy_rate;
}

lbll_status lbll_lock(const lbll_netlist* original, const lbll_lock_options* o,
                      lbll_netlist** locked) {
  return Guard([&] {
    Require(original, "original");
    Require(locked, "locked");
    *locked = nullptr;
    lbll::LockConfig c;
    if (o) {
      c.seed = o->seed;
      c.ff_fraction = o->ff_fraction;
      c.delay_decoy_rate = o->delay_decoy_rate;
      c.logic_decoy_rate = o->logic_decoy_rate;
    }
    lbll::LockResult r = lbll::Lock(original->netlist, c);
    auto n = std::make_unique<lbll_netlist>();
    n->netlist = std::move(r.netlist);
    n->truth = std::move(r.truth);
    n->manifest = std::move(r.manifest);
    *locked = n.release();
  });
}

lbll_status lbll_features_csv(const lbll_netlist* n, const char* circuit, int simplified,
                              char** out) {
  return Guard([&] {
    Require(n, "netlist");
    Require(out, "out");
    const std::string name = circuit ? circuit : n->netlist.name;
    *out = CopyString(lbll::WriteFeatureCsv(name, FeaturesOf(n, simplified),
                                            n->truth ? &*n->truth : nullptr));
  });
}

lbll_status lbll_dataset_create(const char* scheme, lbll_dataset** out) {
  return Guard([&] {
    Require(scheme, "scheme");
    Require(out, "out");
    *out = nullptr;
    auto d = std::make_unique<lbll_dataset>();
    d->data.scheme = lbll::ParseLabelScheme(scheme);
    *out = d.release();
  });
}

void lbll_dataset_free(lbll_dataset* dataset) { delete dataset; }

lbll_status lbll_dataset_add_csv(lbll_dataset* d, const char* csv_text) {
  return Guard([&] {
    Require(d, "dataset");
    Require(csv_text, "csv_text");
    lbll::Dataset copy = d->data;
    lbll::AppendFeatureCsv(copy, csv_text);
    d->data = std::move(copy);
  });
}

size_t lbll_dataset_rows(const lbll_dataset* d) { return d ? d->data.rows.size() : 0; }

void lbll_forest_options_init(lbll_forest_options* o) {
  if (!o) return;
  const lbll::ForestParams p;
  o->trees = p.trees;
  o->max_depth = p.max_depth;
  o->min_leaf = p.min_leaf;
  o->mtry = p.mtry;
  o->class_weights = p.class_weights ? 1 : 0;
  o->seed = p.seed;
  o->workers = p.workers;
}

void lbll_mlp_options_init(lbll_mlp_options* o) {
  if (!o) return;
  const lbll::MlpParams p;
  std::memset(o->hidden, 0, sizeof(o->hidden));
  o->hidden_layers = static_cast<int>(p.hidden.size());
  for (size_t i = 0; i < p.hidden.size(); ++i) o->hidden[i] = p.hidden[i];
  o->epochs = p.epochs;
  o->batch = p.batch;
  o->learning_rate = p.learning_rate;
  o->decay = p.decay;
  o->patience = p.patience;
  o->class_weights = p.class_weights ? 1 : 0;
  o->seed = p.seed;
}

lbll_status lbll_train_forest(const lbll_dataset* train, const lbll_forest_options* o,
                              lbll_model** out) {
  return Guard([&] {
    Require(train, "train");
    Require(out, "out");
    *out = nullptr;
    lbll::ForestParams p;
    if (o) {
      p.trees = o->trees;
      p.max_depth = o->max_depth;
      p.min_leaf = o->min_leaf;
      p.mtry = o->mtry;
      p.class_weights = o->class_weights != 0;
      p.seed = o->seed;
      p.workers = o->workers;
    }
    auto m = std::make_unique<lbll_model>();
    m->model.kind = lbll::Model::Kind::kForest;
    m->model.scheme = train->data.scheme;
    m->model.forest = lbll::TrainForest(train->data, p);
    m->model.forest.params.workers = 1;
    m->model.importance = m->model.forest.importance;
    *out = m.release();
  });
}

lbll_status lbll_train_mlp(const lbll_dataset* train, const lbll_dataset* validation,
                           const lbll_mlp_options* o, lbll_model** out) {
  return Guard([&] {
    Require(train, "train");
    Require(out, "out");
    *out = nullptr;
    if (validation && validation->data.scheme != train->data.scheme) {
      lbll::ValidationError("validation and training datasets use different schemes");
    }
    lbll::MlpParams p;
    if (o) {
      if (o->hidden_layers < 1 || o->hidden_layers > 8) {
        lbll::ValidationError("hidden_layers must be in [1, 8]");
      }
      p.hidden.assign(o->hidden, o->hidden + o->hidden_layers);
      p.epochs = o->epochs;
      p.batch = o->batch;
      p.learning_rate = o->learning_rate;
      p.decay = o->decay;
      p.patience = o->patience;
      p.class_weights = o->class_weights != 0;
      p.seed = o->seed;
    }
    const lbll::Dataset* val = validation && !validation->data.rows.empty()
                                   ? &validation->data : nullptr;
    auto m = std::make_unique<lbll_model>();
    m->model.kind = lbll::Model::Kind::kMlp;
    m->model.scheme = train->data.scheme;
    m->model.mlp = lbll::TrainMlp(train->data, val, p);
    m->model.importance = lbll::PermutationImportance(m->model.mlp, val ? *val : train->data, p.seed);
    *out = m.release();
  });
}

lbll_status lbll_model_load(const char* path, lbll_model** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<lbll_model>();
    m->model = lbll::LoadModel(path);
    *out = m.release();
  });
}

lbll_status lbll_model_save(const lbll_model* m, const char* path) {
  return Guard([&] {
    Require(m, "model");
    Require(path, "path");
    lbll::SaveModel(path, m->model);
  });
}

void lbll_model_free(lbll_model* model) { delete model; }

lbll_status lbll_model_describe(const lbll_model* m, char** out) {
  return Guard([&] {
    Require(m, "model");
    Require(out, "out");
    const std::string bytes = lbll::SerializeModel(m->model);
    const size_t end = bytes.find("\npayload ");
    *out = CopyString(bytes.substr(0, end == std::string::npos ? 0 : end + 1));
  });
}

lbll_status lbll_model_importance(const lbll_model* m, double out[14]) {
  return Guard([&] {
    Require(m, "model");
    Require(out, "out");
    for (int i = 0; i < lbll::kFeatureCount; ++i) out[i] = m->model.importance[i];
  });
}

lbll_status lbll_predict_csv(const lbll_model* m, const lbll_netlist* n, const char* circuit,
                             int simplified, char** out) {
  return Guard([&] {
    Require(m, "model");
    Require(n, "netlist");
    Require(out, "out");
    const std::string name = circuit ? circuit : n->netlist.name;
    const int k = m->model.class_count();
    std::string text = "circuit,latch";
    for (int c = 0; c < k; ++c) text += fmt::format(",p{}", c);
    text += ",predicted\n";
    for (const auto& l : FeaturesOf(n, simplified).latches) {
      const auto p = m->model.PredictProba(l.values);
      text += fmt::format("{},{}", name, l.latch_id);
      for (double v : p) text += fmt::format(",{:.17g}", v);
      text += fmt::format(",{}\n", lbll::Argmax(p));
    }
    *out = CopyString(text);
  });
}

void lbll_fc_options_init(lbll_fc_options* o) {
  if (!o) return;
  const lbll::FcConfig c;
  o->cycles = c.cycles;
  o->runs = c.runs;
  o->seed = c.seed;
}

void lbll_attack_options_init(lbll_attack_options* o) {
  if (!o) return;
  const lbll::AttackConfig c;
  o->topk = c.topk;
  o->compute_fc = c.compute_fc ? 1 : 0;
  lbll_fc_options_init(&o->fc);
}

lbll_status lbll_attack_run(const lbll_netlist* locked, const lbll_model* phase1,
                            const lbll_model* phase2, const lbll_attack_options* o,
                            const lbll_netlist* original, lbll_attack** out) {
  return Guard([&] {
    Require(locked, "locked");
    Require(phase1, "phase1");
    Require(phase2, "phase2");
    Require(out, "out");
    *out = nullptr;
    lbll::AttackConfig c;
    if (o) {
      c.topk = o->topk;
      c.compute_fc = o->compute_fc != 0;
      c.fc = FcFrom(&o->fc);
    }
    auto a = std::make_unique<lbll_attack>();
    const lbll::GroundTruth* truth = locked->truth ? &*locked->truth : nullptr;
    const lbll::Netlist* orig = original ? &original->netlist : nullptr;
    a->report = lbll::RunAttack(locked->netlist, lbll::Classifier::FromModel(phase1->model),
                                lbll::Classifier::FromModel(phase2->model), c, truth, orig);
    a->has_truth = truth != nullptr;
    a->has_fc = orig && c.compute_fc && !a->report.keys.empty();
    *out = a.release();
  });
}

void lbll_attack_free(lbll_attack* attack) { delete attack; }

lbll_status lbll_attack_summary_get(const lbll_attack* a, lbll_attack_summary* out) {
  return Guard([&] {
    Require(a, "attack");
    Require(out, "out");
    const lbll::AttackReport& r = a->report;
    *out = {};
    out->latches = r.latch_count;
    out->predicted_logic_decoys = static_cast<int>(r.predicted_ld.size());
    out->pool_size = r.pool.entries.size();
    out->has_truth = a->has_truth;
    out->phase1_accuracy = r.phase1_accuracy;
    out->top1_accuracy = r.t1_accuracy;
    out->best_accuracy = r.best_accuracy;
    out->best_index = r.best_index;
    out->truth_feasible = r.truth_feasible;
    out->has_fc = a->has_fc;
    out->fc = r.fc.fc;
    out->fc_stddev = r.fc.stddev;
    out->fc_flagged_runs = r.fc.flagged_runs;
    out->phase1_ms = r.timings.phase1_ms;
    out->simplify_ms = r.timings.simplify_ms;
    out->phase2_ms = r.timings.phase2_ms;
    out->ilp_ms = r.timings.ilp_ms;
    out->fc_ms = r.timings.fc_ms;
  });
}

lbll_status lbll_attack_keys(const lbll_attack* a, char** out) {
  return Guard([&] {
    Require(a, "attack");
    Require(out, "out");
    std::string text;
    for (size_t i = 0; i < a->report.keys.size(); ++i) {
      text += fmt::format("{}\t{:.10f}\t", i + 1,
                          lbll::ObjectiveValue(a->report.pool.entries[i].objective));
      bool first = true;
      for (const auto& [id, t] : a->report.keys[i]) {
        text += fmt::format("{}{}:{}", first ? "" : " ", id, lbll::LatchTypeName(t));
        first = false;
      }
      text += "\n";
    }
    *out = CopyString(text);
  });
}

lbll_status lbll_attack_key_sidecar(const lbll_attack* a, size_t index, char** out) {
  return Guard([&] {
    Require(a, "attack");
    Require(out, "out");
    if (index >= a->report.keys.size()) {
      lbll::ValidationError(fmt::format("key index {} out of range (pool has {})", index,
                                        a->report.keys.size()));
    }
    *out = CopyString(lbll::WriteSidecar(a->report.keys[index]));
  });
}

lbll_status lbll_evaluate_key(const lbll_netlist* locked, const char* key_text,
                              const lbll_netlist* original, const lbll_fc_options* fc,
                              lbll_key_score* out) {
  return Guard([&] {
    Require(locked, "locked");
    Require(key_text, "key_text");
    Require(out, "out");
    const lbll::KeyAssignment key = lbll::ParseSidecar(key_text);
    *out = {};
    out->accuracy = lbll::KeyAccuracy(key, TruthOf(locked));
    if (original) {
      const lbll::FcResult r =
          lbll::FunctionalCorruptibility(locked->netlist, key, original->netlist, FcFrom(fc));
      out->has_fc = 1;
      out->fc = r.fc;
      out->fc_stddev = r.stddev;
      out->fc_flagged_runs = r.flagged_runs;
    }
  });
}

lbll_status lbll_ablation_run(const lbll_netlist* locked, const lbll_model* phase1,
                              const lbll_model* phase2, const lbll_model* four_class, size_t topk,
                              lbll_ablation_result* out) {
  return Guard([&] {
    Require(locked, "locked");
    Require(phase1, "phase1");
    Require(phase2, "phase2");
    Require(four_class, "four_class");
    Require(out, "out");
    const lbll::GroundTruth& truth = TruthOf(locked);
    lbll::AttackConfig c;
    c.topk = topk;
    c.compute_fc = false;
    const lbll::Classifier c4 = lbll::Classifier::FromModel(four_class->model);
    const lbll::AttackReport r =
        lbll::RunAttack(locked->netlist, lbll::Classifier::FromModel(phase1->model),
                        lbll::Classifier::FromModel(phase2->model), c, &truth);
    out->two_phase = r.best_accuracy;
    out->baseline = lbll::KeyAccuracy(lbll::BaselineKey(locked->netlist, c4), truth);
    out->single_phase = lbll::AblationSinglePhase(locked->netlist, c4, topk, truth).best_accuracy;
    out->closest_key = lbll::AblationClosestKeys(r.probabilities, r.predicted_ld, truth, topk);
  });
}

lbll_status lbll_experiment_run(const char* run_file_text, const char* bench_dir, int workers,
                                const char* out_dir, int artifacts,
                                lbll_experiment_summary* out) {
  return Guard([&] {
    Require(run_file_text, "run_file_text");
    Require(out_dir, "out_dir");
    lbll::RunConfig config = lbll::ParseRunFile(run_file_text);
    if (bench_dir && *bench_dir) config.bench_dir = bench_dir;
    if (workers > 0) config.workers = workers;
    const std::string dir = out_dir;
    const lbll::ExperimentResult result =
        lbll::RunExperiment(config, artifacts ? dir + "/artifacts" : "");
    lbll::WriteReports(result, dir);
    lbll::WriteFile(dir + "/run.txt", lbll::WriteRunFile(config));
    if (out) {
      const lbll::SuiteAverages a = lbll::Averages(result);
      out->circuits = static_cast<int>(lbll::RunCircuits(config).size());
      out->variants = config.variants;
      out->phase1_accuracy = a.phase1_acc;
      out->top1_accuracy = a.t1_acc;
      out->best_accuracy = a.tk_acc;
      out->fc = a.fc;
      out->baseline_accuracy = a.baseline_acc;
      out->single_phase_accuracy = a.single_phase_acc;
      out->closest_key_accuracy = a.closest_acc;
    }
  });
}

}  // extern "C"
