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


// Command-line driver over the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbll/lbll.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

// Carries an exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

void Check(lbll_status s) {
  if (s == LBLL_OK) return;
  const int code = s == LBLL_ERR_VALIDATION ? kExitValidation
                   : s == LBLL_ERR_IO       ? kExitIo
                                            : kExitInternal;
  throw Failure{code, lbll_last_error()};
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitIo, "cannot open " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Failure{kExitIo, "cannot write " + path};
  }
}

void MakeDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{kExitIo, "cannot create " + dir + ": " + ec.message()};
}

// Takes ownership of a string returned by the library.
std::string Take(char* s) {
  std::string out = s ? s : "";
  lbll_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Netlist = std::unique_ptr<lbll_netlist, Deleter<lbll_netlist, lbll_netlist_free>>;
using Model = std::unique_ptr<lbll_model, Deleter<lbll_model, lbll_model_free>>;
using Dataset = std::unique_ptr<lbll_dataset, Deleter<lbll_dataset, lbll_dataset_free>>;
using Attack = std::unique_ptr<lbll_attack, Deleter<lbll_attack, lbll_attack_free>>;

Netlist LoadNetlist(const std::string& bench, const std::string& sidecar) {
  lbll_netlist* n = nullptr;
  Check(lbll_netlist_load(bench.c_str(), sidecar.empty() ? nullptr : sidecar.c_str(), &n));
  return Netlist(n);
}

Model LoadModel(const std::string& path) {
  lbll_model* m = nullptr;
  Check(lbll_model_load(path.c_str(), &m));
  return Model(m);
}

std::string Stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void AddFcOptions(CLI::App* cmd, lbll_fc_options& fc) {
  cmd->add_option("--fc-cycles", fc.cycles, "Cycles per FC run")->check(CLI::PositiveNumber);
  cmd->add_option("--fc-runs", fc.runs, "FC runs")->check(CLI::PositiveNumber);
  cmd->add_option("--fc-seed", fc.seed, "FC input seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latch-based logic locking and the two-phase oracle-less attack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lbll_version()));
  std::function<void()> run;

  // lock
  struct {
    std::string in, out, name;
    lbll_lock_options opt{};
  } lock;
  lbll_lock_options_init(&lock.opt);
  auto* c_lock = app.add_subcommand("lock", "Lock a .bench netlist with keyed latches");
  c_lock->add_option("--in", lock.in, "Original .bench netlist")->required();
  c_lock->add_option("--out", lock.out, "Output directory")->required();
  c_lock->add_option("--name", lock.name, "Output file stem (default: input stem)");
  c_lock->add_option("--seed", lock.opt.seed, "Lock seed");
  c_lock->add_option("--ff-fraction", lock.opt.ff_fraction, "Fraction of flip-flops to latch");
  c_lock->add_option("--delay-rate", lock.opt.delay_decoy_rate, "Delay decoys per latched flip-flop");
  c_lock->add_option("--logic-rate", lock.opt.logic_decoy_rate, "Logic decoys per latched flip-flop");
  c_lock->callback([&] {
    run = [&] {
      Netlist original = LoadNetlist(lock.in, "");
      lbll_netlist* raw = nullptr;
      Check(lbll_lock(original.get(), &lock.opt, &raw));
      Netlist locked(raw);
      MakeDir(lock.out);
      const std::string base = lock.out + "/" + (lock.name.empty() ? Stem(lock.in) : lock.name);
      Check(lbll_netlist_write(locked.get(), (base + ".bench").c_str(), (base + ".key").c_str()));
      char* manifest = nullptr;
      Check(lbll_netlist_manifest(locked.get(), &manifest));
      std::string text = Take(manifest);
      text += "input = " + lock.in + "\nnetlist_path = " + base + ".bench\nsidecar_path = " +
              base + ".key\n";
      WriteText(base + ".manifest", text);
      std::cout << base << ".bench\n";
    };
  });

  // extract-features
  struct {
    std::string locked, key, circuit, out;
    bool simplified = false;
  } fx;
  auto* c_fx = app.add_subcommand("extract-features", "Per-latch feature rows");
  c_fx->add_option("--locked", fx.locked, "Locked .bench netlist")->required();
  c_fx->add_option("--key", fx.key, "Ground-truth sidecar (adds the type column)");
  c_fx->add_option("--circuit", fx.circuit, "Circuit id column (default: file stem)");
  c_fx->add_flag("--simplified", fx.simplified,
                 "Remove ground-truth logic decoys and propagate constants first");
  c_fx->add_option("--out", fx.out, "Output CSV (default: stdout)");
  c_fx->callback([&] {
    run = [&] {
      Netlist n = LoadNetlist(fx.locked, fx.key);
      char* csv = nullptr;
      const std::string circuit = fx.circuit.empty() ? Stem(fx.locked) : fx.circuit;
      Check(lbll_features_csv(n.get(), circuit.c_str(), fx.simplified ? 1 : 0, &csv));
      WriteText(fx.out, Take(csv));
    };
  });

  // train
  struct {
    std::string kind = "forest", scheme, out;
    std::vector<std::string> data, validation;
    std::vector<int> hidden;
    bool no_class_weights = false;
    lbll_forest_options forest{};
    lbll_mlp_options mlp{};
  } tr;
  lbll_forest_options_init(&tr.forest);
  lbll_mlp_options_init(&tr.mlp);
  auto* c_tr = app.add_subcommand("train", "Train a forest or MLP on feature CSVs");
  c_tr->add_option("--model", tr.kind, "forest or mlp")->check(CLI::IsMember({"forest", "mlp"}));
  c_tr->add_option("--scheme", tr.scheme, "ld-vs-rest, ps-vs-dd, p-s-dd or all4")->required();
  c_tr->add_option("--data", tr.data, "Training CSVs from extract-features")->required();
  c_tr->add_option("--validation", tr.validation, "Validation CSVs (MLP early stopping)");
  c_tr->add_option("--out", tr.out, "Model file")->required();
  c_tr->add_option("--seed", tr.forest.seed, "Training seed");
  c_tr->add_option("--trees", tr.forest.trees, "Forest size")->check(CLI::PositiveNumber);
  c_tr->add_option("--max-depth", tr.forest.max_depth, "Tree depth limit")->check(CLI::PositiveNumber);
  c_tr->add_option("--min-leaf", tr.forest.min_leaf, "Minimum rows per leaf")->check(CLI::PositiveNumber);
  c_tr->add_option("--mtry", tr.forest.mtry, "Features per split (0: sqrt of 14)");
  c_tr->add_option("--workers", tr.forest.workers, "Tree-building threads")->check(CLI::PositiveNumber);
  c_tr->add_option("--hidden", tr.hidden, "MLP hidden layer sizes")->delimiter(',');
  c_tr->add_option("--epochs", tr.mlp.epochs, "MLP epochs")->check(CLI::PositiveNumber);
  c_tr->add_option("--batch", tr.mlp.batch, "MLP mini-batch size")->check(CLI::PositiveNumber);
  c_tr->add_option("--lr", tr.mlp.learning_rate, "MLP step size");
  c_tr->add_option("--decay", tr.mlp.decay, "MLP step decay per epoch");
  c_tr->add_option("--patience", tr.mlp.patience, "Epochs without validation improvement");
  c_tr->add_flag("--no-class-weights", tr.no_class_weights, "Disable inverse-frequency weights");
  c_tr->callback([&] {
    run = [&] {
      auto load = [&](const std::vector<std::string>& files) {
        lbll_dataset* raw = nullptr;
        Check(lbll_dataset_create(tr.scheme.c_str(), &raw));
        Dataset d(raw);
        for (const auto& f : files) Check(lbll_dataset_add_csv(d.get(), ReadText(f).c_str()));
        return d;
      };
      Dataset train = load(tr.data);
      lbll_model* raw = nullptr;
      if (tr.kind == "forest") {
        tr.forest.class_weights = tr.no_class_weights ? 0 : 1;
        Check(lbll_train_forest(train.get(), &tr.forest, &raw));
      } else {
        Dataset val = load(tr.validation);
        if (!tr.hidden.empty()) {
          if (tr.hidden.size() > 8) throw Failure{kExitValidation, "at most 8 hidden layers"};
          tr.mlp.hidden_layers = static_cast<int>(tr.hidden.size());
          for (size_t i = 0; i < tr.hidden.size(); ++i) tr.mlp.hidden[i] = tr.hidden[i];
        }
        tr.mlp.seed = tr.forest.seed;
        tr.mlp.class_weights = tr.no_class_weights ? 0 : 1;
        Check(lbll_train_mlp(train.get(), tr.validation.empty() ? nullptr : val.get(), &tr.mlp,
                             &raw));
      }
      Model m(raw);
      Check(lbll_model_save(m.get(), tr.out.c_str()));
      char* header = nullptr;
      Check(lbll_model_describe(m.get(), &header));
      std::cout << "rows " << lbll_dataset_rows(train.get()) << "\n" << Take(header);
    };
  });

  // predict
  struct {
    std::string model, netlist, key, circuit, out;
    bool simplified = false;
  } pr;
  auto* c_pr = app.add_subcommand("predict", "Class probabilities for every latch");
  c_pr->add_option("--model", pr.model, "Model file")->required();
  c_pr->add_option("--netlist", pr.netlist, "Locked .bench netlist")->required();
  c_pr->add_option("--key", pr.key, "Ground-truth sidecar (needed for --simplified)");
  c_pr->add_option("--circuit", pr.circuit, "Circuit id column (default: file stem)");
  c_pr->add_flag("--simplified", pr.simplified, "Featurize after removing ground-truth logic decoys");
  c_pr->add_option("--out", pr.out, "Output CSV (default: stdout)");
  c_pr->callback([&] {
    run = [&] {
      Model m = LoadModel(pr.model);
      Netlist n = LoadNetlist(pr.netlist, pr.key);
      const std::string circuit = pr.circuit.empty() ? Stem(pr.netlist) : pr.circuit;
      char* csv = nullptr;
      Check(lbll_predict_csv(m.get(), n.get(), circuit.c_str(), pr.simplified ? 1 : 0, &csv));
      WriteText(pr.out, Take(csv));
    };
  });

  // attack
  struct {
    std::string locked, key, phase1, phase2, original, out;
    lbll_attack_options opt{};
  } at;
  lbll_attack_options_init(&at.opt);
  auto* c_at = app.add_subcommand("attack", "Two-phase attack on a locked netlist");
  c_at->add_option("--locked", at.locked, "Locked .bench netlist")->required();
  c_at->add_option("--phase1", at.phase1, "Phase-1 model (ld-vs-rest)")->required();
  c_at->add_option("--phase2", at.phase2, "Phase-2 model (ps-vs-dd or p-s-dd)")->required();
  c_at->add_option("--topk", at.opt.topk, "Pool size")->check(CLI::PositiveNumber);
  c_at->add_option("--key", at.key, "Ground-truth sidecar, for scoring only");
  c_at->add_option("--original", at.original, "Original netlist, for FC only");
  c_at->add_option("--out", at.out, "Output directory")->required();
  AddFcOptions(c_at, at.opt.fc);
  c_at->callback([&] {
    run = [&] {
      Netlist locked = LoadNetlist(at.locked, at.key);
      Netlist original = at.original.empty() ? Netlist() : LoadNetlist(at.original, "");
      Model p1 = LoadModel(at.phase1);
      Model p2 = LoadModel(at.phase2);
      at.opt.compute_fc = original ? 1 : 0;
      lbll_attack* raw = nullptr;
      Check(lbll_attack_run(locked.get(), p1.get(), p2.get(), &at.opt, original.get(), &raw));
      Attack a(raw);
      lbll_attack_summary s{};
      Check(lbll_attack_summary_get(a.get(), &s));
      MakeDir(at.out);
      char* text = nullptr;
      Check(lbll_attack_keys(a.get(), &text));
      WriteText(at.out + "/keys.txt", Take(text));
      if (s.pool_size > 0) {
        Check(lbll_attack_key_sidecar(a.get(), 0, &text));
        WriteText(at.out + "/key_top1.key", Take(text));
      }
      std::ostringstream r;
      r << "latches " << s.latches << "\npredicted_logic_decoys " << s.predicted_logic_decoys
        << "\npool " << s.pool_size << "\n";
      if (s.has_truth) {
        r << "phase1_accuracy " << s.phase1_accuracy << "\ntop1_accuracy " << s.top1_accuracy
          << "\nbest_accuracy " << s.best_accuracy << "\nbest_rank " << s.best_index + 1
          << "\ntruth_feasible " << s.truth_feasible << "\n";
      }
      if (s.has_fc) {
        r << "fc_key_rank " << (s.has_truth ? s.best_index + 1 : 1) << "\nfc " << s.fc
          << "\nfc_stddev " << s.fc_stddev << "\nfc_flagged_runs "
          << s.fc_flagged_runs << "\n";
      }
      r << "phase1_ms " << s.phase1_ms << "\nsimplify_ms " << s.simplify_ms << "\nphase2_ms "
        << s.phase2_ms << "\nilp_ms " << s.ilp_ms << "\nfc_ms " << s.fc_ms << "\n";
      WriteText(at.out + "/report.txt", r.str());
      std::cout << r.str();
    };
  });

  // evaluate
  struct {
    std::string locked, truth, key, original;
    lbll_fc_options fc{};
  } ev;
  lbll_fc_options_init(&ev.fc);
  auto* c_ev = app.add_subcommand("evaluate", "Key accuracy and functional corruptibility");
  c_ev->add_option("--locked", ev.locked, "Locked .bench netlist")->required();
  c_ev->add_option("--truth", ev.truth, "Ground-truth sidecar")->required();
  c_ev->add_option("--key", ev.key, "Key to score, sidecar format")->required();
  c_ev->add_option("--original", ev.original, "Original netlist (enables FC)");
  AddFcOptions(c_ev, ev.fc);
  c_ev->callback([&] {
    run = [&] {
      Netlist locked = LoadNetlist(ev.locked, ev.truth);
      Netlist original = ev.original.empty() ? Netlist() : LoadNetlist(ev.original, "");
      lbll_key_score s{};
      Check(lbll_evaluate_key(locked.get(), ReadText(ev.key).c_str(), original.get(), &ev.fc, &s));
      std::cout << "accuracy " << s.accuracy << "\n";
      if (s.has_fc) {
        std::cout << "fc " << s.fc << "\nfc_stddev " << s.fc_stddev << "\nfc_flagged_runs "
                  << s.fc_flagged_runs << "\n";
      }
    };
  });

  // ablation
  struct {
    std::string locked, truth, phase1, phase2, baseline;
    size_t topk = 1000;
  } ab;
  auto* c_ab = app.add_subcommand("ablation", "Baseline, single-phase and closest-key comparisons");
  c_ab->add_option("--locked", ab.locked, "Locked .bench netlist")->required();
  c_ab->add_option("--truth", ab.truth, "Ground-truth sidecar")->required();
  c_ab->add_option("--phase1", ab.phase1, "Phase-1 model")->required();
  c_ab->add_option("--phase2", ab.phase2, "Phase-2 model")->required();
  c_ab->add_option("--baseline", ab.baseline, "4-class model (all4)")->required();
  c_ab->add_option("--topk", ab.topk, "Pool size")->check(CLI::PositiveNumber);
  c_ab->callback([&] {
    run = [&] {
      Netlist locked = LoadNetlist(ab.locked, ab.truth);
      Model p1 = LoadModel(ab.phase1), p2 = LoadModel(ab.phase2), p4 = LoadModel(ab.baseline);
      lbll_ablation_result r{};
      Check(lbll_ablation_run(locked.get(), p1.get(), p2.get(), p4.get(), ab.topk, &r));
      std::cout << "two_phase " << r.two_phase << "\nsingle_phase " << r.single_phase
                << "\nbaseline " << r.baseline << "\nclosest_key " << r.closest_key << "\n";
    };
  });

  // experiment
  struct {
    std::string run_file, out, bench_dir, suite;
    int variants = 0, workers = 0;
    size_t topk = 0;
    bool artifacts = false;
  } ex;
  auto* c_ex = app.add_subcommand("experiment", "Leave-one-circuit-out experiment");
  c_ex->add_option("--run", ex.run_file, "Run file (key = value lines)");
  c_ex->add_option("--suite", ex.suite, "small, large or smoke (overrides the run file)");
  c_ex->add_option("--variants", ex.variants, "Locked variants per circuit")->check(CLI::PositiveNumber);
  c_ex->add_option("--topk", ex.topk, "Pool size")->check(CLI::PositiveNumber);
  c_ex->add_option("--bench-dir", ex.bench_dir, "Benchmark directory (default: $LBLL_BENCH_DIR)");
  c_ex->add_option("--workers", ex.workers, "Worker threads")->check(CLI::PositiveNumber);
  c_ex->add_option("--out", ex.out, "Output directory")->required();
  c_ex->add_flag("--artifacts", ex.artifacts, "Also write locked variants, models and a run manifest");
  c_ex->callback([&] {
    run = [&] {
      std::string text = ex.run_file.empty() ? "" : ReadText(ex.run_file);
      text += "\n";
      if (!ex.suite.empty()) text += "suite = " + ex.suite + "\n";
      if (ex.variants > 0) text += "variants = " + std::to_string(ex.variants) + "\n";
      if (ex.topk > 0) text += "topk = " + std::to_string(ex.topk) + "\n";
      lbll_experiment_summary s{};
      Check(lbll_experiment_run(text.c_str(), ex.bench_dir.c_str(), ex.workers, ex.out.c_str(),
                                ex.artifacts ? 1 : 0, &s));
      std::cout << ReadText(ex.out + "/report.txt");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  try {
    run();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
