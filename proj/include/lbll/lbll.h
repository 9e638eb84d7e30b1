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


/* C interface to the latch-locking attack library.
 *
 * Every function returns an lbll_status. On failure the message is available
 * from lbll_last_error() on the same thread until the next failing call.
 * Objects are opaque handles released with their *_free function; strings
 * returned through char** are released with lbll_string_free. */

#ifndef LBLL_LBLL_H_
#define LBLL_LBLL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LBLL_API __declspec(dllexport)
#else
#define LBLL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lbll_status {
  LBLL_OK = 0,
  LBLL_ERR_VALIDATION = 1,
  LBLL_ERR_IO = 2,
  LBLL_ERR_INTERNAL = 3
} lbll_status;

typedef struct lbll_netlist lbll_netlist;
typedef struct lbll_dataset lbll_dataset;
typedef struct lbll_model lbll_model;
typedef struct lbll_attack lbll_attack;

LBLL_API const char* lbll_version(void);
LBLL_API const char* lbll_last_error(void);
LBLL_API void lbll_string_free(char* s);

/* Netlists. A locked netlist carries its ground truth when loaded with a
 * sidecar or produced by lbll_lock. */
typedef struct lbll_netlist_stats {
  int inputs;
  int outputs;
  int gates;
  int flipflops;
  int latches;
  int has_truth;
} lbll_netlist_stats;

LBLL_API lbll_status lbll_netlist_load(const char* bench_path, const char* sidecar_path,
                                       lbll_netlist** out);
LBLL_API void lbll_netlist_free(lbll_netlist* netlist);
LBLL_API lbll_status lbll_netlist_stats_get(const lbll_netlist* netlist,
                                            lbll_netlist_stats* out);
/* Writes the netlist and, when present and sidecar_path is non-null, the
 * ground truth. */
LBLL_API lbll_status lbll_netlist_write(const lbll_netlist* netlist, const char* bench_path,
                                        const char* sidecar_path);
/* Lock manifest (empty for netlists not produced by lbll_lock). */
LBLL_API lbll_status lbll_netlist_manifest(const lbll_netlist* netlist, char** out);

/* Locking. */
typedef struct lbll_lock_options {
  uint64_t seed;
  double ff_fraction;
  double delay_decoy_rate;
  double logic_decoy_rate;
} lbll_lock_options;

LBLL_API void lbll_lock_options_init(lbll_lock_options* options);
LBLL_API lbll_status lbll_lock(const lbll_netlist* original, const lbll_lock_options* options,
                               lbll_netlist** locked);

/* Features: circuit,latch,<14 features>,type rows. With simplified != 0 the
 * ground-truth logic decoys are removed and constants propagated first. The
 * type column is empty when the netlist has no ground truth. */
LBLL_API lbll_status lbll_features_csv(const lbll_netlist* netlist, const char* circuit,
                                       int simplified, char** out);

/* Datasets under a label scheme: "ld-vs-rest", "ps-vs-dd", "p-s-dd", "all4". */
LBLL_API lbll_status lbll_dataset_create(const char* scheme, lbll_dataset** out);
LBLL_API void lbll_dataset_free(lbll_dataset* dataset);
/* Adds feature rows produced by lbll_features_csv; the type column is required. */
LBLL_API lbll_status lbll_dataset_add_csv(lbll_dataset* dataset, const char* csv_text);
LBLL_API size_t lbll_dataset_rows(const lbll_dataset* dataset);

/* Training. */
typedef struct lbll_forest_options {
  int trees;
  int max_depth;
  int min_leaf;
  int mtry; /* 0: round(sqrt(14)) */
  int class_weights;
  uint64_t seed;
  int workers;
} lbll_forest_options;

typedef struct lbll_mlp_options {
  int hidden[8];
  int hidden_layers;
  int epochs;
  int batch;
  double learning_rate;
  double decay;
  int patience;
  int class_weights;
  uint64_t seed;
} lbll_mlp_options;

LBLL_API void lbll_forest_options_init(lbll_forest_options* options);
LBLL_API void lbll_mlp_options_init(lbll_mlp_options* options);
LBLL_API lbll_status lbll_train_forest(const lbll_dataset* train,
                                       const lbll_forest_options* options, lbll_model** out);
/* validation may be null (no early stopping; importance on training rows). */
LBLL_API lbll_status lbll_train_mlp(const lbll_dataset* train, const lbll_dataset* validation,
                                    const lbll_mlp_options* options, lbll_model** out);

/* Models. */
LBLL_API lbll_status lbll_model_load(const char* path, lbll_model** out);
LBLL_API lbll_status lbll_model_save(const lbll_model* model, const char* path);
LBLL_API void lbll_model_free(lbll_model* model);
/* Text header of the model file. */
LBLL_API lbll_status lbll_model_describe(const lbll_model* model, char** out);
LBLL_API lbll_status lbll_model_importance(const lbll_model* model, double out[14]);
/* circuit,latch,p0..p{k-1},predicted rows for every latch of the netlist. */
LBLL_API lbll_status lbll_predict_csv(const lbll_model* model, const lbll_netlist* netlist,
                                      const char* circuit, int simplified, char** out);

/* Two-phase attack. */
typedef struct lbll_fc_options {
  int cycles;
  int runs;
  uint64_t seed;
} lbll_fc_options;

typedef struct lbll_attack_options {
  size_t topk;
  int compute_fc; /* needs an original netlist */
  lbll_fc_options fc;
} lbll_attack_options;

typedef struct lbll_attack_summary {
  int latches;
  int predicted_logic_decoys;
  size_t pool_size;
  int has_truth;
  double phase1_accuracy;
  double top1_accuracy;
  double best_accuracy;
  int best_index;
  int truth_feasible; /* 1, 0, or -1 when phase 1 was not exact */
  int has_fc;
  double fc;
  double fc_stddev;
  int fc_flagged_runs;
  double phase1_ms, simplify_ms, phase2_ms, ilp_ms, fc_ms;
} lbll_attack_summary;

LBLL_API void lbll_fc_options_init(lbll_fc_options* options);
LBLL_API void lbll_attack_options_init(lbll_attack_options* options);
/* Ground truth of `locked`, when present, and `original`, when non-null,
 * are used only for scoring. */
LBLL_API lbll_status lbll_attack_run(const lbll_netlist* locked, const lbll_model* phase1,
                                     const lbll_model* phase2, const lbll_attack_options* options,
                                     const lbll_netlist* original, lbll_attack** out);
LBLL_API void lbll_attack_free(lbll_attack* attack);
LBLL_API lbll_status lbll_attack_summary_get(const lbll_attack* attack, lbll_attack_summary* out);
/* One line per pool entry: rank, objective, then latch_id:TYPE for every
 * latch including predicted logic decoys. */
LBLL_API lbll_status lbll_attack_keys(const lbll_attack* attack, char** out);
/* Pool entry `index` as sidecar text (latch_id<TAB>TYPE). */
LBLL_API lbll_status lbll_attack_key_sidecar(const lbll_attack* attack, size_t index, char** out);

/* Scores a key (sidecar text) against the locked netlist's ground truth and,
 * when original is non-null, measures functional corruptibility. */
typedef struct lbll_key_score {
  double accuracy;
  int has_fc;
  double fc;
  double fc_stddev;
  int fc_flagged_runs;
} lbll_key_score;

LBLL_API lbll_status lbll_evaluate_key(const lbll_netlist* locked, const char* key_text,
                                       const lbll_netlist* original,
                                       const lbll_fc_options* fc, lbll_key_score* out);

/* Baseline and ablations on one locked netlist with ground truth. */
typedef struct lbll_ablation_result {
  double two_phase;    /* best of pool */
  double baseline;     /* 4-class argmax */
  double single_phase; /* 4-class model + simplification + ILP, best of pool */
  double closest_key;  /* unconstrained k best keys, best of pool */
} lbll_ablation_result;

LBLL_API lbll_status lbll_ablation_run(const lbll_netlist* locked, const lbll_model* phase1,
                                       const lbll_model* phase2, const lbll_model* four_class,
                                       size_t topk, lbll_ablation_result* out);

/* Leave-one-circuit-out experiment from run-file text. Writes report.txt,
 * report.tsv, importance.tsv and timings.tsv to out_dir, and locked
 * variants, models and run_manifest.txt when artifacts != 0. */
typedef struct lbll_experiment_summary {
  int circuits;
  int variants;
  double phase1_accuracy;
  double top1_accuracy;
  double best_accuracy;
  double fc;
  double baseline_accuracy;
  double single_phase_accuracy;
  double closest_key_accuracy;
} lbll_experiment_summary;

LBLL_API lbll_status lbll_experiment_run(const char* run_file_text, const char* bench_dir,
                                         int workers, const char* out_dir, int artifacts,
                                         lbll_experiment_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* LBLL_LBLL_H_ */
