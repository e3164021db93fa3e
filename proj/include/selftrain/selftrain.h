/* Copyright 2026 The selftrain Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the selftrain shared library: a self-training (teacher /
 * student pseudo-labeling) experiment engine with calibrated entropy-based
 * pseudo-label selection, weighted SplitBatch sampling and open-set
 * filtering. All functions return SELFTRAIN_OK (0) on success; on failure
 * selftrain_last_error() describes the most recent error on the calling
 * thread. Handles are opaque and must be released with their free function.
 */

#ifndef SELFTRAIN_SELFTRAIN_H_
#define SELFTRAIN_SELFTRAIN_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum selftrain_status {
  SELFTRAIN_OK = 0,
  SELFTRAIN_ERR_INVALID_ARGUMENT = 1,
  SELFTRAIN_ERR_CONFIG = 2,
  SELFTRAIN_ERR_IO = 3,
  SELFTRAIN_ERR_RUNTIME = 4
} selftrain_status;

const char* selftrain_version(void);

/* Message for the last failing call on this thread; never NULL. */
const char* selftrain_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

typedef struct selftrain_dataset selftrain_dataset;

/* Generates a dataset from the [dataset] block of a config file. */
selftrain_status selftrain_dataset_generate(const char* config_path,
                                            selftrain_dataset** out_dataset);

/* Loads / saves the four partition files (labeled.ds, unlabeled.ds,
 * validation.ds, test.ds) under a directory. */
selftrain_status selftrain_dataset_load(const char* dir, selftrain_dataset** out_dataset);
selftrain_status selftrain_dataset_save(const selftrain_dataset* dataset, const char* dir);

/* Partition sizes in the order labeled, unlabeled, validation, test. */
selftrain_status selftrain_dataset_counts(const selftrain_dataset* dataset,
                                          long long out_counts[4]);
selftrain_status selftrain_dataset_shape(const selftrain_dataset* dataset,
                                         int* out_num_classes, int* out_feature_dim);

/* Replaces `fraction` of the unlabeled pool with samples from
 * `num_nontarget_classes` synthetic non-target clusters placed
 * `center_scale` target-ring radii away. */
selftrain_status selftrain_dataset_inject_open_set(const selftrain_dataset* dataset,
                                                   double fraction,
                                                   unsigned long long seed,
                                                   int num_nontarget_classes,
                                                   double center_scale,
                                                   selftrain_dataset** out_dataset);

void selftrain_dataset_free(selftrain_dataset* dataset);

/* ---- experiment entry points ------------------------------------------- */

/* Each takes a config file path plus an optional output directory override
 * (NULL or "" keeps the config's [output] dir). `seed_override` >= 0 replaces
 * the config's seed list with that single seed; `parallel` > 1 runs
 * independent (preset, seed) cells on that many threads without changing any
 * output byte. */

/* Writes the dataset partition files and reports their sizes. */
selftrain_status selftrain_generate(const char* config_path, const char* out_dir,
                                    long long out_counts[4]);

/* Runs every configured preset and writes report.txt (plus per-iteration
 * audit files) under the output directory. `out_report_path`, when non-NULL,
 * receives a malloc'd copy of the report path; free it with
 * selftrain_string_free. */
selftrain_status selftrain_run(const char* config_path, const char* out_dir,
                               long long seed_override, int parallel,
                               char** out_report_path);

/* Runs the [sweep] axis of the config and writes sweep_report.txt. */
selftrain_status selftrain_sweep(const char* config_path, const char* out_dir,
                                 long long seed_override, int parallel,
                                 char** out_report_path);

void selftrain_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SELFTRAIN_SELFTRAIN_H_ */
