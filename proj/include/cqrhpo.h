/*
 * Copyright 2026 The cqrhpo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the cqrhpo hyperparameter-optimization engine.
 *
 * All functions return cqrhpo_status; on any non-OK status,
 * cqrhpo_last_error() holds a human-readable message (thread-local).
 * Handles are opaque and owned by the caller via the matching _free call.
 */

#ifndef CQRHPO_H
#define CQRHPO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cqrhpo_status {
  CQRHPO_OK = 0,
  CQRHPO_ERROR_INVALID_ARGUMENT = 1,
  CQRHPO_ERROR_PARSE = 2,
  CQRHPO_ERROR_IO = 3,
  CQRHPO_ERROR_RUNTIME = 4
} cqrhpo_status;

const char* cqrhpo_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
const char* cqrhpo_last_error(void);

/* ---- Configuration spaces ---------------------------------------------- */

typedef struct cqrhpo_space cqrhpo_space;

/*
 * Builds a space from a JSON declaration:
 *   {"dims": [{"name": ..., "kind":
 *     "categorical|uniform|log_uniform|finite_range", ...}]}
 * categorical takes "values" (strings); uniform/log_uniform take "lo"/"hi";
 * finite_range takes "values" (sorted numbers) and optional "log" (bool).
 */
cqrhpo_status cqrhpo_space_from_json(const char* json, cqrhpo_space** out);
void cqrhpo_space_free(cqrhpo_space* space);

size_t cqrhpo_space_num_dims(const cqrhpo_space* space);

/* Draws one uniform configuration; writes its JSON object representation. */
cqrhpo_status cqrhpo_space_sample(const cqrhpo_space* space, uint64_t seed,
                                  char* buf, size_t buf_size);

/* ---- Tuner sessions ----------------------------------------------------- */

/*
 * A tuner owns a searcher ("rs", "qr" or "cqr") over a space. Feed it
 * observations and ask for the next configuration to evaluate.
 */
typedef struct cqrhpo_tuner cqrhpo_tuner;

/*
 * options_json: {"method": "rs|qr|cqr", "m": int, "num_candidates": int,
 * "val_fraction": real, "n_init": int, "conformal_threshold": int} with all
 * fields optional except "method".
 */
cqrhpo_status cqrhpo_tuner_new(const cqrhpo_space* space,
                               const char* options_json, uint64_t seed,
                               cqrhpo_tuner** out);
void cqrhpo_tuner_free(cqrhpo_tuner* tuner);

/* config_json is a JSON object mapping dimension names to values. */
cqrhpo_status cqrhpo_tuner_observe(cqrhpo_tuner* tuner, const char* config_json,
                                   double value);

/* Writes the suggested configuration as JSON into buf. */
cqrhpo_status cqrhpo_tuner_suggest(cqrhpo_tuner* tuner, char* buf,
                                   size_t buf_size);

/* ---- Simulated experiments ---------------------------------------------- */

/*
 * Runs a full simulated experiment described by spec_json (see the manifest
 * schema in the README) into out_dir: per-seed logs, metrics.csv and
 * manifest.json.
 */
cqrhpo_status cqrhpo_run_experiment(const char* spec_json, const char* out_dir);

/*
 * Joins experiment output directories over a shared task and writes the
 * per-fraction regret/rank CSV to out_csv_path.
 */
cqrhpo_status cqrhpo_compare(const char* const* dirs, size_t n_dirs,
                             const char* out_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CQRHPO_H */
