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

#include "cqrhpo.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "config_space.hpp"
#include "experiment.hpp"
#include "searcher.hpp"

namespace {

thread_local std::string g_last_error;

cqrhpo_status fail(cqrhpo_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

cqrhpo_status ok() {
  g_last_error.clear();
  return CQRHPO_OK;
}

template <typename Fn>
cqrhpo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cqr::UsageError& e) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CQRHPO_ERROR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(CQRHPO_ERROR_RUNTIME, e.what());
  }
}

cqrhpo_status write_buf(const std::string& s, char* buf, size_t buf_size) {
  if (buf == nullptr || buf_size < s.size() + 1) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT,
                "output buffer too small, need " + std::to_string(s.size() + 1) +
                    " bytes");
  }
  std::memcpy(buf, s.data(), s.size() + 1);
  return ok();
}

}  // namespace

struct cqrhpo_space {
  cqr::ConfigSpace space;
};

struct cqrhpo_tuner {
  const cqrhpo_space* space;
  std::unique_ptr<cqr::Searcher> searcher;
  cqr::Dataset data;
  cqr::Rng rng;
};

extern "C" {

const char* cqrhpo_version(void) { return "0.1.0"; }

const char* cqrhpo_last_error(void) { return g_last_error.c_str(); }

cqrhpo_status cqrhpo_space_from_json(const char* json, cqrhpo_space** out) {
  if (json == nullptr || out == nullptr) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = new cqrhpo_space{cqr::ConfigSpace::from_json(json)};
    return ok();
  });
}

void cqrhpo_space_free(cqrhpo_space* space) { delete space; }

size_t cqrhpo_space_num_dims(const cqrhpo_space* space) {
  return space == nullptr ? 0 : space->space.num_dims();
}

cqrhpo_status cqrhpo_space_sample(const cqrhpo_space* space, uint64_t seed,
                                  char* buf, size_t buf_size) {
  if (space == nullptr) return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null space");
  return guarded([&] {
    cqr::Rng rng(seed);
    return write_buf(space->space.config_to_json(space->space.sample(rng)), buf,
                     buf_size);
  });
}

cqrhpo_status cqrhpo_tuner_new(const cqrhpo_space* space,
                               const char* options_json, uint64_t seed,
                               cqrhpo_tuner** out) {
  if (space == nullptr || options_json == nullptr || out == nullptr) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> cqrhpo_status {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(options_json);
    } catch (const nlohmann::json::parse_error& e) {
      return fail(CQRHPO_ERROR_PARSE, std::string("options: ") + e.what());
    }
    cqr::SearcherOptions opts;
    opts.m = j.value("m", opts.m);
    opts.num_candidates = j.value("num_candidates", opts.num_candidates);
    opts.val_fraction = j.value("val_fraction", opts.val_fraction);
    opts.n_init = j.value("n_init", opts.n_init);
    opts.conformal_threshold = j.value("conformal_threshold", opts.conformal_threshold);
    std::string method = j.value("method", std::string("cqr"));
    *out = new cqrhpo_tuner{space, cqr::make_searcher(method, opts), {},
                            cqr::Rng(seed, 1)};
    return ok();
  });
}

void cqrhpo_tuner_free(cqrhpo_tuner* tuner) { delete tuner; }

cqrhpo_status cqrhpo_tuner_observe(cqrhpo_tuner* tuner, const char* config_json,
                                   double value) {
  if (tuner == nullptr || config_json == nullptr) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    tuner->data.add(tuner->space->space.config_from_json(config_json), value);
    return ok();
  });
}

cqrhpo_status cqrhpo_tuner_suggest(cqrhpo_tuner* tuner, char* buf,
                                   size_t buf_size) {
  if (tuner == nullptr) return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null tuner");
  return guarded([&] {
    cqr::Config config =
        tuner->searcher->suggest(tuner->data, tuner->space->space, tuner->rng);
    return write_buf(tuner->space->space.config_to_json(config), buf, buf_size);
  });
}

cqrhpo_status cqrhpo_run_experiment(const char* spec_json, const char* out_dir) {
  if (spec_json == nullptr || out_dir == nullptr) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    cqr::run_experiment(cqr::ExperimentSpec::from_json(spec_json), out_dir);
    return ok();
  });
}

cqrhpo_status cqrhpo_compare(const char* const* dirs, size_t n_dirs,
                             const char* out_csv_path) {
  if (dirs == nullptr || out_csv_path == nullptr) {
    return fail(CQRHPO_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::vector<std::string> dir_list(dirs, dirs + n_dirs);
    cqr::compare(dir_list, out_csv_path);
    return ok();
  });
}

}  // extern "C"
