// Copyright 2026 The selftrain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selftrain/selftrain.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dataset.hpp"
#include "errors.hpp"
#include "experiment_config.hpp"
#include "runner.hpp"

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const std::string& message) { g_last_error = message; }

selftrain_status status_of(const std::exception& e) {
  if (dynamic_cast<const selftrain::ConfigError*>(&e)) return SELFTRAIN_ERR_CONFIG;
  if (dynamic_cast<const selftrain::IoError*>(&e)) return SELFTRAIN_ERR_IO;
  if (dynamic_cast<const selftrain::InvalidArgumentError*>(&e)) {
    return SELFTRAIN_ERR_INVALID_ARGUMENT;
  }
  return SELFTRAIN_ERR_RUNTIME;
}

// Runs `fn` and converts exceptions into status codes + last-error text.
template <typename Fn>
selftrain_status guarded(Fn&& fn) {
  try {
    fn();
    return SELFTRAIN_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return status_of(e);
  } catch (...) {
    set_error("unknown error");
    return SELFTRAIN_ERR_RUNTIME;
  }
}

selftrain_status require(bool ok, const char* message) {
  if (ok) return SELFTRAIN_OK;
  set_error(message);
  return SELFTRAIN_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct selftrain_dataset {
  selftrain::DataSplit split;
};

extern "C" {

const char* selftrain_version(void) { return "1.0.0"; }

const char* selftrain_last_error(void) { return g_last_error.c_str(); }

selftrain_status selftrain_dataset_generate(const char* config_path,
                                            selftrain_dataset** out_dataset) {
  if (auto s = require(config_path && out_dataset, "null argument")) return s;
  *out_dataset = nullptr;
  return guarded([&] {
    selftrain::ExperimentConfig config = selftrain::parse_config_file(config_path);
    if (config.dataset_from_path) {
      throw selftrain::ConfigError(
          std::string(config_path) + ": generate needs a generator [dataset] block");
    }
    auto* handle = new selftrain_dataset{
        selftrain::generate_gaussian_dataset(config.generator)};
    *out_dataset = handle;
  });
}

selftrain_status selftrain_dataset_load(const char* dir, selftrain_dataset** out_dataset) {
  if (auto s = require(dir && out_dataset, "null argument")) return s;
  *out_dataset = nullptr;
  return guarded([&] { *out_dataset = new selftrain_dataset{selftrain::load_split(dir)}; });
}

selftrain_status selftrain_dataset_save(const selftrain_dataset* dataset, const char* dir) {
  if (auto s = require(dataset && dir, "null argument")) return s;
  return guarded([&] { selftrain::save_split(dataset->split, dir); });
}

selftrain_status selftrain_dataset_counts(const selftrain_dataset* dataset,
                                          long long out_counts[4]) {
  if (auto s = require(dataset && out_counts, "null argument")) return s;
  out_counts[0] = static_cast<long long>(dataset->split.labeled.size());
  out_counts[1] = static_cast<long long>(dataset->split.unlabeled.size());
  out_counts[2] = static_cast<long long>(dataset->split.validation.size());
  out_counts[3] = static_cast<long long>(dataset->split.test.size());
  return SELFTRAIN_OK;
}

selftrain_status selftrain_dataset_shape(const selftrain_dataset* dataset,
                                         int* out_num_classes, int* out_feature_dim) {
  if (auto s = require(dataset != nullptr, "null dataset")) return s;
  if (out_num_classes) *out_num_classes = dataset->split.num_target_classes;
  if (out_feature_dim) *out_feature_dim = dataset->split.feature_dim;
  return SELFTRAIN_OK;
}

selftrain_status selftrain_dataset_inject_open_set(const selftrain_dataset* dataset,
                                                   double fraction,
                                                   unsigned long long seed,
                                                   int num_nontarget_classes,
                                                   double center_scale,
                                                   selftrain_dataset** out_dataset) {
  if (auto s = require(dataset && out_dataset, "null argument")) return s;
  *out_dataset = nullptr;
  return guarded([&] {
    selftrain::OpenSetOptions options;
    options.num_nontarget_classes = num_nontarget_classes;
    options.center_scale = center_scale;
    *out_dataset = new selftrain_dataset{
        selftrain::inject_open_set(dataset->split, fraction, seed, options)};
  });
}

void selftrain_dataset_free(selftrain_dataset* dataset) { delete dataset; }

selftrain_status selftrain_generate(const char* config_path, const char* out_dir,
                                    long long out_counts[4]) {
  if (auto s = require(config_path != nullptr, "null config path")) return s;
  return guarded([&] {
    selftrain::GeneratedInfo info =
        selftrain::generate_command(config_path, out_dir ? out_dir : "");
    if (out_counts) {
      out_counts[0] = info.labeled;
      out_counts[1] = info.unlabeled;
      out_counts[2] = info.validation;
      out_counts[3] = info.test;
    }
  });
}

selftrain_status selftrain_run(const char* config_path, const char* out_dir,
                               long long seed_override, int parallel,
                               char** out_report_path) {
  if (auto s = require(config_path != nullptr, "null config path")) return s;
  return guarded([&] {
    std::string path = selftrain::run_command(config_path, out_dir ? out_dir : "",
                                              seed_override, parallel);
    if (out_report_path) *out_report_path = dup_string(path);
  });
}

selftrain_status selftrain_sweep(const char* config_path, const char* out_dir,
                                 long long seed_override, int parallel,
                                 char** out_report_path) {
  if (auto s = require(config_path != nullptr, "null config path")) return s;
  return guarded([&] {
    std::string path = selftrain::sweep_command(config_path, out_dir ? out_dir : "",
                                                seed_override, parallel);
    if (out_report_path) *out_report_path = dup_string(path);
  });
}

void selftrain_string_free(char* s) { std::free(s); }

}  // extern "C"
