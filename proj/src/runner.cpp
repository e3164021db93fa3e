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

#include "runner.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "errors.hpp"

namespace selftrain {

namespace {

DatasetSummary summarize(const ExperimentConfig& config, const DataSplit& split) {
  DatasetSummary s;
  s.from_path = config.dataset_from_path;
  s.path = config.dataset_path;
  s.generator = config.generator;
  s.num_target_classes = split.num_target_classes;
  s.feature_dim = split.feature_dim;
  s.labeled = static_cast<long>(split.labeled.size());
  s.unlabeled = static_cast<long>(split.unlabeled.size());
  s.validation = static_cast<long>(split.validation.size());
  s.test = static_cast<long>(split.test.size());
  return s;
}

DataSplit materialize_dataset(const ExperimentConfig& config) {
  if (config.dataset_from_path) return load_split(config.dataset_path);
  return generate_gaussian_dataset(config.generator);
}

struct WorkItem {
  std::size_t preset_index;
  std::size_t seed_index;
};

// Runs all (preset, seed) cells, optionally across threads. Results land in
// preassigned slots so assembly order never depends on scheduling.
void run_cells(const ExperimentConfig& config, const DataSplit& split,
               const std::string& out_dir, int parallel,
               std::vector<PresetResult>& presets) {
  std::vector<WorkItem> items;
  for (std::size_t p = 0; p < presets.size(); ++p) {
    presets[p].runs.resize(config.seeds.size());
    for (std::size_t s = 0; s < config.seeds.size(); ++s) items.push_back({p, s});
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      const WorkItem& item = items[i];
      PresetResult& preset = presets[item.preset_index];
      std::uint64_t seed = config.seeds[item.seed_index];
      try {
        DumpOptions dumps;
        const DumpOptions* dumps_ptr = nullptr;
        if (!out_dir.empty()) {
          dumps.dir = out_dir;
          dumps.prefix = preset.name + "_seed" + std::to_string(seed);
          dumps.roc = config.output.dump_roc;
          dumps.weights = config.output.dump_weights;
          dumps.openset = config.output.dump_openset;
          dumps_ptr = &dumps;
        }
        preset.runs[item.seed_index] = run_pipeline(split, preset.pipeline, seed, dumps_ptr);
        if (!out_dir.empty() && config.output.save_checkpoints) {
          save_model(preset.runs[item.seed_index].best_model,
                     (std::filesystem::path(out_dir) /
                      ("checkpoint_" + preset.name + "_seed" + std::to_string(seed) + ".ckpt"))
                         .string());
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (parallel <= 1 || items.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    std::size_t n = std::min(static_cast<std::size_t>(parallel), items.size());
    threads.reserve(n);
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (PresetResult& preset : presets) finalize_preset_result(preset);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);  // '\n' only, byte-stable
  if (!os) throw IoError("cannot open for writing: " + path);
  os << content;
  if (!os) throw IoError("write failed: " + path);
}

std::string resolve_out_dir(const ExperimentConfig& config, const std::string& override_dir) {
  std::string dir = override_dir.empty() ? config.output.dir : override_dir;
  if (dir.empty()) {
    throw ConfigError("no output directory: set [output] dir or pass --out");
  }
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig load_and_override(const std::string& config_path,
                                   long long seed_override) {
  ExperimentConfig config = parse_config_file(config_path);
  if (seed_override >= 0) {
    config.seeds = {static_cast<std::uint64_t>(seed_override)};
  }
  return config;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int parallel) {
  if (config.runs.empty()) throw ConfigError("no pipeline configuration to run");
  DataSplit split = materialize_dataset(config);

  ExperimentResult result;
  result.dataset = summarize(config, split);
  result.seeds = config.seeds;
  result.presets.resize(config.runs.size());
  for (std::size_t p = 0; p < config.runs.size(); ++p) {
    result.presets[p].name = config.runs[p].name;
    result.presets[p].pipeline = config.runs[p].pipeline;
    result.presets[p].jitter_auto = config.runs[p].jitter_auto;
  }
  run_cells(config, split, out_dir, parallel, result.presets);
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config, int parallel) {
  if (!config.sweep.enabled) throw ConfigError("config has no [sweep] section");
  if (config.runs.size() != 1) {
    throw ConfigError("sweeps run one pipeline configuration; give exactly one preset");
  }

  SweepResult result;
  result.preset_name = config.runs[0].name;
  result.pipeline = config.runs[0].pipeline;
  result.axis = config.sweep.axis;
  result.seeds = config.seeds;

  bool first = true;
  for (long value : config.sweep.values) {
    ExperimentConfig point = config;
    point.sweep.enabled = false;
    if (config.sweep.axis == "unlabeled") {
      point.generator.unlabeled = value;
    } else {
      point.generator.labeled = value;
    }
    ExperimentResult point_result = run_experiment(point, "", parallel);
    const PresetResult& preset = point_result.presets[0];
    if (first) {
      result.base_dataset = point_result.dataset;
      result.initial_teacher_test = preset.teacher_mean_test;
      first = false;
    }
    result.rows.push_back({value, preset.teacher_mean_test, preset.best_mean_test});
  }
  return result;
}

GeneratedInfo generate_command(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig config = parse_config_file(config_path);
  if (config.dataset_from_path) {
    throw ConfigError(config_path + ": generate needs a generator [dataset] block, not a path");
  }
  std::string dir = resolve_out_dir(config, out_dir);
  DataSplit split = generate_gaussian_dataset(config.generator);
  save_split(split, dir);
  GeneratedInfo info;
  info.dir = dir;
  info.labeled = static_cast<long>(split.labeled.size());
  info.unlabeled = static_cast<long>(split.unlabeled.size());
  info.validation = static_cast<long>(split.validation.size());
  info.test = static_cast<long>(split.test.size());
  return info;
}

std::string run_command(const std::string& config_path, const std::string& out_dir,
                        long long seed_override, int parallel) {
  ExperimentConfig config = load_and_override(config_path, seed_override);
  std::string dir = resolve_out_dir(config, out_dir);
  ExperimentResult result = run_experiment(config, dir, parallel);
  std::string report = format_report(result);
  std::string path = (std::filesystem::path(dir) / "report.txt").string();
  write_text_file(path, report);
  return path;
}

std::string sweep_command(const std::string& config_path, const std::string& out_dir,
                          long long seed_override, int parallel) {
  ExperimentConfig config = load_and_override(config_path, seed_override);
  std::string dir = resolve_out_dir(config, out_dir);
  SweepResult result = run_sweep(config, parallel);
  std::string report = format_sweep_report(result);
  std::string path = (std::filesystem::path(dir) / "sweep_report.txt").string();
  write_text_file(path, report);
  return path;
}

}  // namespace selftrain
