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

#ifndef SELFTRAIN_EXPERIMENT_CONFIG_HPP_
#define SELFTRAIN_EXPERIMENT_CONFIG_HPP_

#include <string>
#include <vector>

#include "dataset.hpp"
#include "pipeline.hpp"

namespace selftrain {

struct OutputOptions {
  std::string dir;
  bool dump_roc = true;
  bool dump_weights = false;
  bool dump_openset = false;
  bool save_checkpoints = false;
};

struct SweepSpec {
  bool enabled = false;
  std::string axis;  // "unlabeled" or "labeled"
  std::vector<long> values;
};

struct PresetRun {
  std::string name;  // preset name, or "custom" for explicit axes
  PipelineConfig pipeline;
  bool jitter_auto = true;  // for config echoing
};

struct ExperimentConfig {
  bool dataset_from_path = false;
  std::string dataset_path;
  GeneratorConfig generator;
  std::vector<PresetRun> runs;
  std::vector<std::uint64_t> seeds = {101, 202, 303};
  SweepSpec sweep;
  OutputOptions output;
};

// Line-oriented `[section]` / `key = value` format; see the README for the
// grammar. Unknown sections or keys are rejected.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

// Roadmap preset table: EST, NS, Exp1-left .. Exp6-right.
PipelineConfig preset_pipeline(const std::string& name);
std::vector<std::string> preset_names();

// Fully explicit axis listing for report headers.
std::string axes_string(const PipelineConfig& config);
std::string params_string(const PipelineConfig& config, bool jitter_auto);

}  // namespace selftrain

#endif  // SELFTRAIN_EXPERIMENT_CONFIG_HPP_
