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

#ifndef SELFTRAIN_REPORT_HPP_
#define SELFTRAIN_REPORT_HPP_

#include <string>
#include <vector>

#include "experiment_config.hpp"
#include "pipeline.hpp"

namespace selftrain {

struct IterationMean {
  int iteration = 0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double pseudo_precision = 0.0;
};

struct PresetResult {
  std::string name;
  PipelineConfig pipeline;
  bool jitter_auto = true;
  std::vector<RunRecord> runs;  // one per seed, in seed order
  double teacher_mean_val = 0.0;
  double teacher_mean_test = 0.0;
  std::vector<IterationMean> iteration_means;
  double best_mean_test = 0.0;  // max over iterations of the seed-mean test accuracy
  int best_mean_iteration = 0;
};

struct DatasetSummary {
  bool from_path = false;
  std::string path;
  GeneratorConfig generator;
  int num_target_classes = 0;
  int feature_dim = 0;
  long labeled = 0;
  long unlabeled = 0;
  long validation = 0;
  long test = 0;
};

struct ExperimentResult {
  DatasetSummary dataset;
  std::vector<std::uint64_t> seeds;
  std::vector<PresetResult> presets;
};

struct SweepRow {
  long value = 0;
  double teacher_mean_test = 0.0;
  double best_mean_test = 0.0;
};

struct SweepResult {
  std::string preset_name;
  PipelineConfig pipeline;
  std::string axis;
  DatasetSummary base_dataset;
  std::vector<std::uint64_t> seeds;
  double initial_teacher_test = 0.0;  // baseline row (teacher of the first sweep point)
  std::vector<SweepRow> rows;
};

// Fills the derived mean fields of a PresetResult from its runs.
void finalize_preset_result(PresetResult& result);

std::string format_report(const ExperimentResult& result);
std::string format_sweep_report(const SweepResult& result);

}  // namespace selftrain

#endif  // SELFTRAIN_REPORT_HPP_
