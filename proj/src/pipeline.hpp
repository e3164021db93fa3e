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

#ifndef SELFTRAIN_PIPELINE_HPP_
#define SELFTRAIN_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace selftrain {

// One value per design-choice axis. The EST preset is (Soft, FineTune,
// SplitBatch, WeightedSplitBatch, CalibratedEntropy, SameSizedLarge); the NS
// baseline is (Soft, FreshTrain, Uniform, NaiveClassBalance, NaiveSoftmax(0.5),
// NSSmallTeacher).
enum class PseudoLabelForm { kHard, kSoft };
enum class StudentInit { kFreshTrain, kFineTune };
enum class Batching { kUniform, kSplitBatch };
enum class SamplerKind { kPlain, kNaiveClassBalance, kWeightedSplitBatch };
enum class SelectionKind { kNaiveSoftmax, kCalibratedEntropy };
enum class Sizing { kNSSmallTeacher, kSameSizedSmall, kSameSizedLarge };

struct PipelineConfig {
  PseudoLabelForm loss = PseudoLabelForm::kSoft;
  StudentInit student_init = StudentInit::kFineTune;
  Batching batching = Batching::kSplitBatch;
  SamplerKind sampler = SamplerKind::kWeightedSplitBatch;
  SelectionKind selection = SelectionKind::kCalibratedEntropy;
  double softmax_threshold = 0.5;  // NaiveSoftmax acceptance cut (strict >)
  Sizing sizing = Sizing::kSameSizedLarge;

  bool open_set_filter = false;
  std::vector<double> cdf_candidates = {0.80, 0.85, 0.90, 0.95};

  int num_student_iterations = 3;
  int teacher_epochs = 200;
  int student_epochs = 100;
  int batch_size = 100;
  double labeled_fraction = 0.2;
  double lambda_b = 0.5;
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double jitter_std = -1.0;        // < 0: 0.05 x estimated within-class std
  long naive_per_class_count = 0;  // 0: ceil(pool size / num classes)
};

void validate_pipeline_config(const PipelineConfig& config);

Capacity teacher_capacity(Sizing sizing);
Capacity student_capacity(Sizing sizing);

struct TeacherRecord {
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double tau = 1.0;
  double ece_before = 0.0;
  double ece_after = 0.0;
  bool entropy_selection = false;
  double entropy_threshold = 0.0;  // meaningful only when entropy_selection
  long n_accepted = 0;
  long open_set_rejected = -1;  // -1 when the filter is off
  double pseudo_precision = 0.0;  // diagnostic; never reaches training
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct SelfTrainState {
  Classifier teacher;     // initial teacher
  Classifier best_model;  // best-by-validation model so far; pseudo-label source
  int best_iteration = 0;
  double best_val_acc = 0.0;
  double best_test_acc = 0.0;
  TeacherRecord teacher_record;
  std::vector<IterationRecord> iterations;
  std::uint64_t run_seed = 0;
  double resolved_jitter_std = 0.0;
  std::optional<double> cdf_threshold;  // chosen once, at the first filtered iteration
};

// Per-iteration audit artifacts, written when a directory is given.
struct DumpOptions {
  std::string dir;
  std::string prefix;    // e.g. "EST_seed101"
  bool roc = true;       // ROC point list per entropy-selection iteration
  bool weights = false;  // sampling-weight table
  bool openset = false;  // per-sample min-CDF and verdict
};

// Trains the initial teacher (hard loss, labeled data only) and seeds the
// best-model bookkeeping with it.
SelfTrainState run_teacher(const DataSplit& split, const PipelineConfig& config,
                           std::uint64_t seed);

// One teacher->student cycle: calibrate, pseudo-label, filter/select, build
// the sampler, train the student, evaluate and update the best model.
void run_iteration(SelfTrainState& state, const DataSplit& split,
                   const PipelineConfig& config, const DumpOptions* dumps = nullptr);

struct RunRecord {
  std::uint64_t seed = 0;
  TeacherRecord teacher;
  std::vector<IterationRecord> iterations;
  int best_iteration = 0;
  double best_val_acc = 0.0;
  double best_test_acc = 0.0;
  Classifier best_model;
};

// Full pipeline for one seed: teacher plus num_student_iterations cycles.
RunRecord run_pipeline(const DataSplit& split, const PipelineConfig& config,
                       std::uint64_t seed, const DumpOptions* dumps = nullptr);

// Fraction of accepted pseudo-labels whose argmax matches the hidden origin
// class. Evaluation-only.
double evaluate_pseudo_label_accuracy(const std::vector<int>& accepted_argmax,
                                      const std::vector<int>& accepted_origins);

}  // namespace selftrain

#endif  // SELFTRAIN_PIPELINE_HPP_
