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

#ifndef SELFTRAIN_MODEL_HPP_
#define SELFTRAIN_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace selftrain {

// Hidden-layer widths per capacity tier; kLogistic is a plain linear softmax
// classifier (width 0).
enum class Capacity { kLogistic, kSmall, kLarge };

int capacity_width(Capacity tier);
Capacity capacity_from_width(int width);
const char* capacity_name(Capacity tier);

// Linear or one-hidden-layer tanh classifier.
//   width > 0:  logits = w2 * tanh(w1 * x + b1) + b2
//   width == 0: logits = w2 * x + b2
struct Classifier {
  int hidden_width = 0;
  int feature_dim = 0;
  int num_classes = 0;
  std::uint64_t init_seed = 0;
  Matrix w1;                // hidden_width x feature_dim (empty when width 0)
  std::vector<double> b1;   // hidden_width
  Matrix w2;                // num_classes x (hidden_width or feature_dim)
  std::vector<double> b2;   // num_classes

  Capacity capacity() const { return capacity_from_width(hidden_width); }
  bool all_finite() const;

  // Uniform fan-in initialization from the seed; biases start at zero.
  static Classifier init(Capacity tier, int num_classes, int feature_dim,
                         std::uint64_t seed);
};

enum class LossMode { kHard, kSoft, kMixed };

struct TrainConfig {
  int epochs = 100;
  int batch_size = 100;
  double learning_rate = 0.1;  // step decay x0.1 at 50% and 75% of epochs
  double momentum = 0.9;
  double weight_decay = 0.0;
  double lambda_b = 0.5;  // labeled-loss weight in mixed mode
  LossMode loss_mode = LossMode::kHard;
  std::uint64_t seed = 0;  // provenance only; batch sources carry the RNG
};

// One mini-batch: a hard-target sub-batch (class indices) and a soft-target
// sub-batch (full distributions). Modes use one side or both.
struct TrainBatch {
  Matrix hard_x;
  std::vector<int> hard_y;
  Matrix soft_x;
  Matrix soft_t;
};

// Source of training batches; implementations own their RNG so the same
// source state always yields the same sequence.
class TrainBatchSource {
 public:
  virtual ~TrainBatchSource() = default;
  virtual void start_epoch(int epoch) = 0;
  virtual bool next_batch(TrainBatch& out) = 0;
};

Matrix predict_logits(const Classifier& model, const Matrix& features);

// Hidden-layer activations; errors on width-0 models.
Matrix penultimate_features(const Classifier& model, const Matrix& features);

// Mean negative log softmax probability of the true class.
double hard_loss(const Matrix& logits, const std::vector<int>& labels);

// Mean full cross-entropy against probability-vector targets.
double soft_loss(const Matrix& logits, const Matrix& targets);

// lambda_b * hard_loss(labeled) + (1 - lambda_b) * soft_loss(pseudo).
double mixed_loss(const Matrix& labeled_logits, const std::vector<int>& labels,
                  const Matrix& pseudo_logits, const Matrix& pseudo_targets,
                  double lambda_b);

struct Gradients {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

// Loss value plus (optionally) its gradient w.r.t. all parameters.
double loss_and_gradient(const Classifier& model, const TrainBatch& batch,
                         LossMode mode, double lambda_b, Gradients* grad);

struct TrainResult {
  Classifier model;
  std::vector<double> epoch_losses;  // mean batch loss per epoch
};

// Mini-batch SGD with momentum; aborts with TrainingError on non-finite loss.
TrainResult train(const Classifier& initial, TrainBatchSource& batches,
                  const TrainConfig& config);

double accuracy(const Classifier& model, const Matrix& features,
                const std::vector<int>& labels);

// Full-precision text checkpoint; round trip is lossless.
void save_model(const Classifier& model, const std::string& path);
Classifier load_model(const std::string& path);

}  // namespace selftrain

#endif  // SELFTRAIN_MODEL_HPP_
