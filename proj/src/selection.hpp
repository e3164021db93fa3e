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

#ifndef SELFTRAIN_SELECTION_HPP_
#define SELFTRAIN_SELECTION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "matrix.hpp"

namespace selftrain {

// Per-sample prediction summary at a fixed temperature. `softmax` carries the
// calibrated distributions (tau = 1 reproduces the raw softmax).
struct PredictionBatch {
  Matrix logits;
  Matrix softmax;
  std::vector<int> argmax;
  std::vector<double> max_confidence;
  std::vector<double> entropy;  // normalized, in [0,1]
  double tau = 1.0;

  std::size_t size() const { return logits.rows(); }
  int num_classes() const { return static_cast<int>(logits.cols()); }
};

PredictionBatch make_prediction_batch(const Matrix& logits, double tau);

// Shannon entropy divided by log(num_classes); 0 for one-hot, 1 for uniform.
double normalized_entropy(std::span<const double> p, int num_classes);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;
};

struct ThresholdChoice {
  double threshold = 0.0;
  double tpr_at = 0.0;
  double fpr_at = 0.0;
  std::vector<RocPoint> roc_points;  // one per evaluated candidate
};

inline int entropy_grid_size() { return 500; }
inline double entropy_grid_point(int i) { return static_cast<double>(i) / 499.0; }

// ROC search over 500 thresholds in [0,1]: a sample is accepted when its
// normalized entropy is <= t; positives are correctly argmax-predicted
// validation samples. Picks the t minimizing the distance to (FPR,TPR)=(0,1),
// ties toward the smaller t. Throws DegenerateValidationError when every
// prediction is correct (or every one incorrect).
ThresholdChoice select_entropy_threshold(const PredictionBatch& val_predictions,
                                         const std::vector<int>& val_labels);

// Fallback threshold for degenerate validation sets: the median entropy.
double median_entropy(const PredictionBatch& predictions);

struct SelectionResult {
  std::vector<std::uint8_t> accepted;   // mask over the pool
  std::vector<std::size_t> indices;     // accepted pool indices, ascending
  Matrix targets;                       // calibrated softmax rows of accepted samples
};

// Accept iff normalized entropy <= threshold (inclusive).
SelectionResult apply_entropy_threshold(const PredictionBatch& pool_predictions,
                                        double threshold);

// NoisyStudent baseline: accept iff max softmax confidence > threshold (strict).
std::vector<std::uint8_t> apply_softmax_threshold(const PredictionBatch& pool_predictions,
                                                  double threshold);

}  // namespace selftrain

#endif  // SELFTRAIN_SELECTION_HPP_
