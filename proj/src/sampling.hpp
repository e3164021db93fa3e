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

#ifndef SELFTRAIN_SAMPLING_HPP_
#define SELFTRAIN_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "selection.hpp"

namespace selftrain {

struct SplitBatchConfig {
  int batch_size = 100;
  double labeled_fraction = 0.2;  // share of each batch drawn from the labeled pool
  std::uint64_t seed = 0;
};

// Per-sample weights over a pseudo-labeled pool. `class_length` and
// `confidence` hold the raw (pre-normalization) values; `final_weight` is the
// mean of the two pool-normalized vectors and sums to 1.
struct SampleWeights {
  std::vector<double> class_length;  // 1 / (count of the sample's argmax class)
  std::vector<double> confidence;    // max softmax / class max, in (0,1]
  std::vector<double> final_weight;
};

SampleWeights compute_sample_weights(const PredictionBatch& pool_predictions);

// Indices into the labeled / pseudo pools making up one mini-batch.
struct BatchIndices {
  std::vector<std::size_t> labeled;
  std::vector<std::size_t> pseudo;
};

// NoisyStudent batching: each epoch reshuffles the concatenated pool and cuts
// it into consecutive batches (the final partial batch is kept).
class UniformBatchSampler {
 public:
  UniformBatchSampler(std::size_t n_labeled, std::size_t n_pseudo, int batch_size,
                      std::uint64_t seed);
  std::vector<BatchIndices> next_epoch();
  int batches_per_epoch() const { return batches_per_epoch_; }

 private:
  std::size_t n_labeled_;
  std::size_t n_pseudo_;
  int batch_size_;
  int batches_per_epoch_;
  std::vector<std::size_t> order_;
  Rng rng_;
};

// SplitBatch: every batch holds exactly round(fraction * batch_size) labeled
// samples bootstrapped from the labeled pool and the remainder pseudo-labeled
// samples drawn with replacement (uniform, or proportional to the given
// weights). One epoch covers the pseudo pool: ceil(n_pseudo / pseudo_per_batch)
// batches.
class SplitBatchSampler {
 public:
  SplitBatchSampler(std::size_t n_labeled, std::size_t n_pseudo,
                    const SplitBatchConfig& config,
                    const std::vector<double>* pseudo_weights = nullptr);
  std::vector<BatchIndices> next_epoch();
  int batches_per_epoch() const { return batches_per_epoch_; }
  int labeled_per_batch() const { return labeled_per_batch_; }
  int pseudo_per_batch() const { return pseudo_per_batch_; }

 private:
  std::size_t n_labeled_;
  std::size_t n_pseudo_;
  int labeled_per_batch_;
  int pseudo_per_batch_;
  int batches_per_epoch_;
  std::vector<double> pseudo_cumulative_;
  Rng rng_;
};

// NoisyStudent class balancing: per argmax class, keep samples with
// max confidence > threshold, sort by descending confidence and take the top
// per_class_count, cycling through the survivors when a class has too few.
// Classes with no survivors are skipped (reported via skipped_classes).
std::vector<std::size_t> naive_class_balance(const PredictionBatch& pool_predictions,
                                             double softmax_threshold,
                                             long per_class_count,
                                             std::vector<int>* skipped_classes = nullptr);

}  // namespace selftrain

#endif  // SELFTRAIN_SAMPLING_HPP_
