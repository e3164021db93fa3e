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

#include "sampling.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace selftrain {

namespace {

int rounded_labeled_count(const SplitBatchConfig& cfg) {
  if (cfg.batch_size < 2) {
    throw InvalidArgumentError("split_batches: batch_size must be >= 2");
  }
  if (!(cfg.labeled_fraction > 0.0) || !(cfg.labeled_fraction < 1.0)) {
    throw InvalidArgumentError("split_batches: labeled_fraction must be in (0,1)");
  }
  long n = std::lround(cfg.labeled_fraction * static_cast<double>(cfg.batch_size));
  if (n < 1 || n > cfg.batch_size - 1) {
    throw InvalidArgumentError(
        "split_batches: labeled_fraction leaves no room for both sub-batches");
  }
  return static_cast<int>(n);
}

std::vector<double> cumulative_weights(std::size_t n, const std::vector<double>* weights) {
  std::vector<double> cum(n);
  if (weights == nullptr) {
    for (std::size_t i = 0; i < n; ++i) cum[i] = static_cast<double>(i + 1);
  } else {
    if (weights->size() != n) {
      throw InvalidArgumentError("split_batches: weight vector size does not match pool");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*weights)[i] >= 0.0)) {
        throw InvalidArgumentError("split_batches: negative sample weight");
      }
      acc += (*weights)[i];
      cum[i] = acc;
    }
    if (!(acc > 0.0)) throw InvalidArgumentError("split_batches: weights sum to zero");
  }
  return cum;
}

std::size_t draw_from_cumulative(const std::vector<double>& cum, Rng& rng) {
  double u = rng.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::size_t>(it - cum.begin());
}

}  // namespace

SampleWeights compute_sample_weights(const PredictionBatch& pool) {
  std::size_t n = pool.size();
  if (n == 0) throw InvalidArgumentError("compute_sample_weights: empty pool");

  int num_classes = pool.num_classes();
  std::vector<long> class_count(num_classes, 0);
  std::vector<double> class_max(num_classes, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    int c = pool.argmax[i];
    class_count[c] += 1;
    class_max[c] = std::max(class_max[c], pool.max_confidence[i]);
  }

  SampleWeights w;
  w.class_length.resize(n);
  w.confidence.resize(n);
  w.final_weight.resize(n);
  double length_sum = 0.0;
  double conf_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    int c = pool.argmax[i];
    w.class_length[i] = 1.0 / static_cast<double>(class_count[c]);
    w.confidence[i] = pool.max_confidence[i] / class_max[c];
    length_sum += w.class_length[i];
    conf_sum += w.confidence[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    w.final_weight[i] = 0.5 * (w.class_length[i] / length_sum + w.confidence[i] / conf_sum);
  }
  return w;
}

UniformBatchSampler::UniformBatchSampler(std::size_t n_labeled, std::size_t n_pseudo,
                                         int batch_size, std::uint64_t seed)
    : n_labeled_(n_labeled),
      n_pseudo_(n_pseudo),
      batch_size_(batch_size),
      rng_(seed) {
  if (n_labeled == 0 || n_pseudo == 0) {
    throw InvalidArgumentError("uniform_batches: pools must be non-empty");
  }
  if (batch_size < 1) throw InvalidArgumentError("uniform_batches: batch_size must be >= 1");
  std::size_t total = n_labeled + n_pseudo;
  if (total < static_cast<std::size_t>(batch_size)) {
    throw InvalidArgumentError("uniform_batches: combined pool smaller than batch_size");
  }
  order_.resize(total);
  for (std::size_t i = 0; i < total; ++i) order_[i] = i;
  batches_per_epoch_ = static_cast<int>((total + batch_size - 1) / batch_size);
}

std::vector<BatchIndices> UniformBatchSampler::next_epoch() {
  rng_.shuffle(order_);
  std::vector<BatchIndices> batches;
  batches.reserve(batches_per_epoch_);
  for (std::size_t start = 0; start < order_.size(); start += batch_size_) {
    std::size_t stop = std::min(order_.size(), start + batch_size_);
    BatchIndices b;
    for (std::size_t i = start; i < stop; ++i) {
      std::size_t idx = order_[i];
      if (idx < n_labeled_) {
        b.labeled.push_back(idx);
      } else {
        b.pseudo.push_back(idx - n_labeled_);
      }
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

SplitBatchSampler::SplitBatchSampler(std::size_t n_labeled, std::size_t n_pseudo,
                                     const SplitBatchConfig& config,
                                     const std::vector<double>* pseudo_weights)
    : n_labeled_(n_labeled), n_pseudo_(n_pseudo), rng_(config.seed) {
  if (n_labeled == 0 || n_pseudo == 0) {
    throw InvalidArgumentError("split_batches: pools must be non-empty");
  }
  labeled_per_batch_ = rounded_labeled_count(config);
  pseudo_per_batch_ = config.batch_size - labeled_per_batch_;
  batches_per_epoch_ =
      static_cast<int>((n_pseudo + pseudo_per_batch_ - 1) / pseudo_per_batch_);
  pseudo_cumulative_ = cumulative_weights(n_pseudo, pseudo_weights);
}

std::vector<BatchIndices> SplitBatchSampler::next_epoch() {
  std::vector<BatchIndices> batches(batches_per_epoch_);
  for (BatchIndices& b : batches) {
    b.labeled.reserve(labeled_per_batch_);
    for (int i = 0; i < labeled_per_batch_; ++i) {
      b.labeled.push_back(rng_.uniform_index(n_labeled_));
    }
    b.pseudo.reserve(pseudo_per_batch_);
    for (int i = 0; i < pseudo_per_batch_; ++i) {
      b.pseudo.push_back(draw_from_cumulative(pseudo_cumulative_, rng_));
    }
  }
  return batches;
}

std::vector<std::size_t> naive_class_balance(const PredictionBatch& pool,
                                             double softmax_threshold,
                                             long per_class_count,
                                             std::vector<int>* skipped_classes) {
  if (softmax_threshold < 0.0 || softmax_threshold > 1.0) {
    throw InvalidArgumentError("naive_class_balance: threshold must be in [0,1]");
  }
  if (per_class_count < 1) {
    throw InvalidArgumentError("naive_class_balance: per_class_count must be >= 1");
  }
  if (skipped_classes) skipped_classes->clear();

  int num_classes = pool.num_classes();
  std::vector<std::vector<std::size_t>> survivors(num_classes);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.max_confidence[i] > softmax_threshold) {
      survivors[pool.argmax[i]].push_back(i);
    }
  }

  std::vector<std::size_t> out;
  for (int c = 0; c < num_classes; ++c) {
    auto& members = survivors[c];
    if (members.empty()) {
      if (skipped_classes) skipped_classes->push_back(c);
      continue;
    }
    std::sort(members.begin(), members.end(), [&pool](std::size_t a, std::size_t b) {
      if (pool.max_confidence[a] != pool.max_confidence[b]) {
        return pool.max_confidence[a] > pool.max_confidence[b];
      }
      return a < b;
    });
    for (long k = 0; k < per_class_count; ++k) {
      out.push_back(members[k % members.size()]);
    }
  }
  return out;
}

}  // namespace selftrain
