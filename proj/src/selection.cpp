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

#include "selection.hpp"

#include <algorithm>
#include <cmath>

#include "calibration.hpp"
#include "errors.hpp"

namespace selftrain {

double normalized_entropy(std::span<const double> p, int num_classes) {
  if (num_classes < 2) throw InvalidArgumentError("normalized_entropy: need >= 2 classes");
  if (static_cast<int>(p.size()) != num_classes) {
    throw InvalidArgumentError("normalized_entropy: vector length does not match num_classes");
  }
  double sum = 0.0;
  double h = 0.0;
  for (double v : p) {
    if (v < 0.0) throw InvalidArgumentError("normalized_entropy: negative probability");
    sum += v;
    if (v > 0.0) h -= v * std::log(v);
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw InvalidArgumentError("normalized_entropy: probabilities do not sum to 1");
  }
  double e = h / std::log(static_cast<double>(num_classes));
  return std::clamp(e, 0.0, 1.0);
}

PredictionBatch make_prediction_batch(const Matrix& logits, double tau) {
  if (logits.cols() < 2) {
    throw InvalidArgumentError("make_prediction_batch: need >= 2 classes");
  }
  PredictionBatch batch;
  batch.logits = logits;
  batch.softmax = scale_logits(logits, tau);
  batch.tau = tau;
  batch.argmax.resize(logits.rows());
  batch.max_confidence.resize(logits.rows());
  batch.entropy.resize(logits.rows());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double* p = batch.softmax.row(r);
    std::size_t a = argmax_row(p, logits.cols());
    batch.argmax[r] = static_cast<int>(a);
    batch.max_confidence[r] = p[a];
    batch.entropy[r] = normalized_entropy(std::span<const double>(p, logits.cols()),
                                          batch.num_classes());
  }
  return batch;
}

ThresholdChoice select_entropy_threshold(const PredictionBatch& val_predictions,
                                         const std::vector<int>& val_labels) {
  std::size_t n = val_predictions.size();
  if (n == 0) throw InvalidArgumentError("select_entropy_threshold: empty validation batch");
  if (val_labels.size() != n) {
    throw InvalidArgumentError("select_entropy_threshold: label count mismatch");
  }

  long positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (val_predictions.argmax[i] == val_labels[i]) ++positives;
  }
  long negatives = static_cast<long>(n) - positives;
  if (positives == 0 || negatives == 0) {
    throw DegenerateValidationError(
        "select_entropy_threshold: validation predictions are all " +
        std::string(positives == 0 ? "incorrect" : "correct") +
        "; fall back to the median validation entropy");
  }

  // Sort entropies once; acceptance counts per candidate come from prefix
  // counts over the sorted arrays (an upper_bound per candidate).
  std::vector<double> pos_entropy;
  std::vector<double> neg_entropy;
  pos_entropy.reserve(positives);
  neg_entropy.reserve(negatives);
  for (std::size_t i = 0; i < n; ++i) {
    if (val_predictions.argmax[i] == val_labels[i]) {
      pos_entropy.push_back(val_predictions.entropy[i]);
    } else {
      neg_entropy.push_back(val_predictions.entropy[i]);
    }
  }
  std::sort(pos_entropy.begin(), pos_entropy.end());
  std::sort(neg_entropy.begin(), neg_entropy.end());

  ThresholdChoice choice;
  choice.roc_points.reserve(entropy_grid_size());
  int best = -1;
  double best_d2 = 0.0;
  for (int i = 0; i < entropy_grid_size(); ++i) {
    double t = entropy_grid_point(i);
    auto accepted_pos = std::upper_bound(pos_entropy.begin(), pos_entropy.end(), t) -
                        pos_entropy.begin();
    auto accepted_neg = std::upper_bound(neg_entropy.begin(), neg_entropy.end(), t) -
                        neg_entropy.begin();
    double tpr = static_cast<double>(accepted_pos) / static_cast<double>(positives);
    double fpr = static_cast<double>(accepted_neg) / static_cast<double>(negatives);
    choice.roc_points.push_back({fpr, tpr, t});
    double d2 = fpr * fpr + (1.0 - tpr) * (1.0 - tpr);
    if (best < 0 || d2 < best_d2) {  // ties keep the earlier (smaller) threshold
      best = i;
      best_d2 = d2;
    }
  }
  choice.threshold = choice.roc_points[best].threshold;
  choice.tpr_at = choice.roc_points[best].tpr;
  choice.fpr_at = choice.roc_points[best].fpr;
  return choice;
}

double median_entropy(const PredictionBatch& predictions) {
  if (predictions.size() == 0) throw InvalidArgumentError("median_entropy: empty batch");
  std::vector<double> h = predictions.entropy;
  std::sort(h.begin(), h.end());
  std::size_t n = h.size();
  if (n % 2 == 1) return h[n / 2];
  return 0.5 * (h[n / 2 - 1] + h[n / 2]);
}

SelectionResult apply_entropy_threshold(const PredictionBatch& pool_predictions,
                                        double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw InvalidArgumentError("apply_entropy_threshold: threshold must be in [0,1]");
  }
  SelectionResult result;
  std::size_t n = pool_predictions.size();
  result.accepted.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (pool_predictions.entropy[i] <= threshold) {
      result.accepted[i] = 1;
      result.indices.push_back(i);
    }
  }
  result.targets = Matrix(result.indices.size(), pool_predictions.softmax.cols());
  for (std::size_t r = 0; r < result.indices.size(); ++r) {
    const double* src = pool_predictions.softmax.row(result.indices[r]);
    double* dst = result.targets.row(r);
    std::copy(src, src + pool_predictions.softmax.cols(), dst);
  }
  return result;
}

std::vector<std::uint8_t> apply_softmax_threshold(const PredictionBatch& pool_predictions,
                                                  double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw InvalidArgumentError("apply_softmax_threshold: threshold must be in [0,1]");
  }
  std::vector<std::uint8_t> mask(pool_predictions.size(), 0);
  for (std::size_t i = 0; i < pool_predictions.size(); ++i) {
    if (pool_predictions.max_confidence[i] > threshold) mask[i] = 1;
  }
  return mask;
}

}  // namespace selftrain
