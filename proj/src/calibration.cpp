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

#include "calibration.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace selftrain {

double ece(const Matrix& logits, const std::vector<int>& labels, int num_bins) {
  if (logits.rows() == 0) throw InvalidArgumentError("ece: empty batch");
  if (labels.size() != logits.rows()) {
    throw InvalidArgumentError("ece: label count does not match batch");
  }
  if (num_bins < 1) throw InvalidArgumentError("ece: num_bins must be >= 1");

  Matrix probs = softmax_rows(logits);
  // Per-bin confidences are sorted before summation so the result does not
  // depend on the row order of the batch.
  std::vector<std::vector<double>> bin_conf(num_bins);
  std::vector<long> correct(num_bins, 0);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    std::size_t pred = argmax_row(probs.row(r), probs.cols());
    double conf = probs(r, pred);
    int bin = static_cast<int>(conf * num_bins);
    if (bin >= num_bins) bin = num_bins - 1;  // confidence exactly 1
    bin_conf[bin].push_back(conf);
    if (static_cast<int>(pred) == labels[r]) correct[bin] += 1;
  }
  double total = static_cast<double>(probs.rows());
  double e = 0.0;
  for (int b = 0; b < num_bins; ++b) {
    if (bin_conf[b].empty()) continue;
    std::sort(bin_conf[b].begin(), bin_conf[b].end());
    double conf_sum = 0.0;
    for (double c : bin_conf[b]) conf_sum += c;
    double count = static_cast<double>(bin_conf[b].size());
    double acc = static_cast<double>(correct[b]) / count;
    double conf = conf_sum / count;
    e += (count / total) * std::fabs(acc - conf);
  }
  return e;
}

Matrix scale_logits(const Matrix& logits, double tau) {
  if (!(tau > 0.0)) throw InvalidArgumentError("scale_logits: tau must be > 0");
  Matrix scaled(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.data().size(); ++i) {
    scaled.data()[i] = logits.data()[i] / tau;
  }
  return softmax_rows(scaled);
}

CalibrationResult fit_temperature(const Matrix& val_logits,
                                  const std::vector<int>& val_labels, int num_bins) {
  if (val_logits.rows() == 0) throw InvalidArgumentError("fit_temperature: empty batch");

  CalibrationResult result;
  result.grid.reserve(calibration_grid_size());
  Matrix scaled(val_logits.rows(), val_logits.cols());
  int best = -1;
  for (int i = 0; i < calibration_grid_size(); ++i) {
    double tau = calibration_grid_point(i);
    for (std::size_t k = 0; k < val_logits.data().size(); ++k) {
      scaled.data()[k] = val_logits.data()[k] / tau;
    }
    double e = ece(scaled, val_labels, num_bins);
    result.grid.emplace_back(tau, e);
    if (tau == 1.0) result.ece_before = e;
    if (best < 0) {
      best = i;
      continue;
    }
    double e_best = result.grid[best].second;
    double t_best = result.grid[best].first;
    if (e < e_best ||
        (e == e_best && (std::fabs(tau - 1.0) < std::fabs(t_best - 1.0) ||
                         (std::fabs(tau - 1.0) == std::fabs(t_best - 1.0) && tau < t_best)))) {
      best = i;
    }
  }
  result.tau = result.grid[best].first;
  result.ece_after = result.grid[best].second;
  return result;
}

}  // namespace selftrain
