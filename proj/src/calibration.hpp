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

#ifndef SELFTRAIN_CALIBRATION_HPP_
#define SELFTRAIN_CALIBRATION_HPP_

#include <utility>
#include <vector>

#include "matrix.hpp"

namespace selftrain {

struct CalibrationResult {
  double tau = 1.0;        // ECE-minimizing temperature; always a grid member
  double ece_before = 0.0; // ECE at temperature 1
  double ece_after = 0.0;  // ECE at tau
  std::vector<std::pair<double, double>> grid;  // (temperature, ece)
};

// Expected Calibration Error over equal-width max-softmax bins on [0,1];
// empty bins contribute nothing.
double ece(const Matrix& logits, const std::vector<int>& labels, int num_bins = 15);

// Row-wise softmax of logits / tau.
Matrix scale_logits(const Matrix& logits, double tau);

// Grid search over 400 temperatures, 0.05 to 20.00 inclusive (step 0.05, so
// 1.00 is always a candidate). Ties break toward the temperature closest to
// 1.0, then toward the smaller value.
CalibrationResult fit_temperature(const Matrix& val_logits,
                                  const std::vector<int>& val_labels,
                                  int num_bins = 15);

inline int calibration_grid_size() { return 400; }
inline double calibration_grid_point(int i) { return static_cast<double>(i + 1) / 20.0; }

}  // namespace selftrain

#endif  // SELFTRAIN_CALIBRATION_HPP_
