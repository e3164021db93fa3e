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

#ifndef SELFTRAIN_DATASET_HPP_
#define SELFTRAIN_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace selftrain {

// One feature vector. `label` is the visible class (absent for unlabeled
// samples); `origin_class` is the generating class, retained on every sample
// but read only by evaluation code.
struct Sample {
  std::vector<double> features;
  std::optional<int> label;
  std::optional<int> origin_class;
};

struct GeneratorConfig {
  int num_target_classes = 0;
  int num_nontarget_classes = 0;  // 0 = closed set
  int feature_dim = 0;
  long labeled = 0;
  long unlabeled = 0;
  long validation = 0;
  long test = 0;
  double spread = 1.0;              // target class centers sit on a ring of this radius
  double stddev = 1.0;              // isotropic within-class standard deviation
  double nontarget_fraction = 0.0;  // share of the unlabeled pool drawn from non-target classes
  double nontarget_scale = 4.0;     // non-target ring radius as a multiple of spread
  std::vector<long> labeled_per_class;  // optional per-class override (length = classes)
  std::uint64_t seed = 0;
};

struct DataSplit {
  std::vector<Sample> labeled;
  std::vector<Sample> unlabeled;
  std::vector<Sample> validation;
  std::vector<Sample> test;
  int num_target_classes = 0;
  int feature_dim = 0;
};

// Feature-only view of a partition. Training code works exclusively on these;
// hidden ground truth never crosses this boundary.
Matrix features_of(const std::vector<Sample>& samples, int feature_dim);
std::vector<int> labels_of(const std::vector<Sample>& samples);
std::vector<int> origins_of(const std::vector<Sample>& samples);

// Mean within-class standard deviation estimated from the labeled partition.
double estimate_within_class_std(const DataSplit& split);

DataSplit generate_gaussian_dataset(const GeneratorConfig& config);

struct OpenSetOptions {
  int num_nontarget_classes = 4;
  double center_scale = 4.0;  // non-target ring radius, in multiples of the target ring radius
};

// Replaces a fraction of a closed-set unlabeled pool with samples from
// non-target Gaussian clusters whose geometry is estimated from the split.
DataSplit inject_open_set(const DataSplit& split, double nontarget_fraction,
                          std::uint64_t seed, const OpenSetOptions& options = {});

// One self-describing text file per partition under `dir`:
// labeled.ds, unlabeled.ds, validation.ds, test.ds. Round trip is lossless.
void save_split(const DataSplit& split, const std::string& dir);
DataSplit load_split(const std::string& dir);

}  // namespace selftrain

#endif  // SELFTRAIN_DATASET_HPP_
