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

#ifndef SELFTRAIN_OPENSET_HPP_
#define SELFTRAIN_OPENSET_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace selftrain {

// Per-class open-set score model: a mean prototype in the embedding space and
// a Beta distribution over scaled member-to-prototype distances.
struct ClassPrototype {
  std::vector<double> prototype;
  double alpha = 1.0;
  double beta = 1.0;
  double distance_scale = 1.0;  // 1.01 x max fit distance; farther samples clamp to 1
};

struct PrototypeModel {
  std::vector<ClassPrototype> classes;
  std::size_t embedding_dim = 0;
};

// Prototypes come from `proto_embeddings_by_class` (per-class mean); the Beta
// parameters are fit by the method of moments on the scaled distances of
// `fit_embeddings_by_class` members to that prototype. Every class needs at
// least 3 embeddings in each set.
PrototypeModel build_prototypes(const std::vector<Matrix>& proto_embeddings_by_class,
                                const std::vector<Matrix>& fit_embeddings_by_class);

// Method-of-moments Beta fit: alpha = m(m(1-m)/v - 1), beta = (1-m)(m(1-m)/v - 1).
std::pair<double, double> beta_from_moments(double mean, double variance);

// Regularized incomplete beta function I_x(alpha, beta), continued-fraction
// evaluation, absolute error <= 1e-10.
double beta_cdf(double x, double alpha, double beta);

// Keep mask over the pool: a sample is rejected when its distance CDF exceeds
// the threshold for every target class. min_cdf_out (optional) receives each
// sample's smallest per-class CDF.
std::vector<std::uint8_t> filter_open_set(const PrototypeModel& model,
                                          const Matrix& pool_embeddings,
                                          double cdf_threshold,
                                          std::vector<double>* min_cdf_out = nullptr);

// Evaluates the callback (closed-set validation accuracy) per candidate and
// returns the argmax; ties break toward the larger threshold.
double select_cdf_threshold(const std::vector<double>& candidates,
                            const std::function<double(double)>& evaluate);

void save_prototypes(const PrototypeModel& model, const std::string& path);
PrototypeModel load_prototypes(const std::string& path);

}  // namespace selftrain

#endif  // SELFTRAIN_OPENSET_HPP_
