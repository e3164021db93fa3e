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

#ifndef SELFTRAIN_MATRIX_HPP_
#define SELFTRAIN_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace selftrain {

// Dense row-major matrix of doubles. Just storage plus the few helpers the
// models need; no linear-algebra library is pulled in for these small nets.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Row-wise stabilized softmax. Entries are floored at a tiny positive value
// so rows stay strictly positive even when the logit gap underflows exp.
inline Matrix softmax_rows(const Matrix& logits) {
  constexpr double kFloor = 1e-300;
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double* z = logits.row(r);
    double* p = out.row(r);
    double zmax = z[0];
    for (std::size_t c = 1; c < logits.cols(); ++c) zmax = std::max(zmax, z[c]);
    double denom = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      p[c] = std::max(std::exp(z[c] - zmax), kFloor);
      denom += p[c];
    }
    for (std::size_t c = 0; c < logits.cols(); ++c) p[c] /= denom;
  }
  return out;
}

// log(sum_c exp(z_c)) with max subtraction.
inline double log_sum_exp(const double* z, std::size_t n) {
  double zmax = z[0];
  for (std::size_t c = 1; c < n; ++c) zmax = std::max(zmax, z[c]);
  double s = 0.0;
  for (std::size_t c = 0; c < n; ++c) s += std::exp(z[c] - zmax);
  return zmax + std::log(s);
}

inline std::size_t argmax_row(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < n; ++c) {
    if (v[c] > v[best]) best = c;
  }
  return best;
}

}  // namespace selftrain

#endif  // SELFTRAIN_MATRIX_HPP_
