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

#include "model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

constexpr int kSmallWidth = 32;
constexpr int kLargeWidth = 128;

void check_features(const Classifier& m, const Matrix& x, const char* op) {
  if (static_cast<int>(x.cols()) != m.feature_dim) {
    throw InvalidArgumentError(std::string(op) + ": feature dimension " +
                               std::to_string(x.cols()) + " does not match model (" +
                               std::to_string(m.feature_dim) + ")");
  }
}

void check_targets(const Matrix& logits, const Matrix& targets) {
  if (targets.rows() != logits.rows() || targets.cols() != logits.cols()) {
    throw InvalidArgumentError("soft_loss: target shape does not match logits");
  }
  for (std::size_t r = 0; r < targets.rows(); ++r) {
    const double* t = targets.row(r);
    double sum = 0.0;
    for (std::size_t c = 0; c < targets.cols(); ++c) {
      if (t[c] < 0.0) throw InvalidArgumentError("soft_loss: negative target probability");
      sum += t[c];
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
      throw InvalidArgumentError("soft_loss: target row does not sum to 1");
    }
  }
}

// Hidden activations for an MLP; identity for width-0 models.
Matrix hidden_activations(const Classifier& m, const Matrix& x) {
  Matrix h(x.rows(), m.hidden_width);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double* xi = x.row(r);
    double* hi = h.row(r);
    for (int j = 0; j < m.hidden_width; ++j) {
      const double* w = m.w1.row(j);
      double z = m.b1[j];
      for (int k = 0; k < m.feature_dim; ++k) z += w[k] * xi[k];
      hi[j] = std::tanh(z);
    }
  }
  return h;
}

Matrix output_logits(const Classifier& m, const Matrix& input) {
  Matrix z(input.rows(), m.num_classes);
  std::size_t in_dim = input.cols();
  for (std::size_t r = 0; r < input.rows(); ++r) {
    const double* a = input.row(r);
    double* zi = z.row(r);
    for (int c = 0; c < m.num_classes; ++c) {
      const double* w = m.w2.row(c);
      double s = m.b2[c];
      for (std::size_t k = 0; k < in_dim; ++k) s += w[k] * a[k];
      zi[c] = s;
    }
  }
  return z;
}

// dL/dlogits for the mean cross-entropy over a sub-batch: (softmax - target)/n.
// Accumulates parameter gradients scaled by `weight`.
void backprop(const Classifier& m, const Matrix& x, const Matrix& hidden,
              const Matrix& dlogits, double weight, Gradients& g) {
  const Matrix& input = m.hidden_width > 0 ? hidden : x;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double* dz = dlogits.row(r);
    const double* a = input.row(r);
    for (int c = 0; c < m.num_classes; ++c) {
      double d = weight * dz[c];
      g.b2[c] += d;
      double* gw = g.w2.row(c);
      for (std::size_t k = 0; k < input.cols(); ++k) gw[k] += d * a[k];
    }
    if (m.hidden_width > 0) {
      const double* xi = x.row(r);
      for (int j = 0; j < m.hidden_width; ++j) {
        double da = 0.0;
        for (int c = 0; c < m.num_classes; ++c) da += dz[c] * m.w2(c, j);
        double dz1 = weight * da * (1.0 - a[j] * a[j]);  // tanh'
        g.b1[j] += dz1;
        double* gw = g.w1.row(j);
        for (int k = 0; k < m.feature_dim; ++k) gw[k] += dz1 * xi[k];
      }
    }
  }
}

Gradients zero_gradients(const Classifier& m) {
  Gradients g;
  g.w1 = Matrix(m.w1.rows(), m.w1.cols());
  g.b1.assign(m.b1.size(), 0.0);
  g.w2 = Matrix(m.w2.rows(), m.w2.cols());
  g.b2.assign(m.b2.size(), 0.0);
  return g;
}

double lr_at_epoch(double base, int epoch, int total_epochs) {
  double lr = base;
  if (2 * epoch >= total_epochs) lr *= 0.1;
  if (4 * epoch >= 3 * total_epochs) lr *= 0.1;
  return lr;
}

void write_matrix(std::ostream& os, const std::string& name, const Matrix& m) {
  os << "layer " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      os << (c ? " " : "") << format_double(row[c]);
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is, const std::string& name, const std::string& path) {
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + ": truncated checkpoint");
  auto parts = split_ws(trim(line));
  if (parts.size() != 4 || parts[0] != "layer" || parts[1] != name) {
    throw IoError(path + ": expected layer '" + name + "'");
  }
  std::size_t rows = parse_u64(parts[2]);
  std::size_t cols = parse_u64(parts[3]);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(is, line)) throw IoError(path + ": truncated checkpoint");
    auto vals = split_ws(trim(line));
    if (vals.size() != cols) throw IoError(path + ": bad row width in layer " + name);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_double(vals[c]);
  }
  return m;
}

}  // namespace

int capacity_width(Capacity tier) {
  switch (tier) {
    case Capacity::kLogistic: return 0;
    case Capacity::kSmall: return kSmallWidth;
    case Capacity::kLarge: return kLargeWidth;
  }
  return 0;
}

Capacity capacity_from_width(int width) {
  if (width == 0) return Capacity::kLogistic;
  if (width == kSmallWidth) return Capacity::kSmall;
  return Capacity::kLarge;
}

const char* capacity_name(Capacity tier) {
  switch (tier) {
    case Capacity::kLogistic: return "Logistic";
    case Capacity::kSmall: return "Small";
    case Capacity::kLarge: return "Large";
  }
  return "?";
}

bool Classifier::all_finite() const {
  auto vec_finite = [](const std::vector<double>& v) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  return w1.all_finite() && w2.all_finite() && vec_finite(b1) && vec_finite(b2);
}

Classifier Classifier::init(Capacity tier, int num_classes, int feature_dim,
                            std::uint64_t seed) {
  if (num_classes < 2) throw InvalidArgumentError("Classifier: need at least 2 classes");
  if (feature_dim < 1) throw InvalidArgumentError("Classifier: need feature_dim >= 1");
  Classifier m;
  m.hidden_width = capacity_width(tier);
  m.feature_dim = feature_dim;
  m.num_classes = num_classes;
  m.init_seed = seed;
  Rng rng(seed);
  auto fill_uniform = [&rng](Matrix& w, int fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : w.data()) v = (2.0 * rng.uniform() - 1.0) * bound;
  };
  if (m.hidden_width > 0) {
    m.w1 = Matrix(m.hidden_width, feature_dim);
    fill_uniform(m.w1, feature_dim);
    m.b1.assign(m.hidden_width, 0.0);
    m.w2 = Matrix(num_classes, m.hidden_width);
    fill_uniform(m.w2, m.hidden_width);
  } else {
    m.w2 = Matrix(num_classes, feature_dim);
    fill_uniform(m.w2, feature_dim);
  }
  m.b2.assign(num_classes, 0.0);
  return m;
}

Matrix predict_logits(const Classifier& model, const Matrix& features) {
  check_features(model, features, "predict_logits");
  if (model.hidden_width > 0) {
    return output_logits(model, hidden_activations(model, features));
  }
  return output_logits(model, features);
}

Matrix penultimate_features(const Classifier& model, const Matrix& features) {
  if (model.hidden_width == 0) {
    throw InvalidArgumentError("penultimate_features: model has no hidden layer");
  }
  check_features(model, features, "penultimate_features");
  return hidden_activations(model, features);
}

double hard_loss(const Matrix& logits, const std::vector<int>& labels) {
  if (logits.rows() == 0) throw InvalidArgumentError("hard_loss: empty batch");
  if (labels.size() != logits.rows()) {
    throw InvalidArgumentError("hard_loss: label count does not match batch");
  }
  double total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    int y = labels[r];
    if (y < 0 || y >= static_cast<int>(logits.cols())) {
      throw InvalidArgumentError("hard_loss: label out of range");
    }
    const double* z = logits.row(r);
    total += log_sum_exp(z, logits.cols()) - z[y];
  }
  return total / static_cast<double>(logits.rows());
}

double soft_loss(const Matrix& logits, const Matrix& targets) {
  if (logits.rows() == 0) throw InvalidArgumentError("soft_loss: empty batch");
  check_targets(logits, targets);
  double total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double* z = logits.row(r);
    const double* t = targets.row(r);
    double lse = log_sum_exp(z, logits.cols());
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      if (t[c] > 0.0) total += t[c] * (lse - z[c]);
    }
  }
  return total / static_cast<double>(logits.rows());
}

double mixed_loss(const Matrix& labeled_logits, const std::vector<int>& labels,
                  const Matrix& pseudo_logits, const Matrix& pseudo_targets,
                  double lambda_b) {
  if (lambda_b < 0.0 || lambda_b > 1.0) {
    throw InvalidArgumentError("mixed_loss: lambda_b must be in [0,1]");
  }
  if (labeled_logits.rows() == 0 || pseudo_logits.rows() == 0) {
    throw InvalidArgumentError("mixed_loss: both sub-batches must be non-empty");
  }
  return lambda_b * hard_loss(labeled_logits, labels) +
         (1.0 - lambda_b) * soft_loss(pseudo_logits, pseudo_targets);
}

double loss_and_gradient(const Classifier& model, const TrainBatch& batch,
                         LossMode mode, double lambda_b, Gradients* grad) {
  bool use_hard = mode == LossMode::kHard || mode == LossMode::kMixed;
  bool use_soft = mode == LossMode::kSoft || mode == LossMode::kMixed;
  double w_hard = mode == LossMode::kMixed ? lambda_b : 1.0;
  double w_soft = mode == LossMode::kMixed ? 1.0 - lambda_b : 1.0;

  if (grad) *grad = zero_gradients(model);
  double loss = 0.0;

  if (use_hard) {
    if (batch.hard_x.rows() == 0) {
      throw InvalidArgumentError("train: hard sub-batch is empty");
    }
    check_features(model, batch.hard_x, "train");
    Matrix hidden = model.hidden_width > 0 ? hidden_activations(model, batch.hard_x) : Matrix();
    Matrix logits = output_logits(model, model.hidden_width > 0 ? hidden : batch.hard_x);
    loss += w_hard * hard_loss(logits, batch.hard_y);
    if (grad) {
      Matrix probs = softmax_rows(logits);
      double inv_n = 1.0 / static_cast<double>(probs.rows());
      for (std::size_t r = 0; r < probs.rows(); ++r) {
        probs(r, batch.hard_y[r]) -= 1.0;
        for (std::size_t c = 0; c < probs.cols(); ++c) probs(r, c) *= inv_n;
      }
      backprop(model, batch.hard_x, hidden, probs, w_hard, *grad);
    }
  }
  if (use_soft) {
    if (batch.soft_x.rows() == 0) {
      throw InvalidArgumentError("train: soft sub-batch is empty");
    }
    check_features(model, batch.soft_x, "train");
    Matrix hidden = model.hidden_width > 0 ? hidden_activations(model, batch.soft_x) : Matrix();
    Matrix logits = output_logits(model, model.hidden_width > 0 ? hidden : batch.soft_x);
    loss += w_soft * soft_loss(logits, batch.soft_t);
    if (grad) {
      Matrix probs = softmax_rows(logits);
      double inv_n = 1.0 / static_cast<double>(probs.rows());
      for (std::size_t r = 0; r < probs.rows(); ++r) {
        for (std::size_t c = 0; c < probs.cols(); ++c) {
          probs(r, c) = (probs(r, c) - batch.soft_t(r, c)) * inv_n;
        }
      }
      backprop(model, batch.soft_x, hidden, probs, w_soft, *grad);
    }
  }
  return loss;
}

TrainResult train(const Classifier& initial, TrainBatchSource& batches,
                  const TrainConfig& config) {
  if (config.epochs < 1) throw InvalidArgumentError("train: epochs must be >= 1");
  if (config.batch_size < 1) throw InvalidArgumentError("train: batch_size must be >= 1");
  if (config.lambda_b < 0.0 || config.lambda_b > 1.0) {
    throw InvalidArgumentError("train: lambda_b must be in [0,1]");
  }

  TrainResult result;
  result.model = initial;
  Classifier& m = result.model;
  Gradients velocity = zero_gradients(m);
  Gradients grad;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double lr = lr_at_epoch(config.learning_rate, epoch, config.epochs);
    batches.start_epoch(epoch);
    TrainBatch batch;
    double loss_sum = 0.0;
    long batch_count = 0;
    while (batches.next_batch(batch)) {
      double loss = loss_and_gradient(m, batch, config.loss_mode, config.lambda_b, &grad);
      if (!std::isfinite(loss)) {
        throw TrainingError("training loss is not finite at epoch " +
                            std::to_string(epoch) +
                            "; the learning rate is likely too high");
      }
      loss_sum += loss;
      ++batch_count;

      auto update = [&](Matrix& w, Matrix& v, const Matrix& g, bool decay) {
        for (std::size_t i = 0; i < w.data().size(); ++i) {
          double gi = g.data()[i] + (decay ? config.weight_decay * w.data()[i] : 0.0);
          v.data()[i] = config.momentum * v.data()[i] + gi;
          w.data()[i] -= lr * v.data()[i];
        }
      };
      auto update_vec = [&](std::vector<double>& w, std::vector<double>& v,
                            const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          v[i] = config.momentum * v[i] + g[i];
          w[i] -= lr * v[i];
        }
      };
      update(m.w1, velocity.w1, grad.w1, true);
      update(m.w2, velocity.w2, grad.w2, true);
      update_vec(m.b1, velocity.b1, grad.b1);
      update_vec(m.b2, velocity.b2, grad.b2);
    }
    if (batch_count == 0) throw InvalidArgumentError("train: batch source yielded no batches");
    result.epoch_losses.push_back(loss_sum / static_cast<double>(batch_count));
  }
  if (!m.all_finite()) {
    throw TrainingError("trained weights are not finite; the learning rate is likely too high");
  }
  return result;
}

double accuracy(const Classifier& model, const Matrix& features,
                const std::vector<int>& labels) {
  if (features.rows() == 0) throw InvalidArgumentError("accuracy: empty batch");
  Matrix logits = predict_logits(model, features);
  long correct = 0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    if (static_cast<int>(argmax_row(logits.row(r), logits.cols())) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(logits.rows());
}

void save_model(const Classifier& model, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "selftrain-model v1\n";
  os << "hidden_width " << model.hidden_width << '\n';
  os << "feature_dim " << model.feature_dim << '\n';
  os << "num_classes " << model.num_classes << '\n';
  os << "init_seed " << model.init_seed << '\n';
  if (model.hidden_width > 0) {
    write_matrix(os, "w1", model.w1);
    os << "layer b1 1 " << model.b1.size() << '\n';
    for (std::size_t i = 0; i < model.b1.size(); ++i) {
      os << (i ? " " : "") << format_double(model.b1[i]);
    }
    os << '\n';
  }
  write_matrix(os, "w2", model.w2);
  os << "layer b2 1 " << model.b2.size() << '\n';
  for (std::size_t i = 0; i < model.b2.size(); ++i) {
    os << (i ? " " : "") << format_double(model.b2[i]);
  }
  os << '\n';
  os << "end\n";
  if (!os) throw IoError("write failed: " + path);
}

Classifier load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(is, line) || trim(line) != "selftrain-model v1") {
    throw IoError(path + ": unknown checkpoint format");
  }
  auto read_kv = [&](const std::string& key) -> std::string {
    if (!std::getline(is, line)) throw IoError(path + ": truncated checkpoint");
    auto parts = split_ws(trim(line));
    if (parts.size() != 2 || parts[0] != key) {
      throw IoError(path + ": expected '" + key + "' line");
    }
    return std::string(parts[1]);
  };
  Classifier m;
  m.hidden_width = static_cast<int>(parse_int(read_kv("hidden_width")));
  m.feature_dim = static_cast<int>(parse_int(read_kv("feature_dim")));
  m.num_classes = static_cast<int>(parse_int(read_kv("num_classes")));
  m.init_seed = parse_u64(read_kv("init_seed"));
  if (m.hidden_width < 0 || m.feature_dim < 1 || m.num_classes < 2) {
    throw IoError(path + ": invalid checkpoint dimensions");
  }
  if (m.hidden_width > 0) {
    m.w1 = read_matrix(is, "w1", path);
    Matrix b1 = read_matrix(is, "b1", path);
    m.b1.assign(b1.row(0), b1.row(0) + b1.cols());
    if (m.w1.rows() != static_cast<std::size_t>(m.hidden_width) ||
        m.w1.cols() != static_cast<std::size_t>(m.feature_dim) ||
        m.b1.size() != static_cast<std::size_t>(m.hidden_width)) {
      throw IoError(path + ": layer shapes disagree with header");
    }
  }
  m.w2 = read_matrix(is, "w2", path);
  Matrix b2 = read_matrix(is, "b2", path);
  m.b2.assign(b2.row(0), b2.row(0) + b2.cols());
  std::size_t in_dim = m.hidden_width > 0 ? m.hidden_width : m.feature_dim;
  if (m.w2.rows() != static_cast<std::size_t>(m.num_classes) || m.w2.cols() != in_dim ||
      m.b2.size() != static_cast<std::size_t>(m.num_classes)) {
    throw IoError(path + ": layer shapes disagree with header");
  }
  if (!std::getline(is, line) || trim(line) != "end") {
    throw IoError(path + ": truncated checkpoint (missing trailer)");
  }
  return m;
}

}  // namespace selftrain
