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

#include "pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "calibration.hpp"
#include "errors.hpp"
#include "openset.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "selection.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

// Seed sub-stream tags within one pipeline run.
enum : std::uint64_t {
  kStreamTeacherInit = 100,
  kStreamTeacherBatches = 101,
  kStreamStudentInit = 1000,   // + iteration
  kStreamSampler = 2000,       // + iteration
  kStreamJitter = 3000,        // + iteration
  kStreamCdfTrial = 4000,      // + 10*iteration + candidate
};

Matrix gather_rows(const Matrix& src, const std::vector<std::size_t>& indices) {
  Matrix out(indices.size(), src.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const double* s = src.row(indices[r]);
    std::copy(s, s + src.cols(), out.row(r));
  }
  return out;
}

Matrix one_hot_rows(const std::vector<int>& labels, int num_classes) {
  Matrix out(labels.size(), num_classes, 0.0);
  for (std::size_t r = 0; r < labels.size(); ++r) out(r, labels[r]) = 1.0;
  return out;
}

// Teacher batches: plain shuffled passes over the labeled set, hard targets.
class LabeledBatchSource : public TrainBatchSource {
 public:
  LabeledBatchSource(const Matrix& x, const std::vector<int>& y, int batch_size,
                     std::uint64_t seed)
      : x_(x), y_(y), batch_size_(batch_size), rng_(seed) {
    order_.resize(x.rows());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  }

  void start_epoch(int) override {
    rng_.shuffle(order_);
    cursor_ = 0;
  }

  bool next_batch(TrainBatch& out) override {
    if (cursor_ >= order_.size()) return false;
    std::size_t stop = std::min(order_.size(), cursor_ + batch_size_);
    std::vector<std::size_t> idx(order_.begin() + cursor_, order_.begin() + stop);
    cursor_ = stop;
    out.hard_x = gather_rows(x_, idx);
    out.hard_y.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out.hard_y[i] = y_[idx[i]];
    out.soft_x = Matrix();
    out.soft_t = Matrix();
    return true;
  }

 private:
  const Matrix& x_;
  const std::vector<int>& y_;
  std::size_t batch_size_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  Rng rng_;
};

// Student batches. SplitBatch mode keeps the labeled sub-batch on the hard
// side (mixed loss); uniform mode concatenates everything on the soft side
// with one-hot targets for labeled rows. Gaussian feature jitter is applied
// to the assembled inputs as the data-noise stand-in.
class StudentBatchSource : public TrainBatchSource {
 public:
  StudentBatchSource(const Matrix& labeled_x, const std::vector<int>& labeled_y,
                     const Matrix& pseudo_x, const Matrix& pseudo_t, Batching batching,
                     const SplitBatchConfig& split_config,
                     const std::vector<double>* pseudo_weights, double jitter_std,
                     std::uint64_t jitter_seed)
      : labeled_x_(labeled_x),
        labeled_y_(labeled_y),
        pseudo_x_(pseudo_x),
        pseudo_t_(pseudo_t),
        batching_(batching),
        jitter_std_(jitter_std),
        jitter_rng_(jitter_seed) {
    if (batching == Batching::kSplitBatch) {
      split_.emplace(labeled_x.rows(), pseudo_x.rows(), split_config, pseudo_weights);
    } else {
      uniform_.emplace(labeled_x.rows(), pseudo_x.rows(), split_config.batch_size,
                       split_config.seed);
      labeled_onehot_ = one_hot_rows(labeled_y, pseudo_t.cols());
    }
  }

  void start_epoch(int) override {
    epoch_ = split_ ? split_->next_epoch() : uniform_->next_epoch();
    cursor_ = 0;
  }

  bool next_batch(TrainBatch& out) override {
    if (cursor_ >= epoch_.size()) return false;
    const BatchIndices& bi = epoch_[cursor_++];
    if (batching_ == Batching::kSplitBatch) {
      out.hard_x = gather_rows(labeled_x_, bi.labeled);
      out.hard_y.resize(bi.labeled.size());
      for (std::size_t i = 0; i < bi.labeled.size(); ++i) {
        out.hard_y[i] = labeled_y_[bi.labeled[i]];
      }
      out.soft_x = gather_rows(pseudo_x_, bi.pseudo);
      out.soft_t = gather_rows(pseudo_t_, bi.pseudo);
      jitter(out.hard_x);
      jitter(out.soft_x);
    } else {
      std::size_t rows = bi.labeled.size() + bi.pseudo.size();
      out.hard_x = Matrix();
      out.hard_y.clear();
      out.soft_x = Matrix(rows, labeled_x_.cols());
      out.soft_t = Matrix(rows, pseudo_t_.cols());
      std::size_t r = 0;
      for (std::size_t i : bi.labeled) {
        std::copy(labeled_x_.row(i), labeled_x_.row(i) + labeled_x_.cols(), out.soft_x.row(r));
        std::copy(labeled_onehot_.row(i), labeled_onehot_.row(i) + labeled_onehot_.cols(),
                  out.soft_t.row(r));
        ++r;
      }
      for (std::size_t i : bi.pseudo) {
        std::copy(pseudo_x_.row(i), pseudo_x_.row(i) + pseudo_x_.cols(), out.soft_x.row(r));
        std::copy(pseudo_t_.row(i), pseudo_t_.row(i) + pseudo_t_.cols(), out.soft_t.row(r));
        ++r;
      }
      jitter(out.soft_x);
    }
    return true;
  }

 private:
  void jitter(Matrix& x) {
    if (jitter_std_ <= 0.0) return;
    for (double& v : x.data()) v += jitter_std_ * jitter_rng_.normal();
  }

  const Matrix& labeled_x_;
  const std::vector<int>& labeled_y_;
  const Matrix& pseudo_x_;
  const Matrix& pseudo_t_;
  Batching batching_;
  Matrix labeled_onehot_;
  std::optional<SplitBatchSampler> split_;
  std::optional<UniformBatchSampler> uniform_;
  std::vector<BatchIndices> epoch_;
  std::size_t cursor_ = 0;
  double jitter_std_;
  Rng jitter_rng_;
};

PredictionBatch subset_predictions(const PredictionBatch& batch,
                                   const std::vector<std::size_t>& indices) {
  PredictionBatch out;
  out.logits = gather_rows(batch.logits, indices);
  out.softmax = gather_rows(batch.softmax, indices);
  out.tau = batch.tau;
  out.argmax.reserve(indices.size());
  out.max_confidence.reserve(indices.size());
  out.entropy.reserve(indices.size());
  for (std::size_t i : indices) {
    out.argmax.push_back(batch.argmax[i]);
    out.max_confidence.push_back(batch.max_confidence[i]);
    out.entropy.push_back(batch.entropy[i]);
  }
  return out;
}

std::vector<Matrix> embeddings_by_class(const Classifier& model, const DataSplit& split,
                                        const std::vector<Sample>& part) {
  std::vector<std::vector<std::size_t>> members(split.num_target_classes);
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (part[i].label) members[*part[i].label].push_back(i);
  }
  Matrix all = penultimate_features(model, features_of(part, split.feature_dim));
  std::vector<Matrix> out;
  out.reserve(split.num_target_classes);
  for (int c = 0; c < split.num_target_classes; ++c) {
    out.push_back(gather_rows(all, members[c]));
  }
  return out;
}

struct StudentOutcome {
  Classifier model;
  IterationRecord record;
};

std::filesystem::path dump_path(const DumpOptions& dumps, const std::string& kind,
                                int iteration) {
  return std::filesystem::path(dumps.dir) /
         (kind + "_" + dumps.prefix + "_iter" + std::to_string(iteration) + ".txt");
}

void write_roc_dump(const DumpOptions& dumps, int iteration, const ThresholdChoice& choice) {
  std::ofstream os(dump_path(dumps, "roc", iteration));
  if (!os) throw IoError("cannot write ROC dump");
  os << "selftrain-roc v1\n";
  os << "iteration " << iteration << '\n';
  os << "chosen " << format_double(choice.threshold) << " tpr "
     << format_double(choice.tpr_at) << " fpr " << format_double(choice.fpr_at) << '\n';
  os << "points " << choice.roc_points.size() << '\n';
  for (const RocPoint& p : choice.roc_points) {
    os << format_double(p.fpr) << ' ' << format_double(p.tpr) << ' '
       << format_double(p.threshold) << '\n';
  }
  os << "end\n";
}

void write_weights_dump(const DumpOptions& dumps, int iteration,
                        const std::vector<std::size_t>& pool_ids, const SampleWeights& w) {
  std::ofstream os(dump_path(dumps, "weights", iteration));
  if (!os) throw IoError("cannot write weights dump");
  os << "selftrain-weights v1\n";
  os << "count " << pool_ids.size() << '\n';
  for (std::size_t i = 0; i < pool_ids.size(); ++i) {
    os << pool_ids[i] << ' ' << format_double(w.class_length[i]) << ' '
       << format_double(w.confidence[i]) << ' ' << format_double(w.final_weight[i]) << '\n';
  }
  os << "end\n";
}

void write_openset_dump(const DumpOptions& dumps, int iteration,
                        const std::vector<double>& min_cdf,
                        const std::vector<std::uint8_t>& keep) {
  std::ofstream os(dump_path(dumps, "openset", iteration));
  if (!os) throw IoError("cannot write open-set dump");
  os << "selftrain-openset v1\n";
  os << "count " << min_cdf.size() << '\n';
  for (std::size_t i = 0; i < min_cdf.size(); ++i) {
    os << i << ' ' << format_double(min_cdf[i]) << ' ' << (keep[i] ? "keep" : "reject")
       << '\n';
  }
  os << "end\n";
}

// The body of one student iteration. `cdf_threshold` < 0 disables filtering.
// `epochs_override` > 0 shortens training (used by the CDF threshold search).
StudentOutcome run_student(const SelfTrainState& state, const DataSplit& split,
                           const PipelineConfig& config, int iteration,
                           double cdf_threshold, int epochs_override,
                           std::uint64_t init_salt, const DumpOptions* dumps) {
  const Classifier& teacher = state.best_model;
  StudentOutcome out;
  IterationRecord& rec = out.record;
  rec.iteration = iteration;

  Matrix pool_x = features_of(split.unlabeled, split.feature_dim);
  Matrix val_x = features_of(split.validation, split.feature_dim);
  Matrix test_x = features_of(split.test, split.feature_dim);
  std::vector<int> val_y = labels_of(split.validation);
  std::vector<int> test_y = labels_of(split.test);
  if (split.unlabeled.empty()) throw InvalidArgumentError("run_iteration: empty unlabeled pool");

  Matrix pool_logits = predict_logits(teacher, pool_x);
  Matrix val_logits = predict_logits(teacher, val_x);

  // Calibration (EST path); the NS path keeps raw softmax (tau = 1).
  double tau = 1.0;
  if (config.selection == SelectionKind::kCalibratedEntropy) {
    CalibrationResult cal = fit_temperature(val_logits, val_y);
    tau = cal.tau;
    rec.ece_before = cal.ece_before;
    rec.ece_after = cal.ece_after;
  } else {
    rec.ece_before = rec.ece_after = ece(val_logits, val_y);
  }
  rec.tau = tau;

  PredictionBatch pool_pred = make_prediction_batch(pool_logits, tau);
  PredictionBatch val_pred = make_prediction_batch(val_logits, tau);

  // Open-set filter: drop pool samples far from every class prototype.
  std::vector<std::size_t> pool_ids(pool_pred.size());
  for (std::size_t i = 0; i < pool_ids.size(); ++i) pool_ids[i] = i;
  if (cdf_threshold >= 0.0) {
    auto proto_sets = embeddings_by_class(teacher, split, split.validation);
    auto fit_sets = embeddings_by_class(teacher, split, split.labeled);
    PrototypeModel prototypes = build_prototypes(proto_sets, fit_sets);
    Matrix pool_emb = penultimate_features(teacher, pool_x);
    std::vector<double> min_cdf;
    std::vector<std::uint8_t> keep =
        filter_open_set(prototypes, pool_emb, cdf_threshold, &min_cdf);
    if (dumps && dumps->openset) write_openset_dump(*dumps, iteration, min_cdf, keep);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) kept.push_back(i);
    }
    rec.open_set_rejected = static_cast<long>(pool_pred.size() - kept.size());
    if (kept.empty()) {
      throw Error("open-set filter rejected the whole pool; raise the CDF threshold");
    }
    pool_pred = subset_predictions(pool_pred, kept);
    pool_ids = std::move(kept);
  }

  // Pseudo-label selection.
  std::vector<std::size_t> accepted;  // indices into the filtered pool
  if (config.selection == SelectionKind::kCalibratedEntropy) {
    rec.entropy_selection = true;
    double threshold;
    try {
      ThresholdChoice choice = select_entropy_threshold(val_pred, val_y);
      threshold = choice.threshold;
      if (dumps && dumps->roc) write_roc_dump(*dumps, iteration, choice);
    } catch (const DegenerateValidationError&) {
      threshold = median_entropy(val_pred);
    }
    rec.entropy_threshold = threshold;
    SelectionResult sel = apply_entropy_threshold(pool_pred, threshold);
    accepted = std::move(sel.indices);
  } else {
    std::vector<std::uint8_t> mask =
        apply_softmax_threshold(pool_pred, config.softmax_threshold);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) accepted.push_back(i);
    }
  }
  if (accepted.empty()) {
    throw Error("no pseudo-labels were accepted at iteration " + std::to_string(iteration) +
                "; relax the selection threshold");
  }
  rec.n_accepted = static_cast<long>(accepted.size());

  PredictionBatch accepted_pred = subset_predictions(pool_pred, accepted);
  std::vector<std::size_t> accepted_pool_ids(accepted.size());
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    accepted_pool_ids[i] = pool_ids[accepted[i]];
  }

  // Diagnostic pseudo-label precision against the hidden origin classes.
  {
    std::vector<int> origins = origins_of(split.unlabeled);
    std::vector<int> accepted_origins(accepted_pool_ids.size());
    for (std::size_t i = 0; i < accepted_pool_ids.size(); ++i) {
      accepted_origins[i] = origins[accepted_pool_ids[i]];
    }
    rec.pseudo_precision =
        evaluate_pseudo_label_accuracy(accepted_pred.argmax, accepted_origins);
  }

  // Training pool per sampler kind.
  std::vector<std::size_t> train_rows;  // indices into accepted_pred
  const std::vector<double>* weight_ptr = nullptr;
  SampleWeights weights;
  if (config.sampler == SamplerKind::kNaiveClassBalance) {
    long count = config.naive_per_class_count > 0
                     ? config.naive_per_class_count
                     : static_cast<long>((pool_pred.size() + pool_pred.num_classes() - 1) /
                                         pool_pred.num_classes());
    train_rows = naive_class_balance(accepted_pred, 0.0, count);
  } else {
    train_rows.resize(accepted_pred.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) train_rows[i] = i;
    if (config.sampler == SamplerKind::kWeightedSplitBatch) {
      weights = compute_sample_weights(accepted_pred);
      weight_ptr = &weights.final_weight;
      if (dumps && dumps->weights) {
        write_weights_dump(*dumps, iteration, accepted_pool_ids, weights);
      }
    }
  }

  Matrix pseudo_x = gather_rows(gather_rows(pool_x, accepted_pool_ids), train_rows);
  Matrix pseudo_t;
  if (config.loss == PseudoLabelForm::kSoft) {
    pseudo_t = gather_rows(accepted_pred.softmax, train_rows);
  } else {
    std::vector<int> hard(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      hard[i] = accepted_pred.argmax[train_rows[i]];
    }
    pseudo_t = one_hot_rows(hard, accepted_pred.num_classes());
  }

  // Student initialization.
  Capacity tier = student_capacity(config.sizing);
  Classifier student;
  if (config.student_init == StudentInit::kFreshTrain) {
    student = Classifier::init(tier, split.num_target_classes, split.feature_dim,
                               derive_seed(state.run_seed, init_salt));
  } else {
    if (state.best_model.hidden_width != capacity_width(tier)) {
      throw Error("fine-tune requires matching capacity tiers (best model is " +
                  std::string(capacity_name(state.best_model.capacity())) +
                  ", student is " + capacity_name(tier) + ")");
    }
    student = state.best_model;
  }

  Matrix labeled_x = features_of(split.labeled, split.feature_dim);
  std::vector<int> labeled_y = labels_of(split.labeled);

  SplitBatchConfig split_config;
  split_config.batch_size = config.batch_size;
  split_config.labeled_fraction = config.labeled_fraction;
  split_config.seed = derive_seed(state.run_seed, kStreamSampler + iteration);
  StudentBatchSource source(labeled_x, labeled_y, pseudo_x, pseudo_t, config.batching,
                            split_config, weight_ptr, state.resolved_jitter_std,
                            derive_seed(state.run_seed, kStreamJitter + iteration));

  TrainConfig train_config;
  train_config.epochs = epochs_override > 0 ? epochs_override : config.student_epochs;
  train_config.batch_size = config.batch_size;
  train_config.learning_rate = config.learning_rate;
  train_config.momentum = config.momentum;
  train_config.weight_decay = config.weight_decay;
  train_config.lambda_b = config.lambda_b;
  train_config.loss_mode =
      config.batching == Batching::kSplitBatch ? LossMode::kMixed : LossMode::kSoft;
  train_config.seed = split_config.seed;

  TrainResult trained = train(student, source, train_config);
  out.model = std::move(trained.model);
  rec.val_acc = accuracy(out.model, val_x, val_y);
  rec.test_acc = accuracy(out.model, test_x, test_y);
  return out;
}

}  // namespace

void validate_pipeline_config(const PipelineConfig& config) {
  if (config.batching == Batching::kUniform &&
      config.sampler == SamplerKind::kWeightedSplitBatch) {
    throw ConfigError("the weighted SplitBatch sampler requires SplitBatch batching");
  }
  if (config.softmax_threshold < 0.0 || config.softmax_threshold > 1.0) {
    throw ConfigError("softmax_threshold must be in [0,1]");
  }
  if (config.lambda_b < 0.0 || config.lambda_b > 1.0) {
    throw ConfigError("lambda_b must be in [0,1]");
  }
  if (config.num_student_iterations < 0) {
    throw ConfigError("num_student_iterations must be >= 0");
  }
  if (config.teacher_epochs < 1 || config.student_epochs < 1) {
    throw ConfigError("epoch counts must be >= 1");
  }
  if (config.batch_size < 2) throw ConfigError("batch_size must be >= 2");
  if (!(config.labeled_fraction > 0.0) || !(config.labeled_fraction < 1.0)) {
    throw ConfigError("labeled_fraction must be in (0,1)");
  }
  if (config.open_set_filter) {
    if (config.cdf_candidates.empty()) {
      throw ConfigError("open_set_filter needs at least one CDF threshold candidate");
    }
    for (double t : config.cdf_candidates) {
      if (t < 0.0 || t > 1.0) throw ConfigError("CDF candidates must be in [0,1]");
    }
    if (teacher_capacity(config.sizing) == Capacity::kLogistic) {
      throw ConfigError("open_set_filter needs an MLP teacher for embeddings");
    }
  }
}

Capacity teacher_capacity(Sizing sizing) {
  switch (sizing) {
    case Sizing::kNSSmallTeacher: return Capacity::kSmall;
    case Sizing::kSameSizedSmall: return Capacity::kSmall;
    case Sizing::kSameSizedLarge: return Capacity::kLarge;
  }
  return Capacity::kSmall;
}

Capacity student_capacity(Sizing sizing) {
  switch (sizing) {
    case Sizing::kNSSmallTeacher: return Capacity::kLarge;
    case Sizing::kSameSizedSmall: return Capacity::kSmall;
    case Sizing::kSameSizedLarge: return Capacity::kLarge;
  }
  return Capacity::kLarge;
}

SelfTrainState run_teacher(const DataSplit& split, const PipelineConfig& config,
                           std::uint64_t seed) {
  validate_pipeline_config(config);
  if (split.labeled.empty()) throw InvalidArgumentError("run_teacher: no labeled data");

  SelfTrainState state;
  state.run_seed = seed;
  state.resolved_jitter_std = config.jitter_std >= 0.0
                                  ? config.jitter_std
                                  : 0.05 * estimate_within_class_std(split);

  Matrix labeled_x = features_of(split.labeled, split.feature_dim);
  std::vector<int> labeled_y = labels_of(split.labeled);
  Classifier init = Classifier::init(teacher_capacity(config.sizing),
                                     split.num_target_classes, split.feature_dim,
                                     derive_seed(seed, kStreamTeacherInit));
  LabeledBatchSource source(labeled_x, labeled_y, config.batch_size,
                            derive_seed(seed, kStreamTeacherBatches));
  TrainConfig train_config;
  train_config.epochs = config.teacher_epochs;
  train_config.batch_size = config.batch_size;
  train_config.learning_rate = config.learning_rate;
  train_config.momentum = config.momentum;
  train_config.weight_decay = config.weight_decay;
  train_config.loss_mode = LossMode::kHard;

  TrainResult trained = train(init, source, train_config);
  state.teacher = trained.model;
  state.best_model = trained.model;
  state.best_iteration = 0;

  Matrix val_x = features_of(split.validation, split.feature_dim);
  Matrix test_x = features_of(split.test, split.feature_dim);
  state.teacher_record.val_acc = accuracy(state.teacher, val_x, labels_of(split.validation));
  state.teacher_record.test_acc = accuracy(state.teacher, test_x, labels_of(split.test));
  state.best_val_acc = state.teacher_record.val_acc;
  state.best_test_acc = state.teacher_record.test_acc;
  return state;
}

void run_iteration(SelfTrainState& state, const DataSplit& split,
                   const PipelineConfig& config, const DumpOptions* dumps) {
  validate_pipeline_config(config);
  int iteration = static_cast<int>(state.iterations.size()) + 1;

  double cdf_threshold = -1.0;
  if (config.open_set_filter) {
    if (!state.cdf_threshold) {
      if (config.cdf_candidates.size() == 1) {
        state.cdf_threshold = config.cdf_candidates[0];
      } else {
        // Pick the candidate whose abbreviated student scores best on the
        // closed-set validation data; the threshold then stays fixed.
        int abbreviated_epochs = std::max(10, config.student_epochs / 5);
        int candidate_index = 0;
        state.cdf_threshold = select_cdf_threshold(
            config.cdf_candidates, [&](double t) {
              StudentOutcome trial = run_student(
                  state, split, config, iteration, t, abbreviated_epochs,
                  kStreamCdfTrial + 10 * iteration + candidate_index, nullptr);
              ++candidate_index;
              return trial.record.val_acc;
            });
      }
    }
    cdf_threshold = *state.cdf_threshold;
  }

  StudentOutcome outcome = run_student(state, split, config, iteration, cdf_threshold,
                                       -1, kStreamStudentInit + iteration, dumps);
  state.iterations.push_back(outcome.record);
  if (outcome.record.val_acc > state.best_val_acc) {
    state.best_model = std::move(outcome.model);
    state.best_val_acc = outcome.record.val_acc;
    state.best_test_acc = outcome.record.test_acc;
    state.best_iteration = iteration;
  }
}

RunRecord run_pipeline(const DataSplit& split, const PipelineConfig& config,
                       std::uint64_t seed, const DumpOptions* dumps) {
  SelfTrainState state = run_teacher(split, config, seed);
  for (int k = 0; k < config.num_student_iterations; ++k) {
    run_iteration(state, split, config, dumps);
  }
  RunRecord record;
  record.seed = seed;
  record.teacher = state.teacher_record;
  record.iterations = state.iterations;
  record.best_iteration = state.best_iteration;
  record.best_val_acc = state.best_val_acc;
  record.best_test_acc = state.best_test_acc;
  record.best_model = std::move(state.best_model);
  return record;
}

double evaluate_pseudo_label_accuracy(const std::vector<int>& accepted_argmax,
                                      const std::vector<int>& accepted_origins) {
  if (accepted_argmax.empty()) {
    throw InvalidArgumentError("evaluate_pseudo_label_accuracy: empty accepted set");
  }
  if (accepted_argmax.size() != accepted_origins.size()) {
    throw InvalidArgumentError("evaluate_pseudo_label_accuracy: size mismatch");
  }
  long correct = 0;
  for (std::size_t i = 0; i < accepted_argmax.size(); ++i) {
    if (accepted_argmax[i] == accepted_origins[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(accepted_argmax.size());
}

}  // namespace selftrain
