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

#include "openset.hpp"

#include <cmath>
#include <fstream>

#include "errors.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

double squared_distance(const double* a, const double* b, std::size_t n) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double d = a[k] - b[k];
    d2 += d * d;
  }
  return d2;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  return h;  // converged to working precision in practice well before this
}

}  // namespace

double beta_cdf(double x, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw InvalidArgumentError("beta_cdf: alpha and beta must be > 0");
  }
  if (x < 0.0 || x > 1.0) throw InvalidArgumentError("beta_cdf: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_front = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta) +
                    alpha * std::log(x) + beta * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (alpha + 1.0) / (alpha + beta + 2.0)) {
    return front * beta_continued_fraction(alpha, beta, x) / alpha;
  }
  return 1.0 - front * beta_continued_fraction(beta, alpha, 1.0 - x) / beta;
}

std::pair<double, double> beta_from_moments(double mean, double variance) {
  if (!(mean > 0.0) || !(mean < 1.0)) {
    throw InvalidArgumentError("beta_from_moments: mean must be in (0,1)");
  }
  if (!(variance > 0.0)) {
    throw InvalidArgumentError(
        "beta_from_moments: variance is zero (all distances identical); "
        "add feature jitter or more samples");
  }
  double common = mean * (1.0 - mean) / variance - 1.0;
  if (!(common > 0.0)) {
    throw InvalidArgumentError("beta_from_moments: variance too large for a Beta fit");
  }
  return {mean * common, (1.0 - mean) * common};
}

PrototypeModel build_prototypes(const std::vector<Matrix>& proto_embeddings_by_class,
                                const std::vector<Matrix>& fit_embeddings_by_class) {
  if (proto_embeddings_by_class.empty() ||
      proto_embeddings_by_class.size() != fit_embeddings_by_class.size()) {
    throw InvalidArgumentError("build_prototypes: per-class embedding sets disagree");
  }
  PrototypeModel model;
  model.embedding_dim = proto_embeddings_by_class[0].cols();
  for (std::size_t c = 0; c < proto_embeddings_by_class.size(); ++c) {
    const Matrix& proto_set = proto_embeddings_by_class[c];
    const Matrix& fit_set = fit_embeddings_by_class[c];
    if (proto_set.rows() < 3 || fit_set.rows() < 3) {
      throw InvalidArgumentError("build_prototypes: class " + std::to_string(c) +
                                 " has fewer than 3 embeddings");
    }
    if (proto_set.cols() != model.embedding_dim || fit_set.cols() != model.embedding_dim) {
      throw InvalidArgumentError("build_prototypes: embedding dimensions disagree");
    }

    ClassPrototype cp;
    cp.prototype.assign(model.embedding_dim, 0.0);
    for (std::size_t r = 0; r < proto_set.rows(); ++r) {
      const double* e = proto_set.row(r);
      for (std::size_t k = 0; k < model.embedding_dim; ++k) cp.prototype[k] += e[k];
    }
    for (std::size_t k = 0; k < model.embedding_dim; ++k) {
      cp.prototype[k] /= static_cast<double>(proto_set.rows());
    }

    std::vector<double> distances(fit_set.rows());
    double max_distance = 0.0;
    for (std::size_t r = 0; r < fit_set.rows(); ++r) {
      distances[r] = std::sqrt(
          squared_distance(fit_set.row(r), cp.prototype.data(), model.embedding_dim));
      max_distance = std::max(max_distance, distances[r]);
    }
    if (!(max_distance > 0.0)) {
      throw InvalidArgumentError(
          "build_prototypes: class " + std::to_string(c) +
          " distances are all zero; add feature jitter");
    }
    cp.distance_scale = 1.01 * max_distance;

    double mean = 0.0;
    for (double& d : distances) {
      d /= cp.distance_scale;
      mean += d;
    }
    mean /= static_cast<double>(distances.size());
    double var = 0.0;
    for (double d : distances) var += (d - mean) * (d - mean);
    var /= static_cast<double>(distances.size() - 1);
    if (!(var > 0.0)) {
      throw InvalidArgumentError(
          "build_prototypes: class " + std::to_string(c) +
          " has zero distance variance (all members equidistant); add feature jitter");
    }
    auto [alpha, beta] = beta_from_moments(mean, var);
    cp.alpha = alpha;
    cp.beta = beta;
    model.classes.push_back(std::move(cp));
  }
  return model;
}

std::vector<std::uint8_t> filter_open_set(const PrototypeModel& model,
                                          const Matrix& pool_embeddings,
                                          double cdf_threshold,
                                          std::vector<double>* min_cdf_out) {
  if (cdf_threshold < 0.0 || cdf_threshold > 1.0) {
    throw InvalidArgumentError("filter_open_set: threshold must be in [0,1]");
  }
  if (pool_embeddings.cols() != model.embedding_dim) {
    throw InvalidArgumentError("filter_open_set: embedding dimension mismatch");
  }
  std::vector<std::uint8_t> keep(pool_embeddings.rows(), 0);
  if (min_cdf_out) min_cdf_out->assign(pool_embeddings.rows(), 1.0);
  for (std::size_t r = 0; r < pool_embeddings.rows(); ++r) {
    const double* e = pool_embeddings.row(r);
    double min_cdf = 1.0;
    for (const ClassPrototype& cp : model.classes) {
      double d = std::sqrt(squared_distance(e, cp.prototype.data(), model.embedding_dim));
      double scaled = std::min(d / cp.distance_scale, 1.0);
      min_cdf = std::min(min_cdf, beta_cdf(scaled, cp.alpha, cp.beta));
    }
    if (min_cdf_out) (*min_cdf_out)[r] = min_cdf;
    keep[r] = min_cdf <= cdf_threshold ? 1 : 0;
  }
  return keep;
}

double select_cdf_threshold(const std::vector<double>& candidates,
                            const std::function<double(double)>& evaluate) {
  if (candidates.empty()) {
    throw InvalidArgumentError("select_cdf_threshold: no candidates");
  }
  double best_threshold = candidates[0];
  double best_accuracy = evaluate(candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    double acc = evaluate(candidates[i]);
    if (acc > best_accuracy ||
        (acc == best_accuracy && candidates[i] > best_threshold)) {
      best_threshold = candidates[i];
      best_accuracy = acc;
    }
  }
  return best_threshold;
}

void save_prototypes(const PrototypeModel& model, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "selftrain-prototypes v1\n";
  os << "num_classes " << model.classes.size() << '\n';
  os << "embedding_dim " << model.embedding_dim << '\n';
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    const ClassPrototype& cp = model.classes[c];
    os << "class " << c << " alpha " << format_double(cp.alpha) << " beta "
       << format_double(cp.beta) << " scale " << format_double(cp.distance_scale) << '\n';
    for (std::size_t k = 0; k < cp.prototype.size(); ++k) {
      os << (k ? " " : "") << format_double(cp.prototype[k]);
    }
    os << '\n';
  }
  os << "end\n";
  if (!os) throw IoError("write failed: " + path);
}

PrototypeModel load_prototypes(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open prototype file: " + path);
  std::string line;
  if (!std::getline(is, line) || trim(line) != "selftrain-prototypes v1") {
    throw IoError(path + ": unknown prototype format");
  }
  auto read_kv = [&](const std::string& key) -> std::string {
    if (!std::getline(is, line)) throw IoError(path + ": truncated file");
    auto parts = split_ws(trim(line));
    if (parts.size() != 2 || parts[0] != key) {
      throw IoError(path + ": expected '" + key + "' line");
    }
    return std::string(parts[1]);
  };
  PrototypeModel model;
  std::size_t num_classes = parse_u64(read_kv("num_classes"));
  model.embedding_dim = parse_u64(read_kv("embedding_dim"));
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (!std::getline(is, line)) throw IoError(path + ": truncated file");
    auto parts = split_ws(trim(line));
    if (parts.size() != 8 || parts[0] != "class" || parse_u64(parts[1]) != c ||
        parts[2] != "alpha" || parts[4] != "beta" || parts[6] != "scale") {
      throw IoError(path + ": malformed class header");
    }
    ClassPrototype cp;
    cp.alpha = parse_double(parts[3]);
    cp.beta = parse_double(parts[5]);
    cp.distance_scale = parse_double(parts[7]);
    if (!std::getline(is, line)) throw IoError(path + ": truncated file");
    auto vals = split_ws(trim(line));
    if (vals.size() != model.embedding_dim) {
      throw IoError(path + ": prototype width disagrees with header");
    }
    cp.prototype.resize(model.embedding_dim);
    for (std::size_t k = 0; k < model.embedding_dim; ++k) {
      cp.prototype[k] = parse_double(vals[k]);
    }
    model.classes.push_back(std::move(cp));
  }
  if (!std::getline(is, line) || trim(line) != "end") {
    throw IoError(path + ": truncated file (missing trailer)");
  }
  return model;
}

}  // namespace selftrain
