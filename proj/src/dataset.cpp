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

#include "dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sub-stream tags so each partition is independent of the others' sizes.
enum : std::uint64_t {
  kStreamLabeled = 1,
  kStreamUnlabeled = 2,
  kStreamValidation = 3,
  kStreamTest = 4,
  kStreamGeometry = 5,
  kStreamInject = 6,
};

// Balanced per-class counts; the first (total % classes) classes get one extra.
std::vector<long> balanced_counts(long total, int classes) {
  std::vector<long> counts(classes, total / classes);
  for (int c = 0; c < static_cast<int>(total % classes); ++c) counts[c] += 1;
  return counts;
}

// Class centers: target classes evenly spaced on a ring of radius `spread` in
// the first two feature dimensions, non-target classes on a wider ring offset
// by half a step. The ring rotation derives from the seed.
struct Geometry {
  std::vector<std::vector<double>> centers;  // index = origin class
};

Geometry make_geometry(const GeneratorConfig& cfg) {
  Geometry geo;
  Rng rng(derive_seed(cfg.seed, kStreamGeometry));
  double phi = rng.uniform() * 2.0 * kPi;
  int total = cfg.num_target_classes + cfg.num_nontarget_classes;
  geo.centers.resize(total, std::vector<double>(cfg.feature_dim, 0.0));
  for (int c = 0; c < cfg.num_target_classes; ++c) {
    double theta = phi + 2.0 * kPi * c / cfg.num_target_classes;
    geo.centers[c][0] = cfg.spread * std::cos(theta);
    geo.centers[c][1] = cfg.spread * std::sin(theta);
  }
  for (int j = 0; j < cfg.num_nontarget_classes; ++j) {
    double theta = phi + kPi / cfg.num_nontarget_classes +
                   2.0 * kPi * j / cfg.num_nontarget_classes;
    double radius = cfg.spread * cfg.nontarget_scale;
    int c = cfg.num_target_classes + j;
    geo.centers[c][0] = radius * std::cos(theta);
    geo.centers[c][1] = radius * std::sin(theta);
  }
  return geo;
}

Sample draw_sample(const std::vector<double>& center, double stddev, int origin,
                   bool labeled, int dim, Rng& rng) {
  Sample s;
  s.features.resize(dim);
  for (int k = 0; k < dim; ++k) s.features[k] = center[k] + stddev * rng.normal();
  s.origin_class = origin;
  if (labeled) s.label = origin;
  return s;
}

void validate_config(const GeneratorConfig& cfg) {
  if (cfg.num_target_classes < 1) {
    throw InvalidArgumentError("generator: num_target_classes must be >= 1");
  }
  if (cfg.feature_dim < 2) {
    throw InvalidArgumentError("generator: feature_dim must be >= 2");
  }
  if (cfg.labeled < 0 || cfg.unlabeled < 0 || cfg.validation < 0 || cfg.test < 0) {
    throw InvalidArgumentError("generator: partition sizes must be >= 0");
  }
  if (cfg.num_nontarget_classes < 0) {
    throw InvalidArgumentError("generator: num_nontarget_classes must be >= 0");
  }
  if (!(cfg.spread > 0.0) || !(cfg.stddev > 0.0)) {
    throw InvalidArgumentError("generator: spread and stddev must be > 0");
  }
  if (cfg.nontarget_fraction < 0.0 || cfg.nontarget_fraction > 1.0) {
    throw InvalidArgumentError("generator: nontarget_fraction must be in [0,1]");
  }
  if (cfg.num_nontarget_classes == 0 && cfg.nontarget_fraction > 0.0 && cfg.unlabeled > 0) {
    // Closed-set config: fraction is ignored only when zero.
    throw InvalidArgumentError(
        "generator: nontarget_fraction > 0 requires num_nontarget_classes > 0");
  }
  if (!cfg.labeled_per_class.empty()) {
    if (static_cast<int>(cfg.labeled_per_class.size()) != cfg.num_target_classes) {
      throw InvalidArgumentError(
          "generator: labeled_per_class must list one count per target class");
    }
    long sum = 0;
    for (long n : cfg.labeled_per_class) {
      if (n < 0) throw InvalidArgumentError("generator: labeled_per_class counts must be >= 0");
      sum += n;
    }
    if (cfg.labeled > 0 && sum != cfg.labeled) {
      throw InvalidArgumentError(
          "generator: labeled_per_class sums to " + std::to_string(sum) +
          " but labeled = " + std::to_string(cfg.labeled));
    }
  }
}

std::vector<Sample> draw_partition(const Geometry& geo, const GeneratorConfig& cfg,
                                   const std::vector<long>& class_counts, bool labeled,
                                   std::uint64_t stream) {
  Rng rng(derive_seed(cfg.seed, stream));
  std::vector<Sample> out;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    for (long i = 0; i < class_counts[c]; ++i) {
      out.push_back(draw_sample(geo.centers[c], cfg.stddev, static_cast<int>(c),
                                labeled, cfg.feature_dim, rng));
    }
  }
  return out;
}

void write_partition(std::ostream& os, const std::string& name,
                     const std::vector<Sample>& samples, const DataSplit& split) {
  os << "selftrain-dataset v1\n";
  os << "partition " << name << "\n";
  os << "feature_dim " << split.feature_dim << "\n";
  os << "num_target_classes " << split.num_target_classes << "\n";
  os << "count " << samples.size() << "\n";
  for (const Sample& s : samples) {
    os << (s.label ? std::to_string(*s.label) : "-");
    os << ' ' << (s.origin_class ? std::to_string(*s.origin_class) : "-");
    for (double v : s.features) os << ' ' << format_double(v);
    os << '\n';
  }
  os << "end\n";
}

std::vector<Sample> read_partition(std::istream& is, const std::string& path,
                                   const std::string& expected_name, int& feature_dim,
                                   int& num_target_classes) {
  auto fail = [&path](const std::string& what) -> IoError {
    return IoError(path + ": " + what);
  };
  std::string line;
  if (!std::getline(is, line) || trim(line) != "selftrain-dataset v1") {
    throw fail("unknown format version (expected 'selftrain-dataset v1')");
  }
  auto read_kv = [&](const std::string& key) -> std::string {
    if (!std::getline(is, line)) throw fail("truncated header");
    auto parts = split_ws(trim(line));
    if (parts.size() != 2 || parts[0] != key) throw fail("expected '" + key + "' header line");
    return std::string(parts[1]);
  };
  std::string name = read_kv("partition");
  if (name != expected_name) {
    throw fail("partition name '" + name + "' does not match file role '" + expected_name + "'");
  }
  feature_dim = static_cast<int>(parse_int(read_kv("feature_dim")));
  num_target_classes = static_cast<int>(parse_int(read_kv("num_target_classes")));
  if (feature_dim < 1 || num_target_classes < 1) throw fail("invalid header dimensions");
  long count = parse_int(read_kv("count"));

  std::vector<Sample> samples;
  samples.reserve(count);
  for (long i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw fail("truncated file: missing sample rows");
    auto parts = split_ws(trim(line));
    if (static_cast<int>(parts.size()) != 2 + feature_dim) {
      throw fail("sample row has " + std::to_string(parts.size()) + " fields, expected " +
                 std::to_string(2 + feature_dim));
    }
    Sample s;
    if (parts[0] != "-") s.label = static_cast<int>(parse_int(parts[0]));
    if (parts[1] != "-") s.origin_class = static_cast<int>(parse_int(parts[1]));
    s.features.resize(feature_dim);
    for (int k = 0; k < feature_dim; ++k) s.features[k] = parse_double(parts[2 + k]);
    samples.push_back(std::move(s));
  }
  if (!std::getline(is, line) || trim(line) != "end") {
    throw fail("truncated file: missing 'end' trailer");
  }
  return samples;
}

void validate_partition(const std::string& name, const std::vector<Sample>& samples,
                        int num_target_classes, bool labels_required, bool open_origin_ok) {
  for (const Sample& s : samples) {
    if (labels_required) {
      if (!s.label) throw IoError(name + ": sample missing required label");
      if (*s.label < 0 || *s.label >= num_target_classes) {
        throw IoError(name + ": label " + std::to_string(*s.label) +
                      " out of range for " + std::to_string(num_target_classes) + " classes");
      }
    } else if (s.label) {
      throw IoError(name + ": unlabeled sample carries a visible label");
    }
    if (s.origin_class) {
      if (*s.origin_class < 0 ||
          (!open_origin_ok && *s.origin_class >= num_target_classes)) {
        throw IoError(name + ": origin class " + std::to_string(*s.origin_class) +
                      " out of range");
      }
    }
  }
}

}  // namespace

Matrix features_of(const std::vector<Sample>& samples, int feature_dim) {
  Matrix m(samples.size(), feature_dim);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (static_cast<int>(samples[i].features.size()) != feature_dim) {
      throw InvalidArgumentError("features_of: inconsistent feature dimension");
    }
    double* row = m.row(i);
    for (int k = 0; k < feature_dim; ++k) row[k] = samples[i].features[k];
  }
  return m;
}

std::vector<int> labels_of(const std::vector<Sample>& samples) {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].label) throw InvalidArgumentError("labels_of: sample has no label");
    out[i] = *samples[i].label;
  }
  return out;
}

std::vector<int> origins_of(const std::vector<Sample>& samples) {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].origin_class) {
      throw InvalidArgumentError("origins_of: sample has no origin class");
    }
    out[i] = *samples[i].origin_class;
  }
  return out;
}

double estimate_within_class_std(const DataSplit& split) {
  double var_sum = 0.0;
  int classes_counted = 0;
  for (int c = 0; c < split.num_target_classes; ++c) {
    std::vector<const Sample*> members;
    for (const Sample& s : split.labeled) {
      if (s.label && *s.label == c) members.push_back(&s);
    }
    if (members.size() < 2) continue;
    double class_var = 0.0;
    for (int k = 0; k < split.feature_dim; ++k) {
      double mean = 0.0;
      for (const Sample* s : members) mean += s->features[k];
      mean /= members.size();
      double v = 0.0;
      for (const Sample* s : members) {
        double d = s->features[k] - mean;
        v += d * d;
      }
      class_var += v / (members.size() - 1);
    }
    var_sum += class_var / split.feature_dim;
    ++classes_counted;
  }
  if (classes_counted == 0) return 0.0;
  return std::sqrt(var_sum / classes_counted);
}

DataSplit generate_gaussian_dataset(const GeneratorConfig& cfg) {
  validate_config(cfg);
  Geometry geo = make_geometry(cfg);

  DataSplit split;
  split.num_target_classes = cfg.num_target_classes;
  split.feature_dim = cfg.feature_dim;

  std::vector<long> labeled_counts = cfg.labeled_per_class.empty()
                                         ? balanced_counts(cfg.labeled, cfg.num_target_classes)
                                         : cfg.labeled_per_class;
  split.labeled = draw_partition(geo, cfg, labeled_counts, true, kStreamLabeled);
  split.validation = draw_partition(
      geo, cfg, balanced_counts(cfg.validation, cfg.num_target_classes), true,
      kStreamValidation);
  split.test = draw_partition(geo, cfg, balanced_counts(cfg.test, cfg.num_target_classes),
                              true, kStreamTest);

  // Unlabeled pool: target portion then (optionally) non-target portion.
  long n_nontarget =
      cfg.num_nontarget_classes > 0
          ? std::lround(cfg.nontarget_fraction * static_cast<double>(cfg.unlabeled))
          : 0;
  long n_target = cfg.unlabeled - n_nontarget;
  std::vector<long> pool_counts = balanced_counts(n_target, cfg.num_target_classes);
  if (cfg.num_nontarget_classes > 0) {
    std::vector<long> nt = balanced_counts(n_nontarget, cfg.num_nontarget_classes);
    pool_counts.insert(pool_counts.end(), nt.begin(), nt.end());
  }
  split.unlabeled = draw_partition(geo, cfg, pool_counts, false, kStreamUnlabeled);
  return split;
}

DataSplit inject_open_set(const DataSplit& split, double nontarget_fraction,
                          std::uint64_t seed, const OpenSetOptions& options) {
  if (nontarget_fraction < 0.0 || nontarget_fraction > 1.0) {
    throw InvalidArgumentError("inject_open_set: fraction must be in [0,1]");
  }
  if (options.num_nontarget_classes < 1) {
    throw InvalidArgumentError("inject_open_set: need at least one non-target class");
  }
  for (const Sample& s : split.unlabeled) {
    if (s.origin_class && *s.origin_class >= split.num_target_classes) {
      throw InvalidArgumentError("inject_open_set: split already contains non-target samples");
    }
  }
  DataSplit out = split;
  if (nontarget_fraction == 0.0 || split.unlabeled.empty()) return out;

  // Estimate geometry from the visible labeled partitions: per-class means,
  // their centroid, the mean ring radius and the pooled within-class std.
  std::vector<std::vector<double>> class_means(split.num_target_classes,
                                               std::vector<double>(split.feature_dim, 0.0));
  std::vector<long> counts(split.num_target_classes, 0);
  auto accumulate = [&](const std::vector<Sample>& part) {
    for (const Sample& s : part) {
      if (!s.label) continue;
      for (int k = 0; k < split.feature_dim; ++k) class_means[*s.label][k] += s.features[k];
      counts[*s.label] += 1;
    }
  };
  accumulate(split.labeled);
  accumulate(split.validation);
  accumulate(split.test);
  std::vector<double> centroid(split.feature_dim, 0.0);
  int seen = 0;
  for (int c = 0; c < split.num_target_classes; ++c) {
    if (counts[c] == 0) continue;
    for (int k = 0; k < split.feature_dim; ++k) class_means[c][k] /= counts[c];
    for (int k = 0; k < split.feature_dim; ++k) centroid[k] += class_means[c][k];
    ++seen;
  }
  if (seen == 0) throw InvalidArgumentError("inject_open_set: no labeled samples to estimate geometry");
  for (int k = 0; k < split.feature_dim; ++k) centroid[k] /= seen;
  double radius = 0.0;
  for (int c = 0; c < split.num_target_classes; ++c) {
    if (counts[c] == 0) continue;
    double d2 = 0.0;
    for (int k = 0; k < split.feature_dim; ++k) {
      double d = class_means[c][k] - centroid[k];
      d2 += d * d;
    }
    radius += std::sqrt(d2);
  }
  radius /= seen;
  double stddev = estimate_within_class_std(split);
  if (stddev <= 0.0) stddev = 1.0;

  Rng rng(derive_seed(seed, kStreamInject));
  double phi = rng.uniform() * 2.0 * kPi;
  long n_replace = std::lround(nontarget_fraction * static_cast<double>(out.unlabeled.size()));

  // Choose which pool slots get replaced.
  std::vector<std::size_t> slots(out.unlabeled.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  rng.shuffle(slots);

  std::vector<long> per_class = balanced_counts(n_replace, options.num_nontarget_classes);
  std::size_t slot = 0;
  for (int j = 0; j < options.num_nontarget_classes; ++j) {
    std::vector<double> center = centroid;
    double theta = phi + 2.0 * kPi * j / options.num_nontarget_classes;
    center[0] += options.center_scale * radius * std::cos(theta);
    center[1] += options.center_scale * radius * std::sin(theta);
    for (long i = 0; i < per_class[j]; ++i, ++slot) {
      out.unlabeled[slots[slot]] =
          draw_sample(center, stddev, split.num_target_classes + j, false,
                      split.feature_dim, rng);
    }
  }
  return out;
}

void save_split(const DataSplit& split, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto write_file = [&](const std::string& name, const std::vector<Sample>& part) {
    fs::path path = fs::path(dir) / (name + ".ds");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    write_partition(os, name, part, split);
    if (!os) throw IoError("write failed: " + path.string());
  };
  write_file("labeled", split.labeled);
  write_file("unlabeled", split.unlabeled);
  write_file("validation", split.validation);
  write_file("test", split.test);
}

DataSplit load_split(const std::string& dir) {
  namespace fs = std::filesystem;
  DataSplit split;
  int dim = -1;
  int classes = -1;
  auto read_file = [&](const std::string& name) -> std::vector<Sample> {
    fs::path path = fs::path(dir) / (name + ".ds");
    std::ifstream is(path);
    if (!is) throw IoError("cannot open dataset file: " + path.string());
    int file_dim = 0;
    int file_classes = 0;
    auto samples = read_partition(is, path.string(), name, file_dim, file_classes);
    if (dim == -1) {
      dim = file_dim;
      classes = file_classes;
    } else if (dim != file_dim || classes != file_classes) {
      throw IoError(path.string() + ": dimensions disagree with sibling partitions");
    }
    return samples;
  };
  split.labeled = read_file("labeled");
  split.unlabeled = read_file("unlabeled");
  split.validation = read_file("validation");
  split.test = read_file("test");
  split.feature_dim = dim;
  split.num_target_classes = classes;
  validate_partition("labeled", split.labeled, classes, true, false);
  validate_partition("unlabeled", split.unlabeled, classes, false, true);
  validate_partition("validation", split.validation, classes, true, false);
  validate_partition("test", split.test, classes, true, false);
  return split;
}

}  // namespace selftrain
