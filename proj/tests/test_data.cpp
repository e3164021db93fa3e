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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <set>
#include <sstream>

#include "dataset.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"

using namespace selftrain;

namespace {

GeneratorConfig basic_config() {
  GeneratorConfig cfg;
  cfg.num_target_classes = 3;
  cfg.feature_dim = 4;
  cfg.labeled = 30;
  cfg.unlabeled = 300;
  cfg.validation = 30;
  cfg.test = 60;
  cfg.spread = 3.0;
  cfg.stddev = 1.0;
  cfg.seed = 7;
  return cfg;
}

std::string feature_key(const Sample& s) {
  std::ostringstream os;
  for (double v : s.features) os << v << ',';
  return os.str();
}

}  // namespace

TEST_CASE("generated partitions have exactly the configured sizes") {
  DataSplit split = generate_gaussian_dataset(basic_config());
  CHECK(split.labeled.size() == 30);
  CHECK(split.unlabeled.size() == 300);
  CHECK(split.validation.size() == 30);
  CHECK(split.test.size() == 60);
  CHECK(split.num_target_classes == 3);
  CHECK(split.feature_dim == 4);
}

TEST_CASE("per-class counts are balanced with the remainder up front") {
  GeneratorConfig cfg = basic_config();
  cfg.labeled = 31;
  DataSplit split = generate_gaussian_dataset(cfg);
  std::vector<int> counts(3, 0);
  for (const Sample& s : split.labeled) counts[*s.label]++;
  CHECK(counts[0] == 11);
  CHECK(counts[1] == 10);
  CHECK(counts[2] == 10);
}

TEST_CASE("labeled_per_class override is honored") {
  GeneratorConfig cfg = basic_config();
  cfg.labeled = 30;
  cfg.labeled_per_class = {5, 10, 15};
  DataSplit split = generate_gaussian_dataset(cfg);
  std::vector<int> counts(3, 0);
  for (const Sample& s : split.labeled) counts[*s.label]++;
  CHECK(counts == std::vector<int>{5, 10, 15});
  cfg.labeled_per_class = {5, 10};
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
  cfg.labeled_per_class = {5, 10, 16};
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
}

TEST_CASE("non-target classes appear only in the unlabeled pool") {
  GeneratorConfig cfg = basic_config();
  cfg.num_nontarget_classes = 2;
  cfg.nontarget_fraction = 0.5;
  DataSplit split = generate_gaussian_dataset(cfg);
  for (const Sample& s : split.labeled) CHECK(*s.origin_class < 3);
  for (const Sample& s : split.validation) CHECK(*s.origin_class < 3);
  for (const Sample& s : split.test) CHECK(*s.origin_class < 3);
  long nontarget = 0;
  for (const Sample& s : split.unlabeled) {
    CHECK_FALSE(s.label.has_value());
    if (*s.origin_class >= 3) ++nontarget;
  }
  CHECK(nontarget == 150);
}

TEST_CASE("identical config gives a bit-identical dataset") {
  DataSplit a = generate_gaussian_dataset(basic_config());
  DataSplit b = generate_gaussian_dataset(basic_config());
  REQUIRE(a.unlabeled.size() == b.unlabeled.size());
  for (std::size_t i = 0; i < a.unlabeled.size(); ++i) {
    CHECK(a.unlabeled[i].features == b.unlabeled[i].features);
  }
  for (std::size_t i = 0; i < a.labeled.size(); ++i) {
    CHECK(a.labeled[i].features == b.labeled[i].features);
  }
}

TEST_CASE("partitions are pairwise disjoint") {
  DataSplit split = generate_gaussian_dataset(basic_config());
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto* part : {&split.labeled, &split.unlabeled, &split.validation, &split.test}) {
    for (const Sample& s : *part) {
      seen.insert(feature_key(s));
      ++total;
    }
  }
  CHECK(seen.size() == total);
}

TEST_CASE("labeled partition does not depend on the unlabeled pool size") {
  GeneratorConfig cfg = basic_config();
  DataSplit a = generate_gaussian_dataset(cfg);
  cfg.unlabeled = 50;
  DataSplit b = generate_gaussian_dataset(cfg);
  for (std::size_t i = 0; i < a.labeled.size(); ++i) {
    CHECK(a.labeled[i].features == b.labeled[i].features);
  }
  for (std::size_t i = 0; i < a.test.size(); ++i) {
    CHECK(a.test[i].features == b.test[i].features);
  }
}

TEST_CASE("generator rejects invalid configs") {
  GeneratorConfig cfg = basic_config();
  cfg.num_target_classes = 0;
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
  cfg = basic_config();
  cfg.feature_dim = 1;
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
  cfg = basic_config();
  cfg.spread = 0.0;
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
  cfg = basic_config();
  cfg.labeled = -1;
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
  cfg = basic_config();
  cfg.nontarget_fraction = 0.5;  // but no non-target classes
  CHECK_THROWS_AS(generate_gaussian_dataset(cfg), InvalidArgumentError);
}

TEST_CASE("estimate_within_class_std recovers the generating stddev") {
  GeneratorConfig cfg = basic_config();
  cfg.labeled = 600;
  cfg.stddev = 1.5;
  DataSplit split = generate_gaussian_dataset(cfg);
  CHECK(estimate_within_class_std(split) == doctest::Approx(1.5).epsilon(0.1));
}

TEST_CASE("inject_open_set with fraction zero is the identity") {
  DataSplit split = generate_gaussian_dataset(basic_config());
  DataSplit injected = inject_open_set(split, 0.0, 99);
  REQUIRE(injected.unlabeled.size() == split.unlabeled.size());
  for (std::size_t i = 0; i < split.unlabeled.size(); ++i) {
    CHECK(injected.unlabeled[i].features == split.unlabeled[i].features);
  }
}

TEST_CASE("inject_open_set replaces exactly the requested fraction") {
  GeneratorConfig cfg = basic_config();
  cfg.unlabeled = 600;  // scaled stand-in for the 42K + 42K open-set pool
  DataSplit split = generate_gaussian_dataset(cfg);
  DataSplit injected = inject_open_set(split, 0.5, 99);
  CHECK(injected.unlabeled.size() == 600);
  long nontarget = 0;
  for (const Sample& s : injected.unlabeled) {
    if (*s.origin_class >= 3) ++nontarget;
  }
  CHECK(nontarget == 300);
  // other partitions untouched
  for (std::size_t i = 0; i < split.labeled.size(); ++i) {
    CHECK(injected.labeled[i].features == split.labeled[i].features);
  }
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    CHECK(injected.test[i].features == split.test[i].features);
  }
}

TEST_CASE("inject_open_set validates inputs") {
  DataSplit split = generate_gaussian_dataset(basic_config());
  CHECK_THROWS_AS(inject_open_set(split, -0.1, 1), InvalidArgumentError);
  CHECK_THROWS_AS(inject_open_set(split, 1.5, 1), InvalidArgumentError);
  DataSplit open = inject_open_set(split, 0.5, 1);
  CHECK_THROWS_AS(inject_open_set(open, 0.5, 1), InvalidArgumentError);  // already open
}

TEST_CASE("save/load round trip is lossless") {
  oracles::TempDir dir("data_roundtrip");
  GeneratorConfig cfg = basic_config();
  cfg.num_nontarget_classes = 2;
  cfg.nontarget_fraction = 0.25;
  DataSplit split = generate_gaussian_dataset(cfg);
  save_split(split, dir.str());
  DataSplit loaded = load_split(dir.str());
  CHECK(loaded.num_target_classes == split.num_target_classes);
  CHECK(loaded.feature_dim == split.feature_dim);
  REQUIRE(loaded.unlabeled.size() == split.unlabeled.size());
  for (std::size_t i = 0; i < split.unlabeled.size(); ++i) {
    CHECK(loaded.unlabeled[i].features == split.unlabeled[i].features);
    CHECK(loaded.unlabeled[i].label == split.unlabeled[i].label);
    CHECK(loaded.unlabeled[i].origin_class == split.unlabeled[i].origin_class);
  }
  for (std::size_t i = 0; i < split.labeled.size(); ++i) {
    CHECK(loaded.labeled[i].features == split.labeled[i].features);
    CHECK(loaded.labeled[i].label == split.labeled[i].label);
  }
}

TEST_CASE("loading rejects labels out of range") {
  oracles::TempDir dir("data_badlabel");
  DataSplit split = generate_gaussian_dataset(basic_config());
  save_split(split, dir.str());
  // Corrupt one labeled row: label 7 with 3 classes.
  std::ifstream is(dir.path() / "labeled.ds");
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  auto pos = text.find("\n0 0 ");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "\n7 0 ");
  std::ofstream os(dir.path() / "labeled.ds");
  os << text;
  os.close();
  CHECK_THROWS_AS(load_split(dir.str()), IoError);
}

TEST_CASE("loading rejects truncated files") {
  oracles::TempDir dir("data_truncated");
  DataSplit split = generate_gaussian_dataset(basic_config());
  save_split(split, dir.str());
  std::ifstream is(dir.path() / "test.ds");
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  text.resize(text.size() / 2);
  std::ofstream os(dir.path() / "test.ds");
  os << text;
  os.close();
  CHECK_THROWS_AS(load_split(dir.str()), IoError);
}

TEST_CASE("loading rejects unknown format versions") {
  oracles::TempDir dir("data_version");
  DataSplit split = generate_gaussian_dataset(basic_config());
  save_split(split, dir.str());
  std::ofstream os(dir.path() / "labeled.ds");
  os << "selftrain-dataset v9\n";
  os.close();
  CHECK_THROWS_AS(load_split(dir.str()), IoError);
}

TEST_CASE("feature views never expose labels") {
  DataSplit split = generate_gaussian_dataset(basic_config());
  Matrix pool = features_of(split.unlabeled, split.feature_dim);
  CHECK(pool.rows() == split.unlabeled.size());
  CHECK(pool.cols() == static_cast<std::size_t>(split.feature_dim));
  CHECK_THROWS_AS(labels_of(split.unlabeled), InvalidArgumentError);
}
