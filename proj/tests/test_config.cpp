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
#include <string>

#include "doctest.h"
#include "errors.hpp"
#include "experiment_config.hpp"

using namespace selftrain;

namespace {

const char* kBasicConfig = R"(
# synthetic benchmark
[dataset]
classes = 4
feature_dim = 8
labeled = 100
unlabeled = 4000
validation = 200
test = 1000
spread = 2.2
stddev = 1.0
seed = 11

[pipeline]
preset = EST
seeds = 101,202,303
teacher_epochs = 120
student_epochs = 60

[output]
dir = out
)";

}  // namespace

TEST_CASE("a basic config parses with presets and knobs applied") {
  ExperimentConfig cfg = parse_config_text(kBasicConfig, "basic");
  CHECK_FALSE(cfg.dataset_from_path);
  CHECK(cfg.generator.num_target_classes == 4);
  CHECK(cfg.generator.unlabeled == 4000);
  CHECK(cfg.generator.seed == 11);
  REQUIRE(cfg.runs.size() == 1);
  CHECK(cfg.runs[0].name == "EST");
  CHECK(cfg.runs[0].pipeline.teacher_epochs == 120);
  CHECK(cfg.runs[0].pipeline.student_epochs == 60);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{101, 202, 303});
  CHECK(cfg.output.dir == "out");
  CHECK_FALSE(cfg.sweep.enabled);
}

TEST_CASE("the EST preset carries the final-model axis choices") {
  PipelineConfig est = preset_pipeline("EST");
  CHECK(est.loss == PseudoLabelForm::kSoft);
  CHECK(est.student_init == StudentInit::kFineTune);
  CHECK(est.batching == Batching::kSplitBatch);
  CHECK(est.sampler == SamplerKind::kWeightedSplitBatch);
  CHECK(est.selection == SelectionKind::kCalibratedEntropy);
  CHECK(est.sizing == Sizing::kSameSizedLarge);
}

TEST_CASE("the NS preset is the NoisyStudent baseline with threshold 0.5") {
  PipelineConfig ns = preset_pipeline("NS");
  CHECK(ns.loss == PseudoLabelForm::kSoft);
  CHECK(ns.student_init == StudentInit::kFreshTrain);
  CHECK(ns.batching == Batching::kUniform);
  CHECK(ns.sampler == SamplerKind::kNaiveClassBalance);
  CHECK(ns.selection == SelectionKind::kNaiveSoftmax);
  CHECK(ns.softmax_threshold == 0.5);
  CHECK(ns.sizing == Sizing::kNSSmallTeacher);
}

TEST_CASE("roadmap presets exist in left/right pairs and validate") {
  for (const std::string& name : preset_names()) {
    PipelineConfig cfg = preset_pipeline(name);
    CHECK_NOTHROW(validate_pipeline_config(cfg));
  }
  // Exps 1-3 train on the complete pseudo-labeled pool
  CHECK(preset_pipeline("Exp1-left").softmax_threshold == 0.0);
  CHECK(preset_pipeline("Exp1-left").loss == PseudoLabelForm::kHard);
  CHECK(preset_pipeline("Exp3-right").batching == Batching::kSplitBatch);
  CHECK(preset_pipeline("Exp3-right").sampler == SamplerKind::kPlain);
  CHECK(preset_pipeline("Exp4-left").sampler == SamplerKind::kNaiveClassBalance);
  CHECK(preset_pipeline("Exp6-left").sizing == Sizing::kNSSmallTeacher);
  CHECK_THROWS_AS(preset_pipeline("Exp7-left"), ConfigError);
}

TEST_CASE("multiple presets expand into multiple runs") {
  std::string text = kBasicConfig;
  text.replace(text.find("preset = EST"), 12, "preset = EST,NS");
  ExperimentConfig cfg = parse_config_text(text, "multi");
  REQUIRE(cfg.runs.size() == 2);
  CHECK(cfg.runs[0].name == "EST");
  CHECK(cfg.runs[1].name == "NS");
  CHECK(cfg.runs[1].pipeline.teacher_epochs == 120);
}

TEST_CASE("explicit axes work without a preset") {
  std::string text = R"(
[dataset]
classes = 3
feature_dim = 4
labeled = 30
unlabeled = 300
validation = 30
test = 60
spread = 2.0
stddev = 1.0
seed = 5

[pipeline]
loss = Hard
student_init = FreshTrain
batching = Uniform
sampler = Plain
selection = NaiveSoftmax
softmax_threshold = 0.3
sizing = SameSizedSmall
)";
  ExperimentConfig cfg = parse_config_text(text, "axes");
  REQUIRE(cfg.runs.size() == 1);
  CHECK(cfg.runs[0].name == "custom");
  CHECK(cfg.runs[0].pipeline.loss == PseudoLabelForm::kHard);
  CHECK(cfg.runs[0].pipeline.softmax_threshold == 0.3);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{101, 202, 303});  // default
}

TEST_CASE("presets and explicit axes are mutually exclusive") {
  std::string text = kBasicConfig;
  text.insert(text.find("[output]"), "loss = Hard\n");
  CHECK_THROWS_AS(parse_config_text(text, "conflict"), ConfigError);
}

TEST_CASE("unknown keys and sections are rejected") {
  std::string text = kBasicConfig;
  text.insert(text.find("[pipeline]"), "mystery = 1\n");
  CHECK_THROWS_AS(parse_config_text(text, "unknown-key"), ConfigError);

  std::string text2 = kBasicConfig;
  text2 += "\n[extras]\nfoo = 1\n";
  CHECK_THROWS_AS(parse_config_text(text2, "unknown-section"), ConfigError);

  std::string text3 = kBasicConfig;
  text3 += "\n[pipeline]\n";  // duplicate section is fine, duplicate keys are not
  text3.insert(text3.find("[output]"), "seeds = 1\n");
  CHECK_THROWS_AS(parse_config_text(text3, "dup"), ConfigError);
}

TEST_CASE("malformed values give config errors") {
  std::string text = kBasicConfig;
  text.replace(text.find("unlabeled = 4000"), 16, "unlabeled = many");
  CHECK_THROWS_AS(parse_config_text(text, "badint"), ConfigError);

  std::string text2 = kBasicConfig;
  text2.replace(text2.find("preset = EST"), 12, "preset = BEST");
  CHECK_THROWS_AS(parse_config_text(text2, "badpreset"), ConfigError);
}

TEST_CASE("sweep section parses and validates ordering") {
  std::string text = kBasicConfig;
  text += "\n[sweep]\naxis = unlabeled\nvalues = 500,1000,2000,4000\n";
  ExperimentConfig cfg = parse_config_text(text, "sweep");
  CHECK(cfg.sweep.enabled);
  CHECK(cfg.sweep.axis == "unlabeled");
  CHECK(cfg.sweep.values == std::vector<long>{500, 1000, 2000, 4000});

  std::string bad = kBasicConfig;
  bad += "\n[sweep]\naxis = unlabeled\nvalues = 1000,500\n";
  CHECK_THROWS_AS(parse_config_text(bad, "sweep-desc"), ConfigError);

  std::string bad_axis = kBasicConfig;
  bad_axis += "\n[sweep]\naxis = epochs\nvalues = 1,2\n";
  CHECK_THROWS_AS(parse_config_text(bad_axis, "sweep-axis"), ConfigError);
}

TEST_CASE("dataset path replaces the generator block") {
  std::string text = R"(
[dataset]
path = /tmp/somewhere

[pipeline]
preset = NS
)";
  ExperimentConfig cfg = parse_config_text(text, "path");
  CHECK(cfg.dataset_from_path);
  CHECK(cfg.dataset_path == "/tmp/somewhere");
}

TEST_CASE("axes strings expand every axis explicitly") {
  std::string est = axes_string(preset_pipeline("EST"));
  CHECK(est.find("loss=Soft") != std::string::npos);
  CHECK(est.find("student_init=FineTune") != std::string::npos);
  CHECK(est.find("batching=SplitBatch") != std::string::npos);
  CHECK(est.find("sampler=WeightedSplitBatch") != std::string::npos);
  CHECK(est.find("selection=CalibratedEntropy") != std::string::npos);
  CHECK(est.find("sizing=SameSizedLarge") != std::string::npos);
  CHECK(est.find("open_set_filter=off") != std::string::npos);

  std::string ns = axes_string(preset_pipeline("NS"));
  CHECK(ns.find("selection=NaiveSoftmax(0.5)") != std::string::npos);
}

TEST_CASE("labeled_per_class list parses into the generator") {
  std::string text = R"(
[dataset]
classes = 3
feature_dim = 4
labeled = 60
unlabeled = 100
validation = 30
test = 30
spread = 2.0
stddev = 1.0
seed = 5
labeled_per_class = 10,20,30

[pipeline]
preset = NS
)";
  ExperimentConfig cfg = parse_config_text(text, "perclass");
  CHECK(cfg.generator.labeled_per_class == std::vector<long>{10, 20, 30});
}
