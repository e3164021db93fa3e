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

#include "experiment_config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

struct Entry {
  std::string value;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
  std::map<std::string, Section> sections;
  std::string origin;
};

RawConfig tokenize(const std::string& text, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '[') {
      if (sv.back() != ']' || sv.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(sv.substr(1, sv.size() - 2)));
      raw.sections[section];  // a section may legitimately be empty
      continue;
    }
    auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(sv.substr(0, eq)));
    std::string value(trim(sv.substr(eq + 1)));
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": key outside any section");
    }
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key or value");
    }
    if (!raw.sections[section].emplace(key, Entry{value}).second) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return raw;
}

class SectionReader {
 public:
  SectionReader(RawConfig& raw, const std::string& name) : origin_(raw.origin), name_(name) {
    auto it = raw.sections.find(name);
    section_ = it == raw.sections.end() ? nullptr : &it->second;
  }

  bool exists() const { return section_ != nullptr; }

  bool has(const std::string& key) const {
    return section_ && section_->count(key) > 0;
  }

  std::string get(const std::string& key) {
    auto it = section_->find(key);
    it->second.used = true;
    return it->second.value;
  }

  std::string require(const std::string& key) {
    if (!has(key)) {
      throw ConfigError(origin_ + ": [" + name_ + "] is missing required key '" + key + "'");
    }
    return get(key);
  }

  long get_long(const std::string& key) { return checked<long>(key, get(key)); }
  double get_double(const std::string& key) {
    std::string v = get(key);
    try {
      return parse_double(v);
    } catch (const IoError&) {
      throw ConfigError(origin_ + ": [" + name_ + "] " + key + ": not a number: '" + v + "'");
    }
  }
  bool get_bool(const std::string& key) {
    std::string v = get(key);
    if (v == "on" || v == "true") return true;
    if (v == "off" || v == "false") return false;
    throw ConfigError(origin_ + ": [" + name_ + "] " + key + ": expected on/off");
  }

  std::vector<std::string> get_list(const std::string& key) {
    std::string v = get(key);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
      auto comma = v.find(',', start);
      std::string item(trim(std::string_view(v).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (item.empty()) {
        throw ConfigError(origin_ + ": [" + name_ + "] " + key + ": empty list element");
      }
      out.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_) {
      if (!entry.used) {
        throw ConfigError(origin_ + ": [" + name_ + "] unknown key '" + key + "'");
      }
    }
  }

  ConfigError error(const std::string& what) const {
    return ConfigError(origin_ + ": [" + name_ + "] " + what);
  }

 private:
  template <typename T>
  T checked(const std::string& key, const std::string& v) {
    try {
      return static_cast<T>(parse_int(v));
    } catch (const IoError&) {
      throw ConfigError(origin_ + ": [" + name_ + "] " + key + ": not an integer: '" + v + "'");
    }
  }

  std::string origin_;
  std::string name_;
  Section* section_;
};

PseudoLabelForm parse_loss(SectionReader& r, const std::string& v) {
  if (v == "Hard") return PseudoLabelForm::kHard;
  if (v == "Soft") return PseudoLabelForm::kSoft;
  throw r.error("loss: expected Hard or Soft");
}
StudentInit parse_init(SectionReader& r, const std::string& v) {
  if (v == "FreshTrain") return StudentInit::kFreshTrain;
  if (v == "FineTune") return StudentInit::kFineTune;
  throw r.error("student_init: expected FreshTrain or FineTune");
}
Batching parse_batching(SectionReader& r, const std::string& v) {
  if (v == "Uniform") return Batching::kUniform;
  if (v == "SplitBatch") return Batching::kSplitBatch;
  throw r.error("batching: expected Uniform or SplitBatch");
}
SamplerKind parse_sampler(SectionReader& r, const std::string& v) {
  if (v == "Plain") return SamplerKind::kPlain;
  if (v == "NaiveClassBalance") return SamplerKind::kNaiveClassBalance;
  if (v == "WeightedSplitBatch") return SamplerKind::kWeightedSplitBatch;
  throw r.error("sampler: expected Plain, NaiveClassBalance or WeightedSplitBatch");
}
SelectionKind parse_selection(SectionReader& r, const std::string& v) {
  if (v == "NaiveSoftmax") return SelectionKind::kNaiveSoftmax;
  if (v == "CalibratedEntropy") return SelectionKind::kCalibratedEntropy;
  throw r.error("selection: expected NaiveSoftmax or CalibratedEntropy");
}
Sizing parse_sizing(SectionReader& r, const std::string& v) {
  if (v == "NSSmallTeacher") return Sizing::kNSSmallTeacher;
  if (v == "SameSizedSmall") return Sizing::kSameSizedSmall;
  if (v == "SameSizedLarge") return Sizing::kSameSizedLarge;
  throw r.error("sizing: expected NSSmallTeacher, SameSizedSmall or SameSizedLarge");
}

const char* loss_name(PseudoLabelForm v) {
  return v == PseudoLabelForm::kHard ? "Hard" : "Soft";
}
const char* init_name(StudentInit v) {
  return v == StudentInit::kFreshTrain ? "FreshTrain" : "FineTune";
}
const char* batching_name(Batching v) {
  return v == Batching::kUniform ? "Uniform" : "SplitBatch";
}
const char* sampler_name(SamplerKind v) {
  switch (v) {
    case SamplerKind::kPlain: return "Plain";
    case SamplerKind::kNaiveClassBalance: return "NaiveClassBalance";
    case SamplerKind::kWeightedSplitBatch: return "WeightedSplitBatch";
  }
  return "?";
}
const char* selection_name(SelectionKind v) {
  return v == SelectionKind::kNaiveSoftmax ? "NaiveSoftmax" : "CalibratedEntropy";
}
const char* sizing_name(Sizing v) {
  switch (v) {
    case Sizing::kNSSmallTeacher: return "NSSmallTeacher";
    case Sizing::kSameSizedSmall: return "SameSizedSmall";
    case Sizing::kSameSizedLarge: return "SameSizedLarge";
  }
  return "?";
}

}  // namespace

// The roadmap pairs: the left column is the NoisyStudent-style choice for
// that axis, the right column the enhanced one; choices from earlier
// experiments carry forward. Experiments 1-3 use the complete pseudo-labeled
// pool (accept-all via a zero softmax threshold, Plain sampler), matching the
// order the comparisons were run in.
PipelineConfig preset_pipeline(const std::string& name) {
  PipelineConfig c;
  auto set = [&](PseudoLabelForm loss, StudentInit init, Batching batching,
                 SamplerKind sampler, SelectionKind selection, double softmax_threshold,
                 Sizing sizing) {
    c.loss = loss;
    c.student_init = init;
    c.batching = batching;
    c.sampler = sampler;
    c.selection = selection;
    c.softmax_threshold = softmax_threshold;
    c.sizing = sizing;
  };
  using PF = PseudoLabelForm;
  using SI = StudentInit;
  using BA = Batching;
  using SK = SamplerKind;
  using SE = SelectionKind;
  using SZ = Sizing;
  if (name == "EST") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kWeightedSplitBatch,
        SE::kCalibratedEntropy, 0.5, SZ::kSameSizedLarge);
  } else if (name == "NS") {
    set(PF::kSoft, SI::kFreshTrain, BA::kUniform, SK::kNaiveClassBalance,
        SE::kNaiveSoftmax, 0.5, SZ::kNSSmallTeacher);
  } else if (name == "Exp1-left") {
    set(PF::kHard, SI::kFreshTrain, BA::kUniform, SK::kPlain, SE::kNaiveSoftmax, 0.0,
        SZ::kSameSizedSmall);
  } else if (name == "Exp1-right" || name == "Exp2-left") {
    set(PF::kSoft, SI::kFreshTrain, BA::kUniform, SK::kPlain, SE::kNaiveSoftmax, 0.0,
        SZ::kSameSizedSmall);
  } else if (name == "Exp2-right" || name == "Exp3-left") {
    set(PF::kSoft, SI::kFineTune, BA::kUniform, SK::kPlain, SE::kNaiveSoftmax, 0.0,
        SZ::kSameSizedSmall);
  } else if (name == "Exp3-right") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kPlain, SE::kNaiveSoftmax, 0.0,
        SZ::kSameSizedSmall);
  } else if (name == "Exp4-left" || name == "Exp5-left") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kNaiveClassBalance,
        SE::kNaiveSoftmax, 0.5, SZ::kSameSizedSmall);
  } else if (name == "Exp4-right") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kWeightedSplitBatch,
        SE::kNaiveSoftmax, 0.0, SZ::kSameSizedSmall);
  } else if (name == "Exp5-right") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kWeightedSplitBatch,
        SE::kCalibratedEntropy, 0.5, SZ::kSameSizedSmall);
  } else if (name == "Exp6-left") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kWeightedSplitBatch,
        SE::kCalibratedEntropy, 0.5, SZ::kNSSmallTeacher);
  } else if (name == "Exp6-right") {
    set(PF::kSoft, SI::kFineTune, BA::kSplitBatch, SK::kWeightedSplitBatch,
        SE::kCalibratedEntropy, 0.5, SZ::kSameSizedLarge);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"EST",       "NS",         "Exp1-left", "Exp1-right", "Exp2-left",
          "Exp2-right", "Exp3-left", "Exp3-right", "Exp4-left", "Exp4-right",
          "Exp5-left",  "Exp5-right", "Exp6-left", "Exp6-right"};
}

std::string axes_string(const PipelineConfig& c) {
  std::string selection = selection_name(c.selection);
  if (c.selection == SelectionKind::kNaiveSoftmax) {
    selection += "(" + format_double(c.softmax_threshold) + ")";
  }
  std::string open_set = "off";
  if (c.open_set_filter) {
    open_set = "on(";
    for (std::size_t i = 0; i < c.cdf_candidates.size(); ++i) {
      if (i) open_set += ",";
      open_set += format_double(c.cdf_candidates[i]);
    }
    open_set += ")";
  }
  return std::string("loss=") + loss_name(c.loss) +
         " student_init=" + init_name(c.student_init) +
         " batching=" + batching_name(c.batching) +
         " sampler=" + sampler_name(c.sampler) + " selection=" + selection +
         " sizing=" + sizing_name(c.sizing) + " open_set_filter=" + open_set;
}

std::string params_string(const PipelineConfig& c, bool jitter_auto) {
  std::string s;
  s += "iterations=" + std::to_string(c.num_student_iterations);
  s += " teacher_epochs=" + std::to_string(c.teacher_epochs);
  s += " student_epochs=" + std::to_string(c.student_epochs);
  s += " batch_size=" + std::to_string(c.batch_size);
  s += " labeled_fraction=" + format_double(c.labeled_fraction);
  s += " lambda_b=" + format_double(c.lambda_b);
  s += " learning_rate=" + format_double(c.learning_rate);
  s += " momentum=" + format_double(c.momentum);
  s += " weight_decay=" + format_double(c.weight_decay);
  s += " jitter_std=";
  s += jitter_auto ? "auto" : format_double(c.jitter_std);
  s += " per_class_count=";
  s += c.naive_per_class_count > 0 ? std::to_string(c.naive_per_class_count) : "auto";
  return s;
}

namespace {
ExperimentConfig parse_config_text_impl(const std::string& text, const std::string& origin);
}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return parse_config_text_impl(text, origin);
  } catch (const IoError& e) {
    // Number-parsing helpers throw IoError; inside a config it is a config defect.
    throw ConfigError(origin + ": " + e.what());
  }
}

namespace {
ExperimentConfig parse_config_text_impl(const std::string& text, const std::string& origin) {
  RawConfig raw = tokenize(text, origin);
  for (const auto& [name, _] : raw.sections) {
    if (name != "dataset" && name != "pipeline" && name != "sweep" && name != "output") {
      throw ConfigError(origin + ": unknown section '[" + name + "]'");
    }
  }

  ExperimentConfig cfg;

  SectionReader ds(raw, "dataset");
  if (!ds.exists()) throw ConfigError(origin + ": missing [dataset] section");
  if (ds.has("path")) {
    cfg.dataset_from_path = true;
    cfg.dataset_path = ds.get("path");
  } else {
    GeneratorConfig& g = cfg.generator;
    g.num_target_classes = static_cast<int>(parse_int(ds.require("classes")));
    g.feature_dim = static_cast<int>(parse_int(ds.require("feature_dim")));
    g.labeled = parse_int(ds.require("labeled"));
    g.unlabeled = parse_int(ds.require("unlabeled"));
    g.validation = parse_int(ds.require("validation"));
    g.test = parse_int(ds.require("test"));
    g.spread = parse_double(ds.require("spread"));
    g.stddev = parse_double(ds.require("stddev"));
    g.seed = parse_u64(ds.require("seed"));
    if (ds.has("nontarget_classes")) {
      g.num_nontarget_classes = static_cast<int>(ds.get_long("nontarget_classes"));
    }
    if (ds.has("nontarget_fraction")) g.nontarget_fraction = ds.get_double("nontarget_fraction");
    if (ds.has("nontarget_scale")) g.nontarget_scale = ds.get_double("nontarget_scale");
    if (ds.has("labeled_per_class")) {
      for (const std::string& item : ds.get_list("labeled_per_class")) {
        g.labeled_per_class.push_back(parse_int(item));
      }
    }
  }
  ds.reject_unknown();

  SectionReader pl(raw, "pipeline");
  if (!pl.exists()) throw ConfigError(origin + ": missing [pipeline] section");

  std::vector<std::string> preset_list;
  if (pl.has("preset")) {
    preset_list = pl.get_list("preset");
    static const std::set<std::string> axis_keys = {
        "loss", "student_init", "batching", "sampler", "selection", "sizing"};
    for (const std::string& key : axis_keys) {
      if (pl.has(key)) {
        throw pl.error("'" + key + "' cannot be combined with 'preset'");
      }
    }
  }

  PipelineConfig base;
  bool jitter_auto = true;
  if (preset_list.empty()) {
    if (pl.has("loss")) base.loss = parse_loss(pl, pl.get("loss"));
    if (pl.has("student_init")) base.student_init = parse_init(pl, pl.get("student_init"));
    if (pl.has("batching")) base.batching = parse_batching(pl, pl.get("batching"));
    if (pl.has("sampler")) base.sampler = parse_sampler(pl, pl.get("sampler"));
    if (pl.has("selection")) base.selection = parse_selection(pl, pl.get("selection"));
    if (pl.has("sizing")) base.sizing = parse_sizing(pl, pl.get("sizing"));
  }
  auto apply_knobs = [&](PipelineConfig& c) {
    if (pl.has("softmax_threshold")) c.softmax_threshold = pl.get_double("softmax_threshold");
    if (pl.has("open_set_filter")) c.open_set_filter = pl.get_bool("open_set_filter");
    if (pl.has("cdf_candidates")) {
      c.cdf_candidates.clear();
      for (const std::string& item : pl.get_list("cdf_candidates")) {
        c.cdf_candidates.push_back(parse_double(item));
      }
    }
    if (pl.has("iterations")) c.num_student_iterations = static_cast<int>(pl.get_long("iterations"));
    if (pl.has("teacher_epochs")) c.teacher_epochs = static_cast<int>(pl.get_long("teacher_epochs"));
    if (pl.has("student_epochs")) c.student_epochs = static_cast<int>(pl.get_long("student_epochs"));
    if (pl.has("batch_size")) c.batch_size = static_cast<int>(pl.get_long("batch_size"));
    if (pl.has("labeled_fraction")) c.labeled_fraction = pl.get_double("labeled_fraction");
    if (pl.has("lambda_b")) c.lambda_b = pl.get_double("lambda_b");
    if (pl.has("learning_rate")) c.learning_rate = pl.get_double("learning_rate");
    if (pl.has("momentum")) c.momentum = pl.get_double("momentum");
    if (pl.has("weight_decay")) c.weight_decay = pl.get_double("weight_decay");
    if (pl.has("jitter_std")) {
      std::string v = pl.get("jitter_std");
      if (v == "auto") {
        c.jitter_std = -1.0;
      } else {
        c.jitter_std = parse_double(v);
        jitter_auto = false;
      }
    }
    if (pl.has("per_class_count")) c.naive_per_class_count = pl.get_long("per_class_count");
  };

  if (preset_list.empty()) {
    apply_knobs(base);
    cfg.runs.push_back({"custom", base, jitter_auto});
  } else {
    for (const std::string& name : preset_list) {
      PipelineConfig c = preset_pipeline(name);
      apply_knobs(c);
      cfg.runs.push_back({name, c, jitter_auto});
    }
  }
  for (PresetRun& run : cfg.runs) validate_pipeline_config(run.pipeline);

  if (pl.has("seeds")) {
    cfg.seeds.clear();
    for (const std::string& item : pl.get_list("seeds")) cfg.seeds.push_back(parse_u64(item));
    if (cfg.seeds.empty()) throw pl.error("seeds: need at least one seed");
  }
  pl.reject_unknown();

  SectionReader sw(raw, "sweep");
  if (sw.exists()) {
    cfg.sweep.enabled = true;
    cfg.sweep.axis = sw.require("axis");
    if (cfg.sweep.axis != "unlabeled" && cfg.sweep.axis != "labeled") {
      throw sw.error("axis: expected 'unlabeled' or 'labeled'");
    }
    for (const std::string& item : sw.get_list("values")) {
      cfg.sweep.values.push_back(parse_int(item));
    }
    if (cfg.sweep.values.empty()) throw sw.error("values: need at least one value");
    for (std::size_t i = 1; i < cfg.sweep.values.size(); ++i) {
      if (cfg.sweep.values[i] <= cfg.sweep.values[i - 1]) {
        throw sw.error("values must be strictly ascending");
      }
    }
    if (cfg.dataset_from_path) {
      throw sw.error("sweeps need a generator [dataset] block, not a path");
    }
    sw.reject_unknown();
  }

  SectionReader out(raw, "output");
  if (out.exists()) {
    if (out.has("dir")) cfg.output.dir = out.get("dir");
    if (out.has("dump_roc")) cfg.output.dump_roc = out.get_bool("dump_roc");
    if (out.has("dump_weights")) cfg.output.dump_weights = out.get_bool("dump_weights");
    if (out.has("dump_openset")) cfg.output.dump_openset = out.get_bool("dump_openset");
    if (out.has("save_checkpoints")) cfg.output.save_checkpoints = out.get_bool("save_checkpoints");
    out.reject_unknown();
  }
  return cfg;
}
}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace selftrain
