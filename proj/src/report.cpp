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

#include "report.hpp"

#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace selftrain {

namespace {

void append_dataset(std::ostringstream& os, const DatasetSummary& d) {
  os << "dataset";
  if (d.from_path) os << " path=" << d.path;
  os << " classes=" << d.num_target_classes << " feature_dim=" << d.feature_dim
     << " labeled=" << d.labeled << " unlabeled=" << d.unlabeled
     << " validation=" << d.validation << " test=" << d.test;
  if (!d.from_path) {
    os << " spread=" << format_double(d.generator.spread)
       << " stddev=" << format_double(d.generator.stddev)
       << " seed=" << d.generator.seed;
    if (d.generator.num_nontarget_classes > 0) {
      os << " nontarget_classes=" << d.generator.num_nontarget_classes
         << " nontarget_fraction=" << format_double(d.generator.nontarget_fraction)
         << " nontarget_scale=" << format_double(d.generator.nontarget_scale);
    }
  }
  os << '\n';
}

void append_iteration(std::ostringstream& os, const IterationRecord& it) {
  os << "iteration " << it.iteration << " tau " << format_double(it.tau) << " ece_before "
     << format_double(it.ece_before) << " ece_after " << format_double(it.ece_after)
     << " entropy_threshold "
     << (it.entropy_selection ? format_double(it.entropy_threshold) : std::string("-"))
     << " n_accepted " << it.n_accepted;
  if (it.open_set_rejected >= 0) os << " open_set_rejected " << it.open_set_rejected;
  os << " pseudo_precision " << format_double(it.pseudo_precision) << " val_acc "
     << format_double(it.val_acc) << " test_acc " << format_double(it.test_acc) << '\n';
}

}  // namespace

void finalize_preset_result(PresetResult& result) {
  if (result.runs.empty()) throw InvalidArgumentError("finalize_preset_result: no runs");
  double n = static_cast<double>(result.runs.size());
  result.teacher_mean_val = 0.0;
  result.teacher_mean_test = 0.0;
  for (const RunRecord& run : result.runs) {
    result.teacher_mean_val += run.teacher.val_acc;
    result.teacher_mean_test += run.teacher.test_acc;
  }
  result.teacher_mean_val /= n;
  result.teacher_mean_test /= n;

  std::size_t iterations = result.runs[0].iterations.size();
  result.iteration_means.clear();
  result.best_mean_test = result.teacher_mean_test;
  result.best_mean_iteration = 0;
  for (std::size_t k = 0; k < iterations; ++k) {
    IterationMean m;
    m.iteration = static_cast<int>(k) + 1;
    for (const RunRecord& run : result.runs) {
      m.val_acc += run.iterations[k].val_acc;
      m.test_acc += run.iterations[k].test_acc;
      m.pseudo_precision += run.iterations[k].pseudo_precision;
    }
    m.val_acc /= n;
    m.test_acc /= n;
    m.pseudo_precision /= n;
    // max over student iterations; with zero iterations the teacher stands.
    if (k == 0 || m.test_acc > result.best_mean_test) {
      result.best_mean_test = m.test_acc;
      result.best_mean_iteration = m.iteration;
    }
    result.iteration_means.push_back(m);
  }
}

std::string format_report(const ExperimentResult& result) {
  std::ostringstream os;
  os << "selftrain-report v1\n";
  append_dataset(os, result.dataset);
  os << "seeds";
  for (std::uint64_t s : result.seeds) os << ' ' << s;
  os << '\n';

  for (const PresetResult& p : result.presets) {
    os << "preset " << p.name << '\n';
    os << "axes " << axes_string(p.pipeline) << '\n';
    os << "params " << params_string(p.pipeline, p.jitter_auto) << '\n';
    for (const RunRecord& run : p.runs) {
      os << "run seed " << run.seed << '\n';
      os << "teacher val_acc " << format_double(run.teacher.val_acc) << " test_acc "
         << format_double(run.teacher.test_acc) << '\n';
      for (const IterationRecord& it : run.iterations) append_iteration(os, it);
      os << "best iteration " << run.best_iteration << " val_acc "
         << format_double(run.best_val_acc) << " test_acc "
         << format_double(run.best_test_acc) << '\n';
    }
    os << "mean teacher val_acc " << format_double(p.teacher_mean_val) << " test_acc "
       << format_double(p.teacher_mean_test) << '\n';
    for (const IterationMean& m : p.iteration_means) {
      os << "mean iteration " << m.iteration << " val_acc " << format_double(m.val_acc)
         << " test_acc " << format_double(m.test_acc) << " pseudo_precision "
         << format_double(m.pseudo_precision) << '\n';
    }
    os << "best_mean_test " << format_double(p.best_mean_test) << " iteration "
       << p.best_mean_iteration << '\n';
  }

  if (result.presets.size() > 1) {
    os << "comparison\n";
    for (const PresetResult& p : result.presets) {
      os << "preset " << p.name << " teacher_test " << format_double(p.teacher_mean_test)
         << " best_mean_test " << format_double(p.best_mean_test) << '\n';
    }
  }
  os << "end\n";
  return os.str();
}

std::string format_sweep_report(const SweepResult& result) {
  std::ostringstream os;
  os << "selftrain-sweep v1\n";
  os << "preset " << result.preset_name << '\n';
  os << "axes " << axes_string(result.pipeline) << '\n';
  os << "axis " << result.axis << '\n';
  append_dataset(os, result.base_dataset);
  os << "seeds";
  for (std::uint64_t s : result.seeds) os << ' ' << s;
  os << '\n';
  os << "row teacher test_acc " << format_double(result.initial_teacher_test) << '\n';
  for (const SweepRow& row : result.rows) {
    os << "row " << row.value << " teacher_test " << format_double(row.teacher_mean_test)
       << " best_mean_test " << format_double(row.best_mean_test) << '\n';
  }
  os << "end\n";
  return os.str();
}

}  // namespace selftrain
