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

#ifndef SELFTRAIN_RUNNER_HPP_
#define SELFTRAIN_RUNNER_HPP_

#include <string>

#include "experiment_config.hpp"
#include "report.hpp"

namespace selftrain {

// Runs every (preset x seed) combination; `parallel` > 1 distributes the runs
// over that many threads (results are assembled in order, so the output is
// independent of the thread count). Audit dumps are written only when
// `out_dir` is non-empty.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir = "", int parallel = 1);

SweepResult run_sweep(const ExperimentConfig& config, int parallel = 1);

struct GeneratedInfo {
  std::string dir;
  long labeled = 0;
  long unlabeled = 0;
  long validation = 0;
  long test = 0;
};

// Config-file entry points behind the CLI / C API. `out_dir` overrides the
// config's [output] dir when non-empty; `seed_override` >= 0 replaces the
// seed list with that single seed.
GeneratedInfo generate_command(const std::string& config_path, const std::string& out_dir);
std::string run_command(const std::string& config_path, const std::string& out_dir,
                        long long seed_override, int parallel);
std::string sweep_command(const std::string& config_path, const std::string& out_dir,
                          long long seed_override, int parallel);

}  // namespace selftrain

#endif  // SELFTRAIN_RUNNER_HPP_
