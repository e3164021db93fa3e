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

// Thin command-line front end over the selftrain C API. Exit codes:
// 0 success, 1 usage, 2 config error, 3 I/O error, 4 runtime error.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "selftrain/selftrain.h"

namespace {

int exit_code_for(selftrain_status status) {
  switch (status) {
    case SELFTRAIN_OK: return 0;
    case SELFTRAIN_ERR_INVALID_ARGUMENT: return 2;
    case SELFTRAIN_ERR_CONFIG: return 2;
    case SELFTRAIN_ERR_IO: return 3;
    case SELFTRAIN_ERR_RUNTIME: return 4;
  }
  return 4;
}

int fail(selftrain_status status) {
  std::fprintf(stderr, "error: %s\n", selftrain_last_error());
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selftrain: self-training experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed_override = -1;
  int parallel = 1;

  auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
    cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    if (with_run_flags) {
      cmd->add_option("--seed-override", seed_override,
                      "replace the config's seed list with this single seed");
      cmd->add_option("--parallel", parallel, "number of concurrent runs")
          ->check(CLI::PositiveNumber);
    }
  };

  CLI::App* generate = app.add_subcommand("generate", "write dataset partition files");
  add_common(generate, false);
  CLI::App* run = app.add_subcommand("run", "run the configured experiment presets");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run the configured dataset-size sweep");
  add_common(sweep, true);

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    long long counts[4] = {0, 0, 0, 0};
    selftrain_status status =
        selftrain_generate(config_path.c_str(), out_dir.c_str(), counts);
    if (status != SELFTRAIN_OK) return fail(status);
    std::printf("labeled %lld\nunlabeled %lld\nvalidation %lld\ntest %lld\n", counts[0],
                counts[1], counts[2], counts[3]);
    return 0;
  }

  char* report_path = nullptr;
  selftrain_status status;
  if (run->parsed()) {
    status = selftrain_run(config_path.c_str(), out_dir.c_str(), seed_override, parallel,
                           &report_path);
  } else {
    status = selftrain_sweep(config_path.c_str(), out_dir.c_str(), seed_override, parallel,
                             &report_path);
  }
  if (status != SELFTRAIN_OK) return fail(status);
  std::printf("report %s\n", report_path);
  selftrain_string_free(report_path);
  return 0;
}
