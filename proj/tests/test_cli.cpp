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

// Drives the installed CLI binary (argv[1]) and checks that it is a thin
// shell: the same config through the library produces byte-identical output.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "runner.hpp"

namespace {

int g_failures = 0;

#define CLI_CHECK(cond)                                                      \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++g_failures;                                                          \
    }                                                                        \
  } while (0)

const char* kConfig = R"(
[dataset]
classes = 3
feature_dim = 4
labeled = 30
unlabeled = 150
validation = 45
test = 60
spread = 1.7
stddev = 1.0
seed = 31

[pipeline]
preset = EST,NS
seeds = 5,6
teacher_epochs = 25
student_epochs = 6
iterations = 1
)";

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& binary, const std::string& args) {
  std::string command = binary + " " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-selftrain-binary>\n");
    return 2;
  }
  std::string cli = argv[1];
  oracles::TempDir dir("cli_equiv");
  std::string config_path = (dir.path() / "exp.cfg").string();
  {
    std::ofstream os(config_path);
    os << kConfig;
  }

  // library path
  std::string lib_out = (dir.path() / "lib").string();
  selftrain::run_command(config_path, lib_out, -1, 1);

  // CLI path
  std::string cli_out = (dir.path() / "cli").string();
  int code = run_cli(cli, "run --config " + config_path + " --out " + cli_out);
  CLI_CHECK(code == 0);
  CLI_CHECK(slurp(cli_out + "/report.txt") == slurp(lib_out + "/report.txt"));
  CLI_CHECK(!slurp(cli_out + "/report.txt").empty());

  // generate through both paths
  std::string lib_gen = (dir.path() / "libgen").string();
  selftrain::generate_command(config_path, lib_gen);
  std::string cli_gen = (dir.path() / "cligen").string();
  code = run_cli(cli, "generate --config " + config_path + " --out " + cli_gen);
  CLI_CHECK(code == 0);
  for (const char* name : {"labeled.ds", "unlabeled.ds", "validation.ds", "test.ds"}) {
    CLI_CHECK(slurp(cli_gen + "/" + name) == slurp(lib_gen + "/" + name));
  }

  // exit codes: usage, config error, I/O error
  CLI_CHECK(run_cli(cli, "run") != 0);  // missing required --config
  std::string bad_config = (dir.path() / "bad.cfg").string();
  {
    std::ofstream os(bad_config);
    os << "[dataset]\nclasses = banana\n";
  }
  CLI_CHECK(run_cli(cli, "run --config " + bad_config + " --out " + cli_out) == 2);
  CLI_CHECK(run_cli(cli, "run --config /nonexistent.cfg --out " + cli_out) == 3);

  // --seed-override and --parallel keep CLI/library equivalence
  std::string lib_seed = (dir.path() / "libseed").string();
  selftrain::run_command(config_path, lib_seed, 99, 1);
  std::string cli_seed = (dir.path() / "cliseed").string();
  code = run_cli(cli, "run --config " + config_path + " --out " + cli_seed +
                          " --seed-override 99 --parallel 2");
  CLI_CHECK(code == 0);
  CLI_CHECK(slurp(cli_seed + "/report.txt") == slurp(lib_seed + "/report.txt"));

  if (g_failures == 0) {
    std::printf("test_cli: all checks passed\n");
    return 0;
  }
  std::fprintf(stderr, "test_cli: %d check(s) failed\n", g_failures);
  return 1;
}
