// Copyright 2026 The qkinfer Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qkinfer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct InferArgs {
  std::filesystem::path dataset;
  std::optional<std::string> x;
  std::string strategy = "all-at-once-qae";
  double epsilon = 0.05;
  double delta = 1.0 / 3.0;
  std::uint64_t seed = 0;
  std::string backend = "analytic2d";
  bool qae_inner = false;
};

struct BenchmarkArgs {
  std::filesystem::path dataset;
  std::optional<std::string> x;
  std::string strategy = "all";
  std::string epsilons = "0.1,0.05,0.025,0.0125";
  double delta = 1.0 / 3.0;
  std::size_t trials = 2;
  std::uint64_t seed = 0;
  std::filesystem::path out = "bench_out";
  std::string backend = "analytic2d";
};

struct RecommendArgs {
  std::optional<std::filesystem::path> dataset;
  std::optional<std::uint64_t> G;
  std::optional<std::size_t> N;
  std::optional<std::size_t> n;
  std::optional<std::string> alpha;
  double epsilon = 0.05;
  std::string criterion = "both";
};

struct ValidateArgs {
  std::string level = "fast";
  std::filesystem::path data_dir;
  std::filesystem::path scratch_dir;
  std::optional<std::string> criteria;
  std::uint64_t seed = 2026;
};

struct GenerateArgs {
  std::string family = "angle_ry_cz";
  std::size_t num_qubits = 3;
  std::size_t num_layers = 2;
  std::size_t num_terms = 8;
  std::size_t num_test_inputs = 4;
  std::uint64_t seed = 1;
  bool uniform = false;
  std::string name;
  std::filesystem::path out;
};

/// Each command prints to `out`, reports problems on `err` and returns an
/// exit code: 0 success, 1 runtime failure, 2 usage or parse error.
int cmd_infer(const InferArgs& args, std::ostream& out, std::ostream& err);
int cmd_benchmark(const BenchmarkArgs& args, std::ostream& out, std::ostream& err);
int cmd_recommend(const RecommendArgs& args, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);
int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, char** argv);

/// Strategy names as accepted on the command line, comma separated.
std::string strategy_list_help();

}  // namespace qkinfer::cli
