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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qkinfer/cli/commands.hpp"
#include "qkinfer/cli/dataset.hpp"
#include "qkinfer/cli/validation.hpp"
#include "qkinfer/errors.hpp"
#include "qkinfer/harness.hpp"

namespace qkinfer::cli {
namespace {

const std::filesystem::path kData = QKINFER_TEST_DATA_DIR;
const std::filesystem::path kGolden = QKINFER_GOLDEN_DIR;

std::filesystem::path fixture(const char* name) { return kData / "fixtures" / name; }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qkinfer_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double field(const std::string& report, const std::string& key) {
  const auto at = report.find(key + ": ");
  if (at == std::string::npos) throw std::runtime_error("missing " + key);
  return std::stod(report.substr(at + key.size() + 2));
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "qkinfer");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
  const std::string out = testing::internal::GetCapturedStdout();
  (void)testing::internal::GetCapturedStderr();
  if (out_text) *out_text = out;
  return rc;
}

TEST(Dataset, FixturesLoadAndRoundTrip) {
  for (const char* name : {"default_n3_N8.json", "random_n2_N4_seed7.json", "identity_N3.json"}) {
    const DatasetFile d = load_dataset(fixture(name));
    EXPECT_EQ(parse_dataset(dump_dataset(d)), d) << name;
  }
}

TEST(Dataset, MalformedInputsThrowFormatError) {
  EXPECT_THROW(parse_dataset("{"), FormatError);
  EXPECT_THROW(parse_dataset(slurp(kGolden / "malformed.json")), FormatError);
  EXPECT_THROW(load_dataset("/nonexistent/qkinfer.json"), std::exception);
}

TEST(Dataset, GeneratorIsDeterministic) {
  GeneratorOptions o;
  o.seed = 99;
  EXPECT_EQ(generate_dataset(o), generate_dataset(o));
  o.heavy_tailed = false;
  const auto d = generate_dataset(o);
  EXPECT_EQ(d.alpha.size(), o.num_terms);
  EXPECT_EQ(d.test_inputs.size(), o.num_test_inputs);
}

TEST(Dataset, ParseRealList) {
  EXPECT_EQ(parse_real_list("0.1,2,-3e-1"), (std::vector<double>{0.1, 2.0, -0.3}));
  EXPECT_THROW(parse_real_list("0.1,,2"), FormatError);
  EXPECT_THROW(parse_real_list("x"), FormatError);
}

TEST(Infer, IdentityFixtureGivesTheCoefficientSum) {
  const DatasetFile d = load_dataset(fixture("identity_N3.json"));
  double sum = 0.0;
  for (double a : d.alpha) sum += a;
  for (const char* s : {"all-at-once-qae", "list-sum-adaptive-sampling", "sample-average"}) {
    std::string out;
    ASSERT_EQ(run({"infer", "--dataset", fixture("identity_N3.json").string(), "--strategy", s,
                   "--epsilon", "0.05", "--seed", "3"},
                  &out),
              kExitOk);
    EXPECT_NEAR(field(out, "estimate"), sum, 0.05) << s;
    EXPECT_NEAR(field(out, "exact"), sum, 1e-12);
  }
}

TEST(Infer, DeterministicGivenFlags) {
  const std::vector<std::string> args{"infer", "--dataset", fixture("default_n3_N8.json").string(),
                                      "--strategy", "all", "--seed", "9"};
  std::string a, b;
  ASSERT_EQ(run(args, &a), kExitOk);
  ASSERT_EQ(run(args, &b), kExitOk);
  EXPECT_EQ(a, b);
}

TEST(Infer, ExitCodes) {
  EXPECT_EQ(run({"infer", "--dataset", (kGolden / "malformed.json").string()}), kExitUsage);
  EXPECT_EQ(run({"infer", "--dataset", fixture("identity_N3.json").string(), "--strategy", "bogus"}),
            kExitUsage);
  EXPECT_EQ(run({"infer", "--dataset", fixture("identity_N3.json").string(), "--epsilon", "0"}),
            kExitUsage);
  EXPECT_EQ(run({"infer"}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
}

TEST(Benchmark, RowCountAndFiles) {
  const auto dir = scratch("bench_rows");
  std::string out;
  ASSERT_EQ(run({"benchmark", "--dataset", fixture("random_n2_N4_seed7.json").string(), "--strategy",
                 "all-at-once-sampling", "--epsilons", "0.1,0.05", "--trials", "2", "--out", dir.string()},
                &out),
            kExitOk);
  EXPECT_EQ(parse_csv(slurp(dir / "results.csv")).size(), 4u);
  EXPECT_TRUE(std::filesystem::exists(dir / "plotdata.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Benchmark, RerunIsByteIdentical) {
  const auto a = scratch("bench_a"), b = scratch("bench_b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(run({"benchmark", "--dataset", fixture("default_n3_N8.json").string(), "--epsilons",
                   "0.1,0.05", "--trials", "2", "--seed", "5", "--out", dir.string()}),
              kExitOk);
  }
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "plotdata.csv"), slurp(b / "plotdata.csv"));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Recommend, MarksBothWinners) {
  std::string out;
  ASSERT_EQ(run({"recommend", "--dataset", fixture("default_n3_N8.json").string()}, &out), kExitOk);
  const auto q = out.find("ranking by queries");
  const auto g = out.find("ranking by gates");
  ASSERT_NE(q, std::string::npos);
  ASSERT_NE(g, std::string::npos);
  const std::string queries = out.substr(q, g - q), gates = out.substr(g);
  EXPECT_NE(queries.find("1    all-at-once-qae"), std::string::npos);
  EXPECT_NE(gates.find("1    list-sum-adaptive-qae"), std::string::npos);
  EXPECT_NE(queries.find("★"), std::string::npos);
  EXPECT_NE(gates.find("⋄"), std::string::npos);
}

TEST(Recommend, RawParameters) {
  std::string out;
  EXPECT_EQ(run({"recommend", "--G", "12", "--n", "3", "--alpha", "0.5,-1,0.25", "--criterion", "gates"},
                &out),
            kExitOk);
  EXPECT_NE(out.find("list-sum-adaptive-qae"), std::string::npos);
  EXPECT_EQ(out.find("ranking by queries"), std::string::npos);
  EXPECT_EQ(run({"recommend", "--G", "12"}), kExitUsage);
  EXPECT_EQ(run({"recommend", "--G", "12", "--n", "3", "--alpha", "1,2", "--N", "3"}), kExitUsage);
}

TEST(Validate, FastLevelPasses) {
  std::string out;
  EXPECT_EQ(run({"validate", "fast", "--data-dir", kData.string(), "--out", scratch("val").string()}, &out),
            kExitOk);
  EXPECT_NE(out.find("all criteria passed"), std::string::npos);
}

TEST(Validate, UnknownLevelIsAUsageError) {
  EXPECT_EQ(run({"validate", "thorough", "--data-dir", kData.string()}), kExitUsage);
  EXPECT_THROW(criteria_for_level("thorough"), std::invalid_argument);
}

TEST(Validate, LevelsSelectCriteria) {
  EXPECT_EQ(criteria_for_level("fast"), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(criteria_for_level("full").size(), static_cast<std::size_t>(kNumCriteria));
}

TEST(Help, ListsEveryStrategyName) {
  const std::string help = strategy_list_help();
  for (StrategyId id : kAllStrategies) EXPECT_NE(help.find(strategy_name(id)), std::string::npos);
}

TEST(Generate, WritesALoadableFile) {
  const auto dir = scratch("gen");
  std::filesystem::create_directories(dir);
  ASSERT_EQ(run({"generate", "--n", "2", "--N", "5", "--seed", "4", "--out", (dir / "d.json").string()}),
            kExitOk);
  EXPECT_EQ(load_dataset(dir / "d.json").alpha.size(), 5u);
  EXPECT_EQ(run({"generate", "--family", "zz"}), kExitUsage);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qkinfer::cli
