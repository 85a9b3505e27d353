//
// Copyright 2026 The ptrdp Authors
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
//

#include "ptrdp/cli.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "ptrdp/distributions.h"

namespace ptrdp {
namespace {

const std::string kL = absl::StrFormat(
    "%.17g", 1.0 / (std::exp(1.0) * std::sqrt(2 * std::numbers::pi)));
const std::string kR = absl::StrFormat("%.17g", std::numbers::sqrt2);

absl::StatusOr<Sample> IngestText(const std::string& text, InputFormat format,
                                  std::string* diagnostics = nullptr) {
  std::istringstream in(text);
  std::ostringstream diag;
  absl::StatusOr<Sample> s = IngestStream(in, format, diag);
  if (diagnostics != nullptr) *diagnostics = diag.str();
  return s;
}

std::string WriteFile(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + "/" + name;
  std::ofstream(path) << text;
  return path;
}

std::string NormalCsv(const std::string& name, std::size_t n,
                      std::uint64_t seed) {
  const DistributionSpec spec = *DistributionSpec::Normal(0, 1);
  NoiseSource source(seed, 0);
  const Sample s = *Generate(spec, n, source);
  std::string text = "value\n";
  for (double v : s.values()) text += absl::StrFormat("%.17g\n", v);
  return WriteFile(name, text);
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ptrdp");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code =
      RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(IngestTest, ValueColumn) {
  absl::StatusOr<Sample> s = IngestText("value\n1\n2\n3\n", InputFormat::kCsv);
  ASSERT_TRUE(s.ok());
  ASSERT_EQ(s->size(), 3u);
  EXPECT_EQ(s->values()[0], 1);
  EXPECT_EQ(s->values()[2], 3);
}

TEST(IngestTest, ParseErrorCarriesLine) {
  absl::StatusOr<Sample> s = IngestText("value\nabc\n", InputFormat::kCsv);
  EXPECT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("parse error at line 2"),
            std::string::npos)
      << s.status();
}

TEST(IngestTest, NonFiniteCarriesLine) {
  absl::StatusOr<Sample> s = IngestText("1\n2\nnan\n", InputFormat::kCsv);
  EXPECT_NE(s.status().message().find("non-finite value at line 3"),
            std::string::npos)
      << s.status();
  s = IngestText("value\n1e999\n", InputFormat::kCsv);
  EXPECT_NE(s.status().message().find("non-finite value at line 2"),
            std::string::npos)
      << s.status();
}

TEST(IngestTest, EmptyInput) {
  EXPECT_NE(IngestText("value\n", InputFormat::kCsv)
                .status()
                .message()
                .find("empty input"),
            std::string::npos);
  EXPECT_FALSE(IngestText("", InputFormat::kJsonLines).ok());
}

TEST(IngestTest, HeaderlessAndMultiColumn) {
  absl::StatusOr<Sample> s = IngestText("4\n5\n\n6\n", InputFormat::kCsv);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->size(), 3u);
  s = IngestText("id,value,tag\n1,0.5,a\n2,1.5,b\n", InputFormat::kCsv);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->values()[1], 1.5);
  EXPECT_FALSE(IngestText("id,tag\n1,a\n", InputFormat::kCsv).ok());
  EXPECT_NE(IngestText("id,value\n1,2\n3\n", InputFormat::kCsv)
                .status()
                .message()
                .find("line 3"),
            std::string::npos);
}

TEST(IngestTest, JsonLines) {
  std::string diag;
  absl::StatusOr<Sample> s =
      IngestText("1.5\n{\"value\": -2}\n\n3\n", InputFormat::kJsonLines, &diag);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->size(), 3u);
  EXPECT_EQ(s->values()[1], -2);
  EXPECT_NE(diag.find("3 values"), std::string::npos);
  EXPECT_NE(IngestText("1\n\"x\"\n", InputFormat::kJsonLines)
                .status()
                .message()
                .find("line 2"),
            std::string::npos);
}

TEST(IngestTest, FormatFromExtension) {
  EXPECT_EQ(InferInputFormat("a.jsonl"), InputFormat::kJsonLines);
  EXPECT_EQ(InferInputFormat("a.ndjson"), InputFormat::kJsonLines);
  EXPECT_EQ(InferInputFormat("a.csv"), InputFormat::kCsv);
  EXPECT_EQ(InferInputFormat("a"), InputFormat::kCsv);
}

std::vector<std::string> MedianArgs(const std::string& input) {
  return {"median", "--epsilon", "1", "--delta", "0.05", "--tau", "0.05",
          "--r", kR, "--L", kL, "--input", input, "--seed", "11"};
}

TEST(CliMedianTest, ReplyIsDeterministic) {
  const std::string input = NormalCsv("normal10k.csv", 10000, 1);
  CliRun a = Cli(MedianArgs(input));
  CliRun b = Cli(MedianArgs(input));
  ASSERT_TRUE(a.code == kExitOk || a.code == kExitNoReply) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
  nlohmann::json doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["command"], "median");
  EXPECT_EQ(doc["seed"], 11);
  EXPECT_NEAR(doc["eta"].get<double>(), 0.043035944051281194, 1e-15);
  EXPECT_NEAR(doc["bound"]["total"].get<double>(), 0.3891301102486394, 1e-13);
  EXPECT_NE(a.err.find("ingested 10000 values"), std::string::npos);
}

TEST(CliMedianTest, SmallSampleExitsTwoWithRequiredN) {
  const std::string input = NormalCsv("normal100.csv", 100, 2);
  CliRun r = Cli(MedianArgs(input));
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("required n >= 236"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliMedianTest, NoReplyExitsThreeWithoutLeak) {
  std::string text = "value\n";
  for (int i = 0; i < 1000; ++i) text += absl::StrFormat("%d.71828\n", i);
  const std::string input = WriteFile("spread.csv", text);
  CliRun r = Cli(MedianArgs(input));
  EXPECT_EQ(r.code, kExitNoReply) << r.err;
  nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["result"], "no_reply");
  // Every data value ends in .71828; none may surface.
  EXPECT_EQ(r.out.find("71828"), std::string::npos);
  EXPECT_EQ(r.err.find("71828"), std::string::npos);
}

TEST(CliMedianTest, FlagsValidatedBeforeIngestion) {
  std::vector<std::string> args = MedianArgs("/nonexistent/file.csv");
  args[2] = "-1";  // --epsilon
  EXPECT_EQ(Cli(args).code, kExitValidation);
  args = MedianArgs("/nonexistent/file.csv");
  args[10] = "0.9";  // --L, r * L > 1/2
  EXPECT_EQ(Cli(args).code, kExitValidation);
  args = MedianArgs("/nonexistent/file.csv");
  args[6] = "1.5";  // --tau
  EXPECT_EQ(Cli(args).code, kExitValidation);
  EXPECT_EQ(Cli(MedianArgs("/nonexistent/file.csv")).code, kExitInputError);
}

TEST(CliMedianTest, MissingCalibrationFlagIsUsageError) {
  CliRun r = Cli({"median", "--epsilon", "1", "--delta", "0.05", "--tau", "0.05",
               "--input", "x.csv"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(Cli({"bogus"}).code, kExitValidation);
}

TEST(CliMedianTest, ParseErrorExitsOne) {
  const std::string input = WriteFile("bad.csv", "value\n1\nabc\n");
  CliRun r = Cli(MedianArgs(input));
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(CliMedianTest, CsvOutputAndOutFile) {
  const std::string input = NormalCsv("normal5k.csv", 5000, 3);
  std::vector<std::string> args = MedianArgs(input);
  const std::string out = testing::TempDir() + "/median_out.csv";
  args.insert(args.end(), {"--format", "csv", "--out", out});
  CliRun r = Cli(args);
  ASSERT_TRUE(r.code == kExitOk || r.code == kExitNoReply) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "series,x,quantile_or_rate,lower,upper");
}

TEST(CliMeanTest, ConstantDataReplies) {
  std::string text;
  for (int i = 0; i < 65536; ++i) text += "0.5\n";
  const std::string input = WriteFile("const.csv", text);
  CliRun r = Cli({"mean", "--epsilon", "1", "--delta", "0.05", "--tau", "0.05",
               "--sigma", "1", "--rho", "1", "--K", "256", "--input", input,
               "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["K"], 256);
  EXPECT_NEAR(doc["eta"].get<double>(), 2 * std::sqrt(2.0) / 16, 1e-15);
}

TEST(CliMeanTest, RhoBelowSigmaRejected) {
  CliRun r = Cli({"mean", "--epsilon", "1", "--delta", "0.05", "--tau", "0.05",
               "--sigma", "1", "--rho", "0.5", "--K", "256", "--input",
               "/nonexistent"});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST(CliMeanDensityTest, NeedsDensityAssertionAndDivisibleN) {
  std::string text;
  for (int i = 0; i < 65537; ++i) text += "0.5\n";
  const std::string input = WriteFile("const65537.csv", text);
  std::vector<std::string> base = {
      "mean-density", "--epsilon", "1",   "--delta", "0.05", "--tau",
      "0.05",         "--sigma",   "1",   "--rho",   "1",    "--K",
      "256",          "--input",   input, "--seed",  "1"};
  CliRun r = Cli(base);
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("drop"), std::string::npos) << r.err;

  std::vector<std::string> truncated = base;
  truncated.push_back("--truncate");
  r = Cli(truncated);
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("density"), std::string::npos) << r.err;

  truncated.push_back("--assume-density");
  r = Cli(truncated);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["n"], 65536);
}

TEST(CliSimulateTest, SmallCoverageRun) {
  CliRun r = Cli({"simulate", "--epsilon", "1", "--delta", "0.05", "--tau",
               "0.05", "--dist", "normal", "--estimator", "median", "--n",
               "2000", "--trials", "20", "--seed", "4", "--threads", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["trials"], 20);
  EXPECT_EQ(doc["estimator"], "median");
}

TEST(CliAuditTest, PresetRuns) {
  CliRun r = Cli({"audit", "--epsilon", "1", "--delta", "0.05", "--preset",
               "laplace_global", "--trials", "2000", "--bootstrap", "10",
               "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["preset"], "laplace_global");
  EXPECT_TRUE(doc["epsilon_hat"].is_number());
  CliRun few = Cli({"audit", "--epsilon", "1", "--delta", "0.05", "--preset",
                 "laplace_global", "--trials", "10"});
  EXPECT_EQ(few.code, kExitValidation);
}

}  // namespace
}  // namespace ptrdp
