// Copyright 2026 The Sketchlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sketchlab/io.hpp"
#include "sketchlab/surrogate.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const std::string command =
      std::string(SKETCHLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    ADD_FAILURE() << "popen failed for: " << command;
    return result;
  }
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.stdout_text.append(buffer, n);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(Predict, FlatProfileGivesTheExactTable) {
  const CliResult r = run_cli("predict --profile flat:10 --k 4");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], sketchlab::kCsvHeader);
  const auto cells = cells_of(lines[1]);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0], "4");
  EXPECT_NEAR(std::strtod(cells[1].c_str(), nullptr), 6.0, 1e-8);
  EXPECT_EQ(cells[2], "0");
  EXPECT_EQ(cells[3], "0");
  EXPECT_EQ(cells[4], "");
  EXPECT_EQ(cells[5], "");
}

TEST(Predict, KGridEmitsOneRowPerSize) {
  const CliResult r = run_cli("predict --profile flat:10 --k-grid 2:6:2");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 4u);
  const std::size_t ks[] = {2, 4, 6};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto cells = cells_of(lines[i + 1]);
    EXPECT_EQ(cells[0], std::to_string(ks[i]));
    EXPECT_NEAR(std::strtod(cells[1].c_str(), nullptr),
                10.0 - static_cast<double>(ks[i]), 1e-8);
  }
}

TEST(Gamma, FlatProfileMatchesTheAlgebraicSolution) {
  const CliResult r = run_cli("gamma --profile flat:10 --k 4");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = cells_of(lines[1]);
  EXPECT_NEAR(std::strtod(cells[1].c_str(), nullptr), 2.0 / 3.0, 1e-9);
  EXPECT_EQ(cells[5], "");  // no closed form for explicit spectra
}

TEST(Gamma, ExponentialProfileFillsTheClosedFormColumn) {
  const CliResult r = run_cli("gamma --profile exp:0.9:100 --k 5");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = cells_of(lines[1]);
  const double expected = sketchlab::explicit_gamma_exponential(0.9, 1.0, 5);
  EXPECT_NEAR(std::strtod(cells[5].c_str(), nullptr), expected,
              1e-10 * expected);
}

TEST(Mc, RerunsWriteByteIdenticalFiles) {
  const std::string f1 = testing::TempDir() + "cli_mc_1.csv";
  const std::string f2 = testing::TempDir() + "cli_mc_2.csv";
  const std::string args = "mc --profile exp:0.9:20 --k 3 --trials 5 --seed 7";
  EXPECT_EQ(run_cli(args + " --out " + f1).exit_code, 0);
  EXPECT_EQ(run_cli(args + " --out " + f2).exit_code, 0);
  const std::string b1 = read_bytes(f1);
  EXPECT_FALSE(b1.empty());
  EXPECT_EQ(b1, read_bytes(f2));
  EXPECT_EQ(b1.find('\r'), std::string::npos);
  std::remove(f1.c_str());
  std::remove(f2.c_str());
}

TEST(Mc, RademacherFamilyOnAFlatProfileIsExact) {
  const CliResult r = run_cli(
      "mc --profile flat:12 --k 3 --family rademacher --trials 3");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = cells_of(lines[1]);
  EXPECT_NEAR(std::strtod(cells[2].c_str(), nullptr), 9.0, 1e-8);
}

TEST(Mc, NormalizeRescalesTheErrorScale) {
  const CliResult r = run_cli(
      "mc --profile flat:12 --k 3 --normalize --trials 3");
  EXPECT_EQ(r.exit_code, 0);
  const auto cells = cells_of(lines_of(r.stdout_text)[1]);
  EXPECT_NEAR(std::strtod(cells[1].c_str(), nullptr), 0.75, 1e-8);
  EXPECT_NEAR(std::strtod(cells[2].c_str(), nullptr), 0.75, 1e-8);
}

TEST(Kaczmarz, ProfileRunReportsPredictionAndEstimate) {
  const CliResult r = run_cli(
      "kaczmarz --profile flat:8 --k 3 --steps 2 --trials 5 --diag");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = cells_of(lines[1]);
  EXPECT_FALSE(cells[1].empty());
  EXPECT_GT(std::strtod(cells[1].c_str(), nullptr), 0.0);
  EXPECT_GT(std::strtod(cells[2].c_str(), nullptr), 0.0);
}

TEST(Nystrom, ProfileRunReportsATraceError) {
  const CliResult r = run_cli(
      "nystrom --profile exp:0.8:20 --k 2 --trials 3");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = cells_of(lines[1]);
  EXPECT_GT(std::strtod(cells[1].c_str(), nullptr), 0.0);
  EXPECT_GE(std::strtod(cells[2].c_str(), nullptr), 0.0);
}

TEST(Libsvm, FileInputRunsEndToEnd) {
  const std::string path = testing::TempDir() + "cli_input.svm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "1 1:1.0\n2 2:1.0\n3 3:1.0\n";
  }
  const CliResult r =
      run_cli("mc --input " + path + " --k 1 --trials 2");
  EXPECT_EQ(r.exit_code, 0);
  const auto cells = cells_of(lines_of(r.stdout_text)[1]);
  EXPECT_NEAR(std::strtod(cells[1].c_str(), nullptr), 2.0, 1e-8);
  EXPECT_NEAR(std::strtod(cells[2].c_str(), nullptr), 2.0, 1e-8);
  std::remove(path.c_str());
}

TEST(ExitCodes, MissingInputFileIsAParseFailure) {
  EXPECT_EQ(run_cli("predict --input /does/not/exist.csv --k 2").exit_code, 2);
}

TEST(ExitCodes, MalformedProfileIsAParseFailure) {
  EXPECT_EQ(run_cli("predict --profile bogus:4 --k 1").exit_code, 2);
  EXPECT_EQ(run_cli("predict --profile exp:abc:4 --k 1").exit_code, 2);
}

TEST(ExitCodes, KAtTheSpectrumRankIsThree) {
  EXPECT_EQ(run_cli("predict --profile flat:5 --k 5").exit_code, 3);
}

TEST(ExitCodes, PartialRankCoverageStillSucceeds) {
  const CliResult r = run_cli("predict --profile flat:5 --k-grid 4:5");
  EXPECT_EQ(r.exit_code, 0);
  const auto lines = lines_of(r.stdout_text);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(cells_of(lines[2])[1], "");  // k = 5 row has no prediction
}

TEST(ExitCodes, ConflictingOrMissingOptionsFail) {
  EXPECT_EQ(run_cli("predict --profile flat:5 --k 2 --k-grid 1:2").exit_code,
            1);
  EXPECT_EQ(run_cli("predict --k 2").exit_code, 1);
  EXPECT_EQ(
      run_cli("predict --profile flat:5 --input x.csv --k 2").exit_code, 1);
  EXPECT_NE(run_cli("predict --profile flat:5 --k 2 --wat").exit_code, 0);
  EXPECT_NE(
      run_cli("mc --profile flat:5 --k 2 --family foo").exit_code, 0);
  EXPECT_NE(run_cli("").exit_code, 0);  // a subcommand is required
}

}  // namespace
