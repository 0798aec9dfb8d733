//
// Copyright 2026 The dpaudit Authors
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

#include "dpaudit/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace dpaudit::cli {
namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("dpaudit_cli_test_" + name);
}

TEST(CliTest, CounterexampleExitsTwoWithFourThirds) {
  RunResult r = RunCli({"counterexample", "--clip", "1.0", "--epsilon", "1.0"});
  EXPECT_EQ(r.code, kExitViolation);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["ratio_exponent_factor"].get<double>(), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(j["l1_distance_after_clip"].get<double>(), 8.0 / 3.0, 1e-12);
  EXPECT_TRUE(j["violated"].get<bool>());
  EXPECT_EQ(j["mode"], "claimed-adept");
}

TEST(CliTest, SensitivityInOneDimensionMatchesClaim) {
  RunResult r = RunCli({"sensitivity", "--dim", "1", "--clip", "1.0"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["claimed"].get<double>(), 2.0);
  EXPECT_EQ(j["true_analytic"].get<double>(), 2.0);
  EXPECT_EQ(j["claimed_label"], "claimed (refuted)");
  EXPECT_TRUE(j["empirical_max"].is_null());
}

TEST(CliTest, SensitivityEmpiricalAndRatioTable) {
  RunResult r = RunCli({"sensitivity", "--dim", "3", "--clip", "1", "--empirical",
                     "--vectors", "200", "--sampler", "gaussian", "--seed",
                     "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["empirical_max"].get<double>(),
            j["true_analytic"].get<double>() + 1e-9);
  EXPECT_EQ(j["samples_used"], 200);

  RunResult missing_seed = RunCli({"sensitivity", "--dim", "3", "--clip", "1",
                                "--empirical", "--vectors", "200"});
  EXPECT_EQ(missing_seed.code, kExitError);

  RunResult table = RunCli({"sensitivity", "--ratio-table", "--clip", "1"});
  ASSERT_EQ(table.code, kExitOk) << table.err;
  std::istringstream lines(table.out);
  std::string first;
  std::getline(lines, first);
  EXPECT_NEAR(nlohmann::json::parse(first)["ratio"].get<double>(),
              std::sqrt(32.0), 1e-12);
}

TEST(CliTest, SimulateOneDimensionCsv) {
  RunResult r = RunCli({"simulate", "--dims", "1", "--vectors", "100",
                     "--sampler", "uniform", "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "dim,sampler,num_vectors,pairs_checked,violations,"
            "violation_fraction,clip_constant,seed\n"
            "1,uniform,100,4950,0,0,1,1\n");
}

TEST(CliTest, SimulateBothSamplersToFileIsReproducible) {
  auto path = TempPath("sim.csv");
  std::vector<std::string> args = {"simulate",  "--dims",    "1,2,4",
                                   "--vectors", "60",        "--sampler",
                                   "both",      "--seed",    "9",
                                   "--out",     path.string()};
  ASSERT_EQ(RunCli(args).code, kExitOk);
  std::ifstream a(path);
  std::string first((std::istreambuf_iterator<char>(a)), {});
  args.push_back("--threads");
  args.push_back("3");
  ASSERT_EQ(RunCli(args).code, kExitOk);
  std::ifstream b(path);
  std::string second((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(first, second);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 7);
  std::filesystem::remove(path);
}

TEST(CliTest, SimulateWarnsWhenSampledPairsClamped) {
  RunResult r = RunCli({"simulate", "--dims", "2", "--vectors", "5", "--sampler",
                     "uniform", "--seed", "1", "--pair-mode", "sampled:100"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("2,uniform,5,10,"), std::string::npos);
}

TEST(CliTest, ClipAndNoise) {
  RunResult clip = RunCli({"clip", "--norm", "l2", "--clip", "1",
                        "--vector=-3,4"});
  ASSERT_EQ(clip.code, kExitOk) << clip.err;
  auto v = nlohmann::json::parse(clip.out);
  EXPECT_NEAR(v[0].get<double>(), -0.6, 1e-12);
  EXPECT_NEAR(v[1].get<double>(), 0.8, 1e-12);

  std::vector<std::string> noise = {"noise",     "--mode",     "corrected-rescaled",
                                    "--clip",    "1",          "--epsilon",
                                    "1",         "--seed",     "5",
                                    "--vector",  "1,2,3,4"};
  RunResult a = RunCli(noise), b = RunCli(noise);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_DOUBLE_EQ(j["noise_scale"].get<double>(), 4.0);
  EXPECT_EQ(j["privatized"].size(), 4u);

  noise.erase(noise.begin() + 7, noise.begin() + 9);  // drop --seed
  EXPECT_EQ(RunCli(noise).code, kExitError);
}

TEST(CliTest, AuditExitCodeTracksViolations) {
  auto path = TempPath("pairs.ndjson");
  {
    std::ofstream f(path);
    f << R"({"x":[-0.6666666666666666,-0.6666666666666666],"y":[0.6666666666666666,0.6666666666666666]})"
      << "\n\n"
      << R"([[0.1,0.2,0.3],[0.0,0.0,0.0]])" << "\n";
  }
  RunResult adept = RunCli({"audit", "--mode", "claimed-adept", "--clip", "1",
                         "--epsilon", "1", "--pairs-file", path.string()});
  EXPECT_EQ(adept.code, kExitViolation) << adept.err;
  EXPECT_EQ(std::count(adept.out.begin(), adept.out.end(), '\n'), 2);

  RunResult fixed = RunCli({"audit", "--mode", "corrected-rescaled", "--clip",
                         "1", "--epsilon", "1", "--pairs-file", path.string()});
  EXPECT_EQ(fixed.code, kExitOk) << fixed.err;

  {
    std::ofstream f(path);
    f << "{not json}\n";
  }
  RunResult bad = RunCli({"audit", "--mode", "claimed-adept", "--clip", "1",
                       "--epsilon", "1", "--pairs-file", path.string()});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_NE(bad.err.find(":1:"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(CliTest, UsageAndValidationErrors) {
  EXPECT_EQ(RunCli({"frobnicate"}).code, kExitError);
  EXPECT_EQ(RunCli({}).code, kExitError);
  EXPECT_EQ(RunCli({"counterexample", "--clip", "1", "--epsilon", "1", "--bogus"})
                .code,
            kExitError);
  EXPECT_EQ(RunCli({"counterexample", "--clip", "0", "--epsilon", "1"}).code,
            kExitError);
  EXPECT_EQ(RunCli({"counterexample", "--clip", "1", "--epsilon", "-1"}).code,
            kExitError);
  EXPECT_EQ(RunCli({"simulate", "--dims", "1", "--vectors", "100"}).code,
            kExitError);
  EXPECT_EQ(RunCli({"simulate", "--dims", "1", "--vectors", "1", "--seed", "1"})
                .code,
            kExitError);
  RunResult r = RunCli({"sensitivity", "--clip", "1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("--dim"), std::string::npos);
}

TEST(CliTest, HelpNamesConstructAndStatus) {
  RunResult top = RunCli({"--help"});
  EXPECT_EQ(top.code, kExitOk);
  EXPECT_NE(top.out.find("NOT epsilon-DP"), std::string::npos);
  for (const char* sub : {"clip", "noise", "sensitivity", "counterexample",
                          "audit", "simulate"}) {
    RunResult h = RunCli({sub, "--help"});
    EXPECT_EQ(h.code, kExitOk) << sub;
    bool names_status = h.out.find("refuted") != std::string::npos ||
                        h.out.find("corrected") != std::string::npos;
    EXPECT_TRUE(names_status) << sub << "\n" << h.out;
  }
}

TEST(CliTest, TextFormat) {
  RunResult r = RunCli({"counterexample", "--clip", "3", "--epsilon", "1",
                     "--format", "text"});
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_NE(r.out.find("violated:               yes"), std::string::npos);
  EXPECT_NE(r.out.find("l1 distance after clip: 8"), std::string::npos);
}

}  // namespace
}  // namespace dpaudit::cli
