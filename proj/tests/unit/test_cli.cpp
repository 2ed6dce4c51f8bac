// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bandctl/cli/app.hpp"
#include "bandctl/cli/config_io.hpp"
#include "bandctl/cli/report.hpp"
#include "bandctl/errors.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;
using namespace bandctl::cli;

namespace {

const std::string kConfigs = BANDCTL_CONFIG_DIR;

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "bandctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("bandctl_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(ConfigIo, ExampleFilesMatchTheFixtures) {
  const ModelConfig a = load_model(kConfigs + "/ex3.json");
  const ModelConfig b = fixtures::example_three();
  EXPECT_EQ(model_to_json(a), model_to_json(b));
  EXPECT_EQ(model_to_json(load_model(kConfigs + "/ex1.json")), model_to_json(fixtures::example_one()));
  EXPECT_EQ(model_to_json(load_model(kConfigs + "/ex2.json")), model_to_json(fixtures::example_two()));
}

TEST(ConfigIo, RoundTripsHyperExponentialDemand) {
  ModelConfig m = fixtures::example_one();
  m.demand = DemandLaw::hyper_exponential({{0.3, 0.5}, {0.7, 2.0}});
  m.l = -1.5;
  const ModelConfig back = model_from_json(model_to_json(m));
  EXPECT_EQ(model_to_json(back), model_to_json(m));
  EXPECT_EQ(back.demand.atoms().size(), 2u);
  EXPECT_EQ(back.l, -1.5);
}

TEST(ConfigIo, ShapeErrorsAreInvalidParameter) {
  json doc = model_to_json(fixtures::example_one());
  doc.erase("sigma1");
  try {
    model_from_json(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
  }
  doc = model_to_json(fixtures::example_one());
  doc["demand"]["kind"] = "pareto";
  EXPECT_THROW(model_from_json(doc), Error);
}

TEST(Report, JsonRoundTrip) {
  const CliRun r = run({"solve", kConfigs + "/ex3.json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["tool"]["version"], kToolVersion);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["strategy"]["kind"], "two");
  EXPECT_TRUE(j["verification"]["pass"].get<bool>());
  EXPECT_EQ(j["stages"].size(), 3u);
  EXPECT_EQ(without_timing(to_json(report_from_json(j))), without_timing(j));
  EXPECT_FALSE(without_timing(j).contains("timing"));
}

TEST(Cli, ExitCodes) {
  const std::string bad = write_temp("bad.json", R"({"sigma1": 1.0})");
  EXPECT_EQ(run({"solve", bad}).code, kValidation);
  EXPECT_EQ(run({"solve", kConfigs + "/missing.json"}).code, kValidation);
  EXPECT_EQ(run({"frobnicate"}).code, kValidation);
  EXPECT_EQ(run({"evaluate", kConfigs + "/ex1.json", "--y1", "3", "--y2", "4"}).code, kValidation);
  const CliRun unverified = run({"solve", kConfigs + "/ex2.json", "--require-verified"});
  EXPECT_EQ(unverified.code, kNotVerified);
  EXPECT_FALSE(unverified.out.empty());
  EXPECT_NE(unverified.err.find("failed verification"), std::string::npos);
  EXPECT_EQ(run({"solve", kConfigs + "/ex2.json"}).code, kOk);
  EXPECT_EQ(run({"--version"}).code, kOk);
}

TEST(Cli, EvaluateAndVerify) {
  const CliRun e = run({"evaluate", kConfigs + "/ex1.json", "--y1", "5.077", "--y2", "1.526", "--points", "5"});
  ASSERT_EQ(e.code, kOk) << e.err;
  const json j = json::parse(e.out);
  EXPECT_EQ(j["points"].size(), 10u);
  EXPECT_EQ(j["strategy"]["kind"], "doshi");
  const CliRun v = run({"verify", kConfigs + "/ex3.json", "--y1", "4.610", "--y2", "2.468", "--y3",
                     "3.114", "--y4", "7.660"});
  ASSERT_EQ(v.code, kOk) << v.err;
  EXPECT_TRUE(json::parse(v.out)["verification"]["pass"].get<bool>());
}

TEST(Cli, PlotDataSplitsThresholds) {
  const CliRun r = run({"plot-data", kConfigs + "/ex1.json", "--y1", "5.077", "--y2", "1.526", "--points", "11"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,side,V1,V2,H1,H2,S1,S2,K1,K2,H0b,S0b,K0b,V0b");
  int left = 0, right = 0, rows = 0;
  double prev = -1.0;
  while (std::getline(in, line)) {
    ++rows;
    const double x = std::stod(line.substr(0, line.find(',')));
    EXPECT_GE(x, prev);
    prev = x;
    if (line.rfind("5.077,left", 0) == 0 || line.rfind("1.526,left", 0) == 0) ++left;
    if (line.rfind("5.077,right", 0) == 0 || line.rfind("1.526,right", 0) == 0) ++right;
  }
  EXPECT_EQ(left, 2);
  EXPECT_EQ(right, 2);
  EXPECT_EQ(rows, 11 + 4);
  EXPECT_EQ(prev, 10.0);
}

TEST(Cli, SimulateReportsBothEstimates) {
  const CliRun r = run({"simulate", kConfigs + "/ex1.json", "--y1", "5.077", "--y2", "1.526", "--paths",
                     "500", "--x0", "2", "--x0", "6"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 2u);
  EXPECT_TRUE(j["points"][0].contains("analytic"));
  EXPECT_TRUE(j["points"][0]["simulated"].contains("std_error"));
}

TEST(Cli, ReportsAreBytewiseDeterministicAcrossJobs) {
  auto strip = [](const std::string& s) { return without_timing(json::parse(s)).dump(2); };
  const std::vector<std::string> solve{"solve", kConfigs + "/ex3.json"};
  const std::vector<std::string> sim{"simulate", kConfigs + "/ex3.json", "--y1", "4.61", "--y2",
                                     "2.468", "--y3", "3.114", "--y4", "7.66", "--paths", "2000",
                                     "--points", "4"};
  for (const auto& base : {solve, sim}) {
    auto with_jobs = [&](const char* jobs) {
      auto args = base;
      args.push_back("--jobs");
      args.push_back(jobs);
      return run(args);
    };
    const CliRun a = with_jobs("1"), b = with_jobs("1"), c = with_jobs("4");
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(strip(a.out), strip(b.out));
    EXPECT_EQ(strip(a.out), strip(c.out));
  }
}
