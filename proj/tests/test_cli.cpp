#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smeans/cli.hpp"

using namespace smeans;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "smeans");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("smeans_cli_test_" + name);
}

}  // namespace

TEST(Cli, ConditionsReportForGaussian) {
  const auto out = scratch("conditions.json");
  ASSERT_EQ(run({"conditions", "--N", "1", "--m", "2", "--mean", "gaussian", "--alpha", "0.5", "--beta", "1.5",
                 "--p", "2", "--q", "2", "--out", out.string()}),
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["theorem"], "T1");
  for (const auto& line : j["checks"]) EXPECT_TRUE(line["pass"].get<bool>()) << line.dump();
}

TEST(Cli, UsageAndConfigErrors) {
  ::testing::internal::CaptureStderr();
  ::testing::internal::CaptureStdout();
  EXPECT_EQ(run({"converge", "--bogus", "1"}), kExitConfigError);
  EXPECT_EQ(run({}), kExitConfigError);
  EXPECT_EQ(run({"converge", "--config", "/nonexistent/config.json"}), kExitConfigError);
  EXPECT_EQ(run({"converge", "--grid", "1:100"}), kExitConfigError);
  EXPECT_EQ(run({"converge", "--mean", "riesz:-2"}), kExitConfigError);
  EXPECT_EQ(run({"apply", "--grid", "1:64:8"}), kExitConfigError);
  ::testing::internal::GetCapturedStdout();
  EXPECT_NE(::testing::internal::GetCapturedStderr().find("error"), std::string::npos);
}

TEST(Cli, ConfigFileWithUnknownKeyIsRejected) {
  const auto cfg = scratch("bad.json");
  std::ofstream(cfg) << R"({"alpha": 0.5, "colour": "red"})";
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"converge", "--config", cfg.string()}), kExitConfigError);
  EXPECT_NE(::testing::internal::GetCapturedStderr().find("colour"), std::string::npos);
}

TEST(Cli, ConvergeCsvIsDeterministic) {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  const std::vector<std::string> args{"converge", "--grid", "1:128:32", "--signal", "random_bandlimited:5:4",
                                      "--steps", "4", "--format", "csv"};
  auto with_out = [&](const std::filesystem::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with_out(a)), kExitOk);
  ASSERT_EQ(run(with_out(b)), kExitOk);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,error,space,norm_route,monotone,slope,floor");
}

TEST(Cli, NormPrintsValueThenTrace) {
  const auto out = scratch("norm.txt");
  ASSERT_EQ(run({"norm", "--grid", "1:64:16", "--signal", "bump", "--space", "besov:0.5:2:2", "--via", "modulus",
                 "--out", out.string()}),
            kExitOk);
  std::istringstream in(slurp(out));
  double value = 0.0;
  in >> value;
  EXPECT_GT(value, 0.0);
  const auto j = nlohmann::json::parse(in);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), value);
  EXPECT_EQ(j["space"].get<std::string>().rfind("besov-modulus", 0), 0u);
}

TEST(Cli, ApplyWritesGrid) {
  const auto out = scratch("apply.csv");
  ASSERT_EQ(run({"apply", "--grid", "1:16:8", "--t", "0.1", "--out", out.string()}), kExitOk);
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x0,re,im");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
}
