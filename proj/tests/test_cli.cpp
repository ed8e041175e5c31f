#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "weilrad/cli.hpp"

using namespace weilrad;
using weilrad::Json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Outcome invoke(std::vector<std::string> args, const char* env_budget = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err, env_budget);
  return {code, out.str(), err.str()};
}

std::string write_grid(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("weilrad_" + name + ".json");
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Cli, PredictUnusualPair) {
  auto r = invoke({"predict", "--fibre", "SL2@p=2;e=1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_EQ(r.json()["N"], 2);
  EXPECT_EQ(r.json()["fibres"][0]["unusual"], true);
}

TEST(Cli, BoundsForGL2OverF3) {
  auto r = invoke({"bounds", "--fibre", "GL2@p=3;e=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = r.json();
  const Json& f = doc["fibres"][0];
  EXPECT_EQ(f["upper"], 2);
  EXPECT_EQ(f["witness_lower"], 2);
  EXPECT_EQ(f["proved"], true);
}

TEST(Cli, HypothesisRefusals) {
  auto torus = invoke({"predict", "--fibre", "T1@p=2;e=1"});
  EXPECT_EQ(torus.code, 3);
  EXPECT_NE(torus.err.find("non-commutative"), std::string::npos);
  EXPECT_TRUE(torus.out.empty());

  auto phi = invoke({"predict", "--fibre", "SL2@p=2;e=1,1", "--phi-not-injective"});
  EXPECT_EQ(phi.code, 3);
  EXPECT_TRUE(phi.out.empty());

  // The flag attaches to the nearest preceding unusual fibre only.
  auto mixed = invoke({"predict", "--fibre", "SL2@p=2;e=1", "--phi-not-injective", "--fibre", "GL2@p=2;e=1"});
  EXPECT_EQ(mixed.code, 3);
  auto fine = invoke({"predict", "--fibre", "GL2@p=2;e=1", "--fibre", "SL2@p=2;e=1", "--phi-injective"});
  EXPECT_EQ(fine.code, 0) << fine.err;
}

TEST(Cli, UsageErrors) {
  for (std::vector<std::string> args : {std::vector<std::string>{},
                                        {"frobnicate"},
                                        {"predict"},
                                        {"predict", "--fibre"},
                                        {"predict", "--fibre", "XL2@p=2;e=1"},
                                        {"predict", "--fibre", "GL2@p=4;e=1"},
                                        {"predict", "--fibre", "GL2@p=2;e=1", "--format", "xml"},
                                        {"predict", "--fibre", "GL2@p=2;e=1", "--phi-injective"},
                                        {"predict", "--fibre", "GL2@p=2;e=1", "--bogus"},
                                        {"exponent", "--fibre", "GL2@p=2;e=1", "--workers", "0"},
                                        {"report", "--fibre", "GL2@p=2;e=1"}}) {
    auto r = invoke(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "<none>" : args[0]) << " " << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("usage:"), std::string::npos);
  }
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, BudgetRefusal) {
  auto r = invoke({"exponent", "--fibre", "GL2@p=2;e=3", "--exhaustive"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("2^28"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  // Without --exhaustive the same request falls back to sampling.
  auto s = invoke({"exponent", "--fibre", "GL2@p=2;e=3", "--samples", "50"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.json()["exponent"]["mode"], "sampled");
}

TEST(Cli, EnvironmentBudgetAndFlagPrecedence) {
  // GL2 with e=(1) over F2 has 16 points.
  EXPECT_EQ(invoke({"brute-class", "--fibre", "GL2@p=2;e=1"}, "16").code, 0);
  EXPECT_EQ(invoke({"brute-class", "--fibre", "GL2@p=2;e=1"}, "15").code, 4);
  EXPECT_EQ(invoke({"brute-class", "--fibre", "GL2@p=2;e=1", "--budget", "16"}, "15").code, 0);
  EXPECT_EQ(invoke({"brute-class", "--fibre", "GL2@p=2;e=1"}, "lots").code, 2);
  auto r = invoke({"brute-class", "--fibre", "GL2@p=2;e=1"}, "16");
  EXPECT_EQ(r.json()["config"]["budget"], 16);
}

TEST(Cli, PrintedSpecsReparse) {
  const std::vector<std::string> fibres = {"SL2@p=2;e=1,1", "SL2^2*T1@p=2;e=2,1", "GL3@p=3;e=1", "PGL2@p=2;e=2",
                                           "T2@p=5;e=1"};
  std::vector<std::string> args{"predict"};
  for (const auto& f : fibres) {
    args.push_back("--fibre");
    args.push_back(f);
  }
  auto r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = r.json();
  for (std::size_t i = 0; i < fibres.size(); ++i) {
    const Json& f = doc["fibres"][i];
    const std::string printed = f["kind"].get<std::string>() + "@" + f["ext"].get<std::string>();
    EXPECT_EQ(FibreSpec::parse(printed), FibreSpec::parse(fibres[i])) << printed;
    EXPECT_EQ(FibreSpec::parse(printed).to_string(), printed);
  }

  auto w = invoke({"exponent", "--fibre", "GL2@p=2;e=2,1", "--field", "F4"});
  ASSERT_EQ(w.code, 0) << w.err;
  TruncatedAlgebra A(ExtensionSpec(2, {2, 1}), CoefficientField(2, 2));
  const std::string text = w.json()["witness"].get<std::string>();
  EXPECT_EQ(AlgebraMatrix::parse(A, text).to_string(), text);
}

TEST(Cli, TsvIsOneKeyValuePerLine) {
  auto r = invoke({"bounds", "--fibre", "GL2@p=2;e=2", "--format", "tsv"});
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 1) << line;
    ++n;
  }
  EXPECT_GT(n, 3u);
  EXPECT_NE(r.out.find("fibres.0.upper\t3"), std::string::npos);
}

TEST(Cli, ReportEdgeCases) {
  auto empty = invoke({"report", "--grid", write_grid("empty", "[]")});
  ASSERT_EQ(empty.code, 0) << empty.err;
  EXPECT_TRUE(empty.json()["rows"].empty());
  EXPECT_EQ(empty.json()["summary"]["rows"], 0);

  auto bad = invoke({"report", "--grid", write_grid("bad", "[\n  {\"fibre\": \"GL2@p=2;e=1\",,}\n]")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2, column"), std::string::npos) << bad.err;
  EXPECT_TRUE(bad.out.empty());

  EXPECT_EQ(invoke({"report", "--grid", write_grid("badkey", R"([{"fibre": "GL2@p=2;e=1", "colour": 1}])")}).code, 2);
  EXPECT_EQ(invoke({"report", "--grid", "/nonexistent/grid.json"}).code, 2);

  auto unmet = invoke(
      {"report", "--grid", write_grid("unmet", R"([{"fibre": "SL2@p=2;e=1,1", "phi_injective": false}])")});
  ASSERT_EQ(unmet.code, 0) << unmet.err;
  const Json doc = unmet.json();
  EXPECT_EQ(doc["rows"][0]["status"], "HYPOTHESIS-UNMET");
  EXPECT_EQ(doc["summary"]["hypothesis_unmet"], 1);
}

TEST(Cli, ReportIsDeterministicAndOrdered) {
  const std::string grid = write_grid("small", R"([
    {"fibre": "SL2@p=2;e=1,1", "fields": [1, 2]},
    {"fibre": "GL2@p=2;e=1,1,1"},
    {"fibre": "Borel2@p=2;e=1"},
    {"fibre": "T1@p=3;e=1"}
  ])");
  auto a = invoke({"report", "--grid", grid, "--samples", "64", "--seed", "5"});
  auto b = invoke({"report", "--grid", grid, "--samples", "64", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json doc = a.json();
  ASSERT_EQ(doc["rows"].size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(doc["rows"][i]["row"], i);
  EXPECT_EQ(doc["rows"][0]["oracle"]["stabilization"], "STABILIZED");
  EXPECT_EQ(doc["rows"][1]["oracle"]["exponent"]["mode"], "sampled");
  EXPECT_TRUE(doc["rows"][2].contains("borel"));
  EXPECT_FALSE(doc["rows"][0].contains("wall_ms"));
}
