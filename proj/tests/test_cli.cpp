#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / "genmod_cli_tests" / info->name();
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args) {
  const fs::path dir = scratch();
  const fs::path out = dir / "stdout", err = dir / "stderr";
  const std::string cmd = std::string("'") + GENMOD_CLI_PATH + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string sample(const std::string& name) {
  return "'" + (fs::path(GENMOD_SAMPLES_DIR) / name).string() + "'";
}

} // namespace

TEST(Cli, InfoBarbell) {
  const auto r = run("info -i " + sample("barbell.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["n"], 6);
  EXPECT_EQ(j["edges"], 7);
  EXPECT_DOUBLE_EQ(j["volume"].get<double>(), 14.0);
  EXPECT_TRUE(j["connected"].get<bool>());
}

TEST(Cli, SsgbBarbell) {
  const auto r = run("ssgb -i " + sample("barbell.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["communities"], 2);
  EXPECT_DOUBLE_EQ(j["modularity"].get<double>(), 5.0);
  EXPECT_TRUE(j["audit"]["passes"].get<bool>());
  EXPECT_EQ(j["model"]["name"], "ng");
}

TEST(Cli, SingleCommunityExitCode) {
  EXPECT_EQ(run("ssgb -i " + sample("k3.txt")).code, 2);
  EXPECT_EQ(run("bipartition -i " + sample("k3.txt")).code, 2);
  const auto r = run("bipartition -i " + sample("barbell.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["communities"], 2);
}

TEST(Cli, FlatPartitionRoundTrip) {
  const fs::path flat = scratch() / "parts.tsv";
  const auto r = run("ssgb -i " + sample("clique_ring.txt") + " -o '" + flat.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ssgb = Json::parse(r.out);
  EXPECT_EQ(ssgb["communities"], 4);
  const auto info =
      run("info -i " + sample("clique_ring.txt") + " --partition '" + flat.string() + "'");
  ASSERT_EQ(info.code, 0) << info.err;
  const auto j = Json::parse(info.out);
  EXPECT_EQ(j["partition"]["communities"], 4);
  EXPECT_NEAR(j["partition"]["modularity"].get<double>(), ssgb["modularity"].get<double>(), 1e-12);
}

TEST(Cli, Deterministic) {
  const auto a = run("ssgb -i " + sample("clique_ring.txt") + " --model afg --gamma 1");
  const auto b = run("ssgb -i " + sample("clique_ring.txt") + " --model afg --gamma 1");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepWithInvalidGamma) {
  const auto r = run("sweep -i " + sample("clique_ring.txt") + " --model rb --gammas 1,0,4");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row1, row0, row4;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row0);
  std::getline(in, row4);
  EXPECT_EQ(header, "gamma,communities,modularity,positive_eigenvalues,error");
  EXPECT_EQ(row1.substr(0, 4), "1,4,");
  EXPECT_NE(row0.find("invalid_argument"), std::string::npos) << row0;
  EXPECT_EQ(row4.substr(0, 4), "4,4,");
}

TEST(Cli, ParseErrorNamesLine) {
  const auto r = run("info -i " + sample("negative_weight.txt"));
  EXPECT_EQ(r.code, 3);
  const auto j = Json::parse(r.err);
  EXPECT_EQ(j["error"]["code"], "parse_error");
  EXPECT_NE(j["error"]["message"].get<std::string>().find("line 2"), std::string::npos);
}

TEST(Cli, MissingFile) {
  const auto r = run("info -i /nonexistent/graph.txt");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.err)["error"]["code"], "io_error");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("verify -i " + sample("barbell.txt") + " --theorems bogus").code, 64);
  EXPECT_EQ(run("ssgb --no-such-flag").code, 64);
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("perturb -i " + sample("barbell.txt")).code, 64);
}

TEST(Cli, InvalidGammaIsInputError) {
  const auto r = run("ssgb -i " + sample("barbell.txt") + " --model rb --gamma 0");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.err)["error"]["code"], "invalid_argument");
}

TEST(Cli, MatrixMarketMatchesEdgeList) {
  const auto a = run("info -i " + sample("k2.mtx") + " --format matrixmarket");
  const auto b = run("info -i " + sample("k2.txt"));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Json::parse(a.out), Json::parse(b.out));
}

TEST(Cli, VerifyAllBarbell) {
  const auto r = run("verify -i " + sample("barbell.txt") + " --theorems all --edge 1,2");
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  for (const auto& v : j["verdicts"]) {
    EXPECT_TRUE(v.contains("theorem"));
    EXPECT_TRUE(v.contains("hypotheses_checked"));
    EXPECT_TRUE(v.contains("hypothesis_values"));
    EXPECT_TRUE(v.contains("conclusion_checked"));
    EXPECT_TRUE(v.contains("tolerances"));
    EXPECT_TRUE(v["pass"].get<bool>()) << v.dump();
  }
}

TEST(Cli, VerifyNodalStarWarns) {
  const auto r = run("verify -i " + sample("star4.txt") + " --theorems nodal");
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["verdicts"].size(), 1U);
  EXPECT_TRUE(j["verdicts"][0].contains("warnings"));
}

TEST(Cli, PerturbOnMultipleEigenvalue) {
  const auto r = run("perturb -i " + sample("star4.txt") + " --edge 1,2");
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(Json::parse(r.err)["error"]["code"], "not_simple");
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const fs::path cfg = scratch() / "run.toml";
  {
    std::ofstream f(cfg);
    f << "model = \"rb\"\ngamma = 4.0\n";
  }
  const auto from_file = run("ssgb -i " + sample("clique_ring.txt") + " --config '" +
                             cfg.string() + "'");
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto j = Json::parse(from_file.out);
  EXPECT_EQ(j["model"]["name"], "rb");
  EXPECT_DOUBLE_EQ(j["model"]["gamma"].get<double>(), 4.0);

  const auto overridden = run("ssgb -i " + sample("clique_ring.txt") + " --config '" +
                              cfg.string() + "' --gamma 2");
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_DOUBLE_EQ(Json::parse(overridden.out)["model"]["gamma"].get<double>(), 2.0);
}

TEST(Cli, ExternalIdsInOutput) {
  const fs::path g = scratch() / "ids.txt";
  {
    std::ofstream f(g);
    f << "10 20\n20 30\n30 10\n30 40\n40 50\n50 60\n60 40\n";
  }
  const auto r = run("ssgb -i '" + g.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto leaves = Json::parse(r.out)["leaves"];
  std::vector<std::vector<int>> got;
  for (const auto& l : leaves)
    got.push_back(l.get<std::vector<int>>());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::vector<int>>{{10, 20, 30}, {40, 50, 60}}));
}
