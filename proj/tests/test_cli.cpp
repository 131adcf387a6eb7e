#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lslrr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" LSLRR_CLI "' " + args + " > '" + out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, PipelineClosure) {
  ASSERT_EQ(run("generate --out data --per-class 20").code, 0);
  ASSERT_EQ(run("split --data data --fraction 0.2 --seed 1 --out split.txt").code, 0);
  auto r = run("solve --data data --split split.txt --z-out z.mat --e-out e.mat --trace-out t.csv --no-dict-learning");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("converged=1"), std::string::npos);
  ASSERT_EQ(run("classify --z z.mat --split split.txt --out pred.txt").code, 0);
  r = run("evaluate --predicted pred.txt --split split.txt --out report.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string report = read("report.txt");
  EXPECT_NE(report.find("oa="), std::string::npos);
  EXPECT_NE(report.find("kappa="), std::string::npos);
  EXPECT_EQ(read("t.csv").rfind("iteration,mu,", 0), 0u);
}

TEST_F(CliTest, QbuildAndTrace) {
  ASSERT_EQ(run("generate --out data --per-class 10").code, 0);
  ASSERT_EQ(run("split --data data --out split.txt").code, 0);
  ASSERT_EQ(run("qbuild --data data --split split.txt --m-out m.csv --q-out q.csv").code, 0);
  EXPECT_TRUE(exists("m.csv"));
  EXPECT_TRUE(exists("q.csv"));
  const auto r = run("trace --data data --split split.txt --max-iter 5");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 6);
}

TEST_F(CliTest, RunWritesManifestAndMap) {
  auto r = run("run --no-dict-learning --manifest run.txt --map map.ppm");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string manifest = read("run.txt");
  EXPECT_NE(manifest.find("\nresult.oa="), std::string::npos);
  EXPECT_NE(manifest.find("format=lslrr-manifest-1"), std::string::npos);
  EXPECT_EQ(read("map.ppm").rfind("P6\n13 13\n255\n", 0), 0u);

  r = run("run --replay run.txt --manifest replay.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  auto field = [](const std::string& text, const std::string& key) {
    const auto at = text.find("\n" + key + "=");
    return text.substr(at, text.find('\n', at + 1) - at);
  };
  EXPECT_EQ(field(read("replay.txt"), "result.oa"), field(manifest, "result.oa"));
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const auto r = run("solve --bogus-flag");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("Usage"), std::string::npos);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(CliTest, InvalidConfigIsUsageError) {
  ASSERT_EQ(run("generate --out data --per-class 10").code, 0);
  ASSERT_EQ(run("split --data data --out split.txt").code, 0);
  EXPECT_EQ(run("solve --data data --split split.txt --z-out z.mat --rho 0.5").code, 1);
}

TEST_F(CliTest, BadDataIsDataError) {
  std::ofstream(dir_ / "bad.mat") << "garbage";
  std::ofstream(dir_ / "c.csv") << "0\n0\n";
  EXPECT_EQ(run("split --spectra bad.mat --coords c.csv --labels c.csv --out s.txt").code, 2);
  EXPECT_EQ(run("classify --z missing.mat --split missing.txt --out p.txt").code, 2);
}

TEST_F(CliTest, DivergenceExitCode) {
  ASSERT_EQ(run("generate --out data --per-class 10").code, 0);
  ASSERT_EQ(run("split --data data --out split.txt").code, 0);
  const auto r = run("solve --data data --split split.txt --z-out z.mat --rho 1e200 --mu-max 1e308");
  EXPECT_EQ(r.code, 3) << r.output;
  EXPECT_NE(r.output.find("divergence"), std::string::npos);
  EXPECT_FALSE(exists("z.mat"));
}
