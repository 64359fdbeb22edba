#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("excol-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const std::string cmd =
        "EXCOL_CACHE_DIR=" + (dir_ / "cache").string() + " " + EXCOL_BIN + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static nlohmann::json load(const std::string& file) {
    std::ifstream f(file);
    return nlohmann::json::parse(f);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ConstructThenVerify) {
  ASSERT_EQ(run("construct --base-dim 1 --fiber-degrees 0,0 --center b1,f1 --out " + path("c.json")).code, 0);
  const auto doc = load(path("c.json"));
  EXPECT_EQ(doc["objects"].size(), 5u);
  EXPECT_EQ(doc["status"], "complete");
  const Result v = run("verify --collection " + path("c.json") + " --out " + path("r.json"));
  EXPECT_EQ(v.code, 0);
  const auto rep = load(path("r.json"));
  EXPECT_TRUE(rep["all_passed"].get<bool>());
  EXPECT_TRUE(rep["log_reproduces"].get<bool>());
  EXPECT_EQ(rep["collection_hash"].get<std::string>().size(), 64u);
}

TEST_F(Cli, OutputIsDeterministic) {
  const std::string args = "construct --base-dim 2 --fiber-degrees 0,0,1 --center b1,f0,f1 --no-cache --out ";
  ASSERT_EQ(run(args + path("a.json")).code, 0);
  ASSERT_EQ(run(args + path("b.json")).code, 0);
  std::ifstream a(path("a.json")), b(path("b.json"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
}

TEST_F(Cli, InvalidInputs) {
  EXPECT_EQ(run("construct --base-dim 1 --fiber-degrees 0,0 --center b0,b1").code, 2);
  EXPECT_EQ(run("construct --base-dim 1 --fiber-degrees 1,0 --center b1,f1").code, 2);
  EXPECT_EQ(run("construct --base-dim 1 --fiber-degrees 0,0 --center b1,q7").code, 2);
  EXPECT_EQ(run("verify --collection " + path("missing.json")).code, 2);
  EXPECT_EQ(run("sweep --max-dim 3 --codim 4").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, PermutedCollectionFailsVerification) {
  ASSERT_EQ(run("construct --base-dim 1 --fiber-degrees 0,0 --center b1,f1 --out " + path("c.json")).code, 0);
  auto doc = load(path("c.json"));
  std::swap(doc["objects"][0], doc["objects"][1]);
  doc["log"] = nlohmann::json::array();
  std::ofstream(path("p.json")) << doc.dump();
  const Result v = run("verify --collection " + path("p.json") + " --out " + path("r.json"));
  EXPECT_EQ(v.code, 1);
  const auto rep = load(path("r.json"));
  EXPECT_FALSE(rep["flags"]["semiorthogonal"].get<bool>());
  EXPECT_FALSE(rep["violations"].empty());
}

TEST_F(Cli, PushforwardInCollectionIsBadInput) {
  ASSERT_EQ(run("construct --base-dim 1 --fiber-degrees 0,0 --center b1,f1 --out " + path("c.json")).code, 0);
  auto doc = load(path("c.json"));
  doc["objects"][0]["kind"] = "push";
  std::ofstream(path("p.json")) << doc.dump();
  EXPECT_EQ(run("verify --collection " + path("p.json")).code, 2);
}

TEST_F(Cli, SweepSmall) {
  const Result r = run("sweep --max-dim 3 --max-degree 1 --codim 2 --jobs 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cases passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, EmptySweep) {
  const Result r = run("sweep --max-dim 2 --codim 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("no cases"), std::string::npos);
}

TEST_F(Cli, CacheIsUsedAndConsistent) {
  ASSERT_EQ(run("construct --base-dim 1 --fiber-degrees 0,1 --center b1,f1 --out " + path("c.json")).code, 0);
  EXPECT_EQ(run("verify --collection " + path("c.json") + " --out " + path("r1.json")).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "cache"));
  EXPECT_FALSE(fs::is_empty(dir_ / "cache"));
  EXPECT_EQ(run("verify --no-cache --collection " + path("c.json") + " --out " + path("r2.json")).code, 0);
  EXPECT_EQ(load(path("r1.json")), load(path("r2.json")));
}

TEST_F(Cli, CohomologyCommand) {
  const Result r = run("cohomology --base-dim 1 --fiber-degrees 0,0 --center b1,f1 --class 1,1,-1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[3,0,0]\n");
}
