#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "foamlab/cli.hpp"

namespace fs = std::filesystem;
using namespace foamlab;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "foamlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("foamlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, NewThenCheck) {
  const std::string db = path("db.json");
  EXPECT_EQ(call({"new", "double", "--r1", "1", "--r2", "0.5", "-o", db}).code, 0);
  const Result r = call({"check", db});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Equilibrium"), std::string::npos);
}

TEST_F(Cli, MissingInput) {
  const Result r = call({"check", path("missing.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(Cli, NecklaceDimensions) {
  const std::string n = path("n.json");
  ASSERT_EQ(call({"new", "necklace", "--k", "7", "-o", n}).code, 0);
  const Result r = call({"dim", n, "--fix-areas"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nullity 3"), std::string::npos) << r.out;
  // Six unit bubbles leave no room for a zero-pressure chamber.
  EXPECT_EQ(call({"new", "necklace", "--k", "6", "-o", path("n6.json")}).code, 2);
}

TEST_F(Cli, QuasiIsNegative) {
  const std::string q = path("q.json");
  ASSERT_EQ(call({"new", "quasi_four", "-o", q}).code, 0);
  EXPECT_EQ(call({"check", q}).code, 1);
  EXPECT_EQ(call({"pressures", q}).code, 1);
  EXPECT_EQ(call({"desitter", "verify", q}).code, 1);
}

TEST_F(Cli, PressuresAndJson) {
  const std::string db = path("db.json");
  ASSERT_EQ(call({"new", "double", "--r2", "0.5", "-o", db}).code, 0);
  const Result r = call({"--json", "pressures", db});
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["pressures"][2].get<double>(), 2.0, 1e-12);
}

TEST_F(Cli, DeterministicOutput) {
  const Result a = call({"new", "flower"}), b = call({"new", "flower"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const std::string t = path("t.json");
  ASSERT_EQ(call({"new", "triple", "-o", t}).code, 0);
  const Result m1 = call({"--seed", "5", "mobius", t, "--random"});
  const Result m2 = call({"--seed", "5", "mobius", t, "--random"});
  EXPECT_EQ(m1.code, 0);
  EXPECT_EQ(m1.out, m2.out);
  EXPECT_EQ(call({"mobius", t, "--random"}).code, 2);
}

TEST_F(Cli, AdapterMatchesLibrary) {
  const std::string t = path("t.json");
  ASSERT_EQ(call({"new", "triple", "-o", t}).code, 0);
  const std::string d = path("d.json");
  ASSERT_EQ(call({"decorate", t, "--vertex", "1", "--t", "0.1", "-o", d}).code, 0);
  const Cluster lib = decorate(triple_bubble(1.0), 1, 0.1);
  EXPECT_EQ(slurp(d), to_json_text(lib));
  const Result back = call({"shrink", d, "--region", "4", "--factor", "0"});
  EXPECT_EQ(back.code, 0);
  EXPECT_EQ(back.out, to_json_text(scale_three_sided(lib, 4, 0.0)));
}

TEST_F(Cli, SolveAndContinue) {
  const std::string t = path("t.json");
  ASSERT_EQ(call({"new", "triple", "-o", t}).code, 0);
  const Result s = call({"solve", t, "--areas", "1.05,0.95,1.0"});
  EXPECT_EQ(s.code, 0);
  const AreaVector got = region_areas(from_json_text(s.out));
  EXPECT_NEAR(got[0], 1.05, 1e-9);
  EXPECT_EQ(call({"solve", t, "--set", "bogus=1"}).code, 2);
  EXPECT_EQ(call({"solve", t, "--areas", "1,1"}).code, 2);
  EXPECT_EQ(call({"solve", t, "--areas", "1.4,0.7,1", "--set", "max_iter=1"}).code, 3);
  const Result c = call({"continue", t, "--areas", "1.02,0.98,1.0", "--steps", "3"});
  EXPECT_EQ(c.code, 0);
}

TEST_F(Cli, StabilityDesitterRender) {
  const std::string db = path("db.json");
  ASSERT_EQ(call({"new", "double", "-o", db}).code, 0);
  const Result s = call({"stability", db, "-m", "16"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("StrictlyStable"), std::string::npos);
  const Result d = call({"desitter", "verify", db});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("pass"), std::string::npos);
  const Result tr = call({"desitter", "triples", db});
  EXPECT_EQ(Json::parse(tr.out).size(), 2u);
  const Result svg = call({"render", db, "--fill"});
  EXPECT_EQ(svg.code, 0);
  EXPECT_NE(svg.out.find("<svg"), std::string::npos);
}

TEST_F(Cli, BadArguments) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"new", "pentagon"}).code, 2);
  EXPECT_EQ(call({"new", "double", "--k", "3"}).code, 2);
  EXPECT_EQ(call({"--tol-profile", "sloppy", "new", "double"}).code, 2);
  const std::string bad = path("bad.json");
  std::ofstream(bad) << "{ \"version\": 1,";
  EXPECT_EQ(call({"check", bad}).code, 2);
}
