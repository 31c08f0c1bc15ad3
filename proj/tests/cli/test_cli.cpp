#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "softk/softk.hpp"

#ifndef SOFTK_CLI_PATH
#error "SOFTK_CLI_PATH must point at the softk executable"
#endif

namespace fs = std::filesystem;

namespace softk {
namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("softk_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" SOFTK_CLI_PATH "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path write_pair(const std::string& name, const SoftPair& p) const {
    const fs::path path = dir_ / name;
    io::write_pair(path, p);
    return path;
  }

  fs::path dir_;
};

SoftPair diag_pair(std::initializer_list<double> a, std::initializer_list<double> b) {
  return {CMatrix::diagonal(a), CMatrix::diagonal(b)};
}

TEST_F(Cli, VerifyPassingPair) {
  write_pair("p.json", diag_pair({1, 0}, {0, 1}));
  const auto r = run("verify p.json");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("PASS"), std::string::npos);
}

TEST_F(Cli, VerifyFailingPairPrintsResidual) {
  write_pair("bad.json", diag_pair({0.5, 1}, {0.6, 0}));
  const auto r = run("verify bad.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("r1           0.02499999999999999"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("FAIL"), std::string::npos);
}

TEST_F(Cli, VerifyTabularGoesToStdout) {
  write_pair("bad.json", diag_pair({0.5, 1}, {0.6, 0}));
  const auto r = run("verify bad.json --format tabular");
  EXPECT_EQ(r.code, 2);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "norm_a norm_b positivity_a positivity_b r1 r2 pass");
  std::istringstream fields(row);
  double v[6];
  int pass = -1;
  for (double& x : v) fields >> x;
  fields >> pass;
  EXPECT_NEAR(v[4], 0.025, 1e-12);
  EXPECT_EQ(pass, 0);
}

TEST_F(Cli, MalformedAndMissingFiles) {
  std::ofstream(dir_ / "mal.json") << "{\"a\": ";
  EXPECT_EQ(run("verify mal.json").code, 1);
  EXPECT_EQ(run("verify missing.json").code, 1);
  EXPECT_EQ(run("class missing.json").code, 1);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("verify").code, 1);
  EXPECT_EQ(run("homotopy twist p.json").code, 1);
  EXPECT_EQ(run("gen 3 1 --tol -1").code, 1);
  EXPECT_EQ(run("demo bott --grid 2").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ClassExamples) {
  write_pair("full.json", {CMatrix::identity(2), CMatrix::zero(2)});
  auto r = run("class full.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");

  const auto g = random_valid_pair(3, 1, 4);
  write_pair("same.json", {g.pair.a, g.pair.a});
  r = run("class same.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");

  write_pair("bad.json", diag_pair({0.5, 1}, {0.6, 0}));
  EXPECT_EQ(run("class bad.json").code, 2);
}

TEST_F(Cli, ClassOfGeneratedPairMatchesMetadata) {
  // First seed whose n = 5, k = 2 pair has projection ranks 2 and 1.
  std::uint64_t seed = 0;
  while (true) {
    const auto g = random_valid_pair(5, 2, seed);
    if (g.meta.rank_p == 2 && g.meta.rank_q == 1) break;
    ++seed;
  }
  ASSERT_EQ(run("gen 5 2 --seed " + std::to_string(seed) + " --out g.json").code, 0);
  const auto r = run("class g.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
}

TEST_F(Cli, GenVerifiesAndIsDeterministic) {
  ASSERT_EQ(run("gen 4 2 7 --out a.json").code, 0);
  ASSERT_EQ(run("gen 4 2 --seed 7 --out b.json").code, 0);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  EXPECT_EQ(run("verify a.json").code, 0);
  const auto doc = io::read_pair(dir_ / "a.json");
  ASSERT_TRUE(doc.meta.has_value());
  EXPECT_EQ(run("class a.json").out, std::to_string(doc.meta->rank_difference()) + "\n");

  ASSERT_EQ(run("gen 3 3 1 --out c.json").code, 0);
  EXPECT_EQ(run("class c.json").out, "0\n");
  EXPECT_EQ(run("gen 3 4 1").code, 1);

  const auto stdout_run = run("gen 4 2 7");
  EXPECT_EQ(stdout_run.out, slurp(dir_ / "a.json"));
}

TEST_F(Cli, ReduceSummaryAndReassembly) {
  write_pair("block.json", diag_pair({0.5, 1}, {0.5, 0}));
  auto r = run("reduce block.json --format tabular");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "n k rank_p rank_q class\n2 1 1 0 1\n");

  ASSERT_EQ(run("gen 4 4 3 --out common.json").code, 0);
  r = run("reduce common.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("projection part empty"), std::string::npos);

  ASSERT_EQ(run("gen 6 3 11 --out g.json").code, 0);
  ASSERT_EQ(run("reduce g.json --out red").code, 0);
  const auto pair = io::read_pair(dir_ / "g.json").pair;
  const CMatrix frame = io::read_matrix(dir_ / "red.frame.json");
  const CMatrix c = io::read_matrix(dir_ / "red.c.json");
  const CMatrix p = io::read_matrix(dir_ / "red.p.json");
  const CMatrix q = io::read_matrix(dir_ / "red.q.json");
  const CMatrix a = frame * direct_sum(c, p) * frame.adjoint();
  const CMatrix b = frame * direct_sum(c, q) * frame.adjoint();
  EXPECT_LE(op_norm(a - pair.a), 1e-8);
  EXPECT_LE(op_norm(b - pair.b), 1e-8);
}

TEST_F(Cli, HomotopyFlipTrace) {
  ASSERT_EQ(run("gen 4 2 7 --out g.json").code, 0);
  const auto r = run("homotopy flip g.json --out trace.txt");
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(dir_ / "trace.txt"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++rows;
    std::istringstream fields(line);
    double t, r1, r2;
    long klass;
    fields >> t >> r1 >> r2 >> klass;
    EXPECT_LE(std::max(r1, r2), 1e-9);
    EXPECT_EQ(klass, 0);
  }
  EXPECT_EQ(rows, 101u);
}

TEST_F(Cli, HomotopyKinds) {
  ASSERT_EQ(run("gen 5 2 9 --out g.json").code, 0);
  EXPECT_EQ(run("homotopy scale g.json --steps 11").code, 0);
  EXPECT_EQ(run("homotopy reparam g.json --func t3").code, 0);
  EXPECT_EQ(run("homotopy reparam g.json --func smoothstep").code, 0);
  EXPECT_EQ(run("homotopy reparam g.json --func cosh").code, 1);
  const auto pq = run("homotopy pq-scale g.json");
  EXPECT_EQ(pq.code, 0);
  EXPECT_NE(pq.err.find("endpoints   0\n"), std::string::npos) << pq.err;
}

TEST_F(Cli, HomotopyScaleRejectsNonPositive) {
  write_pair("neg.json", diag_pair({-0.5, 0.5}, {-0.5, 0.5}));
  EXPECT_EQ(run("homotopy scale neg.json").code, 1);
}

TEST_F(Cli, HomotopyOnInvalidPairIsMathematicalFailure) {
  write_pair("bad.json", diag_pair({0.5, 1}, {0.6, 0}));
  EXPECT_EQ(run("homotopy flip bad.json").code, 2);
}

TEST_F(Cli, DemoUniversal) {
  const auto r = run("demo universal --out u");
  EXPECT_EQ(r.code, 0) << r.err;
  const DElement a = io::delement_from_json(slurp(dir_ / "u" / "universal_a.json"));
  const DElement b = io::delement_from_json(slurp(dir_ / "u" / "universal_b.json"));
  EXPECT_EQ(a.grid.size(), 201u);
  EXPECT_TRUE(check_membership(a).pass);
  EXPECT_TRUE(check_membership(b).pass);
  EXPECT_NE(r.err.find("pointwise class   0"), std::string::npos);
}

TEST_F(Cli, DemoBott) {
  const auto r = run("demo bott");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n");
  EXPECT_TRUE(fs::exists(dir_ / "bott_field.json"));
}

TEST_F(Cli, DemoClutch) {
  const auto r = run("demo clutch --out c");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("verdict           PASS"), std::string::npos);
  EXPECT_NE(r.err.find("class 0"), std::string::npos);
  const FieldPair fp = io::field_pair_from_json(slurp(dir_ / "c" / "clutch_pair.json"));
  EXPECT_TRUE(check_relations_field(fp).pass);
  EXPECT_TRUE(fs::exists(dir_ / "c" / "clutch_residuals.csv"));
}

TEST_F(Cli, DemoUnknownName) { EXPECT_EQ(run("demo hopf").code, 1); }

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  write_pair("bad.json", diag_pair({0.5, 1}, {0.6, 0}));
  std::ofstream(dir_ / "loose.toml") << "tol = 0.03\n";
  EXPECT_EQ(run("--config loose.toml verify bad.json").code, 0);
  EXPECT_EQ(run("--config loose.toml --tol 1e-10 verify bad.json").code, 2);
}

TEST_F(Cli, RepeatedRunsAreBitIdentical) {
  ASSERT_EQ(run("gen 6 3 5 --out g.json").code, 0);
  const std::vector<std::string> commands{
      "homotopy flip g.json --out {}",    "homotopy pq-scale g.json --out {}",
      "homotopy reparam g.json --out {}", "reduce g.json --out {}",
      "demo clutch --grid 8 --out {}",    "demo universal --grid 21 --out {}",
  };
  for (const auto& c : commands) {
    auto with = [&](const std::string& target) {
      std::string s = c;
      s.replace(s.find("{}"), 2, target);
      return s;
    };
    ASSERT_EQ(run(with("first")).code, 0) << c;
    ASSERT_EQ(run(with("second")).code, 0) << c;
    for (const auto& entry : fs::directory_iterator(dir_)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("first", 0) != 0) continue;
      const fs::path twin = dir_ / ("second" + name.substr(5));
      if (fs::is_directory(entry)) {
        for (const auto& f : fs::directory_iterator(entry)) {
          EXPECT_EQ(slurp(f.path()), slurp(twin / f.path().filename())) << c << " " << f.path();
        }
      } else {
        EXPECT_EQ(slurp(entry.path()), slurp(twin)) << c << " " << name;
      }
    }
    for (const auto& entry : fs::directory_iterator(dir_)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("first", 0) == 0 || name.rfind("second", 0) == 0) fs::remove_all(entry.path());
    }
  }
}

}  // namespace
}  // namespace softk
