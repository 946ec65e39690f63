#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sgl/cli.hpp"
#include "sgl/config.hpp"

namespace fs = std::filesystem;
using namespace sgl;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("sgl-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::vector<const char*> argv{"sgl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<fs::path> csv_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(ConfigParse, ReportsLineNumbers) {
  try {
    Config::parse("# comment\nperiod = 1\nbroken line\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  try {
    Config::parse("a = 1\n\na = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ConfigParse, ValuesAndComments) {
  const auto c = Config::parse("eps = 0.25  # trailing\nlambda = 0, 1.5, -2\nflag = true\n");
  EXPECT_DOUBLE_EQ(c.real("eps"), 0.25);
  EXPECT_EQ(c.reals("lambda"), (std::vector<double>{0.0, 1.5, -2.0}));
  EXPECT_TRUE(c.flag("flag", false));
  EXPECT_EQ(c.integer("missing", 7), 7);
  EXPECT_THROW(c.integer("eps"), ConfigError);
  EXPECT_THROW(c.real("missing"), ConfigError);
}

TEST(ConfigParse, RestrictNamesTheOffendingLine) {
  const auto c = Config::parse("period = 1\nspectrum = [0,1]\nbogus = 3\n");
  try {
    c.restrict_to({"period", "spectrum"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(Cli, UnknownKeyIsInputError) {
  TempDir d;
  const auto cfg = write_config(d.path(), "c.cfg", "spectrum = [0, 0.3]\nperiods = 1\n");
  const auto r = run({"project", "--config", cfg.string(), "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_TRUE(csv_files(d.path()).empty());
}

TEST(Cli, MissingConfigIsInputError) {
  TempDir d;
  const auto r = run({"project", "--config", (d.path() / "nope.cfg").string()});
  EXPECT_EQ(r.code, kExitInput);
}

TEST(Cli, UnknownSubcommandIsInputError) {
  TempDir d;
  const auto cfg = write_config(d.path(), "c.cfg", "x = 1\n");
  EXPECT_EQ(run({"frobnicate", "--config", cfg.string()}).code, kExitInput);
}

TEST(Cli, ProjectWritesHashedReport) {
  TempDir d;
  const auto cfg = write_config(d.path(), "c.cfg", "spectrum = [0, 0.1; 2.2, 2.4]\nperiod = 1\n");
  const auto r = run({"project", "--config", cfg.string(), "--out", d.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto files = csv_files(d.path());
  ASSERT_EQ(files.size(), 1u);
  const std::string name = files[0].filename().string();
  EXPECT_EQ(name.rfind("project-", 0), 0u);
  EXPECT_EQ(name.size(), std::string("project-").size() + 16 + 4);
  const auto text = slurp(files[0]);
  EXPECT_EQ(first_line(text), "lo,hi");
  const auto at = r.out.find("measure=");
  ASSERT_NE(at, std::string::npos) << r.out;
  EXPECT_NEAR(std::stod(r.out.substr(at + 8)), 0.3, 1e-12);

  // Rerun: same bytes, same name.
  const auto again = run({"project", "--config", cfg.string(), "--out", d.path().string()});
  ASSERT_EQ(again.code, kExitOk);
  const auto files2 = csv_files(d.path());
  ASSERT_EQ(files2.size(), 1u);
  EXPECT_EQ(slurp(files2[0]), text);
}

TEST(Cli, FlattenCertifies) {
  TempDir d;
  const auto cfg = write_config(d.path(), "f.cfg", "eps = 0.25\nm = 5\n");
  const auto r = run({"flatten", "--config", cfg.string(), "--out", d.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto files = csv_files(d.path());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(first_line(slurp(files[0])), "eps,band_lo,band_hi,grid_step,observed_max,slack,certified,n,m");
}

TEST(Cli, FrameOnExplicitSpectrum) {
  TempDir d;
  const auto cfg = write_config(d.path(), "fr.cfg",
                                "lambda_grid = -8, 1, 17\nspectrum = [0, 1]\nclaimed = 0.5\n");
  const auto r = run({"frame", "--config", cfg.string(), "--out", d.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto files = csv_files(d.path());
  ASSERT_EQ(files.size(), 1u);
  const auto text = slurp(files[0]);
  EXPECT_EQ(first_line(text), "n,min_eig,claimed,certified");
  EXPECT_NE(text.find("true"), std::string::npos);
}

TEST(Cli, FrameUncertifiedClaimExitsTwo) {
  TempDir d;
  const auto cfg = write_config(d.path(), "fr.cfg",
                                "lambda_grid = -8, 1, 17\nspectrum = [0, 1]\nclaimed = 2\n");
  EXPECT_EQ(run({"frame", "--config", cfg.string(), "--out", d.path().string()}).code,
            kExitUncertified);
}

TEST(Cli, LambdaConflictIsInputError) {
  TempDir d;
  const auto cfg = write_config(d.path(), "fr.cfg",
                                "lambda = 0, 1\nlambda_grid = 0, 1, 2\nspectrum = [0, 1]\n");
  EXPECT_EQ(run({"frame", "--config", cfg.string(), "--out", d.path().string()}).code, kExitInput);
}

TEST(Cli, RandomMcDependsOnSeed) {
  TempDir d;
  const auto cfg = write_config(d.path(), "mc.cfg", "q = 3.5\nN = 1\nJ = 2\ntrials = 2000\n");
  ASSERT_EQ(run({"random-mc", "--config", cfg.string(), "--out", d.path().string(), "--seed", "3"}).code,
            kExitOk);
  ASSERT_EQ(run({"random-mc", "--config", cfg.string(), "--out", d.path().string(), "--seed", "3"}).code,
            kExitOk);
  EXPECT_EQ(csv_files(d.path()).size(), 1u);
  ASSERT_EQ(run({"random-mc", "--config", cfg.string(), "--out", d.path().string(), "--seed", "4"}).code,
            kExitOk);
  const auto files = csv_files(d.path());
  ASSERT_EQ(files.size(), 2u);
  for (const auto& f : files) EXPECT_EQ(first_line(slurp(f)), "q,N,J,trials,freq,stderr,seed");
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  TempDir a, b;
  const auto cfg = write_config(a.path(), "mc.cfg", "q = 3.4\nN = 2\nJ = 30\ntrials = 3000\n");
  ASSERT_EQ(run({"random-mc", "--config", cfg.string(), "--out", a.path().string(), "--threads", "1"}).code,
            kExitOk);
  ASSERT_EQ(run({"random-mc", "--config", cfg.string(), "--out", b.path().string(), "--threads", "3"}).code,
            kExitOk);
  const auto fa = csv_files(a.path());
  const auto fb = csv_files(b.path());
  ASSERT_EQ(fa.size(), 1u);
  ASSERT_EQ(fb.size(), 1u);
  EXPECT_EQ(fa[0].filename(), fb[0].filename());
  EXPECT_EQ(slurp(fa[0]), slurp(fb[0]));
}

TEST(Cli, DomainErrorMapsToExitCode) {
  TempDir d;
  const auto cfg = write_config(d.path(), "p.cfg", "spectrum = [0, 1]\nperiod = -1\n");
  const auto r = run({"project", "--config", cfg.string(), "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_FALSE(r.err.empty());
}
