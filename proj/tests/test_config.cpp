#include "cli_app.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace eigrestrict;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("eigrestrict_test_config_" + name);
  fs::remove_all(dir);
  return dir;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "eigrestrict");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = app::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST(ConfigParse, MinimalDocument) {
  const auto c = parse_config("experiment = exponents\nd = 2\nk = 1\np = 6\n");
  EXPECT_EQ(c.experiment, "exponents");
  EXPECT_EQ(c.p, 6.0);
  EXPECT_NO_THROW(validate(c));
}

TEST(ConfigParse, CommentsBlanksAndInfinity) {
  const auto c = parse_config("# header\n\nexperiment = weyl   # trailing\n  p = inf\nalpha = 3\n");
  EXPECT_TRUE(std::isinf(c.p));
  ASSERT_TRUE(c.alpha.has_value());
  EXPECT_EQ(*c.alpha, 3.0);
}

TEST(ConfigParse, DiagnosticsCarryLineNumbers) {
  auto message = [](const std::string& doc) {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message("d = 2\nd = 3\n"), "line 2: duplicate key 'd' (first set on line 1)");
  EXPECT_EQ(message("d = 2\n\nbogus = 1\n"), "line 3: unknown key 'bogus'");
  EXPECT_EQ(message("d = two\n"), "line 1: d: expected an integer, got 'two'");
  EXPECT_EQ(message("p\n"), "line 1: expected 'key = value'");
  EXPECT_EQ(message("seed = -4\n"), "line 1: seed: expected a nonnegative integer, got '-4'");
}

TEST(ConfigEcho, RoundTripsEveryField) {
  RunConfig c;
  c.experiment = "scaling";
  c.d = 2;
  c.p = 1.0 / 3.0 + 5.0;
  c.alpha = 2.75;
  c.beta = 0.71666666666666667;
  c.tau = 0.4;
  c.C = 6.5;
  c.lmin = 20;
  c.lmax = 200;
  c.count = 6;
  c.spacing = "linear";
  c.resolution = 12;
  c.seed = 18446744073709551615ull;
  c.out = "some/dir";
  c.family = "random";
  c.profile = "spike";
  c.samples = 3;
  c.draws = 9;
  c.p_grid = "2:8:1/2";
  EXPECT_EQ(parse_config(echo_config(c)), c);
  RunConfig inf;
  inf.experiment = "weyl";
  inf.p = kInfinity;
  EXPECT_EQ(parse_config(echo_config(inf)), inf);
}

TEST(ConfigValidate, MissingAndUnknownExperiment) {
  EXPECT_THROW(validate(RunConfig{}), ConfigError);
  RunConfig c;
  c.experiment = "frobnicate";
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sharpness-zonal"), std::string::npos);
  }
}

TEST(ConfigValidate, PerExperimentPreconditions) {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    EXPECT_THROW(validate(c), ConfigError) << echo_config(c);
  };
  bad([](RunConfig& c) { c.experiment = "weyl", c.p = 1.5; });
  bad([](RunConfig& c) { c.experiment = "sharpness-s2", c.d = 3, c.k = 2; });
  bad([](RunConfig& c) { c.experiment = "sharpness-zonal", c.d = 3, c.k = 2, c.beta = 0.6; });
  bad([](RunConfig& c) { c.experiment = "scaling", c.d = 3, c.family = "window_low"; });
  bad([](RunConfig& c) { c.experiment = "scaling", c.family = "nope"; });
  bad([](RunConfig& c) { c.experiment = "scaling", c.profile = "ones,flat"; });
  bad([](RunConfig& c) { c.experiment = "weyl", c.lmin = 16, c.lmax = 20, c.count = 2; });
  bad([](RunConfig& c) { c.experiment = "exponents", c.p_grid = "2:inf"; });
  bad([](RunConfig& c) { c.experiment = "exponents", c.p_grid = "1,2"; });
  bad([](RunConfig& c) { c.experiment = "duality", c.alpha = 0.5; });
  bad([](RunConfig& c) { c.experiment = "weyl", c.k = 2; });
  RunConfig ok;
  ok.experiment = "sharpness-zonal";
  ok.d = 3;
  ok.k = 2;
  ok.beta = 0.7167;
  EXPECT_NO_THROW(validate(ok));
}

TEST(PGrid, RangesListsAndRationals) {
  const auto a = parse_p_grid("2:4:1/2");
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a[1].value(), Rational(5, 2));
  const auto b = parse_p_grid("3, 8/3, inf");
  EXPECT_TRUE(b[2].is_infinite());
  EXPECT_EQ(b[1].value(), Rational(8, 3));
  EXPECT_THROW(parse_p_grid("2:x"), ConfigError);
}

TEST(ExponentTable, ExactEntries) {
  const auto rows = exponent_table(2, 1, parse_p_grid("2,6,inf"));
  EXPECT_EQ(rows[0].at("alpha"), "2");
  EXPECT_EQ(rows[1].at("delta"), "1/3");
  EXPECT_EQ(rows[1].at("h"), "1/3");
  EXPECT_EQ(rows[2].at("alpha"), "inf");
  const auto codim2 = exponent_table(4, 1, parse_p_grid("6"));
  EXPECT_EQ(codim2[0].at("alpha"), "[1,3]");
  EXPECT_EQ(rational_exponent(2.5).value(), Rational(5, 2));
  EXPECT_THROW(rational_exponent(std::sqrt(2.0) + 2), ConfigError);
}

TEST(OutputDirectory, FlagThenEnvironmentThenDefault) {
  RunConfig c;
  ::unsetenv("EIGRESTRICT_OUT");
  EXPECT_EQ(output_directory(c), fs::path("eigrestrict_out"));
  ::setenv("EIGRESTRICT_OUT", "/tmp/from_env", 1);
  EXPECT_EQ(output_directory(c), fs::path("/tmp/from_env"));
  c.out = "/tmp/from_flag";
  EXPECT_EQ(output_directory(c), fs::path("/tmp/from_flag"));
  ::unsetenv("EIGRESTRICT_OUT");
}

TEST(CliExitCodes, PassWritesTable) {
  const auto dir = scratch("pass");
  std::string out;
  EXPECT_EQ(run_cli({"exponents", "--d", "3", "--k", "2", "--p-grid", "2:6", "--out", dir.string()}, &out), 0);
  EXPECT_TRUE(fs::exists(dir / "exponents_3_2_table.csv"));
  EXPECT_NE(out.find("codim1_middle"), std::string::npos);
}

TEST(CliExitCodes, ConfigErrorsReturnTwo) {
  std::string err;
  EXPECT_EQ(run_cli({"no-such-experiment"}, nullptr, &err), 2);
  EXPECT_EQ(run_cli({"sharpness-zonal", "--d", "3", "--k", "1", "--p", "4", "--beta", "0.3"}, nullptr, &err), 2);
  EXPECT_NE(err.find("beta_threshold"), std::string::npos);
  EXPECT_EQ(run_cli({"weyl", "--p", "abc"}, nullptr, &err), 2);
  EXPECT_NE(err.find("--p"), std::string::npos);
  EXPECT_EQ(run_cli({"weyl", "--config", "/nonexistent/file.conf"}, nullptr, &err), 2);
}

TEST(CliExitCodes, VerdictFailureReturnsOne) {
  // At these degrees the packet set is a single point, so the lower-bound slope is not reached.
  const auto dir = scratch("fail");
  std::string out;
  EXPECT_EQ(run_cli({"sharpness-zonal", "--d", "3", "--k", "1", "--p", "4", "--beta", "0.8", "--out", dir.string()}, &out), 1);
  EXPECT_NE(out.find("[FAIL] ones_slope"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "sharpness-zonal_3_1_4_beta0.8_C8.csv")) << out;
}

TEST(CliExitCodes, ConfigFileWithFlagOverride) {
  const auto dir = scratch("file");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "run.conf");
    os << "experiment = weyl\nlmin = 16\nlmax = 64\ncount = 4\nsamples = 5\np = 6\n";
  }
  std::string out;
  EXPECT_EQ(run_cli({"weyl", "--config", (dir / "run.conf").string(), "--p", "8", "--out", dir.string()}, &out), 0);
  EXPECT_TRUE(fs::exists(dir / "weyl_2_1_8_eigenspace.csv"));
  {
    std::ofstream os(dir / "other.conf");
    os << "experiment = duality\n";
  }
  EXPECT_EQ(run_cli({"weyl", "--config", (dir / "other.conf").string()}), 2);
}

TEST(CliExitCodes, ExceptionMapping) {
  std::ostringstream err;
  EXPECT_EQ(app::exit_code_for(std::make_exception_ptr(NumericalError("Gram matrix is not positive definite")), err), 3);
  EXPECT_EQ(app::exit_code_for(std::make_exception_ptr(std::domain_error("degree out of range")), err), 3);
  EXPECT_EQ(app::exit_code_for(std::make_exception_ptr(ConfigError("bad")), err), 2);
  EXPECT_NE(err.str().find("numerical error: Gram"), std::string::npos);
  EXPECT_EQ(run_cli({"kernel-decay", "--lmin", "5000", "--lmax", "9000", "--count", "4"}), 2);
}
