#include "eigrestrict/io.hpp"
#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace eigrestrict;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("eigrestrict_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Numbers, SeventeenDigitRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, kInfinity}) EXPECT_EQ(parse_double(fmt17(v)), v);
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

TEST(GridCsv, HeaderAndRows) {
  const auto g = equator_grid(3, 1, 5);
  std::ostringstream os;
  write_grid_csv(os, g);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x0,x1,x2,x3,weight");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(SystemCsv, RoundTripIsBitExact) {
  const auto dir = scratch("system");
  const auto g = meridian_arc_grid(24);
  auto sys = window_system_low(20, 4, g);
  sys.set_weights(weight_profile(WeightProfile::geometric, static_cast<Eigen::Index>(sys.count())));
  save_system(dir / "sys.csv", sys, g);
  const auto back = load_system(dir / "sys.csv");
  EXPECT_EQ(back.family, "window_low");
  EXPECT_EQ(back.values, sys.values);
  EXPECT_EQ(back.t, sys.t);
  ASSERT_EQ(back.labels.size(), sys.labels.size());
  EXPECT_EQ(back.labels[2].index, 6);
  std::ifstream js(dir / "sys.csv.json");
  const auto meta = nlohmann::json::parse(js);
  EXPECT_EQ(meta.at("chart"), "arc");
  EXPECT_EQ(meta.at("nodes"), g.size());
}

TEST(ReportCsv, FitsRecomputeFromRows) {
  WeylParams prm;
  prm.degrees = {16, 32, 64, 128};
  prm.samples = 4;
  auto rep = weyl_check(prm);
  rep.config = {{"experiment", "weyl"}, {"p", "4"}};
  const auto dir = scratch("report");
  const auto path = save_report(dir, rep);
  EXPECT_EQ(path.filename(), "weyl_2_1_4_eigenspace.csv");
  EXPECT_TRUE(fs::exists(dir / "weyl_2_1_4_eigenspace.txt"));

  std::ifstream is(path);
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  EXPECT_EQ(text.rfind("# experiment = weyl\n# p = 4\n", 0), 0u);
  EXPECT_NE(text.find("\nl,lambda,quantity,value\n"), std::string::npos);
  EXPECT_NE(text.find("# verdict,pointwise_weyl,PASS,"), std::string::npos);

  std::istringstream rows_in(text);
  const auto rows = read_report_rows(rows_in);
  std::vector<double> lx, ly;
  for (const auto& r : rows)
    if (r.quantity == "fit:density_norm") {
      lx.push_back(std::log(r.lambda));
      ly.push_back(std::log(r.value));
    }
  ASSERT_EQ(lx.size(), 4u);
  EXPECT_NEAR(oracle::ols_slope(lx, ly), rep.fit("density_norm").slope, 1e-12);
}

TEST(ReportSummary, OneLinePerVerdict) {
  ExperimentReport rep;
  rep.experiment = "demo";
  rep.tag = "x";
  rep.p = 4;
  rep.at_most("a", 0.0, 1.0, 0.1, "bound");
  rep.below("b", 2.0, 1.0, "other");
  const auto s = report_summary(rep);
  EXPECT_NE(s.find("demo (d=2, k=1, p=4, x): FAIL"), std::string::npos);
  EXPECT_NE(s.find("[PASS] a: 0 <= 1 (tol 0.10000000000000001) -- bound"), std::string::npos);
  EXPECT_NE(s.find("[FAIL] b: 2 < 1 -- other"), std::string::npos);
}
