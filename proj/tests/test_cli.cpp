#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qeo/cli.hpp"
#include "qeo/io.hpp"

namespace {

using nlohmann::json;
using qeo::cli::RunConfig;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const RunConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = qeo::cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig command(const std::string& name) {
  RunConfig cfg;
  cfg.command = name;
  return cfg;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qeo_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

TEST(Cli, DiceExampleDefaults) {
  const auto r = run(command("dice-example"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc.at("value").get<double>(), -0.45, 1e-9);
  EXPECT_EQ(doc.at("r").get<int>(), 2);
  EXPECT_NEAR(doc.at("dual_normalization").get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(doc.at("dual_attained").get<double>(), -0.45, 1e-9);
  EXPECT_GE(doc.at("dual_min_value").get<double>(), 0.0);
  EXPECT_TRUE(doc.at("certificate_in_cone").get<bool>());
  EXPECT_NEAR(doc.at("dual").at("1,1,0,0,0,0").get<double>(), 0.5, 1e-12);
}

TEST(Cli, DiceExampleHigherLevel) {
  auto cfg = command("dice-example");
  cfg.r_min = 5;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out).at("value").get<double>(), 0.0, 1e-9);
}

TEST(Cli, QuantumSweepStartsAtLeastEigenvalue) {
  auto cfg = command("quantum-sweep");
  cfg.r_max = 5;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "value", "compressed_dim"}));
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_NEAR(std::stod(rows[1][1]), -0.75, 1e-9);
  EXPECT_EQ(rows[1][2], "4");
  EXPECT_EQ(rows[6][2], "14");
}

TEST(Cli, DiceSweepOfConstantIsFlat) {
  auto cfg = command("dice-sweep");
  cfg.polynomial = "0.3";
  cfg.r_min = 2;
  cfg.r_max = 4;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "value"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "0.3");
}

TEST(Cli, SweepRowCountsMatchRange) {
  for (const auto& [lo, hi] : std::vector<std::pair<int, int>>{{2, 2}, {2, 7}, {3, 12}}) {
    auto cfg = command("dice-sweep");
    cfg.r_min = lo;
    cfg.r_max = hi;
    EXPECT_EQ(csv_rows(run(cfg).out).size(), static_cast<std::size_t>(hi - lo + 2));
  }
  for (const auto& [lo, hi] : std::vector<std::pair<int, int>>{{0, 0}, {0, 20}, {4, 9}}) {
    auto cfg = command("quantum-sweep");
    cfg.r_min = lo;
    cfg.r_max = hi;
    EXPECT_EQ(csv_rows(run(cfg).out).size(), static_cast<std::size_t>(hi - lo + 2));
  }
}

TEST(Cli, DiceSweepDefaultsSpanDegreeToTwelve) {
  const auto rows = csv_rows(run(command("dice-sweep")).out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[1][0], "2");
  EXPECT_EQ(rows.back()[0], "12");
  EXPECT_NEAR(std::stod(rows[1][1]), -0.45, 1e-9);
}

TEST(Cli, SignedMeasureDefaults) {
  const auto r = run(command("signed-measure"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc.at("status"), "optimal");
  EXPECT_EQ(doc.at("nonnegative_status"), "infeasible");
  EXPECT_GT(doc.at("negative_weights").get<int>(), 0);
  EXPECT_NEAR(doc.at("total_weight").get<double>(), 1.0, 1e-9);
  EXPECT_LE(doc.at("roundtrip_max_error").get<double>(), 1e-8);
}

TEST(Cli, QuantumWitnessDefaults) {
  const auto r = run(command("quantum-witness"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  const std::vector<double> expected{-0.75, 1.25, 1.25, 3.25};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(doc.at("eigenvalues")[i].get<double>(), expected[i], 1e-9);
  EXPECT_NEAR(doc.at("extremal_state_expectation").get<double>(), -0.75, 1e-10);
  EXPECT_TRUE(doc.at("extremal_state_pure").get<bool>());
  EXPECT_FALSE(doc.at("extremal_state_product").get<bool>());
  EXPECT_GE(doc.at("product_state_minimum_estimate").get<double>(), 0.25 - 1e-12);
}

TEST(Cli, GleasonDefaults) {
  const auto r = run(command("gleason"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  const auto bell = doc.at("entangled_bell").at("probabilities");
  EXPECT_NEAR(bell[0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(doc.at("random_state_random_basis").at("sum").get<double>(), 1.0, 1e-10);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const char* name : {"dice-example", "dice-sweep", "signed-measure", "quantum-witness", "quantum-sweep", "gleason"}) {
    auto cfg = command(name);
    cfg.seed = 12345;
    const auto a = run(cfg);
    const auto b = run(cfg);
    ASSERT_EQ(a.code, 0) << name << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << name;
  }
}

TEST(Cli, SeedChangesRandomSection) {
  auto a = command("gleason");
  auto b = command("gleason");
  b.seed = 2;
  EXPECT_NE(run(a).out, run(b).out);
}

TEST(Cli, BadInputsExitTwo) {
  auto bad_poly = command("dice-example");
  bad_poly.polynomial = "th1 + th9";
  auto reversed = command("quantum-sweep");
  reversed.r_min = 4;
  reversed.r_max = 2;
  auto below_degree = command("dice-sweep");
  below_degree.r_min = 1;
  auto missing = command("quantum-sweep");
  missing.witness_path = "/nonexistent/witness.json";
  auto unknown = command("dice-roll");
  auto bad_grid = command("signed-measure");
  bad_grid.grid = 0;
  for (const auto& cfg : {bad_poly, reversed, below_degree, missing, unknown, bad_grid}) {
    const auto r = run(cfg);
    EXPECT_EQ(r.code, 2) << cfg.command;
    EXPECT_TRUE(r.out.empty());
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST_F(TempDir, OverflowingWitnessExitsThree) {
  auto cfg = command("quantum-witness");
  cfg.witness_path = write("w.json", R"({"dim": 4, "re": [[1e308, 1e308, 0, 0], [1e308, -1e308, 0, 0],
                                                           [0, 0, 1, 0], [0, 0, 0, 1]]})");
  EXPECT_EQ(run(cfg).code, 3);
  cfg.command = "quantum-sweep";
  EXPECT_EQ(run(cfg).code, 3);
}

TEST_F(TempDir, MalformedFilesExitTwo) {
  auto cfg = command("quantum-sweep");
  cfg.witness_path = write("bad.json", "{\"dim\": 4, \"re\": [[1, 0]]}");
  EXPECT_EQ(run(cfg).code, 2);
  cfg.witness_path = write("garbage.json", "not json");
  EXPECT_EQ(run(cfg).code, 2);
  cfg.witness_path = write("nonherm.json", R"({"dim": 4, "re": [[0,1,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  EXPECT_EQ(run(cfg).code, 2);

  auto table = command("signed-measure");
  table.table_path = write("t.json", R"({"table": {"1,2": 0.6, "2,1": 0.4}})");
  EXPECT_EQ(run(table).code, 2);  // not exchangeable
}

TEST_F(TempDir, WitnessFileWithExplicitFactorDims) {
  auto cfg = command("quantum-sweep");
  cfg.r_max = 2;
  const auto w = qeo::quantum::reference_witness();
  auto doc = qeo::io::matrix_to_json(w.matrix().matrix());
  cfg.witness_path = write("w.json", doc.dump());
  const auto implicit = run(cfg);
  doc["nx"] = 2;
  doc["ny"] = 2;
  cfg.witness_path = write("w2.json", doc.dump());
  const auto explicit_dims = run(cfg);
  ASSERT_EQ(implicit.code, 0) << implicit.err;
  EXPECT_EQ(implicit.out, explicit_dims.out);
  EXPECT_EQ(implicit.out, run(command("quantum-sweep")).out.substr(0, implicit.out.size()));

  doc["nx"] = 3;
  cfg.witness_path = write("w3.json", doc.dump());
  EXPECT_EQ(run(cfg).code, 2);
}

TEST_F(TempDir, TableFileRoundTrip) {
  auto cfg = command("signed-measure");
  cfg.table_path = write("t.json", qeo::io::table_to_json(qeo::dice::pair_exclusion_table(4)).dump());
  cfg.grid = 4;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc.at("k").get<int>(), 4);
  EXPECT_EQ(doc.at("nonnegative_status"), "infeasible");
  EXPECT_LE(doc.at("roundtrip_max_error").get<double>(), 1e-8);
}

TEST_F(TempDir, OutputPathReceivesText) {
  auto cfg = command("dice-sweep");
  cfg.out_path = path("sweep.csv");
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  cfg.out_path.clear();
  EXPECT_EQ(qeo::io::read_file(path("sweep.csv")), run(cfg).out);
}

TEST(Io, FormatNumber) {
  EXPECT_EQ(qeo::io::format_number(-0.45), "-0.45");
  EXPECT_EQ(qeo::io::format_number(-0.0), "0");
  EXPECT_EQ(qeo::io::format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Io, MatrixJsonRoundTrip) {
  qeo::ComplexMatrix m(2, 2);
  m(0, 1) = qeo::Complex(1.5, -2.0);
  m(1, 0) = qeo::Complex(1.5, 2.0);
  const auto back = qeo::io::matrix_from_json(qeo::io::matrix_to_json(m));
  EXPECT_EQ(back.max_abs_diff(m), 0.0);
  EXPECT_THROW(qeo::io::matrix_from_json(json::parse(R"({"dim": 2, "re": [[1, 2]]})")), qeo::ParseError);
}

TEST(Io, TableJsonInfersShape) {
  const auto t = qeo::io::table_from_json(json::parse(R"({"1,1": 0.5, "3,3": 0.5})"));
  EXPECT_EQ(t.k, 3u);
  EXPECT_EQ(t.r, 2);
  const int tup[2] = {2, 2};
  EXPECT_DOUBLE_EQ(t.at(tup), 0.5);
  EXPECT_THROW(qeo::io::table_from_json(json::parse(R"({"1,x": 1.0})")), qeo::ParseError);
  EXPECT_THROW(qeo::io::table_from_json(json::parse(R"({"1,2": 0.5, "1": 0.5})")), qeo::ParseError);
}

}  // namespace
