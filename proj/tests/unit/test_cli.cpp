#include "flatbody/app/commands.hpp"
#include "flatbody/app/config.hpp"
#include "flatbody/app/output.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace flatbody;
using namespace flatbody::app;
using nlohmann::json;

namespace {

json bounded_config() {
  return json::parse(R"json({
    "inertia": {"J1": 1, "J2": 1, "J3": 1},
    "potential": "HARMONIC(k=1);THICKNESS(a=1,b=1)",
    "initial_state": {"lambda": 1.4, "mu": 0.4, "rho": 1.05, "theta": 0.2,
                      "p_lambda": 0.1, "p_mu": -0.05, "p_rho": 0.05, "p_theta": 1,
                      "s1": 0.1, "s2": -0.1, "s3": 2},
    "integrator": {"method": "RK4_FIXED", "dt": 0.01, "t_end": 1, "sample_stride": 10}
  })json");
}

json stationary_config() {
  return json::parse(R"json({
    "inertia": {"J1": 1, "J2": 1, "J3": 1},
    "potential": {"flat": {"model": "SEPARATED_INVERSE", "c": 1, "d": 1},
                  "thickness": {"a": 1, "b": 8}},
    "stationary": {"s3": 1.5, "p_theta": 0.5, "guess": [1.5, 0.5, 1.0]},
    "integrator": {"method": "RK4_FIXED", "dt": 0.001, "t_end": 10, "sample_stride": 100}
  })json");
}

std::string config_error_of(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    return e.what();
  }
  ADD_FAILURE() << "config was accepted";
  return {};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("flatbody_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  CommandOptions with_config(const json& doc) {
    const auto path = dir_ / "config.json";
    std::ofstream(path) << doc.dump();
    CommandOptions o;
    o.config_path = path;
    o.out_dir = dir_ / "out";
    o.quiet = true;
    return o;
  }

  json read_json(const std::string& name) {
    std::ifstream in(dir_ / "out" / name);
    return json::parse(in);
  }

  std::filesystem::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST(Config, ParsesBothPotentialForms) {
  const RunConfig a = parse_run_config(bounded_config());
  EXPECT_TRUE(std::holds_alternative<HarmonicPotential>(a.potential.flat));
  ASSERT_TRUE(a.initial_state.has_value());
  EXPECT_DOUBLE_EQ(a.initial_state->mom.s3, 2.0);
  EXPECT_TRUE(a.initial_state->attitude.has_value());
  EXPECT_TRUE(a.has_integrator);

  const RunConfig b = parse_run_config(stationary_config());
  EXPECT_TRUE(std::holds_alternative<SeparatedInversePotential>(b.potential.flat));
  EXPECT_DOUBLE_EQ(b.potential.thickness.b, 8.0);
  EXPECT_DOUBLE_EQ(b.stationary_problem().s3, 1.5);
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  json doc = bounded_config();
  doc["extra"] = 1;
  EXPECT_NE(config_error_of(doc).find("extra"), std::string::npos);
  doc = bounded_config();
  doc["initial_state"]["omega"] = 1;
  EXPECT_NE(config_error_of(doc).find("initial_state.omega"), std::string::npos);
  doc = bounded_config();
  doc["integrator"]["order"] = 4;
  EXPECT_NE(config_error_of(doc).find("integrator.order"), std::string::npos);
}

TEST(Config, NamesOffendingKey) {
  json doc = bounded_config();
  doc["integrator"]["dt"] = -0.1;
  EXPECT_NE(config_error_of(doc).find("dt"), std::string::npos);
  doc = bounded_config();
  doc["inertia"]["J3"] = "heavy";
  EXPECT_NE(config_error_of(doc).find("inertia.J3"), std::string::npos);
  doc = bounded_config();
  doc["initial_state"].erase("rho");
  EXPECT_NE(config_error_of(doc).find("initial_state.rho"), std::string::npos);
  doc = bounded_config();
  doc["potential"] = "HARMONIC(k=0);THICKNESS(a=1,b=1)";
  EXPECT_NE(config_error_of(doc).find("potential"), std::string::npos);
  doc = bounded_config();
  doc["integrator"]["method"] = "EULER";
  EXPECT_NE(config_error_of(doc).find("integrator.method"), std::string::npos);
}

TEST(Config, Attitude) {
  json doc = bounded_config();
  doc["initial_state"]["attitude"] = {0, -1, 0, 1, 0, 0, 0, 0, 1};
  const RunConfig cfg = parse_run_config(doc);
  EXPECT_DOUBLE_EQ(cfg.initial_state->attitude->matrix()(0, 1), -1.0);
  doc["initial_state"]["attitude"] = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  EXPECT_NE(config_error_of(doc).find("attitude"), std::string::npos);
  doc["initial_state"]["attitude"] = {1, 0, 0};
  EXPECT_NE(config_error_of(doc).find("attitude"), std::string::npos);
}

TEST(Config, SweepPathMustExist) {
  json doc = bounded_config();
  doc["sweep"] = {{"parameter", "initial_state.s3"}, {"values", {1.0, 2.0}}};
  EXPECT_NO_THROW(parse_run_config(doc));
  doc["sweep"]["parameter"] = "initial_state.s4";
  EXPECT_NE(config_error_of(doc).find("sweep.parameter"), std::string::npos);
}

TEST(Output, CsvHeaderAndPrecision) {
  const RunConfig cfg = parse_run_config(bounded_config());
  std::ostringstream csv;
  write_trajectory_csv(csv, {make_sample(0.1, *cfg.initial_state, cfg.inertia, cfg.potential)});
  std::istringstream lines(csv.str());
  std::string header;
  std::string row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "t,lambda,mu,rho,theta,p_lambda,p_mu,p_rho,p_theta,s1,s2,s3,energy,K1,K2,K3");
  EXPECT_EQ(row.substr(0, 20), "0.10000000000000001,");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 15);
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
}

TEST_F(CliTest, SimulateWritesOutputs) {
  EXPECT_EQ(cmd_simulate(with_config(bounded_config()), out_, err_), kExitOk) << err_.str();
  const json summary = read_json("summary.json");
  EXPECT_EQ(summary["termination"], "completed");
  EXPECT_EQ(summary["samples"], 11);
  EXPECT_LE(summary["conservation"]["max_rel_energy_drift"].get<double>(), 1e-6);
  std::ifstream csv(dir_ / "out" / "trajectory.csv");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 12);
}

TEST_F(CliTest, SimulateStationaryFixture) {
  EXPECT_EQ(cmd_simulate(with_config(stationary_config()), out_, err_), kExitOk) << err_.str();
  EXPECT_LE(read_json("summary.json")["conservation"]["max_invariant_drift"].get<double>(), 1e-6);
}

TEST_F(CliTest, SimulateRejectsDegenerateStart) {
  json doc = bounded_config();
  doc["initial_state"]["mu"] = 1.4;
  EXPECT_EQ(cmd_simulate(with_config(doc), out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("degenerate"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "out" / "trajectory.csv"));
}

TEST_F(CliTest, SimulateRejectsNegativeDt) {
  json doc = bounded_config();
  doc["integrator"]["dt"] = -1e-3;
  EXPECT_EQ(cmd_simulate(with_config(doc), out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("dt"), std::string::npos);
}

TEST_F(CliTest, SimulateFlagsDegeneracy) {
  json doc = bounded_config();
  doc["initial_state"] = {{"lambda", 1.2}, {"mu", 1.0}, {"rho", 1.0}, {"p_lambda", -0.5}, {"p_mu", 0.5}};
  doc["integrator"]["t_end"] = 5;
  doc["integrator"]["dt"] = 1e-3;
  doc["integrator"]["degeneracy_epsilon"] = 1e-2;
  EXPECT_EQ(cmd_simulate(with_config(doc), out_, err_), kExitFlagged);
  EXPECT_EQ(read_json("summary.json")["termination"], "degeneracy");
}

TEST_F(CliTest, SweepRunsEveryValueInOrder) {
  json doc = bounded_config();
  doc["sweep"] = {{"parameter", "initial_state.s3"}, {"values", {1.5, 2.0, 2.5}}};
  EXPECT_EQ(cmd_simulate(with_config(doc), out_, err_), kExitOk) << err_.str();
  const json index = read_json("summary_sweep.json");
  ASSERT_EQ(index["runs"].size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(index["runs"][i]["index"], i);
    const json s = read_json("summary_" + std::to_string(i) + ".json");
    EXPECT_EQ(s["final_state"]["s3"].is_number(), true);
  }
  EXPECT_DOUBLE_EQ(index["runs"][2]["value"].get<double>(), 2.5);
}

TEST_F(CliTest, StationaryFound) {
  EXPECT_EQ(cmd_stationary(with_config(stationary_config()), out_, err_), kExitOk);
  const json s = read_json("stationary.json");
  EXPECT_EQ(s["status"], "found");
  EXPECT_LE(s["residual_norm"].get<double>(), 1e-10);
  EXPECT_DOUBLE_EQ(s["rho_star"].get<double>(), 0.5);
}

TEST_F(CliTest, StationaryNoSolution) {
  json doc = stationary_config();
  doc["potential"] = "HARMONIC(k=1);THICKNESS(a=1,b=1)";
  doc["stationary"] = {{"s3", 1}, {"p_theta", 0}};
  EXPECT_EQ(cmd_stationary(with_config(doc), out_, err_), kExitNoSolution);
  const json s = read_json("stationary.json");
  EXPECT_EQ(s["status"], "no_solution");
  EXPECT_TRUE(s["reason"].is_string());
}

TEST_F(CliTest, StationaryRequiresSection) {
  EXPECT_EQ(cmd_stationary(with_config(bounded_config()), out_, err_), kExitConfig);
}

TEST_F(CliTest, MissingConfigFile) {
  CommandOptions o;
  o.config_path = dir_ / "absent.json";
  EXPECT_EQ(cmd_simulate(o, out_, err_), kExitConfig);
}

TEST_F(CliTest, DecomposeCases) {
  CommandOptions o;
  EXPECT_EQ(cmd_decompose({"2", "0", "0", "0", "1", "0", "0", "0", "0.5"}, o, out_, err_), kExitOk);
  const json d = json::parse(out_.str());
  EXPECT_DOUBLE_EQ(d["lambda"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(d["mu"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(d["rho"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(d["theta"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(d["kirchhoff_love"].get<double>(), 0.25);

  EXPECT_EQ(cmd_decompose({"1", "0", "0", "0", "1", "0", "0", "0", "1"}, o, out_, err_), kExitFlagged);
  EXPECT_NE(err_.str().find("degenerate"), std::string::npos);
  EXPECT_EQ(cmd_decompose({"2", "0", "1", "0", "1", "0", "0", "0", "0.5"}, o, out_, err_), kExitFlagged);
  EXPECT_EQ(cmd_decompose({"2", "0", "0"}, o, out_, err_), kExitConfig);
  EXPECT_EQ(cmd_decompose({"2", "0", "0", "0", "1", "0", "0", "0", "abc"}, o, out_, err_), kExitConfig);
}

TEST_F(CliTest, CheckSuitePassesAndDetectsMutation) {
  CommandOptions o;
  o.quiet = true;
  EXPECT_EQ(cmd_check(o, out_, err_), kExitOk) << out_.str();
  std::ostringstream table;
  EXPECT_EQ(cmd_check(o, table, err_, 1e-3), 1);
  EXPECT_NE(table.str().find("bracket_oracle_equivalence     FAIL"), std::string::npos) << table.str();
  EXPECT_EQ(cmd_check(o, out_, err_), kExitOk);
}
