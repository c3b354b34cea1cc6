#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kFixtures = IBAP_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = ibap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ibap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static json read_json(const std::string& p) {
    std::ifstream in(p);
    return json::parse(in);
  }

  struct Row {
    int iter;
    double max_residual;
    std::optional<double> dist;
    std::optional<double> bound;
  };

  static std::vector<Row> read_csv(const std::string& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "iter,max_residual,dist_to_solution,bound");
    std::vector<Row> rows;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      while (cells.size() < 4) cells.emplace_back();
      auto opt = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        return std::stod(s);
      };
      rows.push_back({std::stoi(cells[0]), std::stod(cells[1]), opt(cells[2]), opt(cells[3])});
    }
    return rows;
  }

  static std::vector<double> real_vector(const json& j) {
    std::vector<double> v;
    for (const auto& x : j) {
      if (x.is_array()) {
        for (const auto& c : x) v.push_back(c.get<double>());
      } else {
        v.push_back(x.get<double>());
      }
    }
    return v;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, ibap::cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, ibap::cli::kUsage);
  EXPECT_EQ(run({"check"}).code, ibap::cli::kUsage);
  EXPECT_EQ(run({"solve", fixture("axes_r3.json"), "--method", "magic"}).code, ibap::cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, ibap::cli::kSuccess);
}

TEST_F(CliTest, CheckAxes) {
  const auto r = run({"check", fixture("axes_r3.json"), "--json-out", path("c.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  EXPECT_NE(r.out.find("verdict: IBAP holds"), std::string::npos);
  EXPECT_NE(r.out.find("prescription: feasible"), std::string::npos);
  const auto j = read_json(path("c.json"));
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_EQ(j["alpha"].get<double>(), 0.0);
  EXPECT_TRUE(j["unique"].get<bool>());
  EXPECT_EQ(j["levels"].size(), 2u);
}

TEST_F(CliTest, CheckRandomIbapLevels) {
  const auto r = run({"check", fixture("random_ibap.json"), "--json-out", path("c.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto j = read_json(path("c.json"));
  EXPECT_NEAR(j["levels"][0]["norm_pipiplus"].get<double>(), std::cos(0.7), 1e-12);
  EXPECT_NEAR(j["levels"][1]["norm_pipiplus"].get<double>(), 0.0, 1e-12);
  EXPECT_TRUE(j["levels"][0]["gamma"].is_number());
  EXPECT_NEAR(j["alpha"].get<double>(), std::cos(0.7), 1e-12);
}

TEST_F(CliTest, CheckDependentPlanes) {
  const auto r = run({"check", fixture("dependent_planes.json"), "--json-out", path("c.json")});
  EXPECT_EQ(r.code, ibap::cli::kHypothesis);
  const auto j = read_json(path("c.json"));
  EXPECT_FALSE(j["verdict"].get<bool>());
  EXPECT_FALSE(j["independent"].get<bool>());
  EXPECT_TRUE(j["unique"].get<bool>());
}

TEST_F(CliTest, SolveSumZeroIsInfeasible) {
  const auto r = run({"solve", fixture("sum_zero.json")});
  EXPECT_EQ(r.code, ibap::cli::kInfeasible);
  const auto c = run({"check", fixture("sum_zero.json"), "--json-out", path("c.json")});
  EXPECT_EQ(c.code, ibap::cli::kHypothesis);
  const auto j = read_json(path("c.json"));
  ASSERT_TRUE(j["certificate"].is_object());
  EXPECT_TRUE(j["certificate"]["sum_zero_witness"].get<bool>());
  EXPECT_GT(j["certificate"]["lower_bound"].get<double>(), 0.0);
}

TEST_F(CliTest, ZeroPrescriptionGivesZero) {
  const auto r = run({"solve", fixture("zero_prescription.json"), "--json-out", path("s.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  for (double v : real_vector(read_json(path("s.json"))["solution"])) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, AxesSolution) {
  const auto r = run({"solve", fixture("axes_r3.json"), "--json-out", path("s.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto j = read_json(path("s.json"));
  EXPECT_TRUE(j["anchored"].get<bool>());
  const auto x = real_vector(j["solution"]);
  EXPECT_NEAR(x[0], 2.0, 1e-14);
  EXPECT_NEAR(x[1], -1.0, 1e-14);
  EXPECT_NEAR(x[2], 0.5, 1e-14);
  EXPECT_LE(j["max_residual"].get<double>(), 1e-12);
}

TEST_F(CliTest, MethodsAgree) {
  for (const std::string f : {"random_ibap.json", "three_lines.json", "complex_ibap.json", "axes_r3.json"}) {
    std::vector<std::vector<double>> xs;
    for (const std::string m : {"recursion", "direct", "iterate"}) {
      const auto out = path(m + ".json");
      const auto r = run({"solve", fixture(f), "--method", m, "--json-out", out});
      ASSERT_EQ(r.code, ibap::cli::kSuccess) << f << " " << m << " " << r.err;
      const auto j = read_json(out);
      EXPECT_LE(j["max_residual"].get<double>(), 1e-8) << f << " " << m;
      xs.push_back(real_vector(j["solution"]));
    }
    for (std::size_t k = 0; k < xs[0].size(); ++k) {
      EXPECT_NEAR(xs[0][k], xs[1][k], 1e-8) << f;
      EXPECT_NEAR(xs[0][k], xs[2][k], 1e-6) << f;
    }
  }
}

TEST_F(CliTest, AnchorFlagOverridesFile) {
  const auto a = run({"solve", fixture("lines_60deg.json"), "--method", "direct", "--json-out", path("a.json")});
  const auto b = run({"solve", fixture("lines_60deg.json"), "--method", "direct", "--anchor", "[0, 0]",
                      "--json-out", path("b.json")});
  ASSERT_EQ(a.code, ibap::cli::kSuccess) << a.err;
  ASSERT_EQ(b.code, ibap::cli::kSuccess) << b.err;
  EXPECT_NE(a.out.find("best approximation"), std::string::npos);
  EXPECT_TRUE(read_json(path("a.json"))["anchored"].get<bool>());
  EXPECT_EQ(run({"solve", fixture("lines_60deg.json"), "--anchor", "[1, 2, 3]"}).code, ibap::cli::kParse);
}

TEST_F(CliTest, ComplexProblem) {
  const auto r = run({"solve", fixture("complex_ibap.json"), "--json-out", path("s.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto j = read_json(path("s.json"));
  EXPECT_LE(j["max_residual"].get<double>(), 1e-10);
  EXPECT_TRUE(j["solution"][0].is_array());
}

TEST_F(CliTest, ParseFailures) {
  EXPECT_EQ(run({"check", fixture("malformed.json")}).code, ibap::cli::kParse);
  EXPECT_EQ(run({"solve", fixture("wrong_length.json")}).code, ibap::cli::kParse);
  EXPECT_EQ(run({"check", fixture("missing.json")}).code, ibap::cli::kParse);
  EXPECT_EQ(run({"moments", fixture("axes_r3.json")}).code, ibap::cli::kParse);
}

TEST_F(CliTest, IterateAxesOneRow) {
  const auto r = run({"iterate", fixture("axes_r3.json"), "--trace", path("t.csv")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto rows = read_csv(path("t.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].iter, 1);
  EXPECT_LE(rows[0].max_residual, 1e-14);
}

TEST_F(CliTest, IterateRespectsBound) {
  for (const std::string f : {"lines_60deg.json", "random_ibap.json", "complex_ibap.json", "three_lines.json"}) {
    const auto r = run({"iterate", fixture(f), "--trace", path("t.csv"), "--max-iter", "500"});
    ASSERT_EQ(r.code, ibap::cli::kSuccess) << f << r.err;
    const auto rows = read_csv(path("t.csv"));
    ASSERT_FALSE(rows.empty());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      EXPECT_EQ(rows[k].iter, static_cast<int>(k + 1));
      ASSERT_TRUE(rows[k].dist && rows[k].bound) << f;
      EXPECT_LE(*rows[k].dist, *rows[k].bound * (1 + 1e-9) + 1e-12) << f << " row " << k + 1;
    }
  }
}

TEST_F(CliTest, IterateSlowHarmonic) {
  const auto r =
      run({"iterate", fixture("slow_harmonic_64.json"), "--trace", path("t.csv"), "--max-iter", "5000"});
  ASSERT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto rows = read_csv(path("t.csv"));
  EXPECT_GT(rows.size(), 100u);
  const auto d = run({"slowdemo", "--N", "64", "--max-iter", "1", "--json-out", path("d.json")});
  ASSERT_EQ(d.code, ibap::cli::kSuccess) << d.err;
  const double c = read_json(path("d.json"))["predicted_norm"].get<double>();
  ASSERT_GE(rows.size(), 60u);
  const std::size_t k = rows.size() - 10;
  ASSERT_TRUE(rows[k].dist && rows[k - 1].dist);
  EXPECT_NEAR(*rows[k].dist / *rows[k - 1].dist, c * c, 1e-3);
}

TEST_F(CliTest, NotConvergedStillSucceeds) {
  const auto r = run({"iterate", fixture("slow_harmonic_64.json"), "--max-iter", "3"});
  EXPECT_EQ(r.code, ibap::cli::kSuccess);
  EXPECT_NE(r.out.find("converged: no"), std::string::npos);
}

TEST_F(CliTest, Moments) {
  const auto r = run({"moments", fixture("moments_5e1.json"), "--json-out", path("m.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto x = real_vector(read_json(path("m.json"))["solution"]);
  ASSERT_EQ(x.size(), 3u);
  EXPECT_NEAR(x[0], 5.0, 1e-12);
  EXPECT_NEAR(x[1], 0.0, 1e-12);
  EXPECT_NEAR(x[2], 0.0, 1e-12);
}

TEST_F(CliTest, SignalWithoutTimeMaskIsInverseDft) {
  const auto r = run({"signal", fixture("signal_no_time_mask.json"), "--json-out", path("s.json")});
  EXPECT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto j = read_json(path("s.json"));
  EXPECT_LE(j["frequency_residual"].get<double>(), 1e-12);
  EXPECT_LE(j["time_residual"].get<double>(), 1e-12);
  const auto m = run({"signal", fixture("signal_measurement.json")});
  EXPECT_EQ(m.code, ibap::cli::kSuccess) << m.err;
}

TEST_F(CliTest, SlowDemo) {
  const auto r = run({"slowdemo", "--N", "16", "--json-out", path("d.json")});
  ASSERT_EQ(r.code, ibap::cli::kSuccess) << r.err;
  const auto j = read_json(path("d.json"));
  EXPECT_GT(j["predicted_norm"].get<double>(), 0.9);
  EXPECT_LT(j["predicted_norm"].get<double>(), 1.0);
  EXPECT_NEAR(j["worst_block_ratio"].get<double>(), std::pow(j["predicted_norm"].get<double>(), 2), 1e-9);
  const auto c = run({"slowdemo", "--N", "8", "--alpha-law", "constant", "--alpha", "0.5",
                      "--json-out", path("c.json")});
  ASSERT_EQ(c.code, ibap::cli::kSuccess) << c.err;
  EXPECT_NEAR(read_json(path("c.json"))["worst_block_ratio"].get<double>(), 1.0 / 1.25, 1e-9);
  EXPECT_EQ(run({"slowdemo", "--alpha-law", "cubic"}).code, ibap::cli::kUsage);
}

TEST_F(CliTest, DefaultTolFromEnvironment) {
  unsetenv("IBAP_DEFAULT_TOL");
  EXPECT_EQ(ibap::cli::default_tol(), 1e-10);
  setenv("IBAP_DEFAULT_TOL", "1e-4", 1);
  EXPECT_EQ(ibap::cli::default_tol(), 1e-4);
  const auto loose = run({"iterate", fixture("lines_60deg.json"), "--json-out", path("l.json")});
  setenv("IBAP_DEFAULT_TOL", "garbage", 1);
  EXPECT_EQ(run({"iterate", fixture("lines_60deg.json")}).code, ibap::cli::kUsage);
  setenv("IBAP_DEFAULT_TOL", "-1", 1);
  EXPECT_EQ(run({"iterate", fixture("lines_60deg.json")}).code, ibap::cli::kUsage);
  unsetenv("IBAP_DEFAULT_TOL");
  const auto tight = run({"iterate", fixture("lines_60deg.json"), "--json-out", path("t.json")});
  ASSERT_EQ(loose.code, ibap::cli::kSuccess) << loose.err;
  ASSERT_EQ(tight.code, ibap::cli::kSuccess) << tight.err;
  EXPECT_LT(read_json(path("l.json"))["sweeps"].get<int>(), read_json(path("t.json"))["sweeps"].get<int>());
}

}  // namespace
