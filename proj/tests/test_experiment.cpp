#include "rbfcv/errors.hpp"
#include "rbfcv/experiment.hpp"
#include "rbfcv/report_io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rbfcv;
using namespace rbfcv::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rbfcv_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  return rows;
}

// sweep CSV with the timing columns dropped
std::string without_times(const fs::path& p) {
  std::string out;
  for (const auto& row : read_rows(p)) {
    for (std::size_t i = 0; i < 4 && i < row.size(); ++i) out += row[i] + ",";
    out += "\n";
  }
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RBFCV_BENCH_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small(TestId id, const fs::path& out) {
  ExperimentConfig c = preset(id);
  c.mu = 16;
  c.grid_count = 12;
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST(Config, SupportedMu) {
  EXPECT_EQ(supported_mu(), (std::vector<std::size_t>{16, 64, 144, 256, 400, 576, 784, 1024}));
  ExperimentConfig c;
  c.mu = 10;
  try {
    validate(c);
    FAIL() << "mu = 10 accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mu must be a perfect square from the supported list"),
              std::string::npos);
  }
  c.mu = 36;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, HermiteNeedsImq) {
  ExperimentConfig c;
  c.method = CollocationMethod::Hermite;
  c.kernel = KernelFamily::Matern2;
  EXPECT_THROW(validate(c), UnsupportedKernel);
  c.kernel = KernelFamily::InverseMultiquadric;
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ExteriorNeedsKansa) {
  ExperimentConfig c;
  c.kernel = KernelFamily::InverseMultiquadric;
  c.method = CollocationMethod::Hermite;
  c.centers = CenterLayout::Exterior;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, FoldCountAndStrategies) {
  ExperimentConfig c;
  c.mu = 16;
  c.k_folds = 1;
  EXPECT_THROW(validate(c), ConfigError);
  c.k_folds = 21;
  EXPECT_THROW(validate(c), ConfigError);
  c.k_folds = 4;
  EXPECT_NO_THROW(validate(c));
  c.strategies = {CvStrategy::Empirical};
  EXPECT_THROW(validate(c), ConfigError);
  c.k_folds.reset();
  c.centers = CenterLayout::Exterior;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, PresetsValidate) {
  for (TestId id : {TestId::Test1, TestId::Test2, TestId::Test3, TestId::Test4, TestId::Custom})
    EXPECT_NO_THROW(validate(preset(id))) << to_string(id);
  ExperimentConfig c = preset(TestId::Test3);
  c.centers = CenterLayout::Coincident;
  EXPECT_THROW(validate(c), ConfigError);
  c = preset(TestId::Test2);
  EXPECT_EQ(c.method, CollocationMethod::Hermite);
  EXPECT_EQ(c.kernel, KernelFamily::InverseMultiquadric);
  EXPECT_EQ(c.mu, 256u);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c;
  c.test = TestId::Test4;
  c.mu = 64;
  c.kernel = KernelFamily::InverseMultiquadric;
  c.k_folds = 8;
  c.fold_scheme = FoldScheme::Shuffled;
  c.seed = 99;
  c.laplacian_mode = LaplacianMode::Analytic2D;
  c.output_dir = "x/y";
  c.grid_count = 20;
  c.threads = 2;
  c.strategies = {CvStrategy::Surrogate};
  const ExperimentConfig d = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_EQ(d.k_folds, std::optional<Index>(8));
  EXPECT_EQ(d.seed, 99u);
}

TEST(Config, JsonKeepsBaseForMissingKeys) {
  ExperimentConfig base = preset(TestId::Test2);
  const ExperimentConfig c = config_from_json(R"({"mu": 64, "k": "loo"})", base);
  EXPECT_EQ(c.mu, 64u);
  EXPECT_EQ(c.method, CollocationMethod::Hermite);
  EXPECT_FALSE(c.k_folds.has_value());
  EXPECT_THROW(config_from_json(R"({"colour": 1})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"kernel": "gauss"})"), ConfigError);
  EXPECT_THROW(config_from_json("[1"), ConfigError);
}

TEST(Layout, ExteriorCentersAppended) {
  ExperimentConfig c = preset(TestId::Test3);
  const Layout l = make_layout(c, 256);
  EXPECT_EQ(l.collocation.size(), 272u);
  EXPECT_EQ(l.centers.size(), 288u);
  EXPECT_EQ(l.centers.count(PointRole::ExteriorCenter), 16u);
  const AssembledSystem s = make_builder(c, 256)(0.5);
  EXPECT_EQ(s.m(), 272);
  EXPECT_EQ(s.n(), 288);
}

TEST(Test4, FoldCounts) {
  EXPECT_EQ(test4_fold_counts(272), (std::vector<Index>{272, 136, 68, 34, 17, 8, 4, 2}));
  // a single fold has no training data and repeated counts add nothing
  EXPECT_EQ(test4_fold_counts(20), (std::vector<Index>{20, 10, 5, 2}));
}

TEST(Runners, CustomSmokeRunIsFastAndRoundTrips) {
  const fs::path out = scratch("custom");
  ExperimentConfig c = preset(TestId::Custom);
  c.mu = 16;
  c.kernel = KernelFamily::InverseMultiquadric;
  c.output_dir = out.string();
  const auto start = std::chrono::steady_clock::now();
  const CustomResult r = run_custom(c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 5.0);
  ASSERT_TRUE(r.sweeps.exact && r.sweeps.surrogate && r.sweeps.empirical);
  EXPECT_EQ(r.theorem_residuals.size(), 20u);

  std::ifstream in(out / "custom_sweep.csv");
  const auto rows = read_sweep_csv(in);
  ASSERT_EQ(rows.size(), 100u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].epsilon, r.sweeps.exact->epsilons[i]);
    EXPECT_EQ(rows[i].norms[0], r.sweeps.exact->norms[i]);
    EXPECT_EQ(rows[i].norms[1], r.sweeps.surrogate->norms[i]);
    EXPECT_EQ(rows[i].norms[2], r.sweeps.empirical->norms[i]);
    EXPECT_EQ(rows[i].times[0], r.sweeps.exact->times[i]);
    for (double t : rows[i].times) EXPECT_GE(t, 0.0);
  }

  const auto summary = nlohmann::json::parse(read_file(out / "custom_summary.json"));
  EXPECT_EQ(summary["sweeps"]["surrogate"]["best_epsilon"].get<double>(),
            r.sweeps.surrogate->best_epsilon);
  EXPECT_TRUE(summary.contains("theorem_residuals"));

  std::ifstream cv(out / "custom_cv_surrogate.csv");
  const CvReportRows report = read_cv_report_csv(cv);
  EXPECT_EQ(report.l2_norm, r.sweeps.surrogate->best_norm);
}

TEST(Runners, RerunGivesSameBytesApartFromTimes) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  ExperimentConfig c = small(TestId::Custom, a);
  c.k_folds = 5;
  c.fold_scheme = FoldScheme::Shuffled;
  c.seed = 7;
  run_custom(c);
  c.output_dir = b.string();
  run_custom(c);
  EXPECT_EQ(without_times(a / "custom_sweep.csv"), without_times(b / "custom_sweep.csv"));
}

TEST(Runners, Test2TableFormat) {
  const fs::path out = scratch("t2");
  const TableResult r = run_test2(small(TestId::Test2, out));
  ASSERT_EQ(r.rows.size(), 3u);
  const auto rows = read_rows(out / "test2_table.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"strategy", "best_norm", "best_epsilon", "total_time"}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i + 1][0], to_string(r.rows[i].strategy));
    EXPECT_EQ(parse_double(rows[i + 1][1]), r.rows[i].best_norm);
    EXPECT_EQ(parse_double(rows[i + 1][2]), r.rows[i].best_epsilon);
  }
}

TEST(Runners, Test3MarksEmpiricalNotApplicable) {
  const fs::path out = scratch("t3");
  const TableResult r = run_test3(small(TestId::Test3, out));
  EXPECT_FALSE(r.rows[2].applicable);
  EXPECT_FALSE(r.sweeps.empirical.has_value());
  const auto rows = read_rows(out / "test3_table.csv");
  EXPECT_EQ(rows[3], (std::vector<std::string>{"empirical", "n/a", "n/a", "n/a"}));
  const auto summary = nlohmann::json::parse(read_file(out / "test3_summary.json"));
  EXPECT_EQ(summary["sweeps"]["empirical"], "not applicable: G is not square");
  std::ifstream pts(out / "test3_points.csv");
  EXPECT_EQ(read_points_csv(pts).count(PointRole::ExteriorCenter), 4u);
  for (const auto& row : read_rows(out / "test3_sweep.csv")) EXPECT_EQ(row[3].substr(0, 4), row[0] == "epsilon" ? "norm" : "n/a");
}

TEST(Runners, Test1RowsAndGaps) {
  const fs::path out = scratch("t1");
  ExperimentConfig c = small(TestId::Test1, out);
  c.mu = 64;
  const Test1Result r = run_test1(c);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].m, 20);
  EXPECT_EQ(r.rows[1].m, 72);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& s = r.sweeps[i];
    const std::size_t star = s.exact->best_index;
    EXPECT_EQ(r.rows[i].gap_surrogate, std::abs(s.exact->norms[star] - s.surrogate->norms[star]));
  }
  const auto rows = read_rows(out / "test1_matern2_summary.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "16");
  EXPECT_EQ(parse_double(rows[2][12]), r.rows[1].gap_surrogate);
  EXPECT_TRUE(fs::exists(out / "test1_matern2_mu64_sweep.csv"));
  EXPECT_TRUE(fs::exists(out / "test1_points_mu64.csv"));
}

TEST(Runners, Test4Rows) {
  const fs::path out = scratch("t4");
  const Test4Result r = run_test4(small(TestId::Test4, out));
  std::vector<Index> ks;
  for (const auto& row : r.rows) ks.push_back(row.k);
  EXPECT_EQ(ks, (std::vector<Index>{20, 10, 5, 2}));
  const auto rows = read_rows(out / "test4_folds.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(parse_double(rows[1][7]), r.rows[0].gap);
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("cli");
  EXPECT_EQ(run_cli("custom --mu 10"), 2);
  EXPECT_EQ(run_cli("custom --mu 16 --method hermite --kernel matern2"), 2);
  EXPECT_EQ(run_cli("test3 --centers coincident"), 2);
  EXPECT_EQ(run_cli("custom --mu 16 --k banana"), 2);
  EXPECT_EQ(run_cli("nonsense"), 2);
  EXPECT_EQ(run_cli("custom --mu 16 --grid-count 10 --k 4 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "custom_summary.json"));
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path out = scratch("cli_cfg");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "cfg.json");
    cfg << R"({"mu": 10, "kernel": "imq", "grid_count": 6})";
  }
  EXPECT_EQ(run_cli("custom --config " + (out / "cfg.json").string()), 2);
  EXPECT_EQ(run_cli("custom --config " + (out / "cfg.json").string() + " --mu 16 --out " +
                    (out / "res").string()),
            0);
  const auto summary = nlohmann::json::parse(read_file(out / "res" / "custom_summary.json"));
  EXPECT_EQ(summary["config"]["kernel"], "imq");
  EXPECT_EQ(summary["config"]["mu"], 16);
  EXPECT_EQ(summary["config"]["grid_count"], 6);
}
