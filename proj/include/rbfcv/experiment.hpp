#pragma once

#include "rbfcv/collocation.hpp"
#include "rbfcv/crossval.hpp"
#include "rbfcv/errors.hpp"
#include "rbfcv/geometry.hpp"
#include "rbfcv/kernels.hpp"
#include "rbfcv/tuning.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbfcv::bench {

/// Rejected experiment configuration (bad value or inconsistent combination).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class TestId { Test1, Test2, Test3, Test4, Custom };
enum class CenterLayout { Coincident, Exterior };

std::string_view to_string(TestId id);
TestId parse_test_id(std::string_view text);
std::string_view to_string(CenterLayout layout);
CenterLayout parse_center_layout(std::string_view text);

/// Interior point counts accepted by the runner: 4^2, 8^2, ..., 32^2.
const std::vector<std::size_t>& supported_mu();

struct ExperimentConfig {
  TestId test = TestId::Custom;
  std::size_t mu = 256;
  KernelFamily kernel = KernelFamily::Matern2;
  CollocationMethod method = CollocationMethod::Kansa;
  CenterLayout centers = CenterLayout::Coincident;
  std::optional<Index> k_folds;  // empty: leave-one-out
  FoldScheme fold_scheme = FoldScheme::Contiguous;
  std::uint64_t seed = 0;
  LaplacianMode laplacian_mode = LaplacianMode::PaperVerbatim;
  std::string output_dir = "out";
  std::size_t grid_count = 100;
  unsigned threads = 1;
  std::vector<CvStrategy> strategies;  // custom runs; empty picks every applicable one
};

/// Settings each test is defined with (mu, kernel, method, centers).
ExperimentConfig preset(TestId id);

/// Throws ConfigError, or UnsupportedKernel for Hermite with a kernel that has
/// no bilaplacian.
void validate(const ExperimentConfig& config);

/// JSON object with the keys test, mu, kernel, method, centers, k ("loo" or an
/// integer), fold_scheme, seed, laplacian_mode, out, grid_count, threads,
/// strategies. Missing keys keep the values of `base`.
ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base = {});
std::string config_to_json(const ExperimentConfig& config);

/// Collocation points and centers of one configuration.
struct Layout {
  PointSet collocation;
  PointSet centers;
};
Layout make_layout(const ExperimentConfig& config, std::size_t mu);

CollocationProblem make_problem(const ExperimentConfig& config, const Layout& layout,
                                double epsilon);
SystemBuilder make_builder(const ExperimentConfig& config, std::size_t mu);

/// Folds of a configuration over m collocation points.
FoldPartition make_folds(const ExperimentConfig& config, Index m);

/// Sweeps per strategy; absent entries were not run (or not applicable).
struct StrategySweeps {
  std::optional<SweepResult> exact;
  std::optional<SweepResult> surrogate;
  std::optional<SweepResult> empirical;

  [[nodiscard]] const SweepResult* get(CvStrategy s) const;
};

/// |a.norms[i] - b.norms[i]| at grid position i (NaN when either failed).
double gap_at(const SweepResult& a, const SweepResult& b, std::size_t i);

struct Test1Row {
  std::size_t mu = 0;
  Index m = 0;
  Index n = 0;
  std::array<double, 3> best_epsilon{};  // exact, surrogate, empirical
  std::array<double, 3> best_norm{};
  std::array<double, 3> time{};
  double gap_surrogate = 0.0;  // at the exact strategy's best epsilon
  double gap_empirical = 0.0;
  double assembly_time = 0.0;
};

struct Test1Result {
  std::vector<Test1Row> rows;
  std::vector<StrategySweeps> sweeps;  // parallel to rows
};

struct TableRow {
  CvStrategy strategy;
  bool applicable = true;
  double best_norm = 0.0;
  double best_epsilon = 0.0;
  double total_time = 0.0;
};

struct TableResult {
  std::vector<TableRow> rows;
  StrategySweeps sweeps;
};

struct Test4Row {
  Index k = 0;
  double time_exact = 0.0;
  double time_surrogate = 0.0;
  double best_epsilon_exact = 0.0;
  double best_epsilon_surrogate = 0.0;
  double norm_exact = 0.0;      // at best_epsilon_exact
  double norm_surrogate = 0.0;  // same epsilon
  double gap = 0.0;
};

struct Test4Result {
  std::vector<Test4Row> rows;
};

struct CustomResult {
  StrategySweeps sweeps;
  std::vector<double> theorem_residuals;  // surrogate folds at its best epsilon
};

/// floor(m / 2^i), i = 0..7, keeping distinct values >= 2.
std::vector<Index> test4_fold_counts(Index m);

/// Each runner validates the configuration, writes its CSV/JSON files into
/// config.output_dir and returns the in-memory results.
Test1Result run_test1(const ExperimentConfig& config);
TableResult run_test2(const ExperimentConfig& config);
TableResult run_test3(const ExperimentConfig& config);
Test4Result run_test4(const ExperimentConfig& config);
CustomResult run_custom(const ExperimentConfig& config);

}  // namespace rbfcv::bench
