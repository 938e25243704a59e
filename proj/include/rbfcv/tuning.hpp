#pragma once

#include "rbfcv/collocation.hpp"
#include "rbfcv/crossval.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rbfcv {

/// Base-2 log-equispaced shape parameters:
/// value(i) = 2^(min_exp + (max_exp - min_exp) * (i - 1) / (count - 1)), i = 1..count.
struct EpsilonGrid {
  double min_exp = -5.0;
  double max_exp = 5.0;
  std::size_t count = 100;

  /// 1-based, endpoints exact.
  [[nodiscard]] double value(std::size_t i) const;
  [[nodiscard]] std::vector<double> values() const;
};

/// The default 100-point grid on [2^-5, 2^5].
std::vector<double> epsilon_grid();

struct SweepFailure {
  std::size_t index;  ///< 0-based grid position
  std::string reason;
};

struct SweepResult {
  std::vector<double> epsilons;
  std::vector<double> norms;  ///< NaN where the evaluation failed
  std::vector<double> times;  ///< CV wall time per epsilon, seconds
  std::size_t best_index = 0; ///< 0-based
  double best_epsilon = 0.0;
  double best_norm = 0.0;
  double total_time = 0.0;    ///< sum of per-epsilon times
  double assembly_time = 0.0; ///< time spent building systems, kept out of total_time
  std::vector<SweepFailure> failures;

  [[nodiscard]] bool failed(std::size_t i) const;
};

/// One evaluation of a CV strategy at a given shape parameter.
struct SweepPoint {
  double norm;
  double seconds;
  double setup_seconds = 0.0;
};

using SweepEvaluator = std::function<SweepPoint(double epsilon)>;
using SystemBuilder = std::function<AssembledSystem(double epsilon)>;

struct SweepOptions {
  /// Grid points evaluated concurrently. Timings stay per-point sums.
  unsigned threads = 1;
};

/// Evaluates every grid point, records library errors and non-finite norms as
/// failures, then selects the minimizer. Throws AllEpsilonFailed when no grid
/// point succeeds.
SweepResult sweep(const std::vector<double>& epsilons, const SweepEvaluator& evaluate,
                  const SweepOptions& options = {});

/// Sweep of one CV strategy over systems produced by `build`; the system is
/// assembled outside the timed region.
SweepResult sweep(const SystemBuilder& build, CvStrategy strategy, const FoldPartition& folds,
                  const std::vector<double>& epsilons = epsilon_grid(),
                  const SweepOptions& options = {});

/// Argmin over non-failed, finite norms; ties go to the smaller epsilon.
/// Throws AllEpsilonFailed.
std::pair<double, double> select_best(const SweepResult& result);
std::size_t best_index(const std::vector<double>& norms);

}  // namespace rbfcv
