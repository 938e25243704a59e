#include "rbfcv/tuning.hpp"

#include "rbfcv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace rbfcv {

double EpsilonGrid::value(std::size_t i) const {
  if (i < 1 || i > count) throw IndexOutOfRange("grid position out of range");
  if (i == 1) return std::exp2(min_exp);
  if (i == count) return std::exp2(max_exp);
  const double t = static_cast<double>(i - 1) / static_cast<double>(count - 1);
  return std::exp2(min_exp + (max_exp - min_exp) * t);
}

std::vector<double> EpsilonGrid::values() const {
  if (count < 2) throw InvalidCount("an epsilon grid needs at least two points");
  std::vector<double> out(count);
  for (std::size_t i = 1; i <= count; ++i) out[i - 1] = value(i);
  return out;
}

std::vector<double> epsilon_grid() { return EpsilonGrid{}.values(); }

bool SweepResult::failed(std::size_t i) const {
  return !std::isfinite(norms.at(i)) ||
         std::any_of(failures.begin(), failures.end(),
                     [i](const SweepFailure& f) { return f.index == i; });
}

std::size_t best_index(const std::vector<double>& norms) {
  std::size_t best = norms.size();
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!std::isfinite(norms[i])) continue;
    if (best == norms.size() || norms[i] < norms[best]) best = i;
  }
  if (best == norms.size()) throw AllEpsilonFailed("no shape parameter produced a finite CV error");
  return best;
}

std::pair<double, double> select_best(const SweepResult& result) {
  std::vector<double> usable = result.norms;
  for (const auto& f : result.failures) {
    if (f.index < usable.size()) usable[f.index] = std::numeric_limits<double>::quiet_NaN();
  }
  const std::size_t i = best_index(usable);
  return {result.epsilons.at(i), usable[i]};
}

SweepResult sweep(const std::vector<double>& epsilons, const SweepEvaluator& evaluate,
                  const SweepOptions& options) {
  const std::size_t count = epsilons.size();
  SweepResult out;
  out.epsilons = epsilons;
  out.norms.assign(count, std::numeric_limits<double>::quiet_NaN());
  out.times.assign(count, 0.0);
  std::vector<double> setup(count, 0.0);
  std::vector<std::string> errors(count);

  auto run_one = [&](std::size_t i) {
    try {
      const SweepPoint point = evaluate(epsilons[i]);
      out.norms[i] = point.norm;
      out.times[i] = point.seconds;
      setup[i] = point.setup_seconds;
      if (!std::isfinite(point.norm)) errors[i] = "non-finite CV error norm";
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i].empty()) {
      out.failures.push_back({i, errors[i]});
      out.norms[i] = std::numeric_limits<double>::quiet_NaN();
    }
    out.total_time += out.times[i];
    out.assembly_time += setup[i];
  }
  out.best_index = best_index(out.norms);
  out.best_epsilon = epsilons[out.best_index];
  out.best_norm = out.norms[out.best_index];
  return out;
}

SweepResult sweep(const SystemBuilder& build, CvStrategy strategy, const FoldPartition& folds,
                  const std::vector<double>& epsilons, const SweepOptions& options) {
  return sweep(
      epsilons,
      [&](double epsilon) {
        const auto start = std::chrono::steady_clock::now();
        const AssembledSystem sys = build(epsilon);
        const double setup =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const CVReport report = run_cv(strategy, sys, folds);
        return SweepPoint{report.l2_norm, report.wall_time, setup};
      },
      options);
}

}  // namespace rbfcv
