#include "rbfcv/crossval.hpp"

#include "rbfcv/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace rbfcv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_folds(const AssembledSystem& sys, const FoldPartition& folds) {
  if (folds.m() != sys.m()) {
    throw InvalidArgument("fold partition covers " + std::to_string(folds.m()) +
                          " points but the system has " + std::to_string(sys.m()));
  }
}

CVReport make_report(CvStrategy strategy, const FoldPartition& folds, Vector errors,
                     Clock::time_point start) {
  CVReport report{strategy, folds, std::move(errors), {}, 0.0, 0.0};
  report.per_fold.reserve(folds.k());
  for (const auto& fold : folds.folds()) report.per_fold.push_back(report.errors(fold.offsets()));
  report.l2_norm = report.errors.norm();
  report.wall_time = seconds_since(start);
  return report;
}

// ((G^+)_{p,p})^{-1} c_p, failing loudly when the block is numerically singular.
Vector validation_weights(const SurrogateFactors& sf, const std::vector<Index>& p) {
  const Matrix block = sf.G_pinv(p, p);
  const Vector cp = sf.c(p);
  const double scale = block.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Matrix> lu(block);
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(scale > 0.0) || !(pivot >= kPivotTolerance * scale)) {
    throw SingularSubmatrix("validation block of G^+ is numerically singular");
  }
  Vector beta = lu.solve(cp);
  if (!beta.allFinite()) throw SingularSubmatrix("validation block of G^+ produced non-finite weights");
  return beta;
}

struct FoldFit {
  Vector alpha;
  double residual;
};

FoldFit fit_fold(const SurrogateFactors& sf, const std::vector<Index>& p) {
  const Vector target = sf.G_pinv(Eigen::all, p) * validation_weights(sf, p);
  const Matrix basis = sf.L_pinv(Eigen::all, p);
  Vector alpha = generalized_solve(basis, target);
  const double residual = (basis * alpha - target).norm();
  return {std::move(alpha), residual};
}

}  // namespace

std::string_view to_string(FoldScheme scheme) {
  return scheme == FoldScheme::Contiguous ? "contiguous" : "shuffled";
}

FoldScheme parse_fold_scheme(std::string_view text) {
  if (text == "contiguous") return FoldScheme::Contiguous;
  if (text == "shuffled") return FoldScheme::Shuffled;
  throw InvalidArgument("unknown fold scheme '" + std::string(text) + "'");
}

std::string_view to_string(CvStrategy strategy) {
  switch (strategy) {
    case CvStrategy::Exact:
      return "exact";
    case CvStrategy::Surrogate:
      return "surrogate";
    case CvStrategy::Empirical:
      return "empirical";
  }
  return "unknown";
}

CvStrategy parse_strategy(std::string_view text) {
  if (text == "exact") return CvStrategy::Exact;
  if (text == "surrogate") return CvStrategy::Surrogate;
  if (text == "empirical") return CvStrategy::Empirical;
  throw InvalidArgument("unknown CV strategy '" + std::string(text) + "'");
}

FoldPartition::FoldPartition(Index m, std::vector<IndexVector> folds)
    : m_(m), folds_(std::move(folds)) {
  if (m < 1) throw InvalidFoldCount("a partition needs at least one point");
  if (folds_.empty()) throw InvalidFoldCount("a partition needs at least one fold");
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  Index covered = 0;
  for (const auto& fold : folds_) {
    if (fold.empty()) throw InvalidFoldCount("folds must be non-empty");
    for (Index o : fold.offsets()) {
      if (o >= m) throw InvalidFoldCount("fold index " + std::to_string(o + 1) + " exceeds m");
      if (seen[static_cast<std::size_t>(o)]) {
        throw InvalidFoldCount("index " + std::to_string(o + 1) + " appears in two folds");
      }
      seen[static_cast<std::size_t>(o)] = 1;
      ++covered;
    }
  }
  if (covered != m) throw InvalidFoldCount("folds do not cover every index");
}

FoldPartition partition_folds(Index m, Index k, FoldScheme scheme, std::uint64_t seed) {
  if (k < 1 || k > m) {
    throw InvalidFoldCount("fold count " + std::to_string(k) + " must lie in [1, " +
                           std::to_string(m) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  if (scheme == FoldScheme::Shuffled) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const Index base = m / k;
  const Index larger = m % k;
  std::vector<IndexVector> folds;
  folds.reserve(static_cast<std::size_t>(k));
  auto it = order.begin();
  for (Index l = 0; l < k; ++l) {
    const Index size = base + (l < larger ? 1 : 0);
    std::vector<Index> offsets(it, it + size);
    if (scheme == FoldScheme::Shuffled) std::sort(offsets.begin(), offsets.end());
    folds.push_back(IndexVector::from_offsets(std::move(offsets)));
    it += size;
  }
  return FoldPartition(m, std::move(folds));
}

FoldPartition leave_one_out(Index m) { return partition_folds(m, m); }

SurrogateFactors surrogate_factors(const AssembledSystem& sys) {
  SurrogateFactors sf;
  sf.G_pinv = generalized_inverse(sys.G);
  sf.L_pinv = generalized_inverse(sys.L);
  sf.c = sf.G_pinv * sys.g;
  sf.f = sys.L * sf.c;
  return sf;
}

CVReport surrogate_cv(const AssembledSystem& sys, const FoldPartition& folds) {
  check_folds(sys, folds);
  const auto start = Clock::now();
  const SurrogateFactors sf = surrogate_factors(sys);
  Vector alpha(sys.m());
  for (const auto& fold : folds.folds()) {
    alpha(fold.offsets()) = fit_fold(sf, fold.offsets()).alpha;
  }
  Vector errors = alpha - sf.f + sys.h;
  return make_report(CvStrategy::Surrogate, folds, std::move(errors), start);
}

CVReport surrogate_cv(const CollocationProblem& p, const FoldPartition& folds) {
  return surrogate_cv(assemble(p), folds);
}

namespace {

CVReport closed_form_report(const AssembledSystem& sys, const FoldPartition& folds) {
  const auto start = Clock::now();
  const SurrogateFactors sf = surrogate_factors(sys);
  const Index m = sys.m();
  Vector alpha(m);
  for (Index p = 0; p < m; ++p) {
    const double diag = sf.G_pinv(p, p);
    if (!(std::abs(diag) > 0.0) || !std::isfinite(diag)) {
      throw SingularSubmatrix("diagonal entry " + std::to_string(p + 1) + " of G^+ vanishes");
    }
    const auto x = sf.L_pinv.col(p);
    const double xx = x.squaredNorm();
    alpha(p) = xx > 0.0 ? x.dot(sf.G_pinv.col(p)) * (sf.c(p) / diag) / xx : 0.0;
  }
  Vector errors = alpha - sf.f + sys.h;
  return make_report(CvStrategy::Surrogate, folds, std::move(errors), start);
}

}  // namespace

CVReport surrogate_loocv_closed_form(const AssembledSystem& sys) {
  return closed_form_report(sys, leave_one_out(sys.m()));
}

CVReport surrogate_loocv_closed_form(const CollocationProblem& p) {
  return surrogate_loocv_closed_form(assemble(p));
}

CVReport exact_cv(const AssembledSystem& sys, const FoldPartition& folds) {
  check_folds(sys, folds);
  if (folds.k() < 2) throw InvalidFoldCount("exact CV needs at least two folds");
  const auto start = Clock::now();
  const Index m = sys.m();
  const Index n = sys.n();
  Vector errors(m);
  for (const auto& fold : folds.folds()) {
    const auto& p = fold.offsets();
    std::vector<Index> training = resolve(Complement{fold}, m);
    std::vector<Index> columns = training;
    for (Index j = m; j < n; ++j) columns.push_back(j);
    const Vector coeffs = generalized_solve(sys.G(training, columns), sys.g(training));
    errors(p) = sys.h(p) - sys.L(p, columns) * coeffs;
  }
  return make_report(CvStrategy::Exact, folds, std::move(errors), start);
}

CVReport exact_cv(const CollocationProblem& p, const FoldPartition& folds) {
  return exact_cv(assemble(p), folds);
}

CVReport empirical_loocv(const AssembledSystem& sys) {
  if (sys.m() != sys.n()) {
    throw InvalidArgument("empirical LOOCV is not applicable: G is not square");
  }
  const auto start = Clock::now();
  const Matrix g_inv = generalized_inverse(sys.G);
  if (!g_inv.allFinite()) throw SingularMatrix("empirical LOOCV: inverse of G is not finite");
  const Vector c = g_inv * sys.g;
  const Vector diag = g_inv.diagonal();
  const double floor = 1e-15 * g_inv.cwiseAbs().maxCoeff();
  for (Index i = 0; i < diag.size(); ++i) {
    if (!(std::abs(diag(i)) >= floor) || diag(i) == 0.0) {
      throw ZeroDiagonal("diagonal entry " + std::to_string(i + 1) + " of G^{-1} vanishes");
    }
  }
  Vector errors = c.cwiseQuotient(diag);
  return make_report(CvStrategy::Empirical, leave_one_out(sys.m()), std::move(errors), start);
}

CVReport empirical_loocv(const CollocationProblem& p) { return empirical_loocv(assemble(p)); }

std::vector<double> theorem_residuals(const AssembledSystem& sys, const FoldPartition& folds) {
  check_folds(sys, folds);
  const SurrogateFactors sf = surrogate_factors(sys);
  std::vector<double> out;
  out.reserve(folds.k());
  for (const auto& fold : folds.folds()) out.push_back(fit_fold(sf, fold.offsets()).residual);
  return out;
}

double theorem_residual(const AssembledSystem& sys, const IndexVector& fold) {
  const SurrogateFactors sf = surrogate_factors(sys);
  return fit_fold(sf, resolve(fold, sys.m())).residual;
}

double theorem_residual(const CollocationProblem& p, const IndexVector& fold) {
  return theorem_residual(assemble(p), fold);
}

CVReport run_cv(CvStrategy strategy, const AssembledSystem& sys, const FoldPartition& folds) {
  switch (strategy) {
    case CvStrategy::Exact:
      return exact_cv(sys, folds);
    case CvStrategy::Surrogate:
      // Same errors as the fold loop, without the per-fold least squares.
      if (folds.is_leave_one_out()) {
        check_folds(sys, folds);
        return closed_form_report(sys, folds);
      }
      return surrogate_cv(sys, folds);
    case CvStrategy::Empirical:
      if (!folds.is_leave_one_out()) {
        throw InvalidArgument("empirical CV is only defined for leave-one-out folds");
      }
      return empirical_loocv(sys);
  }
  throw InvalidArgument("unknown CV strategy");
}

}  // namespace rbfcv
