#pragma once

#include "rbfcv/collocation.hpp"
#include "rbfcv/linalg.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace rbfcv {

enum class FoldScheme { Contiguous, Shuffled };

std::string_view to_string(FoldScheme scheme);
FoldScheme parse_fold_scheme(std::string_view text);

/// k disjoint, non-empty index vectors whose union is {1..m}.
class FoldPartition {
 public:
  /// Throws InvalidFoldCount when the folds do not partition {1..m}.
  FoldPartition(Index m, std::vector<IndexVector> folds);

  [[nodiscard]] Index m() const noexcept { return m_; }
  [[nodiscard]] std::size_t k() const noexcept { return folds_.size(); }
  [[nodiscard]] const std::vector<IndexVector>& folds() const noexcept { return folds_; }
  [[nodiscard]] const IndexVector& fold(std::size_t l) const { return folds_.at(l); }
  [[nodiscard]] bool is_leave_one_out() const noexcept {
    return static_cast<Index>(folds_.size()) == m_;
  }

 private:
  Index m_;
  std::vector<IndexVector> folds_;
};

/// Balanced partition: the first (m mod k) folds hold ceil(m/k) indices, the
/// rest floor(m/k). Contiguous assigns indices in order; Shuffled applies a
/// seeded permutation first (each fold is then sorted).
/// Throws InvalidFoldCount unless 1 <= k <= m.
FoldPartition partition_folds(Index m, Index k, FoldScheme scheme = FoldScheme::Contiguous,
                              std::uint64_t seed = 0);

FoldPartition leave_one_out(Index m);

enum class CvStrategy { Exact, Surrogate, Empirical };

std::string_view to_string(CvStrategy strategy);
CvStrategy parse_strategy(std::string_view text);

struct CVReport {
  CvStrategy strategy;
  FoldPartition folds;
  Vector errors;                ///< signed errors, indexed like the collocation points
  std::vector<Vector> per_fold; ///< errors restricted to each fold, fold order
  double l2_norm = 0.0;
  double wall_time = 0.0;       ///< seconds spent in the CV computation
};

/// Quantities shared by every fold of the surrogate scheme.
struct SurrogateFactors {
  Matrix G_pinv;  ///< n x m
  Matrix L_pinv;  ///< n x m
  Vector c;       ///< G^+ g
  Vector f;       ///< L c, the RBF-PS values at the collocation points
};

SurrogateFactors surrogate_factors(const AssembledSystem& sys);

/// Surrogate k-fold CV. Per fold p:
///   beta  = ((G^+)_{p,p})^{-1} c_p
///   alpha = least-squares solution of (L^+)_{:,p} alpha = (G^+)_{:,p} beta
///   error = alpha - f_p + h_p
/// Throws SingularSubmatrix for a degenerate fold.
CVReport surrogate_cv(const AssembledSystem& sys, const FoldPartition& folds);
CVReport surrogate_cv(const CollocationProblem& p, const FoldPartition& folds);

/// Leave-one-out specialization using the scalar divisor (G^+)_{p,p}.
CVReport surrogate_loocv_closed_form(const AssembledSystem& sys);
CVReport surrogate_loocv_closed_form(const CollocationProblem& p);

/// Standard k-fold CV: refits on the training rows (plus any extra centers)
/// for every fold. Throws InvalidFoldCount for a single fold.
CVReport exact_cv(const AssembledSystem& sys, const FoldPartition& folds);
CVReport exact_cv(const CollocationProblem& p, const FoldPartition& folds);

/// Rippa-style LOOCV applied to the collocation matrix: c_i / (G^{-1})_{ii}.
/// Requires a square G (InvalidArgument otherwise).
CVReport empirical_loocv(const AssembledSystem& sys);
CVReport empirical_loocv(const CollocationProblem& p);

/// Norm of the part of (G^+)_{:,p} beta outside the range of (L^+)_{:,p}.
/// Zero means the surrogate error equals the exact one on this fold.
double theorem_residual(const AssembledSystem& sys, const IndexVector& fold);
double theorem_residual(const CollocationProblem& p, const IndexVector& fold);
std::vector<double> theorem_residuals(const AssembledSystem& sys, const FoldPartition& folds);

/// Dispatches to the engine for `strategy`. Empirical ignores `folds` but
/// requires them to be leave-one-out.
CVReport run_cv(CvStrategy strategy, const AssembledSystem& sys, const FoldPartition& folds);

}  // namespace rbfcv
