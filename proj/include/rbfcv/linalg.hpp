#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <variant>
#include <vector>

namespace rbfcv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular values below this fraction of the largest one are dropped by pinv.
inline constexpr double kPinvRelativeTolerance = 1e-12;
/// Square systems whose estimated condition number exceeds this value are
/// handled through the pseudoinverse instead of LU.
inline constexpr double kConditionLimit = 1e12;
/// LU pivots smaller than this fraction of max|A| mark the matrix as singular.
inline constexpr double kPivotTolerance = 1e-14;

/// Ordered set of distinct positions. Positions are 1-based at the API
/// boundary; offsets() exposes the 0-based storage used with Eigen.
class IndexVector {
 public:
  IndexVector() = default;
  IndexVector(std::initializer_list<Index> positions);

  static IndexVector one_based(const std::vector<Index>& positions);
  static IndexVector from_offsets(std::vector<Index> offsets);
  /// Positions first..last inclusive (1-based). Empty when last < first.
  static IndexVector range(Index first, Index last);

  [[nodiscard]] std::size_t size() const noexcept { return offsets_.size(); }
  [[nodiscard]] bool empty() const noexcept { return offsets_.empty(); }
  /// 1-based position of the i-th entry.
  [[nodiscard]] Index position(std::size_t i) const { return offsets_.at(i) + 1; }
  [[nodiscard]] const std::vector<Index>& offsets() const noexcept { return offsets_; }
  [[nodiscard]] std::vector<Index> positions() const;

  friend bool operator==(const IndexVector&, const IndexVector&) = default;

 private:
  std::vector<Index> offsets_;
};

/// Row/column selectors for restrict(): every index, an explicit list, or the
/// complement of a list (A^{p,p} style).
struct AllIndices {};
struct Complement {
  IndexVector excluded;
};
using Selection = std::variant<AllIndices, IndexVector, Complement>;

/// Resolves a selection against a dimension into 0-based offsets, preserving
/// the relative order of retained indices. Throws IndexOutOfRange.
std::vector<Index> resolve(const Selection& selection, Index dimension);

Matrix restrict(const Matrix& a, const Selection& rows, const Selection& cols);
Vector restrict(const Vector& z, const Selection& entries);

/// Solves a square system with partial-pivoted LU.
/// Throws SingularMatrix when a pivot is below kPivotTolerance * max|A|.
Vector solve(const Matrix& a, const Vector& b);

/// LU inverse with the same singularity test as solve().
Matrix inverse(const Matrix& a);

/// Moore-Penrose pseudoinverse through the SVD; singular values below
/// rtol * sigma_max are treated as zero.
Matrix pinv(const Matrix& a, double rtol = kPinvRelativeTolerance);

/// pinv(a, rtol) * b without forming the pseudoinverse.
Vector pinv_solve(const Matrix& a, const Vector& b, double rtol = kPinvRelativeTolerance);

/// Inverse for well-conditioned square matrices, pseudoinverse otherwise.
Matrix generalized_inverse(const Matrix& a);

/// Minimum-norm least-squares solution, i.e. pinv(a) * b. Square systems with
/// estimated condition below kConditionLimit go through LU; rectangular
/// systems use a column-pivoted QR when its diagonal shows the matrix is far
/// from rank deficient, and the SVD otherwise.
Vector generalized_solve(const Matrix& a, const Vector& b);

/// Estimated 1-norm condition number of a square matrix (infinity if singular).
double condition_estimate(const Matrix& a);

[[nodiscard]] bool all_finite(const Matrix& a);

}  // namespace rbfcv
