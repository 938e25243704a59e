#include "rbfcv/linalg.hpp"

#include "rbfcv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rbfcv {

namespace {

// Relative 2-norm condition bound under which the QR fast path of
// generalized_solve is trusted to agree with the truncated pseudoinverse.
constexpr double kQrConditionGuard = 1e11;
constexpr int kPowerIterations = 24;

void check_finite(const Matrix& a, const char* what) {
  if (!all_finite(a)) {
    throw SvdFailure(std::string(what) + ": matrix has non-finite entries");
  }
}

void check_system(const Matrix& a, const Vector& b, const char* what) {
  if (a.rows() != b.size()) {
    throw InvalidArgument(std::string(what) + ": right-hand side has length " +
                          std::to_string(b.size()) + ", expected " + std::to_string(a.rows()));
  }
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool pivots_ok(const Eigen::PartialPivLU<Matrix>& lu, double scale) {
  const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  return std::isfinite(smallest) && smallest >= kPivotTolerance * scale && scale > 0.0;
}

Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidArgument(std::string(what) + ": matrix must be square and non-empty");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!pivots_ok(lu, max_abs(a))) {
    throw SingularMatrix(std::string(what) + ": pivot below tolerance");
  }
  return lu;
}

Eigen::BDCSVD<Matrix> checked_svd(const Matrix& a) {
  check_finite(a, "svd");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdFailure("svd: iteration did not converge");
  }
  return svd;
}

// Singular values of a symmetric matrix are |lambda|, so the eigendecomposition
// gives the same pseudoinverse as the SVD at a fraction of the cost.
Matrix symmetric_pinv(const Matrix& a, double rtol) {
  check_finite(a, "svd");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) {
    throw SvdFailure("svd: symmetric eigensolver did not converge");
  }
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = rtol * lambda.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) >= cutoff && lambda(i) != 0.0) inv(i) = 1.0 / lambda(i);
  }
  const Matrix& v = eig.eigenvectors();
  return v * inv.asDiagonal() * v.transpose();
}

// Number of singular values kept under the relative cutoff.
Index kept_rank(const Vector& sigma, double rtol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = rtol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) >= cutoff) ++r;
  return r;
}

// Power-iteration estimate of cond_2 for an upper-triangular, nonsingular R.
double triangular_condition(const Eigen::Ref<const Matrix>& r) {
  const Index n = r.rows();
  if (n == 0) return 1.0;
  if (r.diagonal().cwiseAbs().minCoeff() == 0.0) return std::numeric_limits<double>::infinity();
  const auto upper = r.triangularView<Eigen::Upper>();

  Vector x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; i += 2) x(i) = -x(i);
  double sigma_max = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector y = upper.transpose() * (upper * x);
    const double nrm = y.norm();
    if (nrm == 0.0) break;
    sigma_max = std::sqrt(nrm);
    x = y / nrm;
  }

  x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double inv_sigma_min = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector y = upper.transpose().solve(x);
    y = upper.solve(y);
    const double nrm = y.norm();
    if (!std::isfinite(nrm)) return std::numeric_limits<double>::infinity();
    inv_sigma_min = std::sqrt(nrm);
    x = y / nrm;
  }
  return sigma_max * inv_sigma_min;
}

}  // namespace

IndexVector::IndexVector(std::initializer_list<Index> positions)
    : IndexVector(one_based(std::vector<Index>(positions))) {}

IndexVector IndexVector::one_based(const std::vector<Index>& positions) {
  std::vector<Index> offsets;
  offsets.reserve(positions.size());
  for (Index p : positions) {
    if (p < 1) throw IndexOutOfRange("index " + std::to_string(p) + " is not a 1-based position");
    offsets.push_back(p - 1);
  }
  return from_offsets(std::move(offsets));
}

IndexVector IndexVector::from_offsets(std::vector<Index> offsets) {
  std::vector<Index> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("index vector contains duplicate positions");
  }
  if (!sorted.empty() && sorted.front() < 0) {
    throw IndexOutOfRange("negative offset in index vector");
  }
  IndexVector v;
  v.offsets_ = std::move(offsets);
  return v;
}

IndexVector IndexVector::range(Index first, Index last) {
  std::vector<Index> positions;
  for (Index p = first; p <= last; ++p) positions.push_back(p);
  return one_based(positions);
}

std::vector<Index> IndexVector::positions() const {
  std::vector<Index> out(offsets_);
  for (auto& o : out) ++o;
  return out;
}

std::vector<Index> resolve(const Selection& selection, Index dimension) {
  auto check = [dimension](const IndexVector& v) {
    for (Index o : v.offsets()) {
      if (o >= dimension) {
        throw IndexOutOfRange("position " + std::to_string(o + 1) + " exceeds dimension " +
                              std::to_string(dimension));
      }
    }
  };
  if (std::holds_alternative<AllIndices>(selection)) {
    std::vector<Index> all(static_cast<std::size_t>(dimension));
    for (Index i = 0; i < dimension; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  if (const auto* list = std::get_if<IndexVector>(&selection)) {
    check(*list);
    return list->offsets();
  }
  const auto& excluded = std::get<Complement>(selection).excluded;
  check(excluded);
  std::vector<char> drop(static_cast<std::size_t>(dimension), 0);
  for (Index o : excluded.offsets()) drop[static_cast<std::size_t>(o)] = 1;
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(dimension) - excluded.size());
  for (Index i = 0; i < dimension; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

Matrix restrict(const Matrix& a, const Selection& rows, const Selection& cols) {
  const auto r = resolve(rows, a.rows());
  const auto c = resolve(cols, a.cols());
  return a(r, c);
}

Vector restrict(const Vector& z, const Selection& entries) {
  const auto e = resolve(entries, z.size());
  return z(e);
}

Vector solve(const Matrix& a, const Vector& b) {
  check_system(a, b, "solve");
  return checked_lu(a, "solve").solve(b);
}

Matrix inverse(const Matrix& a) { return checked_lu(a, "inverse").inverse(); }

Matrix pinv(const Matrix& a, double rtol) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  if (a.rows() == a.cols() && a == a.transpose()) return symmetric_pinv(a, rtol);
  const auto svd = checked_svd(a);
  const Vector& sigma = svd.singularValues();
  const Index r = kept_rank(sigma, rtol);
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  return v.leftCols(r) * sigma.head(r).cwiseInverse().asDiagonal() * u.leftCols(r).transpose();
}

Vector pinv_solve(const Matrix& a, const Vector& b, double rtol) {
  check_system(a, b, "pinv_solve");
  if (a.size() == 0) return Vector::Zero(a.cols());
  const auto svd = checked_svd(a);
  const Vector& sigma = svd.singularValues();
  const Index r = kept_rank(sigma, rtol);
  Vector coeffs = svd.matrixU().leftCols(r).transpose() * b;
  coeffs.array() /= sigma.head(r).array();
  return svd.matrixV().leftCols(r) * coeffs;
}

double condition_estimate(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidArgument("condition_estimate: matrix must be square and non-empty");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!pivots_ok(lu, max_abs(a))) return std::numeric_limits<double>::infinity();
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

Matrix generalized_inverse(const Matrix& a) {
  if (a.rows() == a.cols() && a.rows() > 0) {
    check_finite(a, "generalized_inverse");
    Eigen::PartialPivLU<Matrix> lu(a);
    if (pivots_ok(lu, max_abs(a)) && lu.rcond() * kConditionLimit > 1.0) return lu.inverse();
  }
  return pinv(a);
}

Vector generalized_solve(const Matrix& a, const Vector& b) {
  check_system(a, b, "generalized_solve");
  if (a.size() == 0) return Vector::Zero(a.cols());
  check_finite(a, "generalized_solve");
  if (a.rows() == a.cols()) {
    Eigen::PartialPivLU<Matrix> lu(a);
    if (pivots_ok(lu, max_abs(a)) && lu.rcond() * kConditionLimit > 1.0) return lu.solve(b);
    return pinv_solve(a, b);
  }
  if (a.rows() > a.cols()) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    const Index n = a.cols();
    if (triangular_condition(qr.matrixR().topLeftCorner(n, n)) < kQrConditionGuard) {
      return qr.solve(b);
    }
    return pinv_solve(a, b);
  }
  // Wide system: factor A^T = Q R P^T, so the minimum-norm solution is
  // x = Q R^{-T} P^T b.
  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  const Index m = a.rows();
  const auto r = qr.matrixR().topLeftCorner(m, m);
  if (triangular_condition(r) < kQrConditionGuard) {
    Vector pb = qr.colsPermutation().transpose() * b;
    Vector y = r.triangularView<Eigen::Upper>().transpose().solve(pb);
    Vector full = Vector::Zero(a.cols());
    full.head(m) = y;
    return qr.householderQ() * full;
  }
  return pinv_solve(a, b);
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace rbfcv
