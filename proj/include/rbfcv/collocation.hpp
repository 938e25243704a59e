#pragma once

#include "rbfcv/geometry.hpp"
#include "rbfcv/kernels.hpp"
#include "rbfcv/linalg.hpp"

#include <string_view>
#include <vector>

namespace rbfcv {

/// A point paired with the functional applied there: point evaluation or the
/// Laplacian evaluated at that point.
struct Functional {
  Point2 point;
  FunctionalKind kind = FunctionalKind::Delta;
};

enum class CollocationMethod { Kansa, Hermite };

std::string_view to_string(CollocationMethod method);
CollocationMethod parse_method(std::string_view text);

/// Generalized interpolation problem: rows come from `gammas` (m of them),
/// columns from `lambdas` (n >= m). The first m lambdas are tied to the
/// collocation points, in the same order as the gammas; any further lambdas
/// belong to extra centers that never take part in validation.
class CollocationProblem {
 public:
  /// Throws InvalidArgument when sizes disagree, n < m, data is non-finite or
  /// the leading lambdas are not located at the collocation points.
  CollocationProblem(std::vector<Functional> gammas, std::vector<Functional> lambdas,
                     RbfKernel kernel, Vector g, Vector h);

  [[nodiscard]] const std::vector<Functional>& gammas() const noexcept { return gammas_; }
  [[nodiscard]] const std::vector<Functional>& lambdas() const noexcept { return lambdas_; }
  [[nodiscard]] const RbfKernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Vector& g() const noexcept { return g_; }
  [[nodiscard]] const Vector& h() const noexcept { return h_; }
  [[nodiscard]] Index m() const noexcept { return static_cast<Index>(gammas_.size()); }
  [[nodiscard]] Index n() const noexcept { return static_cast<Index>(lambdas_.size()); }

 private:
  std::vector<Functional> gammas_;
  std::vector<Functional> lambdas_;
  RbfKernel kernel_;
  Vector g_;
  Vector h_;
};

/// Assembled matrices of a problem. CV engines work on this so that their
/// timings exclude assembly.
struct AssembledSystem {
  Matrix G;
  Matrix L;
  Vector g;
  Vector h;

  [[nodiscard]] Index m() const noexcept { return G.rows(); }
  [[nodiscard]] Index n() const noexcept { return G.cols(); }
};

namespace poisson {

/// u(x) = sin(pi x1) cos(pi x2 / 2), the exact solution of the test problem.
double exact_u(const Point2& x);
/// Laplacian of exact_u, i.e. the PDE forcing -5/4 pi^2 u.
double forcing(const Point2& x);
/// Data for one collocation functional: forcing for Laplacian rows, the
/// Dirichlet data (sin(pi x1) on x2 = 0, zero on the rest of the boundary)
/// for point evaluations on the boundary, and u itself elsewhere.
double rhs_value(const Functional& f);

}  // namespace poisson

/// Kansa collocation: Laplacian rows at interior points, point evaluations at
/// boundary points; every center carries a point evaluation. `centers` must
/// start with the collocation points (extra centers appended after them).
CollocationProblem build_kansa(const PointSet& collocation, const PointSet& centers,
                               const RbfKernel& kernel);
CollocationProblem build_kansa(const PointSet& collocation, const RbfKernel& kernel);

/// Symmetric Hermite collocation with gamma = lambda. Throws UnsupportedKernel
/// when the kernel has no bilaplacian.
CollocationProblem build_hermite(const PointSet& collocation, const RbfKernel& kernel);

/// Plain interpolation of `values`: gamma = lambda = delta, g = h = values.
CollocationProblem build_interpolation(const PointSet& points, const RbfKernel& kernel,
                                       const Vector& values);

Matrix assemble_G(const CollocationProblem& p);
Matrix assemble_L(const CollocationProblem& p);
AssembledSystem assemble(const CollocationProblem& p);

struct RbfPsSolution {
  Vector c;  ///< coefficients, length n
  Vector f;  ///< RBF-PS values L c at the collocation points, length m
};

RbfPsSolution rbf_ps_solve(const AssembledSystem& sys);
RbfPsSolution rbf_ps_solve(const CollocationProblem& p);

}  // namespace rbfcv
