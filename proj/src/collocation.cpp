#include "rbfcv/collocation.hpp"

#include "rbfcv/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rbfcv {

namespace {

constexpr double kBoundaryTolerance = 1e-14;

bool near(double a, double b) { return std::abs(a - b) <= kBoundaryTolerance; }

bool on_unit_square_boundary(const Point2& x) {
  const bool inside = x.x1 >= -kBoundaryTolerance && x.x1 <= 1.0 + kBoundaryTolerance &&
                      x.x2 >= -kBoundaryTolerance && x.x2 <= 1.0 + kBoundaryTolerance;
  return inside && (near(x.x1, 0.0) || near(x.x1, 1.0) || near(x.x2, 0.0) || near(x.x2, 1.0));
}

FunctionalKind pde_kind(PointRole role) {
  switch (role) {
    case PointRole::Interior:
      return FunctionalKind::Laplacian;
    case PointRole::Boundary:
      return FunctionalKind::Delta;
    case PointRole::ExteriorCenter:
      break;
  }
  throw InvalidArgument("exterior centers cannot be used as collocation points");
}

std::vector<Functional> pde_functionals(const PointSet& x) {
  std::vector<Functional> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back({x.point(i), pde_kind(x.role(i))});
  return out;
}

CollocationProblem with_poisson_data(std::vector<Functional> gammas,
                                     std::vector<Functional> lambdas, const RbfKernel& kernel) {
  const auto m = static_cast<Index>(gammas.size());
  Vector g(m);
  Vector h(m);
  for (Index i = 0; i < m; ++i) {
    const auto& f = gammas[static_cast<std::size_t>(i)];
    g(i) = poisson::rhs_value(f);
    h(i) = poisson::exact_u(f.point);
  }
  return CollocationProblem(std::move(gammas), std::move(lambdas), kernel, std::move(g),
                            std::move(h));
}

template <typename RowKind>
Matrix assemble_with(const CollocationProblem& p, RowKind row_kind) {
  const auto& gammas = p.gammas();
  const auto& lambdas = p.lambdas();
  Matrix out(p.m(), p.n());
  for (Index j = 0; j < p.n(); ++j) {
    const auto& lam = lambdas[static_cast<std::size_t>(j)];
    for (Index i = 0; i < p.m(); ++i) {
      const auto& gam = gammas[static_cast<std::size_t>(i)];
      out(i, j) = kernel_entry(p.kernel(), row_kind(gam), lam.kind, gam.point, lam.point);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(CollocationMethod method) {
  return method == CollocationMethod::Kansa ? "kansa" : "hermite";
}

CollocationMethod parse_method(std::string_view text) {
  if (text == "kansa") return CollocationMethod::Kansa;
  if (text == "hermite") return CollocationMethod::Hermite;
  throw InvalidArgument("unknown collocation method '" + std::string(text) + "'");
}

CollocationProblem::CollocationProblem(std::vector<Functional> gammas,
                                       std::vector<Functional> lambdas, RbfKernel kernel,
                                       Vector g, Vector h)
    : gammas_(std::move(gammas)),
      lambdas_(std::move(lambdas)),
      kernel_(kernel),
      g_(std::move(g)),
      h_(std::move(h)) {
  if (gammas_.empty()) throw InvalidArgument("a collocation problem needs at least one functional");
  if (lambdas_.size() < gammas_.size()) {
    throw InvalidArgument("fewer centers than collocation functionals");
  }
  if (g_.size() != m() || h_.size() != m()) {
    throw InvalidArgument("g and h must have one entry per collocation functional");
  }
  if (!g_.allFinite() || !h_.allFinite()) throw InvalidArgument("g and h must be finite");
  for (std::size_t i = 0; i < gammas_.size(); ++i) {
    if (!(gammas_[i].point == lambdas_[i].point)) {
      throw InvalidArgument("center " + std::to_string(i + 1) +
                            " does not coincide with its collocation point");
    }
  }
}

namespace poisson {

double exact_u(const Point2& x) {
  using std::numbers::pi;
  return std::sin(pi * x.x1) * std::cos(pi * x.x2 / 2.0);
}

double forcing(const Point2& x) {
  using std::numbers::pi;
  return -1.25 * pi * pi * exact_u(x);
}

double rhs_value(const Functional& f) {
  if (f.kind == FunctionalKind::Laplacian) return forcing(f.point);
  if (on_unit_square_boundary(f.point)) {
    return near(f.point.x2, 0.0) ? std::sin(std::numbers::pi * f.point.x1) : 0.0;
  }
  return exact_u(f.point);
}

}  // namespace poisson

CollocationProblem build_kansa(const PointSet& collocation, const PointSet& centers,
                               const RbfKernel& kernel) {
  if (centers.size() < collocation.size()) {
    throw InvalidArgument("centers must contain the collocation points as a leading block");
  }
  for (std::size_t i = 0; i < collocation.size(); ++i) {
    if (!(centers.point(i) == collocation.point(i))) {
      throw InvalidArgument("centers must contain the collocation points as a leading block");
    }
  }
  std::vector<Functional> lambdas;
  lambdas.reserve(centers.size());
  for (const auto& y : centers.points()) lambdas.push_back({y, FunctionalKind::Delta});
  return with_poisson_data(pde_functionals(collocation), std::move(lambdas), kernel);
}

CollocationProblem build_kansa(const PointSet& collocation, const RbfKernel& kernel) {
  return build_kansa(collocation, collocation, kernel);
}

CollocationProblem build_hermite(const PointSet& collocation, const RbfKernel& kernel) {
  if (!kernel.has_bilaplacian()) {
    throw UnsupportedKernel("Hermite collocation needs the bilaplacian, which the " +
                            std::string(to_string(kernel.family())) + " kernel does not provide");
  }
  auto gammas = pde_functionals(collocation);
  auto lambdas = gammas;
  return with_poisson_data(std::move(gammas), std::move(lambdas), kernel);
}

CollocationProblem build_interpolation(const PointSet& points, const RbfKernel& kernel,
                                       const Vector& values) {
  if (values.size() != static_cast<Index>(points.size())) {
    throw InvalidArgument("one value per interpolation point is required");
  }
  std::vector<Functional> deltas;
  deltas.reserve(points.size());
  for (const auto& x : points.points()) deltas.push_back({x, FunctionalKind::Delta});
  return CollocationProblem(deltas, deltas, kernel, values, values);
}

Matrix assemble_G(const CollocationProblem& p) {
  return assemble_with(p, [](const Functional& f) { return f.kind; });
}

Matrix assemble_L(const CollocationProblem& p) {
  return assemble_with(p, [](const Functional&) { return FunctionalKind::Delta; });
}

AssembledSystem assemble(const CollocationProblem& p) {
  return {assemble_G(p), assemble_L(p), p.g(), p.h()};
}

RbfPsSolution rbf_ps_solve(const AssembledSystem& sys) {
  RbfPsSolution out;
  out.c = generalized_solve(sys.G, sys.g);
  out.f = sys.L * out.c;
  return out;
}

RbfPsSolution rbf_ps_solve(const CollocationProblem& p) { return rbf_ps_solve(assemble(p)); }

}  // namespace rbfcv
