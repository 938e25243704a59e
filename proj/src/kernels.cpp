#include "rbfcv/kernels.hpp"

#include "rbfcv/errors.hpp"

#include <cmath>
#include <string>

namespace rbfcv {

namespace {

// Radial profile pieces: phi'' and phi'/r, both written without dividing by r
// so r = 0 evaluates to the closed-form limit.
struct RadialDerivatives {
  double second;
  double first_over_r;
};

RadialDerivatives radial_derivatives(const RbfKernel& k, double r) {
  const double e = k.epsilon();
  const double e2 = e * e;
  if (k.family() == KernelFamily::Matern2) {
    const double decay = std::exp(-e * r);
    return {e2 * decay * (e * r - 1.0), -e2 * decay};
  }
  const double q = e2 * r * r;
  const double base = 1.0 + q;
  return {e2 * (2.0 * q - 1.0) / std::pow(base, 2.5), -e2 / std::pow(base, 1.5)};
}

}  // namespace

RbfKernel::RbfKernel(KernelFamily family, double epsilon, LaplacianMode mode)
    : family_(family), epsilon_(epsilon), mode_(mode) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("shape parameter must be positive and finite, got " +
                          std::to_string(epsilon));
  }
}

double phi(const RbfKernel& k, double r) {
  const double er = k.epsilon() * r;
  if (k.family() == KernelFamily::Matern2) return std::exp(-er) * (1.0 + er);
  return 1.0 / std::sqrt(1.0 + er * er);
}

double lap_phi(const RbfKernel& k, double r) {
  const double e = k.epsilon();
  const double er = e * r;
  if (k.laplacian_mode() == LaplacianMode::Analytic2D) {
    const auto d = radial_derivatives(k, r);
    return d.second + d.first_over_r;
  }
  if (k.family() == KernelFamily::Matern2) {
    return e * e * std::exp(-er) * (er - 1.0);
  }
  const double q = er * er;
  return e * e * (q - 2.0) / std::pow(1.0 + q, 2.5);
}

double bilap_phi(const RbfKernel& k, double r) {
  if (!k.has_bilaplacian()) {
    throw UnsupportedKernel("the bilaplacian is only available for the inverse multiquadric");
  }
  const double e = k.epsilon();
  const double q = (e * r) * (e * r);
  return 3.0 * std::pow(e, 4) * (3.0 * q * q - 24.0 * q + 8.0) / std::pow(1.0 + q, 4.5);
}

double kernel_entry(const RbfKernel& k, FunctionalKind left, FunctionalKind right,
                    const Point2& x, const Point2& y) {
  const double r = distance(x, y);
  const int laplacians = (left == FunctionalKind::Laplacian) + (right == FunctionalKind::Laplacian);
  switch (laplacians) {
    case 0:
      return phi(k, r);
    case 1:
      return lap_phi(k, r);
    default:
      return bilap_phi(k, r);
  }
}

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::Matern2 ? "matern2" : "imq";
}

std::string_view to_string(LaplacianMode mode) {
  return mode == LaplacianMode::PaperVerbatim ? "paper" : "analytic";
}

KernelFamily parse_kernel_family(std::string_view text) {
  if (text == "matern2" || text == "matern") return KernelFamily::Matern2;
  if (text == "imq" || text == "inverse_multiquadric") return KernelFamily::InverseMultiquadric;
  throw InvalidArgument("unknown kernel family '" + std::string(text) + "'");
}

LaplacianMode parse_laplacian_mode(std::string_view text) {
  if (text == "paper" || text == "paper_verbatim") return LaplacianMode::PaperVerbatim;
  if (text == "analytic" || text == "analytic2d") return LaplacianMode::Analytic2D;
  throw InvalidArgument("unknown laplacian mode '" + std::string(text) + "'");
}

}  // namespace rbfcv
