#pragma once

#include "rbfcv/geometry.hpp"

#include <string>
#include <string_view>

namespace rbfcv {

enum class KernelFamily { Matern2, InverseMultiquadric };

/// How the Laplacian of the radial profile is evaluated.
///  - PaperVerbatim: the closed forms used by the reference experiments. For
///    the Matern kernel this is phi''(r) only, e^{-er} e^2 (er - 1).
///  - Analytic2D: the true planar Laplacian phi''(r) + phi'(r)/r.
/// Both coincide for the inverse multiquadric.
enum class LaplacianMode { PaperVerbatim, Analytic2D };

enum class FunctionalKind { Delta, Laplacian };

class RbfKernel {
 public:
  /// Throws InvalidArgument unless epsilon is finite and positive.
  RbfKernel(KernelFamily family, double epsilon,
            LaplacianMode mode = LaplacianMode::PaperVerbatim);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] LaplacianMode laplacian_mode() const noexcept { return mode_; }
  [[nodiscard]] bool has_bilaplacian() const noexcept {
    return family_ == KernelFamily::InverseMultiquadric;
  }

  [[nodiscard]] RbfKernel with_epsilon(double epsilon) const {
    return RbfKernel(family_, epsilon, mode_);
  }

 private:
  KernelFamily family_;
  double epsilon_;
  LaplacianMode mode_;
};

double phi(const RbfKernel& k, double r);
double lap_phi(const RbfKernel& k, double r);
/// Throws UnsupportedKernel for Matern2.
double bilap_phi(const RbfKernel& k, double r);

/// (gamma o lambda)(kappa(x, y)) for the point functionals used here. The
/// kernel is radial, so a Laplacian on either argument gives the same profile.
double kernel_entry(const RbfKernel& k, FunctionalKind left, FunctionalKind right,
                    const Point2& x, const Point2& y);

std::string_view to_string(KernelFamily family);
std::string_view to_string(LaplacianMode mode);
/// Accepts "matern2"/"matern" and "imq"/"inverse_multiquadric".
KernelFamily parse_kernel_family(std::string_view text);
/// Accepts "paper"/"paper_verbatim" and "analytic"/"analytic2d".
LaplacianMode parse_laplacian_mode(std::string_view text);

}  // namespace rbfcv
