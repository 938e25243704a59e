#include "rbfcv/errors.hpp"
#include "rbfcv/kernels.hpp"

#include "support/fd.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rbfcv;
using rbfcv::testing::fd_laplacian;
using rbfcv::testing::fd_laplacian4;

namespace {

const RbfKernel imq1(KernelFamily::InverseMultiquadric, 1.0);

}  // namespace

TEST(Phi, ValueAtOriginIsOne) {
  EXPECT_EQ(phi(RbfKernel(KernelFamily::Matern2, 3.0), 0.0), 1.0);
  EXPECT_EQ(phi(imq1, 0.0), 1.0);
}

TEST(Phi, ImqAtUnitDistance) { EXPECT_NEAR(phi(imq1, 1.0), 1.0 / std::sqrt(2.0), 1e-15); }

TEST(Phi, MaternAtUnitDistance) {
  EXPECT_NEAR(phi(RbfKernel(KernelFamily::Matern2, 1.0), 1.0), 2.0 * std::exp(-1.0), 1e-15);
}

TEST(LapPhi, ImqAtOrigin) {
  EXPECT_EQ(lap_phi(imq1, 0.0), -2.0);
  EXPECT_EQ(lap_phi(RbfKernel(KernelFamily::InverseMultiquadric, 1.0, LaplacianMode::Analytic2D), 0.0),
            -2.0);
}

TEST(LapPhi, MaternPaperFormulaVanishesAtUnitScaledRadius) {
  EXPECT_NEAR(lap_phi(RbfKernel(KernelFamily::Matern2, 1.0), 1.0), 0.0, 1e-16);
}

TEST(LapPhi, MaternAnalytic) {
  const RbfKernel k(KernelFamily::Matern2, 1.0, LaplacianMode::Analytic2D);
  EXPECT_NEAR(lap_phi(k, 1.0), -std::exp(-1.0), 1e-15);
  EXPECT_NEAR(lap_phi(k, 0.0), -2.0, 1e-15);
}

TEST(LapPhi, ModesAgreeForImq) {
  const RbfKernel a(KernelFamily::InverseMultiquadric, 1.7, LaplacianMode::Analytic2D);
  const RbfKernel p(KernelFamily::InverseMultiquadric, 1.7, LaplacianMode::PaperVerbatim);
  for (double r : {0.0, 0.01, 0.3, 1.0, 2.5, 10.0}) {
    EXPECT_NEAR(lap_phi(a, r), lap_phi(p, r), 1e-13 * (1.0 + std::abs(lap_phi(p, r))));
  }
}

TEST(BilapPhi, ImqValues) {
  EXPECT_NEAR(bilap_phi(imq1, 0.0), 24.0, 1e-13);
  EXPECT_NEAR(bilap_phi(imq1, 1.0), -39.0 / std::pow(2.0, 4.5), 1e-13);
  EXPECT_NEAR(bilap_phi(RbfKernel(KernelFamily::InverseMultiquadric, 2.0), 0.0), 384.0, 1e-11);
}

TEST(BilapPhi, MaternUnsupported) {
  EXPECT_THROW(bilap_phi(RbfKernel(KernelFamily::Matern2, 1.0), 0.5), UnsupportedKernel);
  EXPECT_THROW(kernel_entry(RbfKernel(KernelFamily::Matern2, 1.0), FunctionalKind::Laplacian,
                            FunctionalKind::Laplacian, {0, 0}, {1, 0}),
               UnsupportedKernel);
}

TEST(Kernel, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(RbfKernel(KernelFamily::Matern2, 0.0), InvalidArgument);
  EXPECT_THROW(RbfKernel(KernelFamily::Matern2, -1.0), InvalidArgument);
  EXPECT_THROW(RbfKernel(KernelFamily::Matern2, std::nan("")), InvalidArgument);
}

TEST(KernelEntry, CoincidentPoints) {
  const Point2 x{0.3, 0.4};
  EXPECT_EQ(kernel_entry(imq1, FunctionalKind::Delta, FunctionalKind::Delta, x, x), 1.0);
  EXPECT_EQ(kernel_entry(imq1, FunctionalKind::Laplacian, FunctionalKind::Delta, x, x), -2.0);
  EXPECT_EQ(kernel_entry(imq1, FunctionalKind::Delta, FunctionalKind::Laplacian, x, x), -2.0);
  EXPECT_NEAR(kernel_entry(imq1, FunctionalKind::Laplacian, FunctionalKind::Laplacian, x, x), 24.0,
              1e-13);
}

TEST(KernelEntry, Symmetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  const FunctionalKind kinds[] = {FunctionalKind::Delta, FunctionalKind::Laplacian};
  for (int t = 0; t < 50; ++t) {
    const Point2 x{u(rng), u(rng)};
    const Point2 y{u(rng), u(rng)};
    const RbfKernel k(KernelFamily::InverseMultiquadric, 0.1 + 3.0 * std::abs(u(rng)));
    for (auto a : kinds)
      for (auto b : kinds) EXPECT_EQ(kernel_entry(k, a, b, x, y), kernel_entry(k, b, a, y, x));
  }
}

TEST(Kernels, NoNanAtOrigin) {
  for (auto mode : {LaplacianMode::PaperVerbatim, LaplacianMode::Analytic2D}) {
    for (double eps : {1e-3, 0.5, 30.0}) {
      const RbfKernel m(KernelFamily::Matern2, eps, mode);
      const RbfKernel i(KernelFamily::InverseMultiquadric, eps, mode);
      EXPECT_TRUE(std::isfinite(phi(m, 0.0)));
      EXPECT_TRUE(std::isfinite(lap_phi(m, 0.0)));
      EXPECT_TRUE(std::isfinite(phi(i, 0.0)));
      EXPECT_TRUE(std::isfinite(lap_phi(i, 0.0)));
      EXPECT_TRUE(std::isfinite(bilap_phi(i, 0.0)));
    }
  }
}

TEST(Kernels, ImqLaplacianMatchesFiniteDifferences) {
  // plain five-point stencil with h = 1e-4, at radii away from the sign change
  const Point2 y{0.2, -0.1};
  for (double eps : {0.5, 1.0, 2.0}) {
    const RbfKernel k(KernelFamily::InverseMultiquadric, eps);
    auto f = [&](Point2 x) { return phi(k, distance(x, y)); };
    for (double r : {0.1, 0.4, 2.0, 3.0}) {
      const Point2 x{y.x1 + r * 0.6, y.x2 + r * 0.8};
      const double exact = lap_phi(k, r);
      EXPECT_NEAR(fd_laplacian(f, x, 1e-4), exact, 1e-5 * std::abs(exact)) << eps << " " << r;
    }
  }
}

TEST(Kernels, MaternAnalyticLaplacianMatchesFiniteDifferences) {
  const RbfKernel k(KernelFamily::Matern2, 1.3, LaplacianMode::Analytic2D);
  const RbfKernel paper(KernelFamily::Matern2, 1.3, LaplacianMode::PaperVerbatim);
  const Point2 y{0.0, 0.0};
  auto f = [&](Point2 x) { return phi(k, distance(x, y)); };
  for (double r : {0.2, 0.5, 1.5, 2.5}) {
    const Point2 x{r * 0.8, r * 0.6};
    const double fd = fd_laplacian4(f, x, 1e-3);
    EXPECT_NEAR(fd, lap_phi(k, r), 1e-7 * std::abs(lap_phi(k, r)));
    // the verbatim closed form is the second radial derivative only
    EXPECT_GT(std::abs(fd - lap_phi(paper, r)), 1e-3);
  }
}

TEST(Kernels, BilaplacianMatchesFiniteDifferenceOfLaplacian) {
  const Point2 y{0.5, 0.5};
  for (double eps : {0.7, 1.5}) {
    const RbfKernel k(KernelFamily::InverseMultiquadric, eps, LaplacianMode::Analytic2D);
    auto f = [&](Point2 x) { return lap_phi(k, distance(x, y)); };
    for (double r : {0.1, 0.5, 1.0, 3.0}) {
      const Point2 x{y.x1 - r * 0.6, y.x2 + r * 0.8};
      const double exact = bilap_phi(k, r);
      EXPECT_NEAR(fd_laplacian4(f, x, 1e-3), exact, 1e-4 * std::abs(exact)) << eps << " " << r;
    }
  }
}

TEST(Kernels, Names) {
  EXPECT_EQ(parse_kernel_family("imq"), KernelFamily::InverseMultiquadric);
  EXPECT_EQ(parse_kernel_family("matern"), KernelFamily::Matern2);
  EXPECT_EQ(parse_kernel_family(to_string(KernelFamily::Matern2)), KernelFamily::Matern2);
  EXPECT_EQ(parse_laplacian_mode("analytic"), LaplacianMode::Analytic2D);
  EXPECT_EQ(parse_laplacian_mode(to_string(LaplacianMode::PaperVerbatim)),
            LaplacianMode::PaperVerbatim);
  EXPECT_THROW(parse_kernel_family("gaussian"), InvalidArgument);
}
