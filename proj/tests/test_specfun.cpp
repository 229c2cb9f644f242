#include "eigrestrict/specfun.hpp"
#include "oracles/oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace eigrestrict;
using std::numbers::pi;

TEST(AssocLegendre, MatchesHighPrecisionSeries) {
  for (int l : {0, 1, 2, 5, 12, 30, 60}) {
    for (int m : {0, 1, l / 2, l}) {
      if (m > l) continue;
      for (double x : {-0.93, -0.4, 0.0, 0.25, 0.7, 0.999}) {
        const double ref = oracle::legendre_series(l, m, x);
        EXPECT_NEAR(assoc_legendre_norm(l, m, x), ref, 1e-11 * std::max(1.0, std::fabs(ref))) << l << ' ' << m << ' ' << x;
      }
    }
  }
}

TEST(AssocLegendre, MatchesBoostUpToNormalizationAndPhase) {
  for (int l = 0; l <= 25; ++l)
    for (int m = 0; m <= l; ++m) {
      const double x = 0.37;
      const double norm = std::sqrt((2.0 * l + 1) / (4 * pi) * boost::math::factorial<double>(l - m) /
                                    boost::math::factorial<double>(l + m));
      const double ref = (m % 2 ? -1.0 : 1.0) * norm * boost::math::legendre_p(l, m, x);
      EXPECT_NEAR(assoc_legendre_norm(l, m, x), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
    }
}

TEST(AssocLegendre, AdditionTheoremAtHighDegree) {
  // sum_m |Y_l^m|^2 = (2l+1)/(4 pi) for any colatitude
  for (int l : {100, 1000, 8000}) {
    for (double theta : {1e-3, 0.3, 1.2, pi / 2}) {
      const auto p = legendre_all_orders(l, theta);
      double s = p[0] * p[0];
      for (int m = 1; m <= l; ++m) s += 2.0 * p[static_cast<std::size_t>(m)] * p[static_cast<std::size_t>(m)];
      EXPECT_NEAR(s / ((2.0 * l + 1) / (4 * pi)), 1.0, 1e-10) << l << ' ' << theta;
    }
  }
}

TEST(AssocLegendre, SectoralFunctionsDoNotUnderflowPrematurely) {
  // Pbar_l^l(cos t) ~ c (sin t)^l stays positive for sin t = 0.1 and l = 300.
  const double v = assoc_legendre_norm_theta(300, 300, std::asin(0.1));
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(std::log(v) / std::log(0.1), 300.0, 5.0);
}

TEST(AssocLegendre, RejectsBadArguments) {
  EXPECT_THROW(assoc_legendre_norm(3, 4, 0.1), std::domain_error);
  EXPECT_THROW(assoc_legendre_norm(3, 1, 1.5), std::domain_error);
  EXPECT_THROW(assoc_legendre_norm(kMaxDegree + 1, 0, 0.1), std::domain_error);
}

TEST(SphericalHarmonics, OrthonormalUnderExactQuadrature) {
  const int L = 8;
  const boost::math::quadrature::gauss<double, 20> gl;
  const int nphi = 24;
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
  for (std::size_t a = 0; a < lm.size(); a += 7)
    for (std::size_t b = 0; b < lm.size(); b += 3) {
      double s = 0.0;
      for (int j = 0; j < nphi; ++j) {
        const double phi = 2 * pi * j / nphi;
        s += 2 * pi / nphi * gl.integrate([&](double z) {
          const double th = std::acos(z);
          return sph_harm_real(lm[a].first, lm[a].second, th, phi) * sph_harm_real(lm[b].first, lm[b].second, th, phi);
        }, -1.0, 1.0);
      }
      EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Gegenbauer, MatchesSeries) {
  for (double a : {0.5, 1.0, 1.5, 2.5})
    for (int n : {0, 1, 2, 7, 20, 40})
      for (double t : {-0.8, 0.1, 0.65, 1.0}) {
        const double ref = oracle::gegenbauer_series(n, a, t);
        EXPECT_NEAR(gegenbauer(n, a, t), ref, 1e-11 * std::max(1.0, std::fabs(ref))) << a << ' ' << n << ' ' << t;
      }
}

TEST(Gegenbauer, HalfParameterIsLegendre) {
  for (int n = 0; n <= 30; ++n) EXPECT_NEAR(gegenbauer(n, 0.5, 0.3), boost::math::legendre_p(n, 0.3), 1e-13);
}

TEST(HarmonicDim, MatchesLaplacianKernelRank) {
  for (int d = 2; d <= 5; ++d)
    for (int l = 0; l <= 6; ++l)
      EXPECT_EQ(harmonic_dim(d, l), static_cast<std::uint64_t>(oracle::harmonic_polynomial_dim(d + 1, l))) << d << ' ' << l;
}

TEST(HarmonicDim, ClosedFormsAndBounds) {
  for (int l = 0; l < 500; ++l) {
    EXPECT_EQ(harmonic_dim(2, l), static_cast<std::uint64_t>(2 * l + 1));
    EXPECT_EQ(harmonic_dim(3, l), static_cast<std::uint64_t>((l + 1) * (l + 1)));
  }
  EXPECT_THROW(harmonic_dim(1, 3), std::domain_error);
}

TEST(SurfaceArea, MatchesGammaFormula) {
  for (int d = 1; d <= 12; ++d)
    EXPECT_NEAR(surface_area(d), 2 * std::pow(pi, (d + 1) / 2.0) / std::tgamma((d + 1) / 2.0), 1e-12 * surface_area(d));
}

TEST(ZonalKernel, DiagonalIsDimensionOverArea) {
  for (int d = 2; d <= 5; ++d)
    for (int l : {1, 4, 33}) {
      const auto zk = ZonalKernel::make(d, l);
      EXPECT_NEAR(zonal_eval(zk, 1.0), static_cast<double>(harmonic_dim(d, l)) / surface_area(d), 1e-12 * zk.normalization);
      EXPECT_NEAR(zonal_normalized(zk, 1.0), std::sqrt(zk.normalization), 1e-12);
    }
}

TEST(ZonalKernel, ReproducesItself) {
  // int_{S^d} Z(x.y)^2 dy = Z(1), reduced to the polar angle.
  const boost::math::quadrature::gauss<double, 60> gl;
  for (int d = 2; d <= 4; ++d)
    for (int l : {1, 5, 17}) {
      const auto zk = ZonalKernel::make(d, l);
      const double s = surface_area(d - 1) * gl.integrate([&](double th) {
        const double z = zonal_eval(zk, std::cos(th));
        return z * z * std::pow(std::sin(th), d - 1);
      }, 0.0, pi);
      EXPECT_NEAR(s / zk.normalization, 1.0, 1e-9) << d << ' ' << l;
    }
}

TEST(ZonalKernel, AgreesWithAdditionTheoremOnS2) {
  const int l = 9;
  const auto zk = ZonalKernel::make(2, l);
  const double t1 = 0.4, p1 = 1.1, t2 = 2.0, p2 = -0.7;
  double s = 0.0;
  for (int m = -l; m <= l; ++m) s += sph_harm_real(l, m, t1, p1) * sph_harm_real(l, m, t2, p2);
  const double c = std::sin(t1) * std::sin(t2) * std::cos(p1 - p2) + std::cos(t1) * std::cos(t2);
  EXPECT_NEAR(zonal_eval(zk, c), s, 1e-12);
}

TEST(HarmonicDegree, Frequency) {
  const HarmonicDegree h{10, 3};
  EXPECT_EQ(h.lam_squared(), 120);
  EXPECT_DOUBLE_EQ(h.lam(), std::sqrt(120.0));
}
