#include "eigrestrict/geometry.hpp"
#include "eigrestrict/quadrature.hpp"
#include "oracles/oracles.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace eigrestrict;
using std::numbers::pi;

TEST(Quadrature, GaussLegendreNodesAreLegendreRoots) {
  for (int n : {1, 2, 5, 16, 40}) {
    const auto q = gauss_legendre(n);
    ASSERT_EQ(q.nodes.size(), static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      EXPECT_NEAR(boost::math::legendre_p(n, q.nodes[i]), 0.0, 1e-12);
      wsum += q.weights[i];
    }
    EXPECT_NEAR(wsum, 2.0, 1e-13);
  }
}

TEST(Quadrature, ExactForPolynomials) {
  const auto q = gauss_legendre(10);
  for (int k = 0; k < 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
    EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-13) << k;
  }
}

TEST(Quadrature, CompositeIntegratesOscillation) {
  const auto q = composite_gauss_legendre(2000, 0.0, pi / 2);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::cos(301.0 * q.nodes[i]);
  EXPECT_NEAR(s, std::sin(301.0 * pi / 2) / 301.0, 1e-12);
}

TEST(SpherePoint, DistanceIsAccurateForNearbyPoints) {
  const auto a = SpherePoint::from(Eigen::Vector3d(1, 0, 0));
  const auto b = SpherePoint::from(Eigen::Vector3d(std::cos(1e-9), std::sin(1e-9), 0));
  EXPECT_NEAR(geodesic_distance(a, b), 1e-9, 1e-20);
  const auto c = SpherePoint::from(Eigen::Vector3d(-1, 0, 0));
  EXPECT_NEAR(geodesic_distance(a, c), pi, 1e-15);
  EXPECT_THROW(SpherePoint::from(Eigen::Vector3d(0, 0, 0)), std::invalid_argument);
}

TEST(Grids, MeridianArcHasLengthHalfPi) {
  const auto g = meridian_arc_grid(64);
  EXPECT_EQ(g.dim(), 1);
  EXPECT_EQ(g.chart().kind, ChartKind::meridian_arc);
  EXPECT_NEAR(g.total_weight(), pi / 2, 1e-14);
  EXPECT_NEAR(g.integrate([](const SpherePoint& x) { return x.coords()(2); }), 1.0, 1e-14);
  for (const auto& x : g.nodes()) EXPECT_NEAR(x.coords()(1), 0.0, 0.0);
}

TEST(Grids, CircleIntegratesTrigPolynomialsExactly) {
  for (int d : {2, 3, 5}) {
    const auto g = equator_grid(d, 1, 40);
    EXPECT_NEAR(g.total_weight(), 2 * pi, 1e-13);
    // trapezoid is exact for |frequency| < n
    const double s = g.integrate([](const SpherePoint& x) { return std::pow(x.coords()(0), 20); });
    EXPECT_NEAR(s, 2 * pi * oracle::factorial(20).convert_to<double>() /
                       (std::pow(2.0, 20) * std::pow(oracle::factorial(10).convert_to<double>(), 2)), 1e-12);
    for (const auto& x : g.nodes())
      for (int c = 2; c <= d; ++c) EXPECT_EQ(x.coords()(c), 0.0);
  }
}

TEST(Grids, GreatTwoSphereHasAreaFourPi) {
  const auto g = equator_grid(3, 2, 32);
  EXPECT_EQ(g.dim(), 2);
  EXPECT_EQ(g.ambient_dim(), 3);
  EXPECT_NEAR(g.total_weight(), 4 * pi, 1e-12);
  EXPECT_NEAR(g.integrate([](const SpherePoint& x) { return x.coords()(2) * x.coords()(2); }), 4 * pi / 3, 1e-12);
  for (const auto& x : g.nodes()) EXPECT_EQ(x.coords()(3), 0.0);
}

TEST(Grids, FullSphereIsExactBelowResolution) {
  const auto g = full_sphere_grid(24);
  // int x^4 y^2 z^6 over S^2 = 2 G(5/2) G(3/2) G(7/2) / G(15/2)
  const double ref = 2 * std::tgamma(2.5) * std::tgamma(1.5) * std::tgamma(3.5) / std::tgamma(7.5);
  const double s = g.integrate([](const SpherePoint& x) {
    const auto& v = x.coords();
    return std::pow(v(0), 4) * v(1) * v(1) * std::pow(v(2), 6);
  });
  EXPECT_NEAR(s, ref, 1e-13);
}

TEST(Grids, RejectBadInput) {
  EXPECT_THROW(meridian_arc_grid(1), std::invalid_argument);
  EXPECT_THROW(equator_grid(2, 2, 10), std::invalid_argument);
  EXPECT_THROW(equator_grid(5, 3, 10), std::invalid_argument);
}

TEST(SeparatedPoints, ArcPackingIsMaximalAndBounded) {
  const auto g = meridian_arc_grid(4000);
  for (double lam : {20.0, 80.0, 300.0}) {
    const auto s = separated_points(g, lam, 0.5, 2.0);
    // the cap of radius pi/4 around the arc midpoint is the whole arc
    const int packing = oracle::arc_packing_number(pi / 2, s.separation);
    EXPECT_LE(static_cast<int>(s.size()), packing) << lam;
    EXPECT_GE(2 * static_cast<int>(s.size()), packing) << lam;
    for (const auto& x : g.nodes()) {
      double best = pi;
      for (const auto& y : s.points) best = std::min(best, geodesic_distance(x, y));
      EXPECT_LT(best, s.separation);
    }
    EXPECT_NEAR(s.points.front().coords()(0) * s.points.front().coords()(2), 0.0, 1e-3);
  }
}

TEST(SeparatedPoints, PairwiseSeparatedAndInCap) {
  const auto g = equator_grid(3, 2, 64);
  const auto s = separated_points(g, 40.0, 0.6, 1.5);
  ASSERT_GT(s.size(), 3u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(geodesic_distance(s.points[i], g.center()), kPackingCapRadius + 1e-12);
    for (std::size_t j = 0; j < i; ++j) {
      const double r = geodesic_distance(s.points[i], s.points[j]);
      EXPECT_GE(r, s.separation);
      EXPECT_LE(r, pi / 2 + 1e-12);
    }
  }
}

TEST(SeparatedPoints, SingletonWhenSeparationExceedsCap) {
  const auto s = separated_points(equator_grid(2, 1, 64), 4.0, 0.1, 8.0);
  EXPECT_EQ(s.size(), 1u);
}

TEST(SeparatedPoints, Preconditions) {
  const auto g = equator_grid(2, 1, 64);
  EXPECT_THROW(separated_points(g, 10.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(separated_points(g, 10.0, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(separated_points(g, 1.0, 0.5, 2.0), std::invalid_argument);
}
