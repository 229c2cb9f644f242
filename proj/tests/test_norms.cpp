#include "eigrestrict/norms.hpp"
#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace eigrestrict;
using std::numbers::pi;

TEST(LpNorm, MatchesDefinition) {
  Eigen::VectorXd v(3);
  v << 1.0, 2.0, 0.5;
  const std::vector<double> w{0.5, 0.25, 1.0};
  EXPECT_NEAR(lp_norm(v, w, 2.0), std::sqrt(0.5 + 1.0 + 0.25), 1e-15);
  EXPECT_NEAR(lp_norm(v, w, 3.0), std::cbrt(0.5 + 2.0 + 0.125), 1e-15);
  EXPECT_EQ(lp_norm(v, w, kInfinity), 2.0);
  EXPECT_THROW(lp_norm(v, std::vector<double>{1.0}, 2.0), std::invalid_argument);
  EXPECT_THROW(lp_norm(v, w, 0.0), std::invalid_argument);
}

TEST(LpNorm, ApproachesSupForLargeP) {
  const auto g = equator_grid(2, 1, 400);
  Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v(static_cast<Eigen::Index>(i)) = 1.0 + g.nodes()[i].coords()(0);
  EXPECT_NEAR(lp_norm(v, g, 400.0), 2.0, 0.02);
  EXPECT_NEAR(lp_norm(v, g, 1.0), 2 * pi, 1e-12);
}

TEST(LalphaNorm, MatchesDefinitionAndScaling) {
  Eigen::VectorXd t(4);
  t << 3.0, -4.0, 0.0, 1e-200;
  EXPECT_NEAR(lalpha_norm(t, 2.0), 5.0, 1e-14);
  EXPECT_NEAR(lalpha_norm(t, 1.0), 7.0, 1e-14);
  EXPECT_EQ(lalpha_norm(t, kInfinity), 4.0);
  EXPECT_NEAR(lalpha_norm(1e300 * t, 2.0), 5e300, 1e288);
  EXPECT_THROW(lalpha_norm(t, 0.5), std::invalid_argument);
}

TEST(ConjugateExponent, Pairs) {
  EXPECT_EQ(conjugate_exponent(1.0), kInfinity);
  EXPECT_EQ(conjugate_exponent(kInfinity), 1.0);
  EXPECT_NEAR(conjugate_exponent(3.0), 1.5, 1e-15);
  for (double a : {1.1, 2.0, 7.5}) EXPECT_NEAR(1 / a + 1 / conjugate_exponent(a), 1.0, 1e-15);
}

TEST(Density, WeightedSumOfSquares) {
  const auto g = equator_grid(2, 1, 20);
  auto sys = eigenspace_system(4, g);
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(9, 0.0, 2.0);
  sys.set_weights(t);
  const Eigen::VectorXd dens = density(sys);
  for (Eigen::Index i = 0; i < dens.size(); i += 3) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < 9; ++j) s += t(j) * sys.values(j, i) * sys.values(j, i);
    EXPECT_NEAR(dens(i), s, 1e-14);
  }
}

TEST(ZonalMatrix, CirculantShortcutMatchesDirectEvaluation) {
  const int l = 13;
  const auto g = equator_grid(3, 1, 41);
  const Eigen::MatrixXd z = zonal_matrix(3, l, g);
  const double norm = static_cast<double>((l + 1) * (l + 1)) / (2 * pi * pi);
  for (Eigen::Index i = 0; i < z.rows(); i += 5)
    for (Eigen::Index j = 0; j < z.cols(); j += 7) {
      const double c = g.nodes()[static_cast<std::size_t>(i)].dot(g.nodes()[static_cast<std::size_t>(j)]);
      EXPECT_NEAR(z(i, j), norm * oracle::gegenbauer_series(l, 1.0, c) / (l + 1), 1e-11);
    }
}

TEST(ProjectorOperator, TraceIsWeightedDiagonal) {
  const int l = 20;
  const auto g = meridian_arc_grid(120);
  Eigen::VectorXcd W(static_cast<Eigen::Index>(g.size()));
  double trace = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    W(static_cast<Eigen::Index>(i)) = std::polar(1.0 + g.params()[i][0], 3.0 * g.params()[i][0]);
    trace += g.weights()[i] * std::norm(W(static_cast<Eigen::Index>(i)));
  }
  trace *= (2 * l + 1) / (4 * pi);
  const auto op = assemble_projector_operator(2, l, g, W);
  EXPECT_LT((op.M - op.M.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(schatten_norm(op, 1.0), trace, 1e-10 * trace);
  const auto sv = singular_values(op);
  EXPECT_NEAR(schatten_norm(op, kInfinity), sv(0), 0.0);
  for (Eigen::Index i = 1; i < sv.size(); ++i) EXPECT_LE(sv(i), sv(i - 1));
  // rank is at most dim E_lambda
  EXPECT_LT(sv(2 * l + 1), 1e-10 * sv(0));
}

TEST(ProjectorOperator, SvdPathAgreesWithEigenPath) {
  const auto g = equator_grid(2, 1, 48);
  const Eigen::VectorXcd W = Eigen::VectorXcd::Constant(48, std::complex<double>(0.3, 0.4));
  auto op = assemble_projector_operator(2, 9, g, W);
  const Eigen::VectorXd a = singular_values(op);
  op.hermitian = false;
  const Eigen::VectorXd b = singular_values(op);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  for (double s : {1.0, 1.5, 3.0}) EXPECT_NEAR(schatten_from_singular_values(a, s), schatten_from_singular_values(b, s), 1e-12);
}

TEST(ProjectorOperator, Preconditions) {
  const auto g = equator_grid(2, 1, 16);
  EXPECT_THROW(assemble_projector_operator(2, 0, g, Eigen::VectorXcd::Ones(16)), std::invalid_argument);
  EXPECT_THROW(assemble_projector_operator(2, 3, g, Eigen::VectorXcd::Ones(15)), std::invalid_argument);
  const auto op = assemble_projector_operator(2, 3, g, Eigen::VectorXcd::Ones(16));
  EXPECT_THROW(schatten_norm(op, 0.9), std::invalid_argument);
}

TEST(Duality, FullEigenspaceWithUnitWeightsIsEquality) {
  const int l = 16;
  const auto g = meridian_arc_grid(96);
  Eigen::VectorXcd W(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) W(static_cast<Eigen::Index>(i)) = std::cos(g.params()[i][0]) + 0.5;
  const auto sys = eigenspace_system(l, g);
  const auto op = assemble_projector_operator(2, l, g, W);
  const auto sides = duality_sides(sys, g, W, op, kInfinity);
  EXPECT_NEAR(sides.lhs / sides.rhs, 1.0, 1e-12);
  EXPECT_FALSE(sides.violated());
}

TEST(Duality, NeverViolatedForRandomData) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = equator_grid(2, 1, 64);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = 3 + trial % 10;
    auto sys = random_orthonormal_system(l, 1 + trial % (2 * l + 1), 1000 + trial, g);
    Eigen::VectorXd t(static_cast<Eigen::Index>(sys.count()));
    for (Eigen::Index j = 0; j < t.size(); ++j) t(j) = u(rng);
    sys.set_weights(t);
    Eigen::VectorXcd W(64);
    for (Eigen::Index i = 0; i < 64; ++i) W(i) = std::complex<double>(u(rng) - 0.5, u(rng) - 0.5);
    const auto op = assemble_projector_operator(2, l, g, W);
    for (double alpha : {1.0, 1.5, 2.0, 4.0, kInfinity}) {
      const auto sides = duality_sides(sys, g, W, op, alpha);
      EXPECT_FALSE(sides.violated(1e-10)) << trial << ' ' << alpha << ' ' << sides.slack();
      EXPECT_LE(sides.slack(), 1.0 + 1e-10);
    }
  }
}

TEST(RestrictedMass, SumsWeightedSquares) {
  const auto g = equator_grid(2, 1, 32);
  const auto sys = eigenspace_system(5, g);
  const Eigen::VectorXcd W = Eigen::VectorXcd::Ones(32);
  const Eigen::VectorXd mass = restricted_mass(sys, g, W);
  EXPECT_NEAR(mass.sum(), 2 * pi * 11 / (4 * pi), 1e-12);
}
