/**
 * @file norms.hpp
 * @brief Lebesgue norms on grids, l^alpha norms of coefficients, densities of
 *        orthonormal systems and Schatten norms of discretized kernel operators.
 *
 * The weighted projector on Sigma is discretized symmetrically (Nystrom):
 *
 *   M_ij = sqrt(w_i) W_i Z_l(x_i . x_j) conj(W_j) sqrt(w_j),
 *
 * so that M = T T^* for the map (T f)_i = sqrt(w_i) W_i f(x_i) from the degree-l
 * eigenspace into C^n. Its singular values approximate those of W Pi W^* on L^2(Sigma).
 */
#pragma once

#include "eigrestrict/geometry.hpp"
#include "eigrestrict/specfun.hpp"
#include "eigrestrict/systems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace eigrestrict {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_i w_i v_i^p)^{1/p}, or max_i v_i when p = inf. Values must be nonnegative.
inline double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& values, const std::vector<double>& weights, double p) {
  if (static_cast<std::size_t>(values.size()) != weights.size())
    throw std::invalid_argument("lp_norm: values and grid have different lengths");
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be > 0");
  if (std::isinf(p)) return values.size() == 0 ? 0.0 : values.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) s += weights[static_cast<std::size_t>(i)] * std::pow(values(i), p);
  return std::pow(s, 1.0 / p);
}

inline double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& values, const SubmanifoldGrid& grid, double p) {
  return lp_norm(values, grid.weights(), p);
}

/// l^alpha norm of a coefficient vector, alpha >= 1 or inf.
inline double lalpha_norm(const Eigen::Ref<const Eigen::VectorXd>& t, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("lalpha_norm: alpha must be >= 1");
  if (t.size() == 0) return 0.0;
  const Eigen::VectorXd a = t.cwiseAbs();
  if (std::isinf(alpha)) return a.maxCoeff();
  const double m = a.maxCoeff();
  if (m == 0.0) return 0.0;
  return m * std::pow((a / m).array().pow(alpha).sum(), 1.0 / alpha);
}

/// Hoelder conjugate: 1/a + 1/a' = 1.
inline double conjugate_exponent(double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("conjugate_exponent: need a >= 1");
  if (a == 1.0) return kInfinity;
  if (std::isinf(a)) return 1.0;
  return a / (a - 1.0);
}

/// Node-wise sum_j t_j |f_j|^2.
inline Eigen::VectorXd density(const SystemMatrix& sys) {
  if (sys.t.size() != sys.values.rows()) throw std::invalid_argument("density: coefficient vector missing");
  return sys.values.array().square().matrix().transpose() * sys.t;
}

/// Dense discretized weighted projector operator on Sigma.
struct KernelOperator {
  Eigen::MatrixXcd M;
  int d = 2;
  int degree = 0;
  std::string weight_descriptor;
  bool hermitian = true;
};

/// Z_l(x_i . x_j) on a grid. Uses the circulant structure of uniform circle grids.
inline Eigen::MatrixXd zonal_matrix(int d, int degree, const SubmanifoldGrid& grid) {
  const ZonalKernel zk = ZonalKernel::make(d, degree);
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd z(n, n);
  if (grid.chart().kind == ChartKind::circle) {
    Eigen::VectorXd row(n);
    for (Eigen::Index o = 0; o < n; ++o) row(o) = zonal_eval(zk, grid.nodes()[0].dot(grid.nodes()[static_cast<std::size_t>(o)]));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) z(i, j) = row((j - i + n) % n);
    return z;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i, i) = zk.normalization;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = zonal_eval(zk, grid.nodes()[static_cast<std::size_t>(i)].dot(grid.nodes()[static_cast<std::size_t>(j)]));
      z(i, j) = v;
      z(j, i) = v;
    }
  }
  return z;
}

/// M = D Z D^*, D = diag(sqrt(w_i) W_i), from a precomputed zonal matrix.
inline KernelOperator assemble_projector_operator(const Eigen::MatrixXd& zonal, int d, int degree,
                                                  const SubmanifoldGrid& grid, const Eigen::VectorXcd& W,
                                                  std::string descriptor = "pointwise") {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (W.size() != n || zonal.rows() != n) throw std::invalid_argument("assemble_projector_operator: size mismatch");
  Eigen::VectorXcd dvec(n);
  for (Eigen::Index i = 0; i < n; ++i) dvec(i) = std::sqrt(grid.weights()[static_cast<std::size_t>(i)]) * W(i);
  KernelOperator op;
  op.d = d;
  op.degree = degree;
  op.weight_descriptor = std::move(descriptor);
  op.M = dvec.asDiagonal() * zonal.cast<std::complex<double>>() * dvec.conjugate().asDiagonal();
  op.hermitian = true;
  return op;
}

inline KernelOperator assemble_projector_operator(int d, int degree, const SubmanifoldGrid& grid,
                                                  const Eigen::VectorXcd& W, std::string descriptor = "pointwise") {
  if (degree < 1) throw std::invalid_argument("assemble_projector_operator: degree must be >= 1");
  return assemble_projector_operator(zonal_matrix(d, degree, grid), d, degree, grid, W, std::move(descriptor));
}

/// Singular values of a kernel operator (absolute eigenvalues when Hermitian), descending.
inline Eigen::VectorXd singular_values(const KernelOperator& op) {
  Eigen::VectorXd s;
  if (op.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("singular_values: eigensolver failed");
    s = es.eigenvalues().cwiseAbs();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.M);
    s = svd.singularValues();
  }
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

/// l^s norm of a singular value sequence.
inline double schatten_from_singular_values(const Eigen::Ref<const Eigen::VectorXd>& sv, double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("schatten_norm: s must be >= 1");
  return lalpha_norm(sv, s);
}

/// Schatten s-norm, s >= 1 or inf (operator norm).
inline double schatten_norm(const KernelOperator& op, double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("schatten_norm: s must be >= 1");
  return schatten_from_singular_values(singular_values(op), s);
}

/// Per-function restricted mass sum_i w_i |W_i|^2 |f_j(x_i)|^2.
inline Eigen::VectorXd restricted_mass(const SystemMatrix& sys, const SubmanifoldGrid& grid, const Eigen::VectorXcd& W) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (sys.values.cols() != n || W.size() != n) throw std::invalid_argument("restricted_mass: size mismatch");
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = grid.weights()[static_cast<std::size_t>(i)] * std::norm(W(i));
  return sys.values.array().square().matrix() * w;
}

/// Both sides of the trace-duality inequality
///   sum_j t_j <|W|^2 f_j, f_j>_Sigma <= ||t||_alpha ||W Pi W^*||_{S^alpha'}.
struct DualitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double t_norm = 0.0;
  double schatten = 0.0;
  double alpha = 1.0;
  double alpha_conjugate = kInfinity;

  /// lhs exceeds rhs by more than rel_tol relative to rhs.
  bool violated(double rel_tol = 1e-8) const { return lhs > rhs * (1.0 + rel_tol) + 1e-300; }
  double slack() const { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInfinity : 0.0); }
};

inline DualitySides duality_sides(const SystemMatrix& sys, const SubmanifoldGrid& grid, const Eigen::VectorXcd& W,
                                  const KernelOperator& op, double alpha) {
  DualitySides out;
  out.alpha = alpha;
  out.alpha_conjugate = conjugate_exponent(alpha);
  out.lhs = sys.t.dot(restricted_mass(sys, grid, W));
  out.t_norm = lalpha_norm(sys.t, alpha);
  out.schatten = schatten_norm(op, out.alpha_conjugate);
  out.rhs = out.t_norm * out.schatten;
  return out;
}

}  // namespace eigrestrict
