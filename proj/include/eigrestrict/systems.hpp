/**
 * @file systems.hpp
 * @brief Orthonormal families of eigenfunctions sampled on a submanifold grid.
 *
 * Families built here:
 *  - m-windows of real spherical harmonics of one degree on S^2,
 *  - Gram-whitened zonal packets f_i = sum_j A_ij Z^{p_j} with A = G^{-1/2},
 *  - random orthonormal subspaces of a degree-l eigenspace on S^2,
 *  - the full eigenspace basis and a single normalized zonal function.
 */
#pragma once

#include "eigrestrict/errors.hpp"
#include "eigrestrict/geometry.hpp"
#include "eigrestrict/specfun.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace eigrestrict {

struct FunctionLabel {
  int degree = 0;
  int index = 0;  // harmonic order m, packing index, or row of a random basis
  std::size_t node = std::numeric_limits<std::size_t>::max();  // packing node, if any
};

/// Values F(j, i) = f_j(node_i) of an orthonormal family, plus coefficients t_j >= 0.
struct SystemMatrix {
  std::string family;
  Eigen::MatrixXd values;
  std::vector<FunctionLabel> labels;
  Eigen::VectorXd t;
  /// Exact L^2(S^d) Gram matrix of the rows when it is known in closed form; empty otherwise.
  Eigen::MatrixXd l2_gram;

  std::size_t count() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t node_count() const { return static_cast<std::size_t>(values.cols()); }

  void set_weights(Eigen::VectorXd w) {
    if (w.size() != values.rows()) throw std::invalid_argument("SystemMatrix: weight vector length mismatch");
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (!(w(j) >= 0.0)) throw std::invalid_argument("SystemMatrix: weights must be nonnegative");
    t = std::move(w);
  }
};

/// Coefficient profiles used across experiments.
enum class WeightProfile { ones, spike, geometric };

inline Eigen::VectorXd weight_profile(WeightProfile profile, Eigen::Index n, double ratio = 0.5) {
  switch (profile) {
    case WeightProfile::ones: return Eigen::VectorXd::Ones(n);
    case WeightProfile::spike: {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
      if (n > 0) t(0) = 1.0;
      return t;
    }
    case WeightProfile::geometric: {
      Eigen::VectorXd t(n);
      double v = 1.0;
      for (Eigen::Index j = 0; j < n; ++j, v *= ratio) t(j) = v;
      return t;
    }
  }
  return Eigen::VectorXd::Ones(n);
}

inline std::string to_string(WeightProfile p) {
  switch (p) {
    case WeightProfile::ones: return "ones";
    case WeightProfile::spike: return "spike";
    case WeightProfile::geometric: return "geometric";
  }
  return "unknown";
}

namespace detail {

inline void require_s2(const SubmanifoldGrid& grid, const char* who) {
  if (grid.ambient_dim() != 2) throw std::invalid_argument(std::string(who) + ": grid must lie on S^2");
}

inline SystemMatrix window_system(int degree, int m_lo, int m_hi, const SubmanifoldGrid& grid, const char* family) {
  require_s2(grid, family);
  if (m_lo < 0 || m_hi > degree || m_lo > m_hi)
    throw std::invalid_argument(std::string(family) + ": window empty or exceeds the degree");
  SystemMatrix sys;
  sys.family = family;
  const Eigen::Index rows = m_hi - m_lo + 1;
  sys.values.resize(rows, static_cast<Eigen::Index>(grid.size()));
  std::vector<double> pbar(static_cast<std::size_t>(rows));
  double last_theta = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [theta, phi] = spherical_angles(grid.nodes()[i]);
    if (theta != last_theta) {
      for (int m = m_lo; m <= m_hi; ++m) pbar[static_cast<std::size_t>(m - m_lo)] = assoc_legendre_norm_theta(degree, m, theta);
      last_theta = theta;
    }
    for (int m = m_lo; m <= m_hi; ++m) {
      const double p = pbar[static_cast<std::size_t>(m - m_lo)];
      sys.values(m - m_lo, static_cast<Eigen::Index>(i)) = m == 0 ? p : std::numbers::sqrt2 * p * std::cos(m * phi);
    }
  }
  for (int m = m_lo; m <= m_hi; ++m) sys.labels.push_back({degree, m});
  sys.t = Eigen::VectorXd::Ones(rows);
  sys.l2_gram = Eigen::MatrixXd::Identity(rows, rows);
  return sys;
}

inline void check_window(int degree, int tk, const char* who) {
  if (tk < 1) throw std::invalid_argument(std::string(who) + ": t_k must be >= 1");
  if (4 * tk > degree) throw std::invalid_argument(std::string(who) + ": need 2 t_k <= k/2");
}

}  // namespace detail

/// t_k = ceil(k^tau).
inline int window_width(int degree, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("window_width: tau must lie in (0,1)");
  return static_cast<int>(std::ceil(std::pow(static_cast<double>(degree), tau) - 1e-12));
}

/// Real harmonics Y_k^m, m in [t_k, 2 t_k].
inline SystemMatrix window_system_low(int degree, int tk, const SubmanifoldGrid& grid) {
  detail::check_window(degree, tk, "window_system_low");
  return detail::window_system(degree, tk, 2 * tk, grid, "window_low");
}

/// Real harmonics Y_k^m, m in [k - 2 t_k, k - t_k].
inline SystemMatrix window_system_high(int degree, int tk, const SubmanifoldGrid& grid) {
  detail::check_window(degree, tk, "window_system_high");
  return detail::window_system(degree, degree - 2 * tk, degree - tk, grid, "window_high");
}

/// Matrix B(m + l, i) = Y_l^m(node_i), m = -l..l, of the real orthonormal basis on S^2.
inline Eigen::MatrixXd harmonic_basis_matrix(int degree, const SubmanifoldGrid& grid) {
  detail::require_s2(grid, "harmonic_basis_matrix");
  const Eigen::Index dim = 2 * degree + 1;
  Eigen::MatrixXd b(dim, static_cast<Eigen::Index>(grid.size()));
  std::vector<double> p;
  double last_theta = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [theta, phi] = spherical_angles(grid.nodes()[i]);
    if (theta != last_theta) {
      p = legendre_all_orders(degree, theta);
      last_theta = theta;
    }
    const auto col = static_cast<Eigen::Index>(i);
    b(degree, col) = p[0];
    for (int m = 1; m <= degree; ++m) {
      const double v = std::numbers::sqrt2 * p[static_cast<std::size_t>(m)];
      b(degree + m, col) = v * std::cos(m * phi);
      b(degree - m, col) = v * std::sin(m * phi);
    }
  }
  return b;
}

/// Every real harmonic of degree l on S^2 (Q = E_lambda).
inline SystemMatrix eigenspace_system(int degree, const SubmanifoldGrid& grid) {
  SystemMatrix sys;
  sys.family = "eigenspace";
  sys.values = harmonic_basis_matrix(degree, grid);
  for (int m = -degree; m <= degree; ++m) sys.labels.push_back({degree, m});
  sys.t = Eigen::VectorXd::Ones(sys.values.rows());
  sys.l2_gram = Eigen::MatrixXd::Identity(sys.values.rows(), sys.values.rows());
  return sys;
}

/// Random r-dimensional subspace of the degree-l eigenspace on S^2, in the evaluated basis `basis`
/// (as returned by harmonic_basis_matrix). Deterministic in the seed.
inline SystemMatrix random_orthonormal_system(int degree, int r, std::uint64_t seed, const Eigen::MatrixXd& basis) {
  const Eigen::Index dim = 2 * degree + 1;
  if (basis.rows() != dim) throw std::invalid_argument("random_orthonormal_system: basis has the wrong degree");
  if (r < 1 || r > dim) throw std::invalid_argument("random_orthonormal_system: need 1 <= r <= dim E_lambda");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(dim, r);
  for (Eigen::Index c = 0; c < r; ++c)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, r);
  const Eigen::MatrixXd coeff = q.transpose();

  SystemMatrix sys;
  sys.family = "random";
  sys.values = coeff * basis;
  for (int j = 0; j < r; ++j) sys.labels.push_back({degree, j});
  sys.t = Eigen::VectorXd::Ones(r);
  sys.l2_gram = coeff * coeff.transpose();
  return sys;
}

inline SystemMatrix random_orthonormal_system(int degree, int r, std::uint64_t seed, const SubmanifoldGrid& grid) {
  return random_orthonormal_system(degree, r, seed, harmonic_basis_matrix(degree, grid));
}

/// The single normalized zonal function Z^p, p a point of S^d.
inline SystemMatrix zonal_single_system(int d, int degree, const SpherePoint& pole, const SubmanifoldGrid& grid) {
  const ZonalKernel zk = ZonalKernel::make(d, degree);
  SystemMatrix sys;
  sys.family = "zonal";
  sys.values.resize(1, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    sys.values(0, static_cast<Eigen::Index>(i)) = zonal_normalized(zk, pole.dot(grid.nodes()[i]));
  sys.labels.push_back({degree, 0});
  sys.t = Eigen::VectorXd::Ones(1);
  sys.l2_gram = Eigen::MatrixXd::Identity(1, 1);
  return sys;
}

/// Gram matrix of normalized zonal packets and its inverse square root.
struct GramData {
  Eigen::MatrixXd G;
  Eigen::MatrixXd A;         // G^{-1/2}
  double delta_bound = 0.0;  // max_i sum_{j != i} |G_ij|
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

inline constexpr double kGramEigenvalueFloor = 1e-12;

/// Whitening of an arbitrary symmetric Gram matrix.
inline GramData whiten(Eigen::MatrixXd G) {
  const Eigen::Index n = G.rows();
  if (n == 0 || G.cols() != n) throw std::invalid_argument("whiten: Gram matrix must be square and nonempty");
  GramData gd;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success) throw NumericalError("whiten: eigendecomposition failed");
  gd.min_eigenvalue = es.eigenvalues().minCoeff();
  gd.max_eigenvalue = es.eigenvalues().maxCoeff();
  if (!(gd.min_eigenvalue > kGramEigenvalueFloor))
    throw NumericalError("Gram matrix is not positive definite (min eigenvalue " + std::to_string(gd.min_eigenvalue) +
                         "); points are not separated enough for this degree");
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
  gd.A = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) s += std::fabs(G(i, j));
    gd.delta_bound = std::max(gd.delta_bound, s);
  }
  gd.G = std::move(G);
  return gd;
}

/// G_ij = <Z^{p_i}, Z^{p_j}> = Z_l(p_i . p_j) / Z_l(1).
inline GramData zonal_gram(int d, int degree, const SeparatedSet& pts) {
  if (pts.size() == 0) throw std::invalid_argument("zonal_gram: empty point set");
  const ZonalKernel zk = ZonalKernel::make(d, degree);
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    G(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double g = zonal_eval(zk, pts.points[static_cast<std::size_t>(i)].dot(pts.points[static_cast<std::size_t>(j)])) /
                       zk.normalization;
      G(i, j) = g;
      G(j, i) = g;
    }
  }
  return whiten(std::move(G));
}

/// Rows f_i = sum_j A_ij Z^{p_j} evaluated on the grid.
inline SystemMatrix zonal_packet_system(const GramData& gd, int d, int degree, const SeparatedSet& pts,
                                        const SubmanifoldGrid& grid) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (gd.A.rows() != n) throw std::invalid_argument("zonal_packet_system: Gram data does not match the point set");
  const ZonalKernel zk = ZonalKernel::make(d, degree);
  Eigen::MatrixXd z(n, static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index j = 0; j < n; ++j)
    for (std::size_t i = 0; i < grid.size(); ++i)
      z(j, static_cast<Eigen::Index>(i)) = zonal_normalized(zk, pts.points[static_cast<std::size_t>(j)].dot(grid.nodes()[i]));
  SystemMatrix sys;
  sys.family = "zonal_packets";
  sys.values = gd.A * z;
  for (Eigen::Index j = 0; j < n; ++j)
    sys.labels.push_back({degree, static_cast<int>(j), pts.node_indices[static_cast<std::size_t>(j)]});
  sys.t = Eigen::VectorXd::Ones(n);
  sys.l2_gram = gd.A * gd.G * gd.A.transpose();
  return sys;
}

}  // namespace eigrestrict
