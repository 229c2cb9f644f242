/**
 * @file geometry.hpp
 * @brief Discretized geodesic submanifolds of S^d and separated point sets.
 *
 * Coordinates follow the usual spherical convention on S^2: colatitude theta is
 * measured from the x2 axis and longitude phi in the (x0, x1) plane. The
 * meridian arc is gamma_1(theta) = (sin theta, 0, cos theta), theta in [0, pi/2];
 * the equator gamma_2 is theta = pi/2. Great subspheres S^k sit in the first
 * k+1 coordinates of R^{d+1}.
 */
#pragma once

#include "eigrestrict/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eigrestrict {

/// Unit vector in R^{d+1}.
class SpherePoint {
public:
  SpherePoint() = default;

  /// Normalizes the input; throws on the zero vector.
  static SpherePoint from(const Eigen::VectorXd& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("SpherePoint: zero vector");
    SpherePoint p;
    p.coords_ = v / n;
    return p;
  }
  /// Basis vector e_i of R^{d+1}.
  static SpherePoint basis(int d, int i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d + 1);
    v(i) = 1.0;
    SpherePoint p;
    p.coords_ = v;
    return p;
  }

  const Eigen::VectorXd& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()) - 1; }
  double dot(const SpherePoint& o) const { return coords_.dot(o.coords_); }

private:
  Eigen::VectorXd coords_;
};

/// Geodesic distance on the unit sphere, in [0, pi].
inline double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  // atan2 form is accurate for nearly equal and nearly antipodal points
  const double s = (x.coords() - y.coords()).norm();
  const double t = (x.coords() + y.coords()).norm();
  return 2.0 * std::atan2(s, t);
}

/// (theta, phi) of a point of S^2.
inline std::array<double, 2> spherical_angles(const SpherePoint& x) {
  const auto& c = x.coords();
  if (c.size() < 3) throw std::invalid_argument("spherical_angles: need a point of S^2 or higher");
  const double rho = std::hypot(c(0), c(1));
  return {std::atan2(rho, c(2)), std::atan2(c(1), c(0))};
}

enum class ChartKind { meridian_arc, circle, great_sphere };

inline std::string_view to_string(ChartKind c) {
  switch (c) {
    case ChartKind::meridian_arc: return "arc";
    case ChartKind::circle: return "circle";
    case ChartKind::great_sphere: return "great-subsphere";
  }
  return "unknown";
}

struct ChartDescriptor {
  ChartKind kind = ChartKind::circle;
  std::array<double, 2> param_lo{};  // (theta, phi) or (t, -) lower bounds
  std::array<double, 2> param_hi{};
};

/// Quadrature nodes and weights on a k-dimensional geodesic submanifold of S^d.
class SubmanifoldGrid {
public:
  SubmanifoldGrid(int k, int d, int resolution, ChartDescriptor chart, SpherePoint center,
                  std::vector<SpherePoint> nodes, std::vector<double> weights,
                  std::vector<std::array<double, 2>> params)
      : k_(k), d_(d), resolution_(resolution), chart_(chart), center_(std::move(center)),
        nodes_(std::move(nodes)), weights_(std::move(weights)), params_(std::move(params)) {
    if (nodes_.size() != weights_.size() || nodes_.size() != params_.size())
      throw std::invalid_argument("SubmanifoldGrid: size mismatch");
    for (double w : weights_)
      if (!(w > 0.0)) throw std::invalid_argument("SubmanifoldGrid: weights must be positive");
  }

  int dim() const { return k_; }
  int ambient_dim() const { return d_; }
  /// Resolution parameter n the grid was built with.
  int resolution() const { return resolution_; }
  std::size_t size() const { return nodes_.size(); }
  const ChartDescriptor& chart() const { return chart_; }
  /// Reference point of the chart; separated sets are packed in a cap around it.
  const SpherePoint& center() const { return center_; }
  const std::vector<SpherePoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Chart parameters per node: (theta, 0) on the arc, (phi, 0) on a circle, (theta, phi) on S^2.
  const std::vector<std::array<double, 2>>& params() const { return params_; }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

private:
  int k_;
  int d_;
  int resolution_;
  ChartDescriptor chart_;
  SpherePoint center_;
  std::vector<SpherePoint> nodes_;
  std::vector<double> weights_;
  std::vector<std::array<double, 2>> params_;
};

/// Quarter meridian gamma_1(theta) = (sin theta, 0, cos theta), theta in [0, pi/2], on S^2.
inline SubmanifoldGrid meridian_arc_grid(int n) {
  if (n < 2) throw std::invalid_argument("meridian_arc_grid: n must be >= 2");
  const double half_pi = 0.5 * std::numbers::pi;
  const QuadratureRule q = composite_gauss_legendre(n, 0.0, half_pi);
  std::vector<SpherePoint> nodes;
  std::vector<std::array<double, 2>> params;
  nodes.reserve(q.nodes.size());
  for (double t : q.nodes) {
    nodes.push_back(SpherePoint::from(Eigen::Vector3d(std::sin(t), 0.0, std::cos(t))));
    params.push_back({t, 0.0});
  }
  const double mid = 0.25 * std::numbers::pi;
  ChartDescriptor chart{ChartKind::meridian_arc, {0.0, 0.0}, {half_pi, 0.0}};
  return {1, 2, n, chart, SpherePoint::from(Eigen::Vector3d(std::sin(mid), 0.0, std::cos(mid))),
          std::move(nodes), q.weights, std::move(params)};
}

/// Great S^k inside S^d (first k+1 coordinates), k in {1, 2}.
/// k = 1: n-point trapezoidal circle. k = 2: n longitudes times n/2 Gauss–Legendre latitudes.
inline SubmanifoldGrid equator_grid(int d, int k, int n) {
  if (d < 2 || k < 1 || k > d - 1) throw std::invalid_argument("equator_grid: need 1 <= k <= d-1");
  if (k > 2) throw std::invalid_argument("equator_grid: k > 2 is not supported");
  if (n < 2) throw std::invalid_argument("equator_grid: n must be >= 2");
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
  std::vector<std::array<double, 2>> params;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d + 1);
  if (k == 1) {
    for (int i = 0; i < n; ++i) {
      const double phi = two_pi * i / n;
      v(0) = std::cos(phi);
      v(1) = std::sin(phi);
      nodes.push_back(SpherePoint::from(v));
      weights.push_back(two_pi / n);
      params.push_back({phi, 0.0});
    }
    ChartDescriptor chart{ChartKind::circle, {0.0, 0.0}, {two_pi, 0.0}};
    return {1, d, n, chart, SpherePoint::basis(d, 0), std::move(nodes), std::move(weights), std::move(params)};
  }
  const int n_theta = std::max(2, n / 2);
  const QuadratureRule g = gauss_legendre(n_theta);
  for (int a = 0; a < n_theta; ++a) {
    const double z = g.nodes[static_cast<std::size_t>(a)];
    const double theta = std::acos(z);
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    for (int b = 0; b < n; ++b) {
      const double phi = two_pi * b / n;
      v(0) = s * std::cos(phi);
      v(1) = s * std::sin(phi);
      v(2) = z;
      nodes.push_back(SpherePoint::from(v));
      weights.push_back(g.weights[static_cast<std::size_t>(a)] * two_pi / n);
      params.push_back({theta, phi});
    }
  }
  ChartDescriptor chart{ChartKind::great_sphere, {0.0, 0.0}, {std::numbers::pi, two_pi}};
  return {2, d, n, chart, SpherePoint::basis(d, 0), std::move(nodes), std::move(weights), std::move(params)};
}

/// The whole of S^2: n longitudes times n/2 Gauss–Legendre latitudes. Exact for
/// polynomials of degree < n on the sphere.
inline SubmanifoldGrid full_sphere_grid(int n) {
  if (n < 2) throw std::invalid_argument("full_sphere_grid: n must be >= 2");
  const double two_pi = 2.0 * std::numbers::pi;
  const int n_theta = std::max(2, n / 2 + 1);
  const QuadratureRule g = gauss_legendre(n_theta);
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
  std::vector<std::array<double, 2>> params;
  for (int a = 0; a < n_theta; ++a) {
    const double z = g.nodes[static_cast<std::size_t>(a)];
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    for (int b = 0; b < n; ++b) {
      const double phi = two_pi * b / n;
      nodes.push_back(SpherePoint::from(Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), z)));
      weights.push_back(g.weights[static_cast<std::size_t>(a)] * two_pi / n);
      params.push_back({std::acos(z), phi});
    }
  }
  ChartDescriptor chart{ChartKind::great_sphere, {0.0, 0.0}, {std::numbers::pi, two_pi}};
  return {2, 2, n, chart, SpherePoint::basis(2, 0), std::move(nodes), std::move(weights), std::move(params)};
}

/// Points of Sigma with pairwise distance in [separation, pi/2].
struct SeparatedSet {
  std::vector<SpherePoint> points;
  std::vector<std::size_t> node_indices;  // positions in the source grid
  double separation = 0.0;
  double lam = 0.0;
  double beta = 0.0;
  double C = 0.0;

  std::size_t size() const { return points.size(); }
};

/// Geodesic radius of the cap that candidate points are drawn from; its diameter is pi/2.
inline constexpr double kPackingCapRadius = 0.25 * std::numbers::pi;

/// Greedy farthest-point packing of grid nodes inside the cap of radius pi/4 around
/// grid.center(), with separation C * lam^(beta - 1). The first point is the candidate
/// farthest from the center (lowest index on ties), so an arc is packed from one end.
inline SeparatedSet separated_points(const SubmanifoldGrid& grid, double lam, double beta, double C) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("separated_points: beta must lie in (0,1)");
  if (!(C >= 1.0)) throw std::invalid_argument("separated_points: C must be >= 1");
  if (!(lam >= 2.0)) throw std::invalid_argument("separated_points: lam must be >= 2");
  SeparatedSet out;
  out.separation = C * std::pow(lam, beta - 1.0);
  out.lam = lam;
  out.beta = beta;
  out.C = C;

  std::vector<std::size_t> cand;
  std::vector<double> to_center;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = geodesic_distance(grid.nodes()[i], grid.center());
    if (r <= kPackingCapRadius + 1e-12) {
      cand.push_back(i);
      to_center.push_back(r);
    }
  }
  if (cand.empty()) return out;

  const auto first = static_cast<std::size_t>(std::max_element(to_center.begin(), to_center.end()) - to_center.begin());
  std::vector<double> mind(cand.size(), std::numeric_limits<double>::infinity());
  auto select = [&](std::size_t c) {
    const std::size_t idx = cand[c];
    out.points.push_back(grid.nodes()[idx]);
    out.node_indices.push_back(idx);
    for (std::size_t j = 0; j < cand.size(); ++j)
      mind[j] = std::min(mind[j], geodesic_distance(grid.nodes()[cand[j]], grid.nodes()[idx]));
  };
  select(first);
  for (;;) {
    const auto best = static_cast<std::size_t>(std::max_element(mind.begin(), mind.end()) - mind.begin());
    if (!(mind[best] >= out.separation)) break;
    select(best);
  }
  return out;
}

}  // namespace eigrestrict
