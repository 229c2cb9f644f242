/**
 * @file specfun.hpp
 * @brief Normalized associated Legendre functions, Gegenbauer polynomials,
 *        real spherical harmonics on S^2 and zonal kernels on S^d.
 *
 * Legendre values are fully normalized so that the real harmonics
 *
 *   Y_l^0 = Pbar_l^0(cos t),
 *   Y_l^m = sqrt(2) Pbar_l^m(cos t) cos(m f),    m > 0,
 *   Y_l^m = sqrt(2) Pbar_l^|m|(cos t) sin(|m| f), m < 0,
 *
 * are orthonormal in L^2(S^2). No Condon–Shortley phase is applied.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigrestrict {

inline constexpr int kMaxDegree = 1 << 14;

/// Degree-l eigenspace on S^d; lam() is the frequency sqrt(l(l+d-1)).
struct HarmonicDegree {
  int l = 0;
  int d = 2;

  double lam() const { return std::sqrt(static_cast<double>(l) * static_cast<double>(l + d - 1)); }
  /// Squared frequency, exact for integer inputs.
  std::int64_t lam_squared() const { return static_cast<std::int64_t>(l) * (l + d - 1); }
};

namespace detail {

inline void check_degree(int l) {
  if (l < 0 || l > kMaxDegree) throw std::domain_error("degree out of range: " + std::to_string(l));
}

// Pbar_l^m given cos t and sin t >= 0, carried in long double with a running
// log scale so that tiny sectoral starts (sin t)^m never flush to zero early.
inline long double legendre_scaled(int l, int m, long double x, long double s) {
  constexpr long double kLog4Pi = 2.5310242469692907929L;  // log(4 pi)
  if (m > 0 && s == 0.0L) return 0.0L;
  long double log_scale = -0.5L * kLog4Pi;
  for (int i = 1; i <= m; ++i) log_scale += 0.5L * std::log((2.0L * i + 1.0L) / (2.0L * i));
  if (m > 0) log_scale += static_cast<long double>(m) * std::log(s);

  long double prev = 0.0L;  // Pbar_{m-1}^m
  long double cur = 1.0L;   // Pbar_m^m / exp(log_scale)
  long double a_prev = 0.0L;
  for (int n = m + 1; n <= l; ++n) {
    const long double nn = n, mm = m;
    const long double a = std::sqrt((4.0L * nn * nn - 1.0L) / (nn * nn - mm * mm));
    const long double next = (n == m + 1) ? a * x * cur : a * (x * cur - prev / a_prev);
    prev = cur;
    cur = next;
    a_prev = a;
    if (std::fabs(cur) > 1e300L) {
      prev /= 1e300L;
      cur /= 1e300L;
      log_scale += 690.77552789821370520L;  // log(1e300)
    }
  }
  if (cur == 0.0L) return 0.0L;
  return std::copysign(std::exp(log_scale + std::log(std::fabs(cur))), cur);
}

}  // namespace detail

/// Fully normalized associated Legendre function Pbar_l^m(x), 0 <= m <= l, |x| <= 1.
inline double assoc_legendre_norm(int l, int m, double x) {
  detail::check_degree(l);
  if (m < 0 || m > l) throw std::domain_error("assoc_legendre_norm: need 0 <= m <= l");
  if (!(std::fabs(x) <= 1.0)) throw std::domain_error("assoc_legendre_norm: |x| > 1");
  const long double lx = x;
  const long double s = std::sqrt((1.0L - lx) * (1.0L + lx));
  return static_cast<double>(detail::legendre_scaled(l, m, lx, s));
}

/// Same as assoc_legendre_norm, taking the colatitude directly (accurate near the poles).
inline double assoc_legendre_norm_theta(int l, int m, double theta) {
  detail::check_degree(l);
  if (m < 0 || m > l) throw std::domain_error("assoc_legendre_norm: need 0 <= m <= l");
  const long double t = theta;
  return static_cast<double>(detail::legendre_scaled(l, m, std::cos(t), std::fabs(std::sin(t))));
}

/// Pbar_l^m(cos theta) for all 0 <= m <= l.
inline std::vector<double> legendre_all_orders(int l, double theta) {
  detail::check_degree(l);
  std::vector<double> out(static_cast<std::size_t>(l) + 1);
  const long double t = theta;
  const long double x = std::cos(t), s = std::fabs(std::sin(t));
  for (int m = 0; m <= l; ++m) out[static_cast<std::size_t>(m)] = static_cast<double>(detail::legendre_scaled(l, m, x, s));
  return out;
}

/// Real orthonormal spherical harmonic on S^2 (cosine for m > 0, sine for m < 0).
inline double sph_harm_real(int l, int m, double theta, double phi) {
  if (m < -l || m > l) throw std::domain_error("sph_harm_real: need -l <= m <= l");
  const int am = m < 0 ? -m : m;
  const double p = assoc_legendre_norm_theta(l, am, theta);
  if (m == 0) return p;
  const double trig = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return std::numbers::sqrt2 * p * trig;
}

/// Gegenbauer polynomial C_l^a(t) by the three-term recurrence.
inline double gegenbauer(int l, double a, double t) {
  detail::check_degree(l);
  if (!(a > 0.0)) throw std::domain_error("gegenbauer: parameter a must be > 0");
  const long double la = a, lt = t;
  if (l == 0) return 1.0;
  long double c0 = 1.0L, c1 = 2.0L * la * lt;
  for (int n = 2; n <= l; ++n) {
    const long double c2 = (2.0L * lt * (n + la - 1.0L) * c1 - (n + 2.0L * la - 2.0L) * c0) / n;
    c0 = c1;
    c1 = c2;
  }
  return static_cast<double>(c1);
}

/// Dimension of the degree-l spherical harmonics on S^d.
inline std::uint64_t harmonic_dim(int d, int l) {
  if (d < 2 || l < 0) throw std::domain_error("harmonic_dim: need d >= 2, l >= 0");
  // (2l+d-1) * C(l+d-2, d-2) / (d-1)
  unsigned __int128 binom = 1;
  for (int i = 1; i <= d - 2; ++i) binom = binom * static_cast<unsigned>(l + i) / static_cast<unsigned>(i);
  const unsigned __int128 n = static_cast<unsigned __int128>(2 * l + d - 1) * binom / static_cast<unsigned>(d - 1);
  if (n > static_cast<unsigned __int128>(UINT64_MAX)) throw std::overflow_error("harmonic_dim overflow");
  return static_cast<std::uint64_t>(n);
}

/// Surface area of the unit sphere S^d in R^{d+1}.
inline double surface_area(int d) {
  using std::numbers::pi;
  switch (d) {
    case 1: return 2.0 * pi;
    case 2: return 4.0 * pi;
    case 3: return 2.0 * pi * pi;
    case 4: return 8.0 * pi * pi / 3.0;
    case 5: return pi * pi * pi;
    case 6: return 16.0 * pi * pi * pi / 15.0;
    case 7: return pi * pi * pi * pi / 3.0;
    case 8: return 32.0 * pi * pi * pi * pi / 105.0;
    default: break;
  }
  if (d < 1) throw std::domain_error("surface_area: d must be >= 1");
  return 2.0 * std::pow(pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

/// Reproducing kernel of the degree-l eigenspace on S^d as a function of x.y.
struct ZonalKernel {
  HarmonicDegree degree;
  double normalization = 0.0;  // Z_l(x, x) = dim / area
  double gegenbauer_at_one = 1.0;

  static ZonalKernel make(int d, int l) {
    if (d < 2) throw std::domain_error("ZonalKernel: d must be >= 2");
    detail::check_degree(l);
    ZonalKernel zk;
    zk.degree = {l, d};
    zk.normalization = static_cast<double>(harmonic_dim(d, l)) / surface_area(d);
    zk.gegenbauer_at_one = gegenbauer(l, 0.5 * (d - 1), 1.0);
    return zk;
  }
  double alpha() const { return 0.5 * (degree.d - 1); }
  double lam() const { return degree.lam(); }
};

/// Z_l(c) = (dim/area) C_l^a(c) / C_l^a(1), a = (d-1)/2, c = cos of the geodesic distance.
inline double zonal_eval(const ZonalKernel& zk, double c) {
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return zk.normalization * gegenbauer(zk.degree.l, zk.alpha(), c) / zk.gegenbauer_at_one;
}

/// Normalized zonal eigenfunction Z^p(x) = Z_l(p.x) / sqrt(Z_l(p,p)).
inline double zonal_normalized(const ZonalKernel& zk, double c) {
  return zonal_eval(zk, c) / std::sqrt(zk.normalization);
}

}  // namespace eigrestrict
