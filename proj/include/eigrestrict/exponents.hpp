/**
 * @file exponents.hpp
 * @brief Closed-form exponent tables for restriction estimates of orthonormal
 *        systems of Laplace eigenfunctions.
 *
 * Every formula is written in terms of the reciprocal exponent r = 1/p, so the
 * endpoint p = infinity is the exact value r = 0 and no limits are needed.
 * All functions are templates over the scalar field T. Instantiate with
 * boost::rational<long long> for exact case-boundary arithmetic, or with double.
 *
 *   sigma(p,d)     point-wise Lp growth of a single eigenfunction on M^d
 *   alpha(d,p)     l^alpha index of orthonormal-system Lp bounds on M^d
 *   delta(k,d,p)   Lp(Sigma^k) restriction growth of a single eigenfunction
 *   Lambda         lambda^{2 delta}, times log(lambda) when (p,k) = (2,d-2)
 *   (alpha,h)      l^alpha index and log power for Sigma of codimension one
 *   gamma(p)       density growth for #J ~ lambda^beta on a surface
 */
#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace eigrestrict {

/// Rational scalar used for exact exponent arithmetic.
using Rational = boost::rational<long long>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return boost::rational_cast<double>(v); }

/// Real number extended by +infinity.
template <class T>
class ExtendedReal {
public:
  constexpr ExtendedReal() = default;
  explicit ExtendedReal(T v) : value_(v) {
    if constexpr (std::is_floating_point_v<T>) {
      if (std::isinf(v)) infinite_ = true;
    }
  }
  static ExtendedReal infinity() {
    ExtendedReal e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  T value() const {
    if (infinite_) throw std::domain_error("ExtendedReal: value() of infinity");
    return value_;
  }
  /// 1/x, with 1/inf = 0. Throws on zero.
  T reciprocal() const {
    if (infinite_) return T(0);
    if (value_ == T(0)) throw std::domain_error("ExtendedReal: reciprocal of zero");
    return T(1) / value_;
  }
  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : eigrestrict::to_double(value_);
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

private:
  T value_{};
  bool infinite_ = false;
};

/// Build an extended real from its reciprocal (r = 0 means infinity).
template <class T>
ExtendedReal<T> from_reciprocal(T r) {
  if (r == T(0)) return ExtendedReal<T>::infinity();
  return ExtendedReal<T>(T(1) / r);
}

/// Which case of a piecewise exponent formula was applied.
enum class Regime {
  sogge_low,           // 2 <= p <= 2(d+1)/(d-1)
  sogge_high,          // p >= 2(d+1)/(d-1)
  codim1_low,          // k = d-1, p < 2d/(d-1)
  codim1_boundary,     // k = d-1, p = 2d/(d-1)
  codim1_high,         // k = d-1, p > 2d/(d-1)
  codim1_middle,       // k = d-1, d >= 3, 2d/(d-1) <= p <= 4 (alpha,h table)
  codim1_above_four,   // k = d-1, d >= 3, p >= 4 (alpha,h table)
  codim2,              // k = d-2
  higher_codim,        // k <= d-3
  surface_curve,       // (k,d) = (1,2) in the (alpha,h) table
  codim2_range,        // k <= d-2: admissible alpha is the interval [1, p/2]
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::sogge_low: return "sogge_low";
    case Regime::sogge_high: return "sogge_high";
    case Regime::codim1_low: return "codim1_low";
    case Regime::codim1_boundary: return "boundary";
    case Regime::codim1_high: return "codim1_high";
    case Regime::codim1_middle: return "codim1_middle";
    case Regime::codim1_above_four: return "codim1_above_four";
    case Regime::codim2: return "codim2";
    case Regime::higher_codim: return "higher_codim";
    case Regime::surface_curve: return "surface_curve";
    case Regime::codim2_range: return "codim2_range";
  }
  return "unknown";
}

/// (k, d, p): submanifold dimension, ambient dimension, Lebesgue exponent.
template <class T>
struct ExponentQuery {
  int k = 1;
  int d = 2;
  ExtendedReal<T> p{T(2)};

  void validate() const {
    if (d < 2) throw std::invalid_argument("ExponentQuery: d must be >= 2, got " + std::to_string(d));
    if (k < 1 || k > d - 1)
      throw std::invalid_argument("ExponentQuery: k must lie in [1, d-1], got k=" + std::to_string(k) +
                                  " d=" + std::to_string(d));
    if (!p.is_infinite() && p.value() < T(2))
      throw std::invalid_argument("ExponentQuery: p must be >= 2");
  }
};

template <class T>
struct ValueWithRegime {
  T value;
  Regime regime;
};

template <class T>
struct AlphaH {
  ExtendedReal<T> alpha;
  T h;
  Regime regime;
};

/// Admissible l^alpha interval [lo, hi] together with the log power h.
template <class T>
struct AlphaRange {
  T lo;
  ExtendedReal<T> hi;
  T h;
  Regime regime;
  bool is_range;  // false when the interval collapses to the single sharp index hi
};

template <class T>
struct ExponentResult {
  T delta;
  ExtendedReal<T> alpha;  // upper end of the admissible range
  T h;
  Regime delta_regime;
  Regime alpha_regime;
  bool alpha_is_range;
};

namespace detail {

template <class T>
void check_p(const ExtendedReal<T>& p) {
  if (!p.is_infinite() && p.value() < T(2)) throw std::invalid_argument("exponent p must be >= 2");
}
inline void check_d(int d) {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2, got " + std::to_string(d));
}

// Individual branches, exposed for boundary-agreement tests. r = 1/p.
template <class T> T sigma_low(T r, int d) { return T(d - 1) / T(2) * (T(1) / T(2) - r); }
template <class T> T sigma_high(T r, int d) { return T(d) * (T(1) / T(2) - r) - T(1) / T(2); }
template <class T> T sigma_threshold(int d) { return T(d - 1) / T(2 * (d + 1)); }  // in r

template <class T> ExtendedReal<T> fs_alpha_low(T r) { return ExtendedReal<T>(T(2) / (T(1) + T(2) * r)); }
template <class T> ExtendedReal<T> fs_alpha_high(T r, int d) {
  if (r == T(0)) return ExtendedReal<T>::infinity();
  return ExtendedReal<T>(T(d - 1) / (T(2 * d) * r));
}

template <class T> T delta_codim1_low(T r, int d) { return T(d - 1) / T(4) - T(d - 2) * r / T(2); }
template <class T> T delta_codim1_high(T r, int d) { return T(d - 1) / T(2) - T(d - 1) * r; }
template <class T> T codim1_threshold(int d) { return T(d - 1) / T(2 * d); }  // r at p = 2d/(d-1)

template <class T> AlphaH<T> ah_codim1_low(T r) {
  return {ExtendedReal<T>(T(2) / (T(1) + T(2) * r)), T(0), Regime::codim1_low};
}
template <class T> AlphaH<T> ah_codim1_middle(T r, int d) {
  return {ExtendedReal<T>(T(2 * (d - 2)) / (T(4 * d - 4) * r - T(1))), (T(2 * d) * r - T(1)) / T(d - 2),
          Regime::codim1_middle};
}
template <class T> AlphaH<T> ah_codim1_above_four(T r) {
  return {from_reciprocal(T(2) * r), T(2) * r, Regime::codim1_above_four};
}

template <class T> T gamma_low(T beta) { return (beta + T(1)) / T(2); }
template <class T> T gamma_high(T r, T beta) { return T(1) - T(2) * (T(1) - beta) * r; }

}  // namespace detail

/// Sogge exponent sigma(p,d).
template <class T>
ValueWithRegime<T> sogge_sigma(const ExtendedReal<T>& p, int d) {
  detail::check_d(d);
  detail::check_p(p);
  const T r = p.reciprocal();
  if (r >= detail::sigma_threshold<T>(d)) return {detail::sigma_low(r, d), Regime::sogge_low};
  return {detail::sigma_high(r, d), Regime::sogge_high};
}

/// Frank–Sabin l^alpha index alpha(d,p). Infinite at (d, p) = (*, inf).
template <class T>
ExtendedReal<T> fs_alpha(int d, const ExtendedReal<T>& p) {
  detail::check_d(d);
  detail::check_p(p);
  const T r = p.reciprocal();
  if (r >= detail::sigma_threshold<T>(d)) return detail::fs_alpha_low(r);
  return detail::fs_alpha_high(r, d);
}

/// Single-eigenfunction restriction exponent delta(k,d,p). At the codimension-one
/// boundary p = 2d/(d-1) the common value (d-1)/(2d) is returned.
template <class T>
ValueWithRegime<T> bgt_delta(const ExponentQuery<T>& q) {
  q.validate();
  const T r = q.p.reciprocal();
  const int d = q.d;
  if (q.k == d - 1) {
    const T r0 = detail::codim1_threshold<T>(d);
    if (r > r0) return {detail::delta_codim1_low(r, d), Regime::codim1_low};
    if (r < r0) return {detail::delta_codim1_high(r, d), Regime::codim1_high};
    return {T(d - 1) / T(2 * d), Regime::codim1_boundary};
  }
  if (q.k == d - 2) return {T(d - 1) / T(2) - T(d - 2) * r, Regime::codim2};
  return {T(d - 1) / T(2) - T(q.k) * r, Regime::higher_codim};
}

/// True when the single-eigenfunction bound carries a log(lambda) factor, i.e. (p,k) = (2,d-2).
template <class T>
bool lambda_has_log(const ExponentQuery<T>& q) {
  return q.k == q.d - 2 && !q.p.is_infinite() && q.p.value() == T(2);
}

/// Lambda(k,d,p) at frequency lam: lam^{2 delta}, times log(lam) when (p,k) = (2,d-2).
template <class T>
double lambda_power(const ExponentQuery<T>& q, double lam) {
  if (!(lam >= 2.0)) throw std::invalid_argument("lambda_power: lam must be >= 2");
  const double delta = to_double(bgt_delta(q).value);
  double v = std::pow(lam, 2.0 * delta);
  if (lambda_has_log(q)) v *= std::log(lam);
  return v;
}

/// (alpha(k,d,p), h(k,d,p)). For k <= d-2 every alpha in [1, p/2] is admissible; the upper
/// end p/2 is returned with h = 0 and regime codim2_range.
template <class T>
AlphaH<T> theorem_alpha_h(const ExponentQuery<T>& q) {
  q.validate();
  const T r = q.p.reciprocal();
  const int d = q.d;
  if (q.k == 1 && d == 2) {
    // (max{2, p/2}, min{1/2, 2/p})
    const T quarter = T(1) / T(4);
    if (r >= quarter) return {ExtendedReal<T>(T(2)), T(1) / T(2), Regime::surface_curve};
    return {from_reciprocal(T(2) * r), T(2) * r, Regime::surface_curve};
  }
  if (q.k <= d - 2) return {from_reciprocal(T(2) * r), T(0), Regime::codim2_range};
  const T r0 = detail::codim1_threshold<T>(d);
  if (r > r0) return detail::ah_codim1_low(r);
  if (r >= T(1) / T(4)) return detail::ah_codim1_middle(r, d);
  return detail::ah_codim1_above_four(r);
}

/// Admissible alpha for any valid query: [1, p/2] with no extra log for codimension >= 2,
/// the single index of theorem_alpha_h otherwise.
template <class T>
AlphaRange<T> admissible_alpha(const ExponentQuery<T>& q) {
  q.validate();
  if (q.k <= q.d - 2) {
    return {T(1), from_reciprocal(T(2) * q.p.reciprocal()), T(0), Regime::codim2_range, true};
  }
  const auto ah = theorem_alpha_h(q);
  return {T(1), ah.alpha, ah.h, ah.regime, false};
}

/// Full exponent record for a query.
template <class T>
ExponentResult<T> classify(const ExponentQuery<T>& q) {
  const auto delta = bgt_delta(q);
  const auto range = admissible_alpha(q);
  return {delta.value, range.hi, range.h, delta.regime, range.regime, range.is_range};
}

/// Density growth exponent gamma(p) for #J ~ lambda^beta on a surface.
template <class T>
T corollary_gamma(const ExtendedReal<T>& p, T beta) {
  detail::check_p(p);
  if (beta < T(0) || beta > T(1)) throw std::invalid_argument("corollary_gamma: beta must lie in [0,1]");
  const T r = p.reciprocal();
  if (r >= T(1) / T(4)) return detail::gamma_low(beta);
  return detail::gamma_high(r, beta);
}

/// Smallest admissible beta for the zonal-packet construction: 2k/(2k+d-1).
template <class T>
T beta_threshold(int k, int d) {
  if (d < 3 || k < 1 || k > d - 1)
    throw std::invalid_argument("beta_threshold: need d >= 3 and 1 <= k <= d-1");
  return T(2 * k) / T(2 * k + d - 1);
}

/// Convenience double-valued query.
inline ExponentQuery<double> query(int k, int d, double p) {
  return {k, d, ExtendedReal<double>(p)};
}

}  // namespace eigrestrict
