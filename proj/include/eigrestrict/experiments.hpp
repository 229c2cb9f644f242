/**
 * @file experiments.hpp
 * @brief Scaling experiments: upper-bound ratios, lower-bound saturation on S^2
 *        and S^d, zonal kernel decay, pointwise Weyl law and trace-duality sampling.
 *
 * Each experiment returns an ExperimentReport holding the measured points, the
 * log-log fits, and one Verdict per checked inequality. Reported norms are accepted
 * only after doubling the grid resolution moves them by less than 1%.
 */
#pragma once

#include "eigrestrict/errors.hpp"
#include "eigrestrict/exponents.hpp"
#include "eigrestrict/geometry.hpp"
#include "eigrestrict/norms.hpp"
#include "eigrestrict/specfun.hpp"
#include "eigrestrict/systems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eigrestrict {

/// "inf" or the shortest round-trip decimal form.
inline std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  double back = 0.0;
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, p);
    back = std::strtod(buf, nullptr);
    if (back == p) break;
  }
  return buf;
}

/// 1/p with 1/inf = 0.
inline double reciprocal_exponent(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// Ordinary least squares fit of log y against log x.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  std::vector<std::array<double, 2>> points;  // (log x, log y)
};

inline FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: x and y differ in length");
  if (x.size() < 4) throw std::invalid_argument("fit_loglog: need at least 4 points");
  FitResult f;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("fit_loglog: inputs must be positive and finite");
    f.points.push_back({std::log(x[i]), std::log(y[i])});
    mx += f.points.back()[0];
    my += f.points.back()[1];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [lx, ly] : f.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog: x values must not all coincide");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (const auto& [lx, ly] : f.points) {
    const double e = ly - (f.intercept + f.slope * lx);
    ss += e * e;
  }
  f.r2 = syy > 0.0 ? std::clamp(1.0 - ss / syy, 0.0, 1.0) : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

/// One checked inequality: measured `comparison` threshold, with the tolerance already folded in.
struct Verdict {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string comparison;  // ">=", "<=", "within"
  double threshold = 0.0;
  double tolerance = 0.0;
  std::string cites;
};

struct CsvRow {
  int l = 0;
  double lambda = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::string tag;
  int d = 2;
  int k = 1;
  double p = kInfinity;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, FitResult>> fits;
  std::vector<std::pair<std::string, double>> targets;
  std::vector<Verdict> verdicts;
  std::vector<CsvRow> rows;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
  }
  const FitResult& fit(const std::string& name) const {
    for (const auto& [n, f] : fits)
      if (n == name) return f;
    throw std::out_of_range("no fit named " + name);
  }
  const Verdict& verdict(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return v;
    throw std::out_of_range("no verdict named " + name);
  }
  std::string file_stem() const {
    return experiment + "_" + std::to_string(d) + "_" + std::to_string(k) + "_" + format_exponent(p) + "_" + tag;
  }

  /// Passes iff measured >= threshold - tol.
  void at_least(std::string name, double measured, double threshold, double tol, std::string cites) {
    verdicts.push_back({std::move(name), measured >= threshold - tol, measured, ">=", threshold, tol, std::move(cites)});
  }
  /// Passes iff measured <= threshold + tol.
  void at_most(std::string name, double measured, double threshold, double tol, std::string cites) {
    verdicts.push_back({std::move(name), measured <= threshold + tol, measured, "<=", threshold, tol, std::move(cites)});
  }
  /// Passes iff |measured - threshold| <= tol.
  void within(std::string name, double measured, double threshold, double tol, std::string cites) {
    verdicts.push_back(
        {std::move(name), std::fabs(measured - threshold) <= tol, measured, "within", threshold, tol, std::move(cites)});
  }
  /// Passes iff measured < bound.
  void below(std::string name, double measured, double bound, std::string cites) {
    verdicts.push_back({std::move(name), measured < bound, measured, "<", bound, 0.0, std::move(cites)});
  }

  void add_fit(std::string name, const std::vector<int>& degrees, const std::vector<double>& x,
               const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({degrees[i], x[i], "fit:" + name, y[i]});
    fits.emplace_back(std::move(name), fit_loglog(x, y));
  }
};

/// Degrees l_i spaced geometrically (or linearly) from lmin to lmax, rounded and deduplicated.
inline std::vector<int> degree_grid(int lmin, int lmax, int count, bool geometric = true) {
  if (lmin < 1 || lmax < lmin || count < 1) throw std::invalid_argument("degree_grid: need 1 <= lmin <= lmax, count >= 1");
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double v = geometric ? lmin * std::pow(static_cast<double>(lmax) / lmin, s) : lmin + (lmax - lmin) * s;
    const int l = static_cast<int>(std::lround(v));
    if (out.empty() || out.back() != l) out.push_back(l);
  }
  return out;
}

/// {16, 23, 32, 45, 64, 91, 128, 181, 256} on S^2, {16, 23, 32, 45, 64} otherwise.
inline std::vector<int> default_degrees(int d) { return d == 2 ? degree_grid(16, 256, 9) : degree_grid(16, 64, 5); }

struct RefinementPolicy {
  int max_doublings = 3;
  double rel_tol = 0.01;
};

struct Refined {
  std::vector<double> values;  // at `resolution`, confirmed against 2 * resolution
  int resolution = 0;
  double max_rel_change = 0.0;
  bool converged = false;
};

inline double relative_change(double a, double b) {
  const double s = std::max(std::fabs(a), std::fabs(b));
  return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

/// Evaluates compute(n), compute(2n), ... until every entry moves by less than rel_tol.
template <class F>
Refined refine(F&& compute, int n0, const RefinementPolicy& policy) {
  if (policy.max_doublings < 1) throw std::invalid_argument("refine: max_doublings must be >= 1");
  Refined r;
  int n = n0;
  std::vector<double> cur = compute(n);
  for (int i = 0; i < policy.max_doublings; ++i) {
    std::vector<double> fine = compute(2 * n);
    if (fine.size() != cur.size()) throw std::logic_error("refine: value count changed with resolution");
    double ch = 0.0;
    for (std::size_t j = 0; j < cur.size(); ++j) ch = std::max(ch, relative_change(cur[j], fine[j]));
    r.values = cur;
    r.resolution = n;
    r.max_rel_change = ch;
    if (ch < policy.rel_tol) {
      r.converged = true;
      return r;
    }
    cur = std::move(fine);
    n *= 2;
  }
  return r;
}

namespace detail {

/// Tracks the refinement outcome over all degrees of one experiment.
struct RefinementLog {
  double worst = 0.0;
  bool all_converged = true;
  int worst_degree = 0;

  void add(const Refined& r, int l) {
    if (r.max_rel_change >= worst) {
      worst = r.max_rel_change;
      worst_degree = l;
    }
    all_converged = all_converged && r.converged;
  }
  void report(ExperimentReport& rep, const RefinementPolicy& pol) const {
    rep.verdicts.push_back({"refinement", all_converged && worst < pol.rel_tol, worst, "<", pol.rel_tol, 0.0,
                            "doubling the grid resolution moves every reported norm by less than the tolerance"});
  }
};

inline std::uint64_t draw_seed(std::uint64_t seed, int l, int draw, int stream = 0) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  ss.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline void check_fit_degrees(const std::vector<int>& degrees, const char* who) {
  if (degrees.size() < 4) throw ConfigError(std::string(who) + ": need at least 4 degrees to fit a slope");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 2) throw ConfigError(std::string(who) + ": degrees must be >= 2");
    if (i > 0 && degrees[i] <= degrees[i - 1]) throw ConfigError(std::string(who) + ": degrees must increase");
  }
}

inline void check_p(double p, const char* who) {
  if (!(p >= 2.0)) throw ConfigError(std::string(who) + ": p must be >= 2 or inf");
}

inline double density_norm(const SystemMatrix& sys, const SubmanifoldGrid& grid, double p) {
  return lp_norm(density(sys), grid, 0.5 * p);
}

inline std::string rank_tag(int i) { return "draw" + std::to_string(i); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Upper-bound ratio scaling

enum class SystemFamily { zonal, eigenspace, window_low, window_high, random };

inline std::string to_string(SystemFamily f) {
  switch (f) {
    case SystemFamily::zonal: return "zonal";
    case SystemFamily::eigenspace: return "eigenspace";
    case SystemFamily::window_low: return "window_low";
    case SystemFamily::window_high: return "window_high";
    case SystemFamily::random: return "random";
  }
  return "unknown";
}

inline SystemFamily parse_family(const std::string& s) {
  for (auto f : {SystemFamily::zonal, SystemFamily::eigenspace, SystemFamily::window_low, SystemFamily::window_high,
                 SystemFamily::random})
    if (to_string(f) == s) return f;
  throw ConfigError("unknown system family '" + s + "' (zonal, eigenspace, window_low, window_high, random)");
}

inline WeightProfile parse_profile(const std::string& s) {
  for (auto w : {WeightProfile::ones, WeightProfile::spike, WeightProfile::geometric})
    if (to_string(w) == s) return w;
  throw ConfigError("unknown weight profile '" + s + "' (ones, spike, geometric)");
}

struct ScalingParams {
  int d = 2;
  int k = 1;
  double p = 4.0;
  std::optional<double> alpha;  // defaults to the upper end of the admissible range
  SystemFamily family = SystemFamily::window_low;
  std::vector<WeightProfile> profiles{WeightProfile::ones};
  std::vector<int> degrees;  // empty: default_degrees(d)
  double tau = 0.5;
  int draws = 20;
  std::uint64_t seed = 1;
  int nodes_per_degree = 16;
  double slope_tol = 0.10;
  RefinementPolicy refinement;
};

/// R(lam) = ||sum_j t_j |f_j|^2||_{L^{p/2}(Sigma)} / (Lambda(k,d,p) ||t||_alpha), fitted against lam.
/// Sigma is the quarter meridian for the low window and a great circle otherwise.
inline ExperimentReport ratio_upper_scaling(const ScalingParams& prm) {
  detail::check_p(prm.p, "scaling");
  if (prm.family == SystemFamily::zonal) {
    if (prm.d < 2 || prm.k != 1) throw ConfigError("scaling: the zonal family is restricted to a great circle (k = 1)");
  } else if (prm.d != 2 || prm.k != 1) {
    throw ConfigError("scaling: family " + to_string(prm.family) + " lives on S^2 with a curve (d = 2, k = 1)");
  }
  if (prm.profiles.empty()) throw ConfigError("scaling: at least one weight profile is required");
  if (prm.family == SystemFamily::random && prm.draws < 1) throw ConfigError("scaling: draws must be >= 1");
  if (prm.nodes_per_degree < 4) throw ConfigError("scaling: resolution must be >= 4 nodes per degree");
  const std::vector<int> degrees = prm.degrees.empty() ? default_degrees(prm.d) : prm.degrees;
  detail::check_fit_degrees(degrees, "scaling");

  const auto q = query(prm.k, prm.d, prm.p);
  const double alpha = prm.alpha ? *prm.alpha : admissible_alpha(q).hi.to_double();
  if (!(alpha >= 1.0)) throw ConfigError("scaling: alpha must be >= 1");

  ExperimentReport rep;
  rep.experiment = "scaling";
  rep.tag = to_string(prm.family);
  rep.d = prm.d;
  rep.k = prm.k;
  rep.p = prm.p;
  rep.targets.push_back({"delta", to_double(bgt_delta(q).value)});
  rep.targets.push_back({"alpha", alpha});

  const int n_profiles = static_cast<int>(prm.profiles.size());
  const int n_draws = prm.family == SystemFamily::random ? prm.draws : 1;
  const bool zonal = prm.family == SystemFamily::zonal;
  // values per degree: R for each (draw, profile), then ||f||_{L^p} for the zonal family
  std::vector<std::vector<double>> per_degree;
  std::vector<double> lams;
  std::vector<int> ranks_seen;
  double eigenspace_dev = 0.0;
  detail::RefinementLog rlog;

  for (int l : degrees) {
    const double lam = HarmonicDegree{l, prm.d}.lam();
    lams.push_back(lam);
    const double Lambda = lambda_power(q, lam);
    auto compute = [&](int n) {
      const SubmanifoldGrid grid = prm.family == SystemFamily::window_low ? meridian_arc_grid(n) : equator_grid(prm.d, 1, n);
      std::vector<double> out;
      auto push_ratios = [&](SystemMatrix& sys) {
        for (WeightProfile w : prm.profiles) {
          sys.t = weight_profile(w, static_cast<Eigen::Index>(sys.count()));
          out.push_back(detail::density_norm(sys, grid, prm.p) / (Lambda * lalpha_norm(sys.t, alpha)));
        }
      };
      switch (prm.family) {
        case SystemFamily::zonal: {
          SystemMatrix sys = zonal_single_system(prm.d, l, grid.nodes().front(), grid);
          push_ratios(sys);
          const Eigen::VectorXd a = sys.values.row(0).transpose().cwiseAbs();
          out.push_back(lp_norm(a, grid, prm.p));
          break;
        }
        case SystemFamily::eigenspace: {
          SystemMatrix sys = eigenspace_system(l, grid);
          const double expect = (2.0 * l + 1.0) / (4.0 * std::numbers::pi);
          const Eigen::VectorXd rho = density(sys);
          for (Eigen::Index i = 0; i < rho.size(); ++i)
            eigenspace_dev = std::max(eigenspace_dev, std::fabs(rho(i) - expect) / expect);
          push_ratios(sys);
          break;
        }
        case SystemFamily::window_low: {
          SystemMatrix sys = window_system_low(l, window_width(l, prm.tau), grid);
          push_ratios(sys);
          break;
        }
        case SystemFamily::window_high: {
          SystemMatrix sys = window_system_high(l, window_width(l, prm.tau), grid);
          push_ratios(sys);
          break;
        }
        case SystemFamily::random: {
          const Eigen::MatrixXd basis = harmonic_basis_matrix(l, grid);
          const double dim = 2.0 * l + 1.0;
          for (int i = 0; i < n_draws; ++i) {
            const double s = n_draws == 1 ? 0.0 : static_cast<double>(i) / (n_draws - 1);
            const int r = std::clamp(static_cast<int>(std::lround(std::pow(dim, s))), 1, 2 * l + 1);
            SystemMatrix sys = random_orthonormal_system(l, r, detail::draw_seed(prm.seed, l, i), basis);
            push_ratios(sys);
          }
          break;
        }
      }
      return out;
    };
    Refined res = refine(compute, prm.nodes_per_degree * l, prm.refinement);
    rlog.add(res, l);
    per_degree.push_back(std::move(res.values));
    rep.rows.push_back({l, lam, "resolution", static_cast<double>(res.resolution)});
    rep.rows.push_back({l, lam, "Lambda", Lambda});
  }

  for (int i = 0; i < n_draws; ++i) {
    for (int w = 0; w < n_profiles; ++w) {
      std::vector<double> y;
      for (const auto& v : per_degree) y.push_back(v[static_cast<std::size_t>(i * n_profiles + w)]);
      std::string name = "R:" + to_string(prm.profiles[static_cast<std::size_t>(w)]);
      if (prm.family == SystemFamily::random) name += ":" + detail::rank_tag(i);
      rep.add_fit(name, degrees, lams, y);
    }
  }
  const std::string cite = "uniform constant in the orthonormal-system density bound on Sigma";
  for (int w = 0; w < n_profiles; ++w) {
    const std::string pname = to_string(prm.profiles[static_cast<std::size_t>(w)]);
    if (prm.family == SystemFamily::random) {
      double worst = -kInfinity;
      for (int i = 0; i < n_draws; ++i) worst = std::max(worst, rep.fit("R:" + pname + ":" + detail::rank_tag(i)).slope);
      rep.at_most("max_ratio_slope:" + pname, worst, 0.0, prm.slope_tol, cite);
    } else {
      rep.at_most("ratio_slope:" + pname, rep.fit("R:" + pname).slope, 0.0, prm.slope_tol, cite);
    }
  }
  if (zonal) {
    std::vector<double> y;
    for (const auto& v : per_degree) y.push_back(v.back());
    rep.add_fit("norm_f", degrees, lams, y);
    const double delta = to_double(bgt_delta(q).value);
    if (prm.d == 2 && prm.p >= 4.0)
      rep.within("zonal_lp_slope", rep.fit("norm_f").slope, delta, 0.05,
                 "single zonal eigenfunction saturates the Lp restriction exponent on a great circle");
  }
  if (prm.family == SystemFamily::eigenspace)
    rep.below("eigenspace_density_deviation", eigenspace_dev, 1e-8,
              "full eigenspace density equals (2l+1)/(4 pi) at every point");
  rlog.report(rep, prm.refinement);
  return rep;
}

// ---------------------------------------------------------------------------
// Saturation of the curve bounds on S^2 by m-windows

struct SharpnessS2Params {
  double p = 8.0;
  double tau = 0.5;
  std::vector<int> degrees;  // empty: 32..256
  double tol = 0.05;
  int nodes_per_degree = 16;
  RefinementPolicy refinement;
};

/// Low window on the quarter meridian and high window on the equator, fitted against k.
inline ExperimentReport sharpness_s2(const SharpnessS2Params& prm) {
  detail::check_p(prm.p, "sharpness-s2");
  if (!(prm.tau > 0.0 && prm.tau < 1.0)) throw ConfigError("sharpness-s2: tau must lie in (0,1)");
  const std::vector<int> degrees = prm.degrees.empty() ? degree_grid(32, 256, 7) : prm.degrees;
  detail::check_fit_degrees(degrees, "sharpness-s2");
  for (int l : degrees)
    if (4 * window_width(l, prm.tau) > l)
      throw ConfigError("sharpness-s2: degree " + std::to_string(l) + " is too small for tau = " + format_exponent(prm.tau) +
                        " (need 2 t_k <= k/2)");

  ExperimentReport rep;
  rep.experiment = "sharpness-s2";
  rep.tag = "tau" + format_exponent(prm.tau);
  rep.d = 2;
  rep.k = 1;
  rep.p = prm.p;
  const double r = reciprocal_exponent(prm.p);
  const double low_target = (1.0 - 2.0 * r) + prm.tau * 2.0 * r;
  const double high_target = 0.5 * (1.0 + prm.tau);
  rep.targets.push_back({"low_window_slope", low_target});
  rep.targets.push_back({"high_window_slope", high_target});

  std::vector<double> ks, low, high;
  detail::RefinementLog rlog;
  for (int l : degrees) {
    const int tk = window_width(l, prm.tau);
    auto compute = [&](int n) {
      const SubmanifoldGrid arc = meridian_arc_grid(n);
      const SubmanifoldGrid eq = equator_grid(2, 1, n);
      return std::vector<double>{detail::density_norm(window_system_low(l, tk, arc), arc, prm.p),
                                 detail::density_norm(window_system_high(l, tk, eq), eq, prm.p)};
    };
    const Refined res = refine(compute, prm.nodes_per_degree * l, prm.refinement);
    rlog.add(res, l);
    ks.push_back(l);
    low.push_back(res.values[0]);
    high.push_back(res.values[1]);
    const double lam = HarmonicDegree{l, 2}.lam();
    rep.rows.push_back({l, lam, "t_k", static_cast<double>(tk)});
    rep.rows.push_back({l, lam, "resolution", static_cast<double>(res.resolution)});
  }
  rep.add_fit("low_window", degrees, ks, low);
  rep.add_fit("high_window", degrees, ks, high);
  rep.at_least("low_window_slope", rep.fit("low_window").slope, low_target, prm.tol,
               "m-window [t_k, 2t_k] on the meridian grows like k^(1-2/p) t_k^(2/p)");
  rep.at_least("high_window_slope", rep.fit("high_window").slope, high_target, prm.tol,
               "m-window [k-2t_k, k-t_k] on the equator grows like k^(1/2) t_k^(1/2)");
  rlog.report(rep, prm.refinement);
  return rep;
}

// ---------------------------------------------------------------------------
// Saturation on S^d by Gram-whitened zonal packets

struct SharpnessZonalParams {
  int d = 3;
  int k = 1;
  double p = 4.0;
  double beta = 0.8;
  double C = 8.0;
  std::vector<int> degrees;  // empty: default_degrees(d)
  double tol = 0.10;
  int nodes_per_degree = 0;  // 0: 16 on curves, 8 on surfaces
  RefinementPolicy refinement;
};

inline void validate(const SharpnessZonalParams& prm) {
  detail::check_p(prm.p, "sharpness-zonal");
  if (prm.d < 3) throw ConfigError("sharpness-zonal: d must be >= 3");
  if (prm.k < 1 || prm.k > std::min(2, prm.d - 1)) throw ConfigError("sharpness-zonal: k must be 1 or 2 and at most d-1");
  if (!(prm.beta > 0.0 && prm.beta < 1.0)) throw ConfigError("sharpness-zonal: beta must lie in (0,1)");
  const double thr = to_double(beta_threshold<Rational>(prm.k, prm.d));
  if (prm.beta < thr)
    throw ConfigError("sharpness-zonal: beta = " + format_exponent(prm.beta) + " is below beta_threshold(k=" +
                      std::to_string(prm.k) + ", d=" + std::to_string(prm.d) + ") = " + format_exponent(thr));
  if (!(prm.C >= 1.0)) throw ConfigError("sharpness-zonal: C must be >= 1");
}

/// Lower bound (d-1) - 2k/p + (2/p) k (1-beta) for the packet density.
inline double zonal_lower_slope(int d, int k, double p, double beta) {
  const double r = reciprocal_exponent(p);
  return (d - 1) - 2.0 * k * r + 2.0 * r * k * (1.0 - beta);
}

inline ExperimentReport sharpness_zonal(const SharpnessZonalParams& prm) {
  validate(prm);
  const std::vector<int> degrees = prm.degrees.empty() ? default_degrees(prm.d) : prm.degrees;
  detail::check_fit_degrees(degrees, "sharpness-zonal");
  const int npd = prm.nodes_per_degree > 0 ? prm.nodes_per_degree : (prm.k == 1 ? 16 : 8);

  ExperimentReport rep;
  rep.experiment = "sharpness-zonal";
  rep.tag = "beta" + format_exponent(prm.beta) + "_C" + format_exponent(prm.C);
  rep.d = prm.d;
  rep.k = prm.k;
  rep.p = prm.p;
  const double target = zonal_lower_slope(prm.d, prm.k, prm.p, prm.beta);
  const double spike_target = (prm.d - 1) - 2.0 * prm.k * reciprocal_exponent(prm.p);
  rep.targets.push_back({"ones_slope", target});
  rep.targets.push_back({"spike_slope", spike_target});
  rep.targets.push_back({"beta_threshold", to_double(beta_threshold<Rational>(prm.k, prm.d))});

  std::vector<double> lams, ones, spike;
  double worst_whitening = 0.0, worst_delta = 0.0, worst_gersh = -kInfinity;
  bool gersh_applicable = false;
  detail::RefinementLog rlog;
  for (int l : degrees) {
    const double lam = HarmonicDegree{l, prm.d}.lam();
    const SubmanifoldGrid packing_grid = equator_grid(prm.d, prm.k, npd * l);
    const SeparatedSet pts = separated_points(packing_grid, lam, prm.beta, prm.C);
    GramData gd;
    try {
      gd = zonal_gram(prm.d, l, pts);
    } catch (const NumericalError& e) {
      throw NumericalError("sharpness-zonal: degree " + std::to_string(l) +
                           ", Gram whitening: beta or C too small for this l range (" + e.what() + ")");
    }
    const auto J = static_cast<Eigen::Index>(pts.size());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(J, J);
    const double whitening = (gd.A * gd.G * gd.A.transpose() - I).cwiseAbs().maxCoeff();
    const double a_dev = (gd.A - I).cwiseAbs().maxCoeff();
    worst_whitening = std::max(worst_whitening, whitening);
    worst_delta = std::max(worst_delta, gd.delta_bound);
    if (gd.delta_bound < 0.5) {
      gersh_applicable = true;
      worst_gersh = std::max(worst_gersh, a_dev - gd.delta_bound);
    }

    const ZonalKernel zk = ZonalKernel::make(prm.d, l);
    // density at the packet centres, where the sup over Sigma is attained
    auto centre_sup = [&](const Eigen::VectorXd& t) {
      double best = 0.0;
      for (Eigen::Index x = 0; x < J; ++x) {
        Eigen::VectorXd z(J);
        for (Eigen::Index j = 0; j < J; ++j)
          z(j) = zonal_normalized(zk, pts.points[static_cast<std::size_t>(j)].dot(pts.points[static_cast<std::size_t>(x)]));
        const Eigen::VectorXd f = gd.A * z;
        best = std::max(best, t.dot(f.cwiseAbs2()));
      }
      return best;
    };
    auto compute = [&](int n) {
      const SubmanifoldGrid grid = equator_grid(prm.d, prm.k, n);
      SystemMatrix sys = zonal_packet_system(gd, prm.d, l, pts, grid);
      std::vector<double> out;
      for (WeightProfile w : {WeightProfile::ones, WeightProfile::spike}) {
        sys.t = weight_profile(w, J);
        double v = detail::density_norm(sys, grid, prm.p);
        if (std::isinf(prm.p)) v = std::max(v, centre_sup(sys.t));
        out.push_back(v);
      }
      return out;
    };
    const Refined res = refine(compute, npd * l, prm.refinement);
    rlog.add(res, l);
    lams.push_back(lam);
    ones.push_back(res.values[0]);
    spike.push_back(res.values[1]);
    rep.rows.push_back({l, lam, "J", static_cast<double>(J)});
    rep.rows.push_back({l, lam, "separation", pts.separation});
    rep.rows.push_back({l, lam, "delta_bound", gd.delta_bound});
    rep.rows.push_back({l, lam, "max_abs_A_minus_I", a_dev});
    rep.rows.push_back({l, lam, "whitening_residual", whitening});
    rep.rows.push_back({l, lam, "resolution", static_cast<double>(res.resolution)});
  }
  rep.add_fit("ones", degrees, lams, ones);
  rep.add_fit("spike", degrees, lams, spike);
  rep.at_most("whitening_residual", worst_whitening, 0.0, 1e-10, "A G A^T = I for the whitened packets");
  rep.below("realized_delta", worst_delta, 0.5, "off-diagonal Gram row sums stay below 1/2");
  if (gersh_applicable)
    rep.at_most("gerschgorin_control", worst_gersh, 0.0, 1e-12, "|A_ij - delta_ij| <= realized delta");
  rep.at_least("ones_slope", rep.fit("ones").slope, target, prm.tol,
               "packet density grows like lam^((d-1)-2k/p) |J|^(2/p) with |J| ~ lam^(k(1-beta))");
  rep.within("spike_slope", rep.fit("spike").slope, spike_target, prm.tol,
             "one whitened packet grows like lam^((d-1)-2k/p)");
  rlog.report(rep, prm.refinement);
  return rep;
}

// ---------------------------------------------------------------------------
// Zonal kernel decay

struct KernelDecayParams {
  int d = 2;
  std::vector<int> degrees;  // empty: 32..512 on S^2, 16..128 otherwise
  int samples_per_degree = 16;
  double ratio_tol = 4.0;
  RefinementPolicy refinement;
};

/// E(l) = max_{2/lam <= theta <= pi/2} |Z^p(theta)| theta^((d-1)/2),
/// N(l) = max_{theta <= 1/lam} |Z^p(theta)| lam^(-(d-1)/2).
inline ExperimentReport kernel_decay_check(const KernelDecayParams& prm) {
  if (prm.d < 2 || prm.d > 4) throw ConfigError("kernel-decay: d must be 2, 3 or 4");
  if (prm.samples_per_degree < 2) throw ConfigError("kernel-decay: resolution must be >= 2");
  const std::vector<int> degrees =
      prm.degrees.empty() ? (prm.d == 2 ? degree_grid(32, 512, 9) : degree_grid(16, 128, 7)) : prm.degrees;
  detail::check_fit_degrees(degrees, "kernel-decay");

  ExperimentReport rep;
  rep.experiment = "kernel-decay";
  rep.tag = "envelope";
  rep.d = prm.d;
  rep.k = 1;
  rep.p = kInfinity;
  const double e = 0.5 * (prm.d - 1);
  std::vector<double> E, N, lams;
  detail::RefinementLog rlog;
  for (int l : degrees) {
    const ZonalKernel zk = ZonalKernel::make(prm.d, l);
    const double lam = zk.lam();
    auto compute = [&](int n) {
      const double a = 2.0 / lam, b = 0.5 * std::numbers::pi;
      double env = 0.0, near = 0.0;
      for (int i = 0; i < n; ++i) {
        const double th = a + (b - a) * i / (n - 1);
        env = std::max(env, std::fabs(zonal_normalized(zk, std::cos(th))) * std::pow(th, e));
      }
      const int m = std::max(8, n / l);
      for (int i = 0; i < m; ++i) {
        const double th = (1.0 / lam) * i / (m - 1);
        near = std::max(near, std::fabs(zonal_normalized(zk, std::cos(th))) * std::pow(lam, -e));
      }
      return std::vector<double>{env, near, std::fabs(zonal_normalized(zk, 0.0))};
    };
    const Refined res = refine(compute, prm.samples_per_degree * l, prm.refinement);
    rlog.add(res, l);
    lams.push_back(lam);
    E.push_back(res.values[0]);
    N.push_back(res.values[1]);
    rep.rows.push_back({l, lam, "E", res.values[0]});
    rep.rows.push_back({l, lam, "N", res.values[1]});
    rep.rows.push_back({l, lam, "abs_Z_at_half_pi", res.values[2]});
  }
  auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
  };
  rep.add_fit("E", degrees, lams, E);
  rep.add_fit("N", degrees, lams, N);
  rep.at_most("E_spread", spread(E), prm.ratio_tol, 0.0,
              "normalized zonal function decays like dist^(-(d-1)/2) away from its pole");
  rep.at_most("N_spread", spread(N), prm.ratio_tol, 0.0, "normalized zonal function is O(lam^((d-1)/2)) near its pole");
  rlog.report(rep, prm.refinement);
  return rep;
}

// ---------------------------------------------------------------------------
// Pointwise Weyl law on S^2

struct WeylParams {
  double p = 4.0;
  std::vector<int> degrees;                  // empty: default_degrees(2)
  std::vector<int> pointwise_degrees{32, 128};
  int samples = 100;
  std::uint64_t seed = 1;
  int nodes_per_degree = 16;
  double pointwise_tol = 1e-8;
  double slope_tol = 0.02;
  RefinementPolicy refinement;
};

inline ExperimentReport weyl_check(const WeylParams& prm) {
  detail::check_p(prm.p, "weyl");
  if (prm.samples < 0) throw ConfigError("weyl: samples must be >= 0");
  const std::vector<int> degrees = prm.degrees.empty() ? default_degrees(2) : prm.degrees;
  detail::check_fit_degrees(degrees, "weyl");

  ExperimentReport rep;
  rep.experiment = "weyl";
  rep.tag = "eigenspace";
  rep.d = 2;
  rep.k = 1;
  rep.p = prm.p;
  rep.targets.push_back({"slope", 1.0});

  if (prm.samples > 0) {
    double worst = 0.0;
    for (int l : prm.pointwise_degrees) {
      std::mt19937_64 rng(detail::draw_seed(prm.seed, l, 0, 7));
      std::normal_distribution<double> normal;
      const double expect = (2.0 * l + 1.0) / (4.0 * std::numbers::pi);
      double deg_worst = 0.0;
      for (int s = 0; s < prm.samples; ++s) {
        const double a = normal(rng), b = normal(rng), c = normal(rng);
        const auto [theta, phi] = spherical_angles(SpherePoint::from(Eigen::Vector3d(a, b, c)));
        double sum = 0.0;
        for (int m = -l; m <= l; ++m) {
          const double y = sph_harm_real(l, m, theta, phi);
          sum += y * y;
        }
        deg_worst = std::max(deg_worst, std::fabs(sum - expect) / expect);
      }
      worst = std::max(worst, deg_worst);
      rep.rows.push_back({l, HarmonicDegree{l, 2}.lam(), "pointwise_rel_deviation", deg_worst});
    }
    rep.below("pointwise_weyl", worst, prm.pointwise_tol, "sum_m |Y_l^m(x)|^2 = (2l+1)/(4 pi) at every x");
  }

  std::vector<double> lams, norms;
  detail::RefinementLog rlog;
  for (int l : degrees) {
    auto compute = [&](int n) {
      const SubmanifoldGrid grid = equator_grid(2, 1, n);
      return std::vector<double>{detail::density_norm(eigenspace_system(l, grid), grid, prm.p)};
    };
    const Refined res = refine(compute, prm.nodes_per_degree * l, prm.refinement);
    rlog.add(res, l);
    lams.push_back(HarmonicDegree{l, 2}.lam());
    norms.push_back(res.values[0]);
  }
  rep.add_fit("density_norm", degrees, lams, norms);
  rep.within("density_slope", rep.fit("density_norm").slope, 1.0, prm.slope_tol,
             "full eigenspace density on a curve grows like lam^(d-1)");
  rlog.report(rep, prm.refinement);
  return rep;
}

// ---------------------------------------------------------------------------
// Trace-duality sampling on a great circle of S^2

enum class WeightFunction { trig_polynomial, bump, constant, one };

struct DualityParams {
  std::vector<int> degrees{32, 64};
  std::vector<double> p_values{4.0};
  std::optional<double> alpha;  // overrides alpha(1,2,p) for every p
  int draws = 100;
  std::uint64_t seed = 1;
  int nodes_per_degree = 8;
  double rel_tol = 1e-8;
  int trig_degree = 6;
  double bump_kappa = 40.0;
  RefinementPolicy refinement;
};

namespace detail {

struct DualityDraw {
  int rank = 1;
  std::uint64_t system_seed = 0;
  Eigen::VectorXd t;
  WeightFunction wf = WeightFunction::one;
  std::vector<std::complex<double>> coeff;  // trig coefficients m = -D..D, or the constant
  double centre = 0.0;                      // bump centre
  std::string describe() const {
    switch (wf) {
      case WeightFunction::trig_polynomial: return "trig";
      case WeightFunction::bump: return "bump";
      case WeightFunction::constant: return "constant";
      case WeightFunction::one: return "one";
    }
    return "?";
  }
};

inline Eigen::VectorXcd evaluate_weight(const DualityDraw& dr, const SubmanifoldGrid& grid, double kappa) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXcd W(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = grid.params()[static_cast<std::size_t>(i)][0];
    switch (dr.wf) {
      case WeightFunction::one: W(i) = 1.0; break;
      case WeightFunction::constant: W(i) = dr.coeff[0]; break;
      case WeightFunction::bump: W(i) = std::exp(kappa * (std::cos(phi - dr.centre) - 1.0)); break;
      case WeightFunction::trig_polynomial: {
        const int D = static_cast<int>(dr.coeff.size() / 2);
        std::complex<double> s = 0.0;
        for (int m = -D; m <= D; ++m) s += dr.coeff[static_cast<std::size_t>(m + D)] * std::polar(1.0, m * phi);
        W(i) = s;
        break;
      }
    }
  }
  return W;
}

inline DualityDraw make_duality_draw(int l, int i, const DualityParams& prm) {
  std::mt19937_64 rng(draw_seed(prm.seed, l, i, 1));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  DualityDraw dr;
  if (i == 0) {  // single function, spike, W = 1
    dr.rank = 1;
    dr.system_seed = draw_seed(prm.seed, l, i, 2);
    dr.t = Eigen::VectorXd::Ones(1);
    return dr;
  }
  dr.rank = std::uniform_int_distribution<int>(1, 2 * l + 1)(rng);
  dr.system_seed = draw_seed(prm.seed, l, i, 2);
  const auto r = static_cast<Eigen::Index>(dr.rank);
  if (i == 1) {
    dr.t = Eigen::VectorXd::Zero(r);
  } else {
    switch (i % 4) {
      case 0: dr.t = weight_profile(WeightProfile::ones, r); break;
      case 1: dr.t = weight_profile(WeightProfile::spike, r); break;
      case 2: dr.t = weight_profile(WeightProfile::geometric, r, 0.1 + 0.8 * unif(rng)); break;
      default:
        dr.t.resize(r);
        for (Eigen::Index j = 0; j < r; ++j) dr.t(j) = unif(rng);
    }
  }
  switch (i % 3) {
    case 0: {
      dr.wf = WeightFunction::trig_polynomial;
      const double s = 1.0 / std::sqrt(2.0 * (2 * prm.trig_degree + 1));
      for (int m = -prm.trig_degree; m <= prm.trig_degree; ++m) dr.coeff.emplace_back(s * normal(rng), s * normal(rng));
      break;
    }
    case 1:
      dr.wf = WeightFunction::bump;
      dr.centre = 2.0 * std::numbers::pi * unif(rng);
      break;
    default:
      dr.wf = WeightFunction::constant;
      dr.coeff.emplace_back(normal(rng), normal(rng));
  }
  return dr;
}

}  // namespace detail

/// Checks sum_j t_j <|W|^2 f_j, f_j>_Sigma <= ||t||_alpha ||W Pi W^*||_{S^alpha'} for random
/// orthonormal systems, coefficient vectors and weights on the equator of S^2.
inline ExperimentReport duality_sampling(const DualityParams& prm) {
  if (prm.p_values.empty()) throw ConfigError("duality: at least one p is required");
  for (double p : prm.p_values) detail::check_p(p, "duality");
  if (prm.alpha && !(*prm.alpha >= 1.0)) throw ConfigError("duality: alpha must be >= 1");
  if (prm.draws < 1) throw ConfigError("duality: draws must be >= 1");
  if (prm.degrees.empty()) throw ConfigError("duality: at least one degree is required");
  for (int l : prm.degrees)
    if (l < 1) throw ConfigError("duality: degrees must be >= 1");

  ExperimentReport rep;
  rep.experiment = "duality";
  rep.tag = "draws" + std::to_string(prm.draws);
  rep.d = 2;
  rep.k = 1;
  rep.p = prm.p_values.size() == 1 ? prm.p_values.front() : kInfinity;
  if (prm.p_values.size() > 1) rep.tag += "_multi";

  const auto np = prm.p_values.size();
  std::vector<double> alphas;
  for (double p : prm.p_values) {
    const double a = prm.alpha ? *prm.alpha : theorem_alpha_h(query(1, 2, p)).alpha.to_double();
    alphas.push_back(a);
    rep.targets.push_back({"alpha:p=" + format_exponent(p), a});
  }

  std::vector<int> violations(np, 0);
  std::vector<double> max_slack(np, 0.0);
  double trace_residual = 0.0;
  detail::RefinementLog rlog;
  for (int l : prm.degrees) {
    const double lam = HarmonicDegree{l, 2}.lam();
    std::vector<detail::DualityDraw> draws;
    for (int i = 0; i < prm.draws; ++i) draws.push_back(detail::make_duality_draw(l, i, prm));
    // per draw: lhs, trace(M), then Schatten alpha' norm for each p
    const std::size_t stride = 2 + np;
    auto compute = [&](int n) {
      const SubmanifoldGrid grid = equator_grid(2, 1, n);
      const Eigen::MatrixXd basis = harmonic_basis_matrix(l, grid);
      const Eigen::MatrixXd zonal = zonal_matrix(2, l, grid);
      std::vector<double> out;
      out.reserve(draws.size() * stride);
      for (const auto& dr : draws) {
        SystemMatrix sys = random_orthonormal_system(l, dr.rank, dr.system_seed, basis);
        sys.t = dr.t;
        const Eigen::VectorXcd W = detail::evaluate_weight(dr, grid, prm.bump_kappa);
        const KernelOperator op = assemble_projector_operator(zonal, 2, l, grid, W, dr.describe());
        const Eigen::VectorXd sv = singular_values(op);
        out.push_back(sys.t.dot(restricted_mass(sys, grid, W)));
        out.push_back(op.M.trace().real());
        for (std::size_t j = 0; j < np; ++j) out.push_back(schatten_from_singular_values(sv, conjugate_exponent(alphas[j])));
      }
      return out;
    };
    const Refined res = refine(compute, prm.nodes_per_degree * l, prm.refinement);
    rlog.add(res, l);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double* v = res.values.data() + i * stride;
      const double lhs = v[0];
      for (std::size_t j = 0; j < np; ++j) {
        DualitySides s;
        s.lhs = lhs;
        s.alpha = alphas[j];
        s.alpha_conjugate = conjugate_exponent(alphas[j]);
        s.t_norm = lalpha_norm(draws[i].t, alphas[j]);
        s.schatten = v[2 + j];
        s.rhs = s.t_norm * s.schatten;
        if (s.violated(prm.rel_tol)) ++violations[j];
        max_slack[j] = std::max(max_slack[j], s.slack());
        if (s.alpha_conjugate == 1.0) trace_residual = std::max(trace_residual, relative_change(s.schatten, v[1]));
        const std::string suffix = ":p=" + format_exponent(prm.p_values[j]) + ":" + detail::rank_tag(static_cast<int>(i));
        rep.rows.push_back({l, lam, "lhs" + suffix, s.lhs});
        rep.rows.push_back({l, lam, "rhs" + suffix, s.rhs});
      }
    }
    rep.rows.push_back({l, lam, "resolution", static_cast<double>(res.resolution)});
  }
  for (std::size_t j = 0; j < np; ++j) {
    const std::string ptag = format_exponent(prm.p_values[j]);
    rep.at_most("violations:p=" + ptag, violations[j], 0.0, 0.0,
                "trace duality between orthonormal-system and Schatten bounds");
    rep.rows.push_back({0, 0.0, "max_slack:p=" + ptag, max_slack[j]});
  }
  if (std::any_of(alphas.begin(), alphas.end(), [](double a) { return std::isinf(a); }))
    rep.below("trace_identity", trace_residual, 1e-9, "S^1 norm of a positive operator equals its trace");
  rlog.report(rep, prm.refinement);
  return rep;
}

}  // namespace eigrestrict
