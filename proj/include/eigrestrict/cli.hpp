/**
 * @file cli.hpp
 * @brief Run configuration: `key = value` parsing, validation, echo, and dispatch
 *        of one experiment per run.
 *
 * Config files hold one `key = value` pair per line; `#` starts a comment.
 * Keys: experiment, d, k, p, alpha, beta, tau, C, lmin, lmax, count, spacing,
 * resolution, seed, out, family, profile, samples, draws, p_grid.
 * Exponents accept `inf`; p_grid entries may be rationals such as `8/3`.
 */
#pragma once

#include "eigrestrict/errors.hpp"
#include "eigrestrict/experiments.hpp"
#include "eigrestrict/exponents.hpp"
#include "eigrestrict/io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace eigrestrict {

inline constexpr std::array<const char*, 7> kExperiments{"exponents",   "scaling", "sharpness-s2", "sharpness-zonal",
                                                         "duality", "kernel-decay", "weyl"};

inline constexpr std::array<const char*, 20> kConfigKeys{
    "experiment", "d",    "k",          "p",    "alpha",  "beta",   "tau",     "C",     "lmin",    "lmax",
    "count",      "spacing", "resolution", "seed", "out", "family", "profile", "samples", "draws", "p_grid"};

struct RunConfig {
  std::string experiment;
  int d = 2;
  int k = 1;
  double p = 4.0;
  std::optional<double> alpha;
  double beta = 0.8;
  double tau = 0.5;
  double C = 8.0;
  int lmin = 0;  // 0: the experiment's default degree grid
  int lmax = 0;
  int count = 0;
  std::string spacing = "geometric";
  int resolution = 0;  // nodes per degree; 0: experiment default
  std::uint64_t seed = 1;
  std::string out;
  std::string family = "window_low";
  std::string profile = "ones,spike,geometric";
  int samples = 100;
  int draws = 0;  // 0: experiment default
  std::string p_grid;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) throw 0;
    return static_cast<int>(x);
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

inline double to_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (...) {
    throw ConfigError(key + ": expected a number or inf, got '" + v + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace detail

/// Assigns one field from its textual value. Throws ConfigError on an unknown key or bad value.
inline void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "experiment") cfg.experiment = value;
  else if (key == "d") cfg.d = to_int(key, value);
  else if (key == "k") cfg.k = to_int(key, value);
  else if (key == "p") cfg.p = to_real(key, value);
  else if (key == "alpha") {
    if (value.empty() || value == "auto") cfg.alpha.reset();
    else cfg.alpha = to_real(key, value);
  } else if (key == "beta") cfg.beta = to_real(key, value);
  else if (key == "tau") cfg.tau = to_real(key, value);
  else if (key == "C") cfg.C = to_real(key, value);
  else if (key == "lmin") cfg.lmin = to_int(key, value);
  else if (key == "lmax") cfg.lmax = to_int(key, value);
  else if (key == "count") cfg.count = to_int(key, value);
  else if (key == "spacing") cfg.spacing = value;
  else if (key == "resolution") cfg.resolution = to_int(key, value);
  else if (key == "seed") {
    try {
      std::size_t pos = 0;
      if (!value.empty() && value[0] == '-') throw 0;
      cfg.seed = std::stoull(value, &pos);
      if (pos != value.size()) throw 0;
    } catch (...) {
      throw ConfigError("seed: expected a nonnegative integer, got '" + value + "'");
    }
  } else if (key == "out") cfg.out = value;
  else if (key == "family") cfg.family = value;
  else if (key == "profile") cfg.profile = value;
  else if (key == "samples") cfg.samples = to_int(key, value);
  else if (key == "draws") cfg.draws = to_int(key, value);
  else if (key == "p_grid") cfg.p_grid = value;
  else throw ConfigError("unknown key '" + key + "'");
}

/// Parses a `key = value` document. Diagnostics carry the line number.
inline RunConfig parse_config(std::istream& is, RunConfig cfg = {}) {
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing key");
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first set on line " +
                        std::to_string(it->second) + ")");
    seen[key] = lineno;
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

inline RunConfig parse_config(const std::string& text, RunConfig cfg = {}) {
  std::istringstream is(text);
  return parse_config(is, std::move(cfg));
}

/// Serializes every field; parse_config(echo_config(c)) == c.
inline std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  os << "experiment = " << c.experiment << '\n'
     << "d = " << c.d << '\n'
     << "k = " << c.k << '\n'
     << "p = " << fmt17(c.p) << '\n';
  if (c.alpha) os << "alpha = " << fmt17(*c.alpha) << '\n';
  os << "beta = " << fmt17(c.beta) << '\n'
     << "tau = " << fmt17(c.tau) << '\n'
     << "C = " << fmt17(c.C) << '\n'
     << "lmin = " << c.lmin << '\n'
     << "lmax = " << c.lmax << '\n'
     << "count = " << c.count << '\n'
     << "spacing = " << c.spacing << '\n'
     << "resolution = " << c.resolution << '\n'
     << "seed = " << c.seed << '\n'
     << "out = " << c.out << '\n'
     << "family = " << c.family << '\n'
     << "profile = " << c.profile << '\n'
     << "samples = " << c.samples << '\n'
     << "draws = " << c.draws << '\n'
     << "p_grid = " << c.p_grid << '\n';
  return os.str();
}

inline std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(echo_config(c));
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    out.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return out;
}

/// Parses a p grid: `a:b`, `a:b:step`, or a comma list; entries are integers, rationals `n/m`, or `inf`.
inline std::vector<ExtendedReal<Rational>> parse_p_grid(const std::string& spec) {
  auto parse_one = [&](const std::string& s) -> ExtendedReal<Rational> {
    if (s == "inf") return ExtendedReal<Rational>::infinity();
    try {
      const auto slash = s.find('/');
      std::size_t pos = 0;
      if (slash == std::string::npos) {
        const long long n = std::stoll(s, &pos);
        if (pos != s.size()) throw 0;
        return ExtendedReal<Rational>(Rational(n));
      }
      const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      const long long n = std::stoll(a, &pos);
      if (pos != a.size()) throw 0;
      const long long m = std::stoll(b, &pos);
      if (pos != b.size() || m == 0) throw 0;
      return ExtendedReal<Rational>(Rational(n, m));
    } catch (...) {
      throw ConfigError("p_grid: cannot read '" + s + "' (use integers, n/m or inf)");
    }
  };
  std::vector<ExtendedReal<Rational>> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = detail::split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("p_grid: expected a:b or a:b:step");
    const auto a = parse_one(parts[0]), b = parse_one(parts[1]);
    const auto step = parts.size() == 3 ? parse_one(parts[2]) : ExtendedReal<Rational>(Rational(1));
    if (a.is_infinite() || b.is_infinite() || step.is_infinite() || !(step.value() > Rational(0)))
      throw ConfigError("p_grid: range ends and step must be finite, step > 0");
    for (Rational x = a.value(); x <= b.value(); x += step.value()) {
      out.emplace_back(x);
      if (out.size() > 10000) throw ConfigError("p_grid: too many entries");
    }
  } else {
    for (const auto& s : detail::split(spec, ',')) out.push_back(parse_one(s));
  }
  if (out.empty()) throw ConfigError("p_grid: empty");
  for (const auto& p : out)
    if (!p.is_infinite() && p.value() < Rational(2)) throw ConfigError("p_grid: every p must be >= 2");
  return out;
}

inline std::vector<WeightProfile> parse_profiles(const std::string& s) {
  std::vector<WeightProfile> out;
  for (const auto& item : detail::split(s, ',')) out.push_back(parse_profile(item));
  if (out.empty()) throw ConfigError("profile: empty");
  return out;
}

/// Degree grid from lmin/lmax/count, or the experiment default when lmin = 0.
inline std::vector<int> config_degrees(const RunConfig& c, const std::vector<int>& fallback) {
  if (c.lmin == 0) return fallback;
  const int lmax = c.lmax == 0 ? c.lmin : c.lmax;
  const int count = c.count == 0 ? (lmax == c.lmin ? 1 : 5) : c.count;
  return degree_grid(c.lmin, lmax, count, c.spacing == "geometric");
}

/// Checks every field against the preconditions of the selected experiment.
inline void validate(const RunConfig& c) {
  if (c.experiment.empty()) throw ConfigError("missing required field 'experiment'");
  if (std::find_if(kExperiments.begin(), kExperiments.end(), [&](const char* e) { return c.experiment == e; }) ==
      kExperiments.end()) {
    std::string names;
    for (const char* e : kExperiments) names += std::string(names.empty() ? "" : ", ") + e;
    throw ConfigError("experiment: unknown experiment '" + c.experiment + "' (expected one of " + names + ")");
  }
  if (c.d < 2) throw ConfigError("d: must be >= 2");
  if (c.k < 1 || c.k > c.d - 1) throw ConfigError("k: must lie in [1, d-1]");
  if (!(c.p >= 2.0)) throw ConfigError("p: must be >= 2 or inf");
  if (c.alpha && !(*c.alpha >= 1.0)) throw ConfigError("alpha: must be >= 1");
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("beta: must lie in (0,1)");
  if (!(c.tau > 0.0 && c.tau < 1.0)) throw ConfigError("tau: must lie in (0,1)");
  if (!(c.C >= 1.0)) throw ConfigError("C: must be >= 1");
  if (c.lmin < 0 || c.lmax < 0 || c.count < 0) throw ConfigError("lmin, lmax, count: must be >= 0");
  if (c.lmin == 0 && (c.lmax != 0 || c.count != 0)) throw ConfigError("lmin: required when lmax or count is set");
  if (c.lmax != 0 && c.lmax < c.lmin) throw ConfigError("lmax: must be >= lmin");
  if (c.lmin > 4096 || c.lmax > 4096) throw ConfigError("lmin, lmax: degrees above 4096 are not supported");
  if (c.spacing != "geometric" && c.spacing != "linear") throw ConfigError("spacing: must be geometric or linear");
  if (c.resolution < 0) throw ConfigError("resolution: must be >= 0");
  if (c.samples < 0) throw ConfigError("samples: must be >= 0");
  if (c.draws < 0) throw ConfigError("draws: must be >= 0");
  parse_family(c.family);
  parse_profiles(c.profile);

  const std::string& e = c.experiment;
  if (e == "exponents") {
    if (!c.p_grid.empty()) parse_p_grid(c.p_grid);
  } else if (e == "scaling") {
    if (parse_family(c.family) != SystemFamily::zonal && (c.d != 2 || c.k != 1))
      throw ConfigError("d, k: family " + c.family + " needs d = 2, k = 1");
    if (parse_family(c.family) == SystemFamily::zonal && c.k != 1) throw ConfigError("k: the zonal family needs k = 1");
  } else if (e == "sharpness-s2" || e == "duality" || e == "weyl") {
    if (c.d != 2 || c.k != 1) throw ConfigError("d, k: " + e + " runs on a curve of S^2 (d = 2, k = 1)");
  } else if (e == "sharpness-zonal") {
    SharpnessZonalParams prm;
    prm.d = c.d;
    prm.k = c.k;
    prm.p = c.p;
    prm.beta = c.beta;
    prm.C = c.C;
    validate(prm);
  }
  if (c.lmin != 0 && e != "exponents" && e != "duality") {
    if (config_degrees(c, {}).size() < 4) throw ConfigError("lmin, lmax, count: need at least 4 distinct degrees to fit");
  }
}

/// Exact rational for a double p with denominator <= 1000, or infinity.
inline ExtendedReal<Rational> rational_exponent(double p) {
  if (std::isinf(p)) return ExtendedReal<Rational>::infinity();
  for (long long den = 1; den <= 1000; ++den) {
    const double num = std::round(p * static_cast<double>(den));
    if (std::abs(p * static_cast<double>(den) - num) < 1e-9 * den)
      return ExtendedReal<Rational>(Rational(static_cast<long long>(num), den));
  }
  throw ConfigError("p: " + format_exponent(p) + " is not a rational with denominator <= 1000; use p_grid");
}

inline std::string rational_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}
inline std::string rational_string(const ExtendedReal<Rational>& r) {
  return r.is_infinite() ? "inf" : rational_string(r.value());
}

/// One row per p: p, delta, alpha (upper end of the admissible range), h, regimes.
inline std::vector<std::map<std::string, std::string>> exponent_table(int d, int k,
                                                                      const std::vector<ExtendedReal<Rational>>& ps) {
  std::vector<std::map<std::string, std::string>> rows;
  for (const auto& p : ps) {
    const ExponentQuery<Rational> q{k, d, p};
    const auto res = classify(q);
    std::map<std::string, std::string> row;
    row["p"] = rational_string(p);
    row["delta"] = rational_string(res.delta);
    row["alpha"] = res.alpha_is_range ? "[1," + rational_string(res.alpha) + "]" : rational_string(res.alpha);
    row["h"] = rational_string(res.h);
    row["delta_regime"] = std::string(to_string(res.delta_regime));
    row["alpha_regime"] = std::string(to_string(res.alpha_regime));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::filesystem::path output_directory(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("EIGRESTRICT_OUT"); env && *env) return env;
  return "eigrestrict_out";
}

struct RunResult {
  std::vector<ExperimentReport> reports;
  std::vector<std::filesystem::path> files;
  int exit_code = 0;  // 0 all verdicts pass, 1 otherwise
};

/// Runs the configured experiment, writes its artifacts and a summary to `log`.
inline RunResult run(const RunConfig& c, std::ostream& log) {
  validate(c);
  const auto dir = output_directory(c);
  RunResult out;
  const std::string& e = c.experiment;
  const int npd = c.resolution;

  if (e == "exponents") {
    const auto ps = c.p_grid.empty() ? std::vector<ExtendedReal<Rational>>{rational_exponent(c.p)} : parse_p_grid(c.p_grid);
    const auto rows = exponent_table(c.d, c.k, ps);
    std::filesystem::create_directories(dir);
    const auto path = dir / ("exponents_" + std::to_string(c.d) + "_" + std::to_string(c.k) + "_table.csv");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    const std::array<const char*, 6> cols{"p", "delta", "alpha", "h", "delta_regime", "alpha_regime"};
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    log << "exponents (d=" << c.d << ", k=" << c.k << ")\n";
    for (const char* col : cols) log << std::setw(18) << col;
    log << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const std::string& v = r.at(cols[i]);
        os << (i ? "," : "") << (v.find(',') != std::string::npos ? "\"" + v + "\"" : v);
        log << std::setw(18) << v;
      }
      os << '\n';
      log << '\n';
    }
    out.files.push_back(path);
    return out;
  }

  ExperimentReport rep;
  if (e == "scaling") {
    ScalingParams prm;
    prm.d = c.d;
    prm.k = c.k;
    prm.p = c.p;
    prm.alpha = c.alpha;
    prm.family = parse_family(c.family);
    prm.profiles = parse_profiles(c.profile);
    prm.degrees = config_degrees(c, default_degrees(c.d));
    prm.tau = c.tau;
    if (c.draws > 0) prm.draws = c.draws;
    prm.seed = c.seed;
    if (npd > 0) prm.nodes_per_degree = npd;
    rep = ratio_upper_scaling(prm);
  } else if (e == "sharpness-s2") {
    SharpnessS2Params prm;
    prm.p = c.p;
    prm.tau = c.tau;
    prm.degrees = config_degrees(c, degree_grid(32, 256, 7));
    if (npd > 0) prm.nodes_per_degree = npd;
    rep = sharpness_s2(prm);
  } else if (e == "sharpness-zonal") {
    SharpnessZonalParams prm;
    prm.d = c.d;
    prm.k = c.k;
    prm.p = c.p;
    prm.beta = c.beta;
    prm.C = c.C;
    prm.degrees = config_degrees(c, default_degrees(c.d));
    prm.nodes_per_degree = npd;
    rep = sharpness_zonal(prm);
  } else if (e == "duality") {
    DualityParams prm;
    prm.degrees = config_degrees(c, {32, 64});
    prm.p_values = {c.p};
    prm.alpha = c.alpha;
    if (c.draws > 0) prm.draws = c.draws;
    prm.seed = c.seed;
    if (npd > 0) prm.nodes_per_degree = npd;
    rep = duality_sampling(prm);
  } else if (e == "kernel-decay") {
    KernelDecayParams prm;
    prm.d = c.d;
    prm.degrees = config_degrees(c, {});
    if (npd > 0) prm.samples_per_degree = npd;
    rep = kernel_decay_check(prm);
  } else if (e == "weyl") {
    WeylParams prm;
    prm.p = c.p;
    prm.degrees = config_degrees(c, {});
    prm.samples = c.samples;
    prm.seed = c.seed;
    if (npd > 0) prm.nodes_per_degree = npd;
    rep = weyl_check(prm);
  }
  rep.config = config_pairs(c);
  out.files.push_back(save_report(dir, rep));
  log << report_summary(rep);
  out.exit_code = rep.passed() ? 0 : 1;
  out.reports.push_back(std::move(rep));
  return out;
}

}  // namespace eigrestrict
