#pragma once

// Experiment orchestration for the command line tool: configuration,
// validation, execution and CSV / JSON output. Every row echoes the full
// parameter tuple and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "randinfo/coupon.hpp"
#include "randinfo/ellipsoid.hpp"
#include "randinfo/errors.hpp"
#include "randinfo/l1_recovery.hpp"
#include "randinfo/lipschitz.hpp"
#include "randinfo/sobolev1d.hpp"
#include "randinfo/sobolev_md.hpp"
#include "randinfo/spacings.hpp"

namespace randinfo::harness {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvariant = 2, kResource = 3 };

enum class Experiment { spacings, coupon, sobolev1d, lipschitz, sobolev_md, l1, ellipsoid };
enum class Format { csv, json };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::spacings: return "spacings";
    case Experiment::coupon: return "coupon";
    case Experiment::sobolev1d: return "sobolev1d";
    case Experiment::lipschitz: return "lipschitz";
    case Experiment::sobolev_md: return "sobolev_md";
    case Experiment::l1: return "l1";
    case Experiment::ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

inline Experiment parse_experiment(std::string_view s) {
  for (Experiment e : {Experiment::spacings, Experiment::coupon, Experiment::sobolev1d, Experiment::lipschitz,
                       Experiment::sobolev_md, Experiment::l1, Experiment::ellipsoid})
    if (s == to_string(e)) return e;
  if (s == "sobolev-md") return Experiment::sobolev_md;
  throw InvalidArgument("unknown experiment '" + std::string(s) + "'");
}

namespace detail {

inline std::uint64_t parse_count(std::string_view tok, const char* what) {
  std::uint64_t v = 0;
  if (tok.empty()) throw InvalidArgument(std::string(what) + ": empty number");
  for (char c : tok) {
    if (c < '0' || c > '9') throw InvalidArgument(std::string(what) + ": '" + std::string(tok) + "' is not a count");
    if (v > (UINT64_MAX - 9) / 10) throw InvalidArgument(std::string(what) + ": number too large");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

/// Grid syntax: comma separated items, each `a`, `a..b` (inclusive) or
/// `a..b:geometric:k` (a, a k, a k^2, ... up to b; integer k >= 2).
inline std::vector<std::size_t> parse_grid(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view tok = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (tok.empty()) {
      if (text.empty()) break;
      throw InvalidArgument("grid: empty item in '" + std::string(text) + "'");
    }
    const std::size_t dots = tok.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(detail::parse_count(tok, "grid"));
      continue;
    }
    const std::uint64_t a = detail::parse_count(tok.substr(0, dots), "grid");
    std::string_view rest = tok.substr(dots + 2);
    std::uint64_t ratio = 0;
    if (const std::size_t colon = rest.find(':'); colon != std::string_view::npos) {
      const std::string_view tail = rest.substr(colon + 1);
      constexpr std::string_view kGeo = "geometric:";
      if (tail.substr(0, kGeo.size()) != kGeo) throw InvalidArgument("grid: expected a..b:geometric:k");
      ratio = detail::parse_count(tail.substr(kGeo.size()), "grid ratio");
      if (ratio < 2) throw InvalidArgument("grid: geometric ratio must be >= 2");
      rest = rest.substr(0, colon);
    }
    const std::uint64_t b = detail::parse_count(rest, "grid");
    if (a > b) throw InvalidArgument("grid: range start exceeds end in '" + std::string(tok) + "'");
    if (ratio == 0) {
      if (b - a > 10000000) throw InvalidArgument("grid: range too long");
      for (std::uint64_t v = a; v <= b; ++v) out.push_back(v);
    } else {
      if (a == 0) throw InvalidArgument("grid: geometric range must start at >= 1");
      for (std::uint64_t v = a; v <= b; v *= ratio) {
        out.push_back(v);
        if (v > b / ratio) break;
      }
    }
  }
  return out;
}

/// Accepts a real number or inf / infinity.
inline double parse_exponent(std::string_view s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInf;
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || std::isnan(v))
    throw InvalidArgument("'" + str + "' is not a number");
  return v;
}

struct ExperimentConfig {
  Experiment experiment = Experiment::spacings;
  std::vector<std::size_t> n_grid;
  std::optional<int> d;
  std::optional<double> p, q, s, alpha, beta;
  std::optional<std::size_t> m;
  std::vector<std::size_t> ell_grid;  // coupon
  std::vector<double> c;              // coupon tail exponents
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::string output_path;  // empty: $RANDINFO_OUTPUT_DIR/<experiment>.<ext>, else stdout
  Format format = Format::csv;
  unsigned workers = 0;
};

struct Row {
  std::string experiment, statistic;
  std::optional<double> n, d, p, q, s, alpha, beta, m, ell, c, restarts;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  std::optional<double> std_error, exact_value, theory_rate, ratio;
};

inline const std::vector<std::string>& columns() {
  static const std::vector<std::string> cols{"experiment", "statistic", "n",   "d",      "p",        "q",
                                             "s",          "alpha",     "beta", "m",     "ell",      "c",
                                             "restarts",   "trials",    "seed", "estimate", "std_error",
                                             "exact_value", "theory_rate", "ratio"};
  return cols;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

inline std::vector<std::string> cells(const Row& r) {
  return {r.experiment, r.statistic, fmt(r.n),        fmt(r.d),           fmt(r.p),
          fmt(r.q),     fmt(r.s),    fmt(r.alpha),    fmt(r.beta),        fmt(r.m),
          fmt(r.ell),   fmt(r.c),    fmt(r.restarts), std::to_string(r.trials), std::to_string(r.seed),
          fmt(r.estimate), fmt(r.std_error), fmt(r.exact_value), fmt(r.theory_rate), fmt(r.ratio)};
}

}  // namespace detail

inline std::string to_csv(const std::vector<Row>& rows) {
  std::string out;
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\r\n";
  for (const Row& r : rows) {
    const auto c = detail::cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
    out += "\r\n";
  }
  return out;
}

inline std::string to_json(const std::vector<Row>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto num = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    if (!std::isfinite(*v)) return detail::fmt(*v);
    return *v;
  };
  for (const Row& r : rows) {
    nlohmann::ordered_json o;
    o["experiment"] = r.experiment;
    o["statistic"] = r.statistic;
    o["n"] = num(r.n);
    o["d"] = num(r.d);
    o["p"] = num(r.p);
    o["q"] = num(r.q);
    o["s"] = num(r.s);
    o["alpha"] = num(r.alpha);
    o["beta"] = num(r.beta);
    o["m"] = num(r.m);
    o["ell"] = num(r.ell);
    o["c"] = num(r.c);
    o["restarts"] = num(r.restarts);
    o["trials"] = r.trials;
    o["seed"] = r.seed;
    o["estimate"] = num(r.estimate);
    o["std_error"] = num(r.std_error);
    o["exact_value"] = num(r.exact_value);
    o["theory_rate"] = num(r.theory_rate);
    o["ratio"] = num(r.ratio);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

namespace detail {

inline std::size_t default_trials(Experiment e) {
  switch (e) {
    case Experiment::spacings: return 10000;
    case Experiment::coupon: return 10000;
    case Experiment::sobolev1d: return 1000;
    case Experiment::lipschitz: return 1000;
    case Experiment::sobolev_md: return 200;
    case Experiment::l1: return 50;
    case Experiment::ellipsoid: return 100;
  }
  return 100;
}

inline void require_int(const std::optional<double>& v, const char* name) {
  if (v && (*v != std::floor(*v) || !std::isfinite(*v))) throw InvalidArgument(std::string(name) + " must be an integer");
}

// Stream for statistic `tag` at grid value `key`; trials then branch off it.
inline RngStream point_stream(std::uint64_t seed, std::uint64_t key, std::uint64_t tag) {
  return RngStream(seed, key * 16 + tag);
}

}  // namespace detail

/// Fills defaults and checks every parameter against the preconditions of
/// the target module. Throws InvalidArgument; nothing is sampled.
inline ExperimentConfig validate(ExperimentConfig cfg) {
  using randinfo::detail::require;
  const Experiment e = cfg.experiment;
  if (!cfg.trials) cfg.trials = detail::default_trials(e);
  const std::size_t trials = *cfg.trials;
  require(trials >= 2, "--trials must be >= 2");
  if (e != Experiment::coupon) {
    require(!cfg.n_grid.empty(), "--n: empty grid");
    for (std::size_t n : cfg.n_grid) require(n >= 1, "--n: grid values must be >= 1");
    require(cfg.n_grid.back() < (std::size_t{1} << 27), "--n: grid values must be < 2^27");
  }
  switch (e) {
    case Experiment::spacings:
      if (!cfg.s) cfg.s = 1.0;
      require(*cfg.s > 0.0 && std::isfinite(*cfg.s), "--s must be positive");
      break;
    case Experiment::coupon:
      if (cfg.ell_grid.empty()) cfg.ell_grid = {10};
      for (std::size_t l : cfg.ell_grid) require(l >= 2, "--ell: values must be >= 2");
      if (cfg.c.empty()) cfg.c = {1.5, 2.0, 3.0};
      for (double c : cfg.c) require(c > 0.0 && std::isfinite(c), "--c: values must be positive");
      break;
    case Experiment::sobolev1d: {
      if (!cfg.p) cfg.p = 2.0;
      if (!cfg.q) cfg.q = 1.0;
      SobolevParams1D{*cfg.p, *cfg.q}.validate();
      require(trials >= 100, "--trials must be >= 100");
      break;
    }
    case Experiment::lipschitz:
      if (!cfg.d) cfg.d = 1;
      if (!cfg.q) cfg.q = 1.0;
      require(*cfg.d >= 1 && *cfg.d <= 8, "--d must be in 1..8");
      require(*cfg.q > 0.0, "--q must be positive");
      require(trials >= 100, "--trials must be >= 100");
      break;
    case Experiment::sobolev_md: {
      if (!cfg.d) cfg.d = 1;
      if (!cfg.s) cfg.s = static_cast<double>(*cfg.d);
      if (!cfg.p) cfg.p = 2.0;
      if (!cfg.q) cfg.q = 2.0;
      detail::require_int(cfg.s, "--s");
      require(*cfg.d >= 1 && *cfg.d <= 4, "--d must be in 1..4");
      SobolevParamsMD{static_cast<int>(*cfg.s), *cfg.d, *cfg.p, *cfg.q}.validate();
      require(trials >= 100, "--trials must be >= 100");
      if (cfg.alpha) {
        require(*cfg.alpha > 0.0, "--alpha must be positive");
        for (std::size_t n : cfg.n_grid)
          require(thinning_level(n, *cfg.d, *cfg.alpha) >= 1, "--n: " + std::to_string(n) + " is too small to thin");
      }
      break;
    }
    case Experiment::l1:
      require(cfg.m.has_value() && *cfg.m >= 1, "--m is required and must be >= 1");
      for (std::size_t n : cfg.n_grid) require(n <= *cfg.m, "--n: grid values must be <= m");
      if (!cfg.restarts) cfg.restarts = 20;
      require(*cfg.restarts >= 1, "--restarts must be >= 1");
      if (cfg.s) {
        detail::require_int(cfg.s, "--s");
        require(*cfg.s >= 0.0 && *cfg.s <= static_cast<double>(*cfg.m), "--s must lie in [0, m]");
      }
      break;
    case Experiment::ellipsoid: {
      if (!cfg.alpha) cfg.alpha = 1.0;
      if (!cfg.beta) cfg.beta = 0.0;
      require(cfg.m.has_value() && *cfg.m >= 2, "--m is required and must be >= 2");
      for (std::size_t n : cfg.n_grid) require(n <= *cfg.m, "--n: grid values must be <= m");
      require(trials >= 20, "--trials must be >= 20");
      (void)AxisLaw{*cfg.alpha, *cfg.beta}.axes(*cfg.m);
      break;
    }
  }
  return cfg;
}

struct RunResult {
  std::vector<Row> rows;
  int exit_code = kOk;
  std::string diagnostic;
};

namespace detail {

inline Row base_row(const ExperimentConfig& cfg, const char* statistic) {
  Row r;
  r.experiment = harness::to_string(cfg.experiment);
  r.statistic = statistic;
  r.trials = *cfg.trials;
  r.seed = cfg.seed;
  return r;
}

inline void run_spacings(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const double s = *cfg.s;
  for (std::size_t n : cfg.n_grid) {
    const RngStream base = point_stream(cfg.seed, n, 0);
    const auto v = run_trials(
        *cfg.trials,
        [&](std::size_t t) {
          RngStream st = trial_stream(base, t);
          const SpacingProfile g = spacings(sample_uniform_sorted(n, st));
          return std::pair<double, double>(power_sum(g, s), max_gap(g));
        },
        cfg.workers);
    std::vector<double> a, b;
    for (const auto& [x, y] : v) {
      a.push_back(x);
      b.push_back(y);
    }
    const McSummary sa = summarize(a), sb = summarize(b);
    Row r = base_row(cfg, "power_sum");
    r.n = static_cast<double>(n);
    r.s = s;
    r.estimate = sa.mean;
    r.std_error = sa.std_error;
    r.exact_value = expected_power_sum_exact(n, s);
    r.theory_rate = r.exact_value;
    r.ratio = sa.mean / *r.exact_value;
    out.push_back(r);
    Row g = base_row(cfg, "max_gap");
    g.n = static_cast<double>(n);
    g.estimate = sb.mean;
    g.std_error = sb.std_error;
    g.exact_value = harmonic_number(n + 1) / static_cast<double>(n + 1);
    g.theory_rate = std::log(static_cast<double>(n)) / static_cast<double>(n);
    g.ratio = sb.mean / *g.exact_value;
    out.push_back(g);
  }
}

inline void run_coupon(const ExperimentConfig& cfg, std::vector<Row>& out) {
  for (std::size_t ell : cfg.ell_grid) {
    const RngStream base = point_stream(cfg.seed, ell, 1);
    const auto draws = run_trials(
        *cfg.trials,
        [&](std::size_t t) {
          RngStream st = trial_stream(base, t);
          return static_cast<double>(coupon_simulate(ell, st));
        },
        cfg.workers);
    const McSummary sm = summarize(draws);
    const CouponStats cs = coupon_stats(ell);
    Row r = base_row(cfg, "mean");
    r.ell = static_cast<double>(ell);
    r.estimate = sm.mean;
    r.std_error = sm.std_error;
    r.exact_value = cs.mean;
    r.theory_rate = cs.mean;
    r.ratio = sm.mean / cs.mean;
    out.push_back(r);
    for (double c : cfg.c) {
      const CouponTail tb = coupon_tail_bound(ell, c);
      std::vector<double> hit(draws.size());
      for (std::size_t t = 0; t < draws.size(); ++t) hit[t] = draws[t] > static_cast<double>(tb.threshold) ? 1.0 : 0.0;
      const McSummary sh = summarize(hit);
      Row tr = base_row(cfg, "tail_frequency");
      tr.ell = static_cast<double>(ell);
      tr.c = c;
      tr.estimate = sh.mean;
      tr.std_error = sh.std_error;
      tr.theory_rate = tb.bound;
      tr.ratio = sh.mean / tb.bound;
      out.push_back(tr);
    }
  }
}

inline void run_sobolev1d(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const SobolevParams1D pr{*cfg.p, *cfg.q};
  for (std::size_t n : cfg.n_grid) {
    const RadiusEstimate e = expected_radius_mc_1d(n, pr, *cfg.trials, point_stream(cfg.seed, n, 2), cfg.workers);
    Row r = base_row(cfg, "radius_surrogate");
    r.n = static_cast<double>(n);
    r.p = pr.p;
    r.q = pr.q;
    r.estimate = e.value;
    r.std_error = e.std_error;
    if (n >= 2) {
      r.theory_rate = theory_rate_1d(static_cast<double>(n), pr);
      r.ratio = e.value / *r.theory_rate;
    }
    out.push_back(r);
  }
}

inline void run_lipschitz(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const int d = *cfg.d;
  const double q = *cfg.q;
  const double qs[] = {q};
  for (std::size_t n : cfg.n_grid) {
    const LipschitzMcResult res =
        expected_radius_mc_lip(n, d, qs, *cfg.trials, point_stream(cfg.seed, n, 3), GridOptions{}, cfg.workers);
    const double nn = static_cast<double>(n);
    Row r = base_row(cfg, std::isinf(q) ? "radius" : "moment");
    r.n = nn;
    r.d = d;
    r.q = q;
    r.estimate = res.moment[0].value;
    r.std_error = res.moment[0].std_error;
    if (!std::isinf(q)) {
      r.exact_value = expected_moment_exact(n, d, q);
      r.theory_rate = expected_moment_limit(d, q) * std::pow(nn, -q / d);
      r.ratio = r.estimate / *r.theory_rate;
    } else if (n >= 2) {
      r.theory_rate = std::pow(std::log(nn) / nn, 1.0 / d);
      r.ratio = r.estimate / *r.theory_rate;
    }
    out.push_back(r);
  }
}

inline void run_sobolev_md(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const int d = *cfg.d;
  for (std::size_t n : cfg.n_grid) {
    const double nn = static_cast<double>(n);
    const GapWitness w = empirical_gap_witness(n, d, *cfg.trials, point_stream(cfg.seed, n, 4), {}, cfg.workers);
    Row r = base_row(cfg, "gap_witness");
    r.n = nn;
    r.d = d;
    r.s = *cfg.s;
    r.p = *cfg.p;
    r.q = *cfg.q;
    r.estimate = w.estimate.value;
    r.std_error = w.estimate.std_error;
    if (n >= 2) {
      r.theory_rate = std::pow(std::log(nn) / nn, 1.0 / d);
      r.ratio = r.estimate / *r.theory_rate;
    }
    out.push_back(r);
    if (cfg.alpha) {
      const ThinningStats ts = thinning_experiment(n, d, *cfg.alpha, *cfg.trials, point_stream(cfg.seed, n, 5), cfg.workers);
      Row t = base_row(cfg, "thinning_success");
      t.n = nn;
      t.d = d;
      t.alpha = *cfg.alpha;
      t.m = static_cast<double>(ts.m);
      t.ell = static_cast<double>(ts.ell);
      t.estimate = ts.success_rate;
      t.std_error = ts.std_error;
      t.theory_rate = ts.guarantee;
      t.ratio = ts.success_rate / ts.guarantee;
      out.push_back(t);
    }
  }
}

inline void run_l1(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const std::size_t m = *cfg.m;
  for (std::size_t n : cfg.n_grid) {
    const std::size_t grid[] = {n};
    const KggRow k = kgg_rate_check(m, grid, *cfg.trials, *cfg.restarts, point_stream(cfg.seed, n, 6), cfg.workers)[0];
    if (k.mean_lower < 0.0 || k.mean_lower > 1.0) throw InvariantViolation("l1: section radius outside [0, 1]");
    if (k.exact_mean && k.mean_lower > *k.exact_mean + 1e-9)
      throw InvariantViolation("l1: lower bound exceeds the exact section radius");
    Row r = base_row(cfg, "radius_zero");
    r.n = static_cast<double>(n);
    r.m = static_cast<double>(m);
    r.restarts = static_cast<double>(*cfg.restarts);
    r.estimate = k.mean_lower;
    r.std_error = k.std_error;
    r.exact_value = k.exact_mean;
    r.theory_rate = k.reference;
    r.ratio = k.ratio;
    out.push_back(r);
    if (cfg.s) {
      const std::size_t sp = static_cast<std::size_t>(*cfg.s);
      const SuccessRate sr = sparse_recovery_experiment(m, n, sp, *cfg.trials, point_stream(cfg.seed, n, 7), cfg.workers);
      Row t = base_row(cfg, "recovery_rate");
      t.n = static_cast<double>(n);
      t.m = static_cast<double>(m);
      t.s = *cfg.s;
      t.estimate = sr.rate;
      t.std_error = sr.std_error;
      out.push_back(t);
    }
  }
}

inline void run_ellipsoid(const ExperimentConfig& cfg, std::vector<Row>& out) {
  const AxisLaw law{*cfg.alpha, *cfg.beta};
  const SemiAxes axes = law.axes(*cfg.m);
  for (std::size_t n : cfg.n_grid) {
    const RadiusEstimate e = expected_radius_mc_ell(axes, n, *cfg.trials, point_stream(cfg.seed, n, 8), cfg.workers);
    if (e.value < axes.after(n) - 1e-10 || e.value > axes.largest() + 1e-10)
      throw InvariantViolation("ellipsoid: mean radius " + fmt(e.value) + " outside [" + fmt(axes.after(n)) + ", " +
                               fmt(axes.largest()) + "]");
    Row r = base_row(cfg, "circumradius");
    r.n = static_cast<double>(n);
    r.m = static_cast<double>(*cfg.m);
    r.alpha = law.alpha;
    r.beta = law.beta;
    r.estimate = e.value;
    r.std_error = e.std_error;
    r.theory_rate = regime_rate(law, n);
    r.ratio = e.value / *r.theory_rate;
    out.push_back(r);
  }
}

}  // namespace detail

/// Runs a validated configuration. Rows completed before a failure are
/// kept; the exit code tells which failure stopped the run.
inline RunResult run(const ExperimentConfig& cfg) {
  RunResult res;
  try {
    switch (cfg.experiment) {
      case Experiment::spacings: detail::run_spacings(cfg, res.rows); break;
      case Experiment::coupon: detail::run_coupon(cfg, res.rows); break;
      case Experiment::sobolev1d: detail::run_sobolev1d(cfg, res.rows); break;
      case Experiment::lipschitz: detail::run_lipschitz(cfg, res.rows); break;
      case Experiment::sobolev_md: detail::run_sobolev_md(cfg, res.rows); break;
      case Experiment::l1: detail::run_l1(cfg, res.rows); break;
      case Experiment::ellipsoid: detail::run_ellipsoid(cfg, res.rows); break;
    }
  } catch (const ResourceGuard& e) {
    res.exit_code = kResource;
    res.diagnostic = e.what();
  } catch (const InvariantViolation& e) {
    res.exit_code = kInvariant;
    res.diagnostic = e.what();
  } catch (const ConvergenceError& e) {
    res.exit_code = kInvariant;
    res.diagnostic = e.what();
  }
  return res;
}

inline std::string render(const std::vector<Row>& rows, Format f) { return f == Format::csv ? to_csv(rows) : to_json(rows); }

/// Where output goes: the explicit path, else $RANDINFO_OUTPUT_DIR/<experiment>.<ext>,
/// else empty (standard output).
inline std::string resolve_output_path(const ExperimentConfig& cfg) {
  if (!cfg.output_path.empty()) return cfg.output_path;
  if (const char* dir = std::getenv("RANDINFO_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
    return (std::filesystem::path(dir) / (to_string(cfg.experiment) + (cfg.format == Format::csv ? ".csv" : ".json")))
        .string();
  return {};
}

}  // namespace randinfo::harness
