#pragma once

// Radius of information for L_q approximation of 1-Lipschitz functions on
// the d-torus (maximum metric) from function values.
//
// For nodes P the radius is ||dist(., P)||_q. In d = 1 this is a closed
// form in the circular gaps. In d >= 2 the domain is cut into lines
// parallel to the first axis; on each line the distance function is the
// lower envelope of "flat-bottomed V" functions max(a_i, |x - c_i|), whose
// q-th power integral and supremum are computed exactly by a sweep over
// the heights a_i. Only the remaining d-1 coordinates are discretised (cell
// midpoints at spacing h = 1/M), which changes the L_q norm and the sup by
// at most h/2 because dist(., P) is 1-Lipschitz.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randinfo/coupon.hpp"
#include "randinfo/errors.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/radius.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/sobolev1d.hpp"
#include "randinfo/spacings.hpp"

namespace randinfo {

/// n points in [0,1]^d, stored row-major.
class TorusPointSet {
 public:
  explicit TorusPointSet(int d) : d_(d) { detail::require(d >= 1, "TorusPointSet: d must be >= 1"); }

  TorusPointSet(int d, std::vector<double> coords) : d_(d), coords_(std::move(coords)) {
    detail::require(d >= 1, "TorusPointSet: d must be >= 1");
    detail::require(coords_.size() % static_cast<std::size_t>(d) == 0, "TorusPointSet: size not a multiple of d");
    for (double x : coords_) detail::require(x >= 0.0 && x <= 1.0, "TorusPointSet: coordinate outside [0,1]");
  }

  int dim() const { return d_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(d_); }
  bool empty() const { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<const double> coords() const { return coords_; }

  void push_back(std::span<const double> x) {
    detail::require(x.size() == static_cast<std::size_t>(d_), "TorusPointSet: dimension mismatch");
    for (double v : x) detail::require(v >= 0.0 && v <= 1.0, "TorusPointSet: coordinate outside [0,1]");
    coords_.insert(coords_.end(), x.begin(), x.end());
  }

 private:
  int d_;
  std::vector<double> coords_;
};

/// The grid {i/m : 0 <= i < m}^d with n = m^d points.
struct GridSpec {
  int d = 1;
  int m = 1;

  std::size_t size() const {
    std::size_t n = 1;
    for (int j = 0; j < d; ++j) n *= static_cast<std::size_t>(m);
    return n;
  }

  TorusPointSet points() const {
    detail::require(d >= 1 && m >= 1, "GridSpec: need d, m >= 1");
    std::vector<double> coords;
    coords.reserve(size() * d);
    std::vector<int> idx(d, 0);
    for (std::size_t k = 0; k < size(); ++k) {
      for (int j = 0; j < d; ++j) coords.push_back(static_cast<double>(idx[j]) / m);
      for (int j = d - 1; j >= 0; --j) {
        if (++idx[j] < m) break;
        idx[j] = 0;
      }
    }
    return TorusPointSet(d, std::move(coords));
  }
};

inline TorusPointSet sample_uniform_torus(std::size_t n, int d, RngStream& rng) {
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& x : coords) x = rng.uniform();
  return TorusPointSet(d, std::move(coords));
}

/// Distance between two reals on R/Z.
inline double circle_dist(double x, double y) {
  const double t = std::abs(x - y);
  return std::min(t, 1.0 - t);
}

/// min_{k in Z^d} ||x + k - y||_inf.
inline double dist_torus(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "dist_torus: dimension mismatch");
  double out = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) out = std::max(out, circle_dist(x[j], y[j]));
  return out;
}

/// dist(x, P); the empty set is at distance 1/2 (the torus diameter).
inline double dist_to_set(std::span<const double> x, const TorusPointSet& P) {
  detail::require(x.size() == static_cast<std::size_t>(P.dim()), "dist_to_set: dimension mismatch");
  double best = 0.5;
  for (std::size_t i = 0; i < P.size(); ++i) best = std::min(best, dist_torus(x, P.point(i)));
  return best;
}

// ---------------------------------------------------------------------------
// Exact line profiles.

/// Result of integrating g(x) = min_i max(a_i, dist_circle(x, c_i)) over
/// one period: integrals[k] = int_0^1 g^q_k, sup = max g.
struct LineProfile {
  std::vector<double> integrals;
  double sup = 0.0;
};

namespace detail {

struct LineSweep {
  struct Node {
    double center;
    double birth;  // birth time of the gap from this node to the next one
  };
  std::vector<Node> alive;
  std::vector<std::size_t> order;

  static double gap_after(const std::vector<Node>& v, std::size_t i) {
    return i + 1 < v.size() ? v[i + 1].center - v[i].center : 1.0 - v.back().center + v.front().center;
  }

  // Uncovered length of a gap of length g at level t is (g - 2t)_+. The gap
  // lives on [birth, death); its share of int q t^(q-1) lambda(g > t) dt.
  static void close_gap(double g, double birth, double death, std::span<const double> qs, LineProfile& out) {
    const double u = std::min(death, 0.5 * g);
    if (!(u > birth)) return;
    out.sup = std::max(out.sup, u);
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const double q = qs[k];
      if (std::isinf(q)) continue;
      auto F = [&](double t) {
        const double tq = power(t, q);
        return tq * (g - 2.0 * q * t / (q + 1.0));
      };
      out.integrals[k] += F(u) - F(birth);
    }
  }

  static double power(double t, double q) {
    if (q == 1.0) return t;
    if (q == 2.0) return t * t;
    if (q == 3.0) return t * t * t;
    return std::pow(t, q);
  }

  double max_half() const {
    double m = 0.0;
    for (std::size_t j = 0; j < alive.size(); ++j) m = std::max(m, 0.5 * gap_after(alive, j));
    return m;
  }
};

/// Sweep over sites delivered by next(c, a) in non-decreasing height a.
/// g^{-1}([0, t)) is the union of arcs of half-width t - a_i around the
/// active centres; each gap between neighbouring active centres closes when
/// it is split by a new site or when t reaches half its length. The sweep
/// stops as soon as the next height exceeds every remaining half-gap, since
/// later sites can no longer change g.
template <class NextSite>
LineProfile sweep_sites(NextSite&& next, std::span<const double> qs, LineSweep& ws) {
  LineProfile res;
  res.integrals.assign(qs.size(), 0.0);
  double c = 0.0, a = 0.0;
  if (!next(c, a)) {
    res.sup = 0.5;
    for (std::size_t k = 0; k < qs.size(); ++k)
      if (!std::isinf(qs[k])) res.integrals[k] = std::pow(0.5, qs[k]);
    return res;
  }
  res.sup = a;
  for (std::size_t k = 0; k < qs.size(); ++k)
    if (!std::isinf(qs[k])) res.integrals[k] = LineSweep::power(a, qs[k]);

  auto& alive = ws.alive;
  alive.clear();
  alive.push_back({c, a});
  double max_half = 0.5;
  while (next(c, a)) {
    if (a >= max_half) break;
    const auto it = std::upper_bound(alive.begin(), alive.end(), c,
                                     [](double v, const LineSweep::Node& nd) { return v < nd.center; });
    const std::size_t pos = static_cast<std::size_t>(it - alive.begin());
    const std::size_t pred = pos == 0 ? alive.size() - 1 : pos - 1;
    const double g = LineSweep::gap_after(alive, pred);
    LineSweep::close_gap(g, alive[pred].birth, a, qs, res);
    alive[pred].birth = a;
    alive.insert(alive.begin() + static_cast<std::ptrdiff_t>(pos), {c, a});
    if (0.5 * g >= max_half) max_half = ws.max_half();
  }
  for (std::size_t j = 0; j < alive.size(); ++j)
    LineSweep::close_gap(LineSweep::gap_after(alive, j), alive[j].birth, kInf, qs, res);
  return res;
}

}  // namespace detail

/// Exact profile of g over the circle for arbitrary heights in [0, 1/2].
inline LineProfile line_profile(std::span<const double> centers, std::span<const double> heights,
                                std::span<const double> qs, detail::LineSweep& ws) {
  detail::require(centers.size() == heights.size(), "line_profile: size mismatch");
  auto& order = ws.order;
  order.resize(centers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return heights[x] < heights[y] || (heights[x] == heights[y] && x < y);
  });
  std::size_t r = 0;
  auto next = [&](double& c, double& a) {
    if (r == order.size()) return false;
    c = centers[order[r]];
    a = heights[order[r]];
    ++r;
    return true;
  };
  return detail::sweep_sites(next, qs, ws);
}

// ---------------------------------------------------------------------------
// Radius of a point set.

struct GridOptions {
  /// Target for grid_error_bound relative to a lower bound of the radius.
  double relative_bound = 0.05;
  /// Hard cap on M^d, the number of resolution cells.
  double cell_cap = 1e8;
  /// Lines per axis; overrides relative_bound when set.
  std::optional<std::size_t> resolution;
};

/// (1/2) (d/(d+q))^(1/q) n^(-1/d), or (1/2) n^(-1/d) for q = inf. Equals
/// the radius of the m-grid when n = m^d and is a lower bound of the radius
/// of every n-point set.
inline double lipschitz_radius_lower_bound(double n, int d, double q) {
  const double base = 0.5 * std::pow(n, -1.0 / d);
  if (std::isinf(q)) return base;
  return base * std::pow(static_cast<double>(d) / (d + q), 1.0 / q);
}

/// Lines per axis so that h/2 <= relative_bound * (lower bound of radius).
inline std::size_t lipschitz_resolution(std::size_t n, int d, std::span<const double> qs, const GridOptions& opt) {
  if (opt.resolution) return *opt.resolution;
  double lb = 0.5;
  for (double q : qs) lb = std::min(lb, lipschitz_radius_lower_bound(std::max<double>(n, 1), d, q));
  const double m = std::ceil(1.0 / (2.0 * opt.relative_bound * lb));
  return static_cast<std::size_t>(std::max(1.0, m));
}

/// ||dist(., P)||_q for every q in qs (q = inf allowed), sharing one pass.
/// d = 1: exact. d >= 2: grid_bounded with bound h/2, h = 1/M.
inline std::vector<RadiusEstimate> radius_lq_multi(const TorusPointSet& P, std::span<const double> qs,
                                                    const GridOptions& opt = {}) {
  for (double q : qs) detail::require(q >= 1.0, "radius_lq: q must be >= 1");
  const int d = P.dim();
  const std::size_t n = P.size();
  std::vector<RadiusEstimate> out;

  if (d == 1) {
    std::vector<double> xs(P.coords().begin(), P.coords().end());
    const SpacingProfile g = circular_spacings(SortedPointSet1D(std::move(xs)));
    for (double q : qs) {
      if (n == 0) {
        out.push_back(RadiusEstimate::exact(0.5));
      } else if (std::isinf(q)) {
        out.push_back(RadiusEstimate::exact(0.5 * max_gap(g)));
      } else {
        // int over a gap of length l of min(t, l-t)^q = l^(q+1) / (2^q (q+1))
        double sum = 0.0;
        for (double l : g.gaps) sum += std::pow(l, q + 1.0);
        out.push_back(RadiusEstimate::exact(std::pow(sum / (std::pow(2.0, q) * (q + 1.0)), 1.0 / q)));
      }
    }
    return out;
  }

  const std::size_t M = lipschitz_resolution(n, d, qs, opt);
  if (std::pow(static_cast<double>(M), d) > opt.cell_cap)
    throw ResourceGuard("radius_lq: " + std::to_string(M) + "^" + std::to_string(d) + " cells exceed the cap of " +
                        std::to_string(opt.cell_cap));
  const double h = 1.0 / static_cast<double>(M);

  std::vector<double> sums(qs.size(), 0.0);
  double sup = 0.0;
  detail::LineSweep ws;
  std::size_t lines = 1;
  for (int j = 1; j < d; ++j) lines *= M;
  auto accumulate = [&](const LineProfile& prof) {
    for (std::size_t k = 0; k < qs.size(); ++k) sums[k] += prof.integrals[k];
    sup = std::max(sup, prof.sup);
  };

  if (d == 2) {
    // Sort by the second coordinate once; for each line the sites come out
    // in increasing height from a two-sided walk around the line position.
    std::vector<std::size_t> by_y(n);
    std::iota(by_y.begin(), by_y.end(), std::size_t{0});
    std::sort(by_y.begin(), by_y.end(), [&](std::size_t x, std::size_t y) {
      return P.point(x)[1] < P.point(y)[1] || (P.point(x)[1] == P.point(y)[1] && x < y);
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = P.point(by_y[i])[0];
      ys[i] = P.point(by_y[i])[1];
    }
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::size_t line = 0; line < lines; ++line) {
      const double y0 = (static_cast<double>(line) + 0.5) * h;
      const auto pos = static_cast<std::ptrdiff_t>(std::lower_bound(ys.begin(), ys.end(), y0) - ys.begin());
      std::ptrdiff_t right = pos, left = pos - 1;
      std::size_t taken = 0;
      auto next = [&](double& c, double& a) {
        if (taken == n) return false;
        const std::ptrdiff_t ri = right % sn, li = ((left % sn) + sn) % sn;
        const double dr = ys[ri] - y0 + (right >= sn ? 1.0 : 0.0);
        const double dl = y0 - ys[li] + (left < 0 ? 1.0 : 0.0);
        if (dr <= dl) {
          c = xs[ri];
          a = dr;
          ++right;
        } else {
          c = xs[li];
          a = dl;
          --left;
        }
        ++taken;
        return true;
      };
      accumulate(detail::sweep_sites(next, qs, ws));
    }
  } else {
    std::vector<double> centers(n), heights(n), line_c(d - 1);
    std::vector<std::size_t> idx(d - 1, 0);
    for (std::size_t i = 0; i < n; ++i) centers[i] = P.point(i)[0];
    for (std::size_t line = 0; line < lines; ++line) {
      for (int j = 0; j < d - 1; ++j) line_c[j] = (static_cast<double>(idx[j]) + 0.5) * h;
      for (std::size_t i = 0; i < n; ++i) {
        const auto p = P.point(i);
        double a = 0.0;
        for (int j = 1; j < d; ++j) a = std::max(a, circle_dist(line_c[j - 1], p[j]));
        heights[i] = a;
      }
      accumulate(line_profile(centers, heights, qs, ws));
      for (int j = d - 2; j >= 0; --j) {
        if (++idx[j] < M) break;
        idx[j] = 0;
      }
    }
  }

  for (std::size_t k = 0; k < qs.size(); ++k) {
    const double v = std::isinf(qs[k]) ? sup : std::pow(sums[k] / static_cast<double>(lines), 1.0 / qs[k]);
    out.push_back(RadiusEstimate::grid(v, 0.5 * h));
  }
  return out;
}

inline RadiusEstimate radius_lq(const TorusPointSet& P, double q, const GridOptions& opt = {}) {
  const double qs[] = {q};
  return radius_lq_multi(P, qs, opt).front();
}

// ---------------------------------------------------------------------------
// Closed forms.

/// Radius of the grid information with n = m^d nodes.
inline double optimal_radius_exact(const GridSpec& g, double q) {
  detail::require(g.d >= 1 && g.m >= 1, "optimal_radius_exact: need d, m >= 1");
  detail::require(q >= 1.0, "optimal_radius_exact: q must be >= 1");
  return lipschitz_radius_lower_bound(static_cast<double>(g.size()), g.d, q);
}

/// E[r(N_n)^q] = 2^-q n! / ((q/d+1)(q/d+2)...(q/d+n)) for n uniform points,
/// evaluated as 2^-q exp(-sum_k log1p(a/k)), a = q/d.
inline double expected_moment_exact(std::size_t n, int d, double q) {
  detail::require(n >= 1, "expected_moment_exact: n must be >= 1");
  detail::require(d >= 1, "expected_moment_exact: d must be >= 1");
  detail::require(q >= 1.0 && std::isfinite(q), "expected_moment_exact: q must be finite and >= 1");
  const double a = q / d;
  double log_ratio = 0.0;
  for (std::size_t k = n; k >= 1; --k) log_ratio -= std::log1p(a / static_cast<double>(k));
  return std::exp(log_ratio - q * std::log(2.0));
}

/// The limit of n^(q/d) E[r^q]: 2^-q Gamma(q/d + 1).
inline double expected_moment_limit(int d, double q) { return std::exp(std::lgamma(q / d + 1.0) - q * std::log(2.0)); }

struct LipschitzBracket {
  std::uint64_t m1 = 0;  // min{m : m^d (H_{m^d} - 2) >= n}
  std::uint64_t m2 = 0;  // max{m : 2 m^d log(m^d) <= n}
  double lower = 0.0;    // 1/(4 m1)
  double upper = 0.0;    // 2/m2
};

/// Bounds 1/(4 m1) <= E[r(N_n)] <= 2/m2 for L_inf approximation.
inline LipschitzBracket lipinfty_bracket(std::uint64_t n, int d) {
  detail::require(n >= 1, "lipinfty_bracket: n must be >= 1");
  detail::require(d >= 1, "lipinfty_bracket: d must be >= 1");
  auto cells = [d](std::uint64_t m) {
    double c = 1.0;
    for (int j = 0; j < d; ++j) c *= static_cast<double>(m);
    return c;
  };
  const double nn = static_cast<double>(n);
  LipschitzBracket b;
  // H_l - 2 grows without bound, so the search terminates; H is
  // accumulated incrementally to avoid recomputation.
  double h = 0.0;
  std::uint64_t l_done = 0;
  for (std::uint64_t m = 1;; ++m) {
    const double l = cells(m);
    if (l > 1e12) throw ResourceGuard("lipinfty_bracket: m1 search exceeds 1e12 cells");
    const auto target = static_cast<std::uint64_t>(l);
    for (std::uint64_t k = l_done + 1; k <= target; ++k) h += 1.0 / static_cast<double>(k);
    l_done = target;
    if (l * (h - 2.0) >= nn) {
      b.m1 = m;
      break;
    }
  }
  for (std::uint64_t m = 1;; ++m) {
    const double l = cells(m);
    if (2.0 * l * std::log(l) <= nn)
      b.m2 = m;
    else
      break;
  }
  if (b.m2 == 0) throw InvalidArgument("lipinfty_bracket: no admissible m2 for n = " + std::to_string(n));
  b.lower = 1.0 / (4.0 * static_cast<double>(b.m1));
  b.upper = 2.0 / static_cast<double>(b.m2);
  return b;
}

// ---------------------------------------------------------------------------
// Monte Carlo.

struct LipschitzMcResult {
  std::vector<double> qs;
  std::vector<RadiusEstimate> radius;  // E[r] per q
  std::vector<RadiusEstimate> moment;  // E[r^q] per q; for q = inf equals E[r]
  double grid_error_bound = 0.0;       // per-trial bound on r; 0 in d = 1
};

/// Monte Carlo estimates of E[r(N_n)] and E[r(N_n)^q] for n uniform points
/// in [0,1]^d. Trial t draws from trial_stream(rng, t).
inline LipschitzMcResult expected_radius_mc_lip(std::size_t n, int d, std::span<const double> qs, std::size_t trials,
                                                const RngStream& rng, const GridOptions& opt = {},
                                                unsigned workers = 0) {
  detail::require(trials >= 100, "expected_radius_mc_lip: trials must be >= 100");
  detail::require(d >= 1, "expected_radius_mc_lip: d must be >= 1");
  GridOptions fixed = opt;
  if (d >= 2) {
    fixed.resolution = lipschitz_resolution(n, d, qs, opt);
    if (std::pow(static_cast<double>(*fixed.resolution), d) > opt.cell_cap)
      throw ResourceGuard("expected_radius_mc_lip: grid exceeds the cell cap");
  }
  const auto per_trial = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream stream = trial_stream(rng, t);
        const TorusPointSet P = sample_uniform_torus(n, d, stream);
        std::vector<double> v;
        for (const auto& e : radius_lq_multi(P, qs, fixed)) v.push_back(e.value);
        return v;
      },
      workers);

  LipschitzMcResult out;
  out.qs.assign(qs.begin(), qs.end());
  out.grid_error_bound = d >= 2 ? 0.5 / static_cast<double>(*fixed.resolution) : 0.0;
  std::vector<double> r(trials), rq(trials);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    for (std::size_t t = 0; t < trials; ++t) {
      r[t] = per_trial[t][k];
      rq[t] = std::isinf(qs[k]) ? r[t] : std::pow(r[t], qs[k]);
    }
    const McSummary a = summarize(r), b = summarize(rq);
    out.radius.push_back(RadiusEstimate::monte_carlo(a.mean, a.std_error));
    out.moment.push_back(RadiusEstimate::monte_carlo(b.mean, b.std_error));
  }
  return out;
}

}  // namespace randinfo
