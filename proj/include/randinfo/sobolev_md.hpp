#pragma once

// Point-set geometry on the cube [0,1]^d with the (non-periodic) maximum
// metric: separation, covering radius, largest empty ball, and the
// thinning that turns a random set into a quasi-uniform one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/lipschitz.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/radius.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/sobolev1d.hpp"

namespace randinfo {

/// Points in [0,1]^d. Same storage as TorusPointSet; everything in this
/// header uses the non-periodic metric.
using CubePointSet = TorusPointSet;

struct SobolevParamsMD {
  int s = 1;
  int d = 1;
  double p = 2.0;
  double q = 2.0;

  void validate() const {
    detail::require(s >= 1 && d >= 1, "SobolevParamsMD: need s, d >= 1");
    detail::require(p >= 1.0 && q >= 1.0, "SobolevParamsMD: need p, q >= 1");
    detail::require(static_cast<double>(s) > d * reciprocal(p), "SobolevParamsMD: need s > d/p");
  }

  /// s/d - 1/p + 1/q
  double alpha() const { return static_cast<double>(s) / d - reciprocal(p) + reciprocal(q); }
};

inline double dist_cube(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "dist_cube: dimension mismatch");
  double out = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) out = std::max(out, std::abs(x[j] - y[j]));
  return out;
}

/// Minimum pairwise distance; +inf for fewer than two points.
inline double separation(const CubePointSet& P) {
  double best = kInf;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) best = std::min(best, dist_cube(P.point(i), P.point(j)));
  return best;
}

struct CoveringOptions {
  /// Relative target for the grid route, against a lower bound of the value.
  double relative_bound = 0.05;
  double cell_cap = 1e8;
  /// Work cap for the exact route; above it the grid route is used.
  double exact_work_cap = 1e7;
  bool force_grid = false;
};

namespace detail {

// Snap tolerance for breakpoints in the box-union test.
inline constexpr double kCoverEps = 1e-12;

struct Box {
  std::vector<double> lo, hi;
};

// Does the union of closed boxes cover [lo, hi]^(d - axis) in the
// remaining coordinates? Slabs along `axis` thinner than kCoverEps are
// ignored, which makes the test stable at the critical radius.
inline bool boxes_cover(const std::vector<const Box*>& boxes, int axis, int d, double lo, double hi) {
  if (hi - lo <= kCoverEps) return true;
  if (axis == d - 1) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(boxes.size());
    for (const Box* b : boxes) iv.emplace_back(b->lo[axis], b->hi[axis]);
    std::sort(iv.begin(), iv.end());
    double reach = lo;
    for (const auto& [a, b] : iv) {
      if (a > reach + kCoverEps) return false;
      reach = std::max(reach, b);
      if (reach >= hi - kCoverEps) return true;
    }
    return reach >= hi - kCoverEps;
  }
  std::vector<double> cuts{lo, hi};
  for (const Box* b : boxes) {
    if (b->lo[axis] > lo && b->lo[axis] < hi) cuts.push_back(b->lo[axis]);
    if (b->hi[axis] > lo && b->hi[axis] < hi) cuts.push_back(b->hi[axis]);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<const Box*> spanning;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b - a <= kCoverEps) continue;
    spanning.clear();
    for (const Box* bx : boxes)
      if (bx->lo[axis] <= a + kCoverEps && bx->hi[axis] >= b - kCoverEps) spanning.push_back(bx);
    if (spanning.empty() || !boxes_cover(spanning, axis + 1, d, lo, hi)) return false;
  }
  return true;
}

// shrink = false: is [0,1]^d covered by closed boxes of half-width r
// around P (covering radius <= r)? shrink = true: is [r, 1-r]^d covered
// (no empty ball of radius > r fits inside the cube)?
inline bool covered_at(const CubePointSet& P, double r, bool shrink) {
  const int d = P.dim();
  const double lo = shrink ? r : 0.0, hi = shrink ? 1.0 - r : 1.0;
  if (hi - lo <= kCoverEps) return true;
  std::vector<Box> boxes(P.size());
  std::vector<const Box*> ptrs;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto p = P.point(i);
    boxes[i].lo.resize(d);
    boxes[i].hi.resize(d);
    bool hits = true;
    for (int j = 0; j < d; ++j) {
      boxes[i].lo[j] = p[j] - r;
      boxes[i].hi[j] = p[j] + r;
      hits = hits && boxes[i].hi[j] >= lo && boxes[i].lo[j] <= hi;
    }
    if (hits) ptrs.push_back(&boxes[i]);
  }
  if (ptrs.empty()) return false;
  return boxes_cover(ptrs, 0, d, lo, hi);
}

// Every threshold where covered_at can switch: two box faces meet, or a box
// face meets the domain boundary.
inline std::vector<double> critical_radii(const CubePointSet& P, bool shrink) {
  std::vector<double> c;
  const int d = P.dim();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto p = P.point(i);
    for (int j = 0; j < d; ++j) {
      if (shrink) {
        c.push_back(0.5 * p[j]);
        c.push_back(0.5 * (1.0 - p[j]));
      } else {
        c.push_back(p[j]);
        c.push_back(1.0 - p[j]);
      }
      for (std::size_t k = i + 1; k < P.size(); ++k) c.push_back(0.5 * std::abs(p[j] - P.point(k)[j]));
    }
  }
  c.push_back(0.5);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline double exact_threshold(const CubePointSet& P, bool shrink) {
  const std::vector<double> c = critical_radii(P, shrink);
  std::size_t lo = 0, hi = c.size() - 1;  // covered_at(c.back()) always holds
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (covered_at(P, c[mid], shrink))
      hi = mid;
    else
      lo = mid + 1;
  }
  return c[lo];
}

inline double exact_route_work(std::size_t n, int d) {
  const double slabs = std::pow(2.0 * static_cast<double>(n) + 1.0, d - 1);
  const double tests = std::log2(static_cast<double>(d) * n * n + 4.0) + 1.0;
  return slabs * static_cast<double>(n) * tests + static_cast<double>(d) * n * n;
}

// sup over cell midpoints of min(dist(y, P), boundary distance if shrink).
inline double grid_sup(const CubePointSet& P, std::size_t M, bool shrink) {
  const int d = P.dim();
  const std::size_t n = P.size();
  const double h = 1.0 / static_cast<double>(M);
  std::size_t cells = 1;
  for (int j = 0; j < d; ++j) cells *= M;

  // bucket grid for nearest-neighbour queries
  const std::size_t B = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), 1.0 / d))));
  std::size_t nb = 1;
  for (int j = 0; j < d; ++j) nb *= B;
  std::vector<std::vector<std::size_t>> bucket(nb);
  auto cell_of = [&](double x) { return std::min(B - 1, static_cast<std::size_t>(x * static_cast<double>(B))); };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t id = 0;
    for (int j = 0; j < d; ++j) id = id * B + cell_of(P.point(i)[j]);
    bucket[id].push_back(i);
  }

  std::vector<std::size_t> idx(d, 0), home(d);
  std::vector<double> y(d);
  std::vector<long> off(d);
  double best_sup = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double bound = kInf;
    for (int j = 0; j < d; ++j) {
      y[j] = (static_cast<double>(idx[j]) + 0.5) * h;
      home[j] = cell_of(y[j]);
      if (shrink) bound = std::min(bound, std::min(y[j], 1.0 - y[j]));
    }
    double best = bound;
    // rings of buckets around home; ring k lies at distance >= (k-1)/B
    for (std::size_t ring = 0; ring <= B; ++ring) {
      if (ring >= 1 && static_cast<double>(ring - 1) / static_cast<double>(B) >= best) break;
      // enumerate buckets with Chebyshev offset exactly `ring`
      std::fill(off.begin(), off.end(), -static_cast<long>(ring));
      for (;;) {
        long linf = 0;
        bool inside = true;
        std::size_t id = 0;
        for (int j = 0; j < d; ++j) {
          linf = std::max(linf, std::labs(off[j]));
          const long b = static_cast<long>(home[j]) + off[j];
          if (b < 0 || b >= static_cast<long>(B)) inside = false;
          id = id * B + static_cast<std::size_t>(std::max(0L, b));
        }
        if (inside && linf == static_cast<long>(ring))
          for (std::size_t i : bucket[id]) best = std::min(best, dist_cube(y, P.point(i)));
        int j = d - 1;
        for (; j >= 0; --j) {
          if (++off[j] <= static_cast<long>(ring)) break;
          off[j] = -static_cast<long>(ring);
        }
        if (j < 0) break;
      }
    }
    best_sup = std::max(best_sup, best);
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < M) break;
      idx[j] = 0;
    }
  }
  return best_sup;
}

inline RadiusEstimate cube_sup(const CubePointSet& P, bool shrink, double lower_bound, const CoveringOptions& opt) {
  const int d = P.dim();
  const std::size_t n = P.size();
  if (!opt.force_grid && (d == 1 || exact_route_work(n, d) <= opt.exact_work_cap))
    return RadiusEstimate::exact(exact_threshold(P, shrink));
  // A coarse pass gives a grid sup, itself a lower bound of the value, which
  // is usually much sharper than the a-priori one.
  const auto coarse = static_cast<std::size_t>(std::ceil(2.0 * std::pow(static_cast<double>(n), 1.0 / d))) + 1;
  if (std::pow(static_cast<double>(coarse), d) <= opt.cell_cap)
    lower_bound = std::max(lower_bound, grid_sup(P, coarse, shrink));
  const double m = std::ceil(1.0 / (2.0 * opt.relative_bound * lower_bound));
  const auto M = static_cast<std::size_t>(std::max(1.0, m));
  if (std::pow(static_cast<double>(M), d) > opt.cell_cap)
    throw ResourceGuard("covering radius: " + std::to_string(M) + "^" + std::to_string(d) +
                        " grid cells exceed the cap");
  return RadiusEstimate::grid(grid_sup(P, M, shrink), 0.5 / static_cast<double>(M));
}

}  // namespace detail

/// max_{y in [0,1]^d} min_i ||y - p_i||_inf. Exact (breakpoint search with
/// a box-union coverage test) when affordable, otherwise the max over cell
/// midpoints of an M^d grid, which is within h/2 below the true value.
inline RadiusEstimate covering_radius(const CubePointSet& P, const CoveringOptions& opt = {}) {
  detail::require(!P.empty(), "covering_radius: empty point set");
  if (P.dim() == 1) {
    std::vector<double> xs(P.coords().begin(), P.coords().end());
    std::sort(xs.begin(), xs.end());
    double r = std::max(xs.front(), 1.0 - xs.back());
    for (std::size_t i = 1; i < xs.size(); ++i) r = std::max(r, 0.5 * (xs[i] - xs[i - 1]));
    return RadiusEstimate::exact(r);
  }
  // n boxes of side 2r cover the unit cube only if n (2r)^d >= 1
  const double lb = 0.5 * std::pow(static_cast<double>(P.size()), -1.0 / P.dim());
  return detail::cube_sup(P, false, lb, opt);
}

/// Radius of the largest ell_inf ball inside [0,1]^d containing no point of
/// P in its interior. In d = 1 this is half the largest spacing.
inline RadiusEstimate largest_empty_ball(const CubePointSet& P, const CoveringOptions& opt = {}) {
  if (P.empty()) return RadiusEstimate::exact(0.5);
  if (P.dim() == 1) {
    std::vector<double> xs(P.coords().begin(), P.coords().end());
    return RadiusEstimate::exact(0.5 * max_gap(spacings(SortedPointSet1D(std::move(xs)))));
  }
  // with k = floor(n^(1/d)) + 1, one of the k^d subcubes is empty
  const double k = std::floor(std::pow(static_cast<double>(P.size()), 1.0 / P.dim())) + 1.0;
  return detail::cube_sup(P, true, 0.5 / k, opt);
}

struct MeshStats {
  double separation = 0.0;
  double covering = 0.0;
  double mesh_ratio = 0.0;
  RadiusEstimate::Kind covering_kind = RadiusEstimate::Kind::exact;
  std::optional<double> covering_error_bound;
  bool duplicates = false;  // separation 0; mesh_ratio is then +inf
};

inline MeshStats mesh_stats(const CubePointSet& P, const CoveringOptions& opt = {}) {
  detail::require(P.size() >= 2, "mesh_stats: need at least two points");
  MeshStats m;
  m.separation = separation(P);
  const RadiusEstimate c = covering_radius(P, opt);
  m.covering = c.value;
  m.covering_kind = c.kind;
  m.covering_error_bound = c.grid_error_bound;
  m.duplicates = m.separation == 0.0;
  m.mesh_ratio = m.duplicates ? kInf : m.covering / m.separation;
  return m;
}

struct ThinningResult {
  CubePointSet subset;
  std::vector<std::size_t> indices;  // into the input set, one per large cube
  std::size_t m = 0;
  std::size_t ell = 0;  // (3m)^d small cubes
};

/// Largest m >= 1 with n >= (alpha+1) l log l, l = (3m)^d; 0 if none.
inline std::size_t thinning_level(std::size_t n, int d, double alpha) {
  detail::require(alpha > 0.0, "thinning_level: alpha must be > 0");
  detail::require(d >= 1, "thinning_level: d must be >= 1");
  std::size_t best = 0;
  for (std::size_t m = 1;; ++m) {
    const double l = std::pow(3.0 * static_cast<double>(m), d);
    if ((alpha + 1.0) * l * std::log(l) > static_cast<double>(n)) break;
    best = m;
  }
  return best;
}

/// Cut [0,1]^d into m^d cubes of side 1/m and each of those into 3^d
/// small cubes; keep from every large cube the lowest-index point lying in
/// its central small cube. Cells are half-open, the last one closed. Fails
/// (nullopt) when m would be 0 or some central small cube is empty.
inline std::optional<ThinningResult> thin_to_quasi_uniform(const CubePointSet& P, double alpha) {
  const int d = P.dim();
  const std::size_t m = thinning_level(P.size(), d, alpha);
  if (m == 0) return std::nullopt;
  const std::size_t k3 = 3 * m;
  std::size_t large = 1;
  for (int j = 0; j < d; ++j) large *= m;
  std::vector<std::size_t> pick(large, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto p = P.point(i);
    std::size_t id = 0;
    bool central = true;
    for (int j = 0; j < d && central; ++j) {
      const std::size_t c = std::min(k3 - 1, static_cast<std::size_t>(p[j] * static_cast<double>(k3)));
      central = c % 3 == 1;
      id = id * m + c / 3;
    }
    if (central && pick[id] == std::numeric_limits<std::size_t>::max()) pick[id] = i;
  }
  ThinningResult out{CubePointSet(d), {}, m, 1};
  for (int j = 0; j < d; ++j) out.ell *= k3;
  for (std::size_t id = 0; id < large; ++id) {
    if (pick[id] == std::numeric_limits<std::size_t>::max()) return std::nullopt;
    out.indices.push_back(pick[id]);
    out.subset.push_back(P.point(pick[id]));
  }
  return out;
}

/// Reference rate curves: optimal information n^(-s/d + (1/p - 1/q)_+);
/// random information with p <= q (n / log n)^(-alpha). For random
/// information with p > q only a conjecture exists and this throws.
inline double rate_surrogate_md(double n, const SobolevParamsMD& pr, bool random) {
  pr.validate();
  detail::require(n >= 2.0, "rate_surrogate_md: n must be >= 2");
  if (!random)
    return std::pow(n, -static_cast<double>(pr.s) / pr.d + std::max(0.0, reciprocal(pr.p) - reciprocal(pr.q)));
  if (pr.p > pr.q) throw InvalidArgument("rate_surrogate_md: random information with p > q is conjecture only");
  return std::pow(n / std::log(n), -pr.alpha());
}

struct GapWitness {
  RadiusEstimate estimate;        // Monte Carlo mean and standard error
  double grid_error_bound = 0.0;  // largest per-trial bound; 0 when exact
};

/// Monte Carlo mean of the largest empty ell_inf ball among n uniform
/// points in [0,1]^d. Trial t draws from trial_stream(rng, t).
inline GapWitness empirical_gap_witness(std::size_t n, int d, std::size_t trials, const RngStream& rng,
                                            const CoveringOptions& opt = {}, unsigned workers = 0) {
  detail::require(trials >= 100, "empirical_gap_witness: trials must be >= 100");
  detail::require(d >= 1, "empirical_gap_witness: d must be >= 1");
  double bound = 0.0;
  const auto v = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream s = trial_stream(rng, t);
        const RadiusEstimate e = largest_empty_ball(sample_uniform_torus(n, d, s), opt);
        return std::pair<double, double>(e.value, e.grid_error_bound.value_or(0.0));
      },
      workers);
  std::vector<double> vals;
  for (const auto& [x, b] : v) {
    vals.push_back(x);
    bound = std::max(bound, b);
  }
  const McSummary s = summarize(vals);
  return {RadiusEstimate::monte_carlo(s.mean, s.std_error), bound};
}

struct ThinningStats {
  double success_rate = 0.0;
  double std_error = 0.0;
  std::size_t m = 0;
  std::size_t ell = 0;
  double guarantee = 0.0;        // 1 - l^-alpha
  double max_mesh_ratio = 0.0;   // over successful trials
  std::size_t successes = 0;
};

/// Frequency with which thin_to_quasi_uniform succeeds on n uniform points.
/// Throws InvariantViolation if a successful subset has mesh ratio > 1.
inline ThinningStats thinning_experiment(std::size_t n, int d, double alpha, std::size_t trials,
                                         const RngStream& rng, unsigned workers = 0) {
  detail::require(trials >= 2, "thinning_experiment: trials must be >= 2");
  const std::size_t m = thinning_level(n, d, alpha);
  detail::require(m >= 1, "thinning_experiment: n too small for any thinning level");
  const auto v = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream s = trial_stream(rng, t);
        const auto r = thin_to_quasi_uniform(sample_uniform_torus(n, d, s), alpha);
        if (!r) return -1.0;
        return r->subset.size() >= 2 ? mesh_stats(r->subset).mesh_ratio : 0.0;
      },
      workers);
  ThinningStats out;
  out.m = m;
  out.ell = static_cast<std::size_t>(std::llround(std::pow(3.0 * static_cast<double>(m), d)));
  out.guarantee = 1.0 - std::pow(static_cast<double>(out.ell), -alpha);
  std::vector<double> hit(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    hit[t] = v[t] >= 0.0 ? 1.0 : 0.0;
    if (v[t] >= 0.0) {
      ++out.successes;
      out.max_mesh_ratio = std::max(out.max_mesh_ratio, v[t]);
    }
  }
  if (out.max_mesh_ratio > 1.0)
    throw InvariantViolation("thinning_experiment: mesh ratio " + std::to_string(out.max_mesh_ratio) + " > 1");
  const McSummary s = summarize(hit);
  out.success_rate = s.mean;
  out.std_error = s.std_error;
  return out;
}

}  // namespace randinfo
