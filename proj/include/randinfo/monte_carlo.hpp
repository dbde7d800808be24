#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace randinfo {

/// Mean and standard error of a Monte Carlo sample.
struct McSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Two-pass summary in index order, so the result does not depend on how
/// the samples were produced.
namespace detail {

// Neumaier summation; plain accumulation drifts by ~count * eps over 1e5+ trials.
template <class F>
double compensated_sum(std::span<const double> xs, F f) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double v = f(x), t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

inline McSummary summarize(std::span<const double> xs) {
  McSummary out;
  out.count = xs.size();
  if (xs.empty()) return out;
  out.mean = detail::compensated_sum(xs, [](double x) { return x; }) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    const double mu = out.mean;
    const double ss = detail::compensated_sum(xs, [mu](double x) { return (x - mu) * (x - mu); });
    out.variance = ss / static_cast<double>(xs.size() - 1);
    out.std_error = std::sqrt(out.variance / static_cast<double>(xs.size()));
  }
  return out;
}

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Evaluates fn(0), ..., fn(trials-1) and returns the results in index
/// order. Work is split into contiguous chunks over `workers` threads; the
/// first exception (by chunk order) is rethrown after all threads join.
template <class Fn>
auto run_trials(std::size_t trials, Fn&& fn, unsigned workers = 0)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(trials, 1)));

  std::vector<std::optional<R>> slots(trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) slots[t].emplace(fn(t));
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        try {
          for (std::size_t t = lo; t < hi; ++t) slots[t].emplace(fn(t));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<R> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace randinfo
