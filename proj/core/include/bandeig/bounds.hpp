#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/inertia.hpp"
#include "bandeig/kmeans1d.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

struct BoundConfig {
  double alpha = 1e-3;  // relative margin above the nev-th prior value
  double beta = 1e-3;   // relative margin below the smallest prior value
  Index nev = 0;

  void validate() const {
    if (std::abs(alpha) > 1e-1 || std::abs(beta) > 1e-1)
      throw std::invalid_argument("BoundConfig: |alpha|, |beta| <= 0.1 required");
  }
};

struct BoundAdjustmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// d shifted outward by relative margin a; handles negative and zero d.
inline double outward(double d, double a, double scale, int direction) {
  if (d == 0.0) return direction * a * scale;
  const double m = std::abs(a) * std::abs(d);
  return d + direction * m;
}

}  // namespace detail

/// Global enclosure [b0, bk] for the smallest nev eigenvalues, seeded from
/// prior values and verified/adjusted with inertia counts: bk must have at
/// least nev eigenvalues below it, b0 none.
template <class S>
std::pair<double, double> compute_bounds(const std::vector<double>& prior_values, Index nev,
                                         const BoundConfig& cfg, const BandedHermitian<S>& D) {
  cfg.validate();
  if (static_cast<Index>(prior_values.size()) < nev || nev < 1)
    throw std::invalid_argument("compute_bounds: need at least nev prior values");
  const double d1 = prior_values.front();
  const double dnev = prior_values[nev - 1];
  const double scale = std::max({std::abs(d1), std::abs(dnev), 1.0});

  double a = std::abs(cfg.alpha);
  double bk = detail::outward(dnev, a, scale, +1);
  int attempts = 0;
  while (inertia_robust(D, bk).n_neg < nev) {
    if (++attempts > 8)
      throw BoundAdjustmentError(
          "compute_bounds: upper bound adjustment budget exhausted; "
          "fall back to a full-interval solve");
    a = a == 0.0 ? 1e-3 : 2.0 * a;
    // retries widen relative to the spectrum scale: a margin proportional to
    // |dnev| alone stalls when the nev-th value sits near zero
    bk = dnev + a * scale;
  }

  double b = std::abs(cfg.beta);
  double b0 = detail::outward(d1, b, scale, -1);
  attempts = 0;
  while (inertia_robust(D, b0).n_neg > 0) {
    if (++attempts > 8)
      throw BoundAdjustmentError(
          "compute_bounds: lower bound adjustment budget exhausted; "
          "fall back to a full-interval solve");
    b = b == 0.0 ? 1e-3 : 2.0 * b;
    b0 = d1 - b * scale;
  }
  return {b0, bk};
}

/// Cold-start partition: recursively bisect [b0, bk] with inertia counts
/// until every slice holds at most ceil(nev / k * 1.5) eigenvalues.
template <class S>
SpectrumPartition inertia_bisection_partition(const BandedHermitian<S>& D, double b0, double bk,
                                              Index k) {
  if (!(b0 < bk)) throw std::invalid_argument("inertia_bisection_partition: b0 < bk required");
  const Index below_b0 = inertia_robust(D, b0).n_neg;
  const Index below_bk = inertia_robust(D, bk).n_neg;
  const Index nev = below_bk - below_b0;
  const Index cap = std::max<Index>(
      1, static_cast<Index>(std::ceil(static_cast<double>(nev) / static_cast<double>(k) * 1.5)));

  struct Interval { double lo, hi; Index count; };
  std::vector<Interval> done, todo{{b0, bk, nev}};
  const double min_width = 1e-10 * (bk - b0);
  while (!todo.empty()) {
    Interval iv = todo.back();
    todo.pop_back();
    if (iv.count <= cap || iv.hi - iv.lo <= min_width) {
      done.push_back(iv);
      continue;
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    const Index below_mid = inertia_robust(D, mid).n_neg;
    const Index left = below_mid - inertia_robust(D, iv.lo).n_neg;
    todo.push_back({mid, iv.hi, iv.count - left});
    todo.push_back({iv.lo, mid, left});
  }
  std::sort(done.begin(), done.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });

  // coalesce: bisection can leave empty or tiny intervals; merge neighbors
  // while the combined count stays within the cap so no slice solve is wasted
  std::vector<Interval> merged;
  for (const auto& iv : done) {
    if (!merged.empty() && merged.back().count + iv.count <= cap) {
      merged.back().hi = iv.hi;
      merged.back().count += iv.count;
    } else {
      merged.push_back(iv);
    }
  }
  done = std::move(merged);

  SpectrumPartition part;
  part.source = SpectrumPartition::Source::inertia_bisection;
  part.k = static_cast<Index>(done.size());
  part.boundaries.push_back(done.front().lo);
  for (const auto& iv : done) {
    part.boundaries.push_back(iv.hi);
    part.expected_counts.push_back(iv.count);
  }
  part.check_invariants();
  return part;
}

namespace detail {

/// Smallest shift with at least m eigenvalues below it (i.e. the m-th
/// eigenvalue), located by bisection.
template <class S>
double transition_point(const BandedHermitian<S>& D, Index m, double lo, double hi) {
  const double width_tol = 1e-13 * std::max(1.0, hi - lo);
  for (int it = 0; it < 80 && hi - lo > width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inertia_robust(D, mid).n_neg >= m)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace detail

/// Cold-start upper bound: a shift with at least `count` eigenvalues below it
/// that sits in the middle of an eigenvalue gap of width >= kClusterGap, so
/// the slice boundary does not graze (or split) a cluster. [lo, hi] must
/// enclose the spectrum.
template <class S>
double gap_shift_above(const BandedHermitian<S>& D, Index count, double lo, double hi) {
  const double pad = 1e-3 * std::max(1.0, hi - lo);
  for (Index j = count; j < D.n(); ++j) {
    const double t_lo = detail::transition_point(D, j, lo, hi);
    const double t_hi = detail::transition_point(D, j + 1, lo, hi);
    if (t_hi - t_lo >= kClusterGap) return 0.5 * (t_lo + t_hi);
  }
  return hi + pad;  // count reaches n (or the tail is one big cluster)
}

}  // namespace bandeig
