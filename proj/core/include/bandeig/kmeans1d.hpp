#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandeig/scalar.hpp"

namespace bandeig {

/// Ordered slice boundaries b_0 < ... < b_k with per-slice expected counts.
struct SpectrumPartition {
  enum class Source { kmeans_from_priors, inertia_bisection };

  Index k = 0;
  std::vector<double> boundaries;      // size k + 1
  std::vector<Index> expected_counts;  // size k
  Source source = Source::kmeans_from_priors;
  bool degenerate = false;  // fewer nonempty groups than requested

  void check_invariants() const {
    if (boundaries.size() != static_cast<size_t>(k) + 1 ||
        expected_counts.size() != static_cast<size_t>(k))
      throw std::logic_error("SpectrumPartition: inconsistent sizes");
    for (Index i = 0; i + 1 <= k; ++i)
      if (!(boundaries[i] < boundaries[i + 1]))
        throw std::logic_error("SpectrumPartition: boundaries not strictly increasing");
  }
};

/// Minimum eigenvalue separation that must stay inside one slice.
inline constexpr double kClusterGap = 1e-7;

struct KMeansStats {
  Index iterations = 0;
  std::vector<Index> ops_per_iteration;  // flops + comparisons, per Lloyd pass
};

/// Simplified 1D k-means over an ascending value array. Groups stay
/// contiguous; initialization is the balanced contiguous split; each Lloyd
/// pass recomputes centroids from prefix sums and walks only the group
/// boundaries. A post-pass moves any boundary that would split values closer
/// than kClusterGap to the nearest adequate gap, merging slices when no such
/// gap exists.
inline SpectrumPartition kmeans1d(const std::vector<double>& values, Index k,
                                  Index max_iter = 100, KMeansStats* stats = nullptr) {
  const Index n = static_cast<Index>(values.size());
  if (k < 1) throw std::invalid_argument("kmeans1d: k >= 1 required");
  if (k > n) throw std::invalid_argument("kmeans1d: k <= len(values) required");
  for (Index i = 1; i < n; ++i)
    if (values[i] < values[i - 1]) throw std::invalid_argument("kmeans1d: values must be ascending");

  // prefix sums, computed once
  std::vector<double> prefix(n + 1, 0.0);
  for (Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];

  // balanced init: (n - floor(n/k)*k) groups get floor(n/k)+1 points
  std::vector<Index> t(k + 1, 0);
  {
    const Index base = n / k, extra = n - base * k;
    for (Index i = 0; i < k; ++i) t[i + 1] = t[i] + base + (i < extra ? 1 : 0);
  }

  if (stats) *stats = KMeansStats{};
  std::vector<double> centroid(k);
  for (Index iter = 0; iter < max_iter; ++iter) {
    Index ops = 0;
    for (Index i = 0; i < k; ++i) {
      centroid[i] = (prefix[t[i + 1]] - prefix[t[i]]) / static_cast<double>(t[i + 1] - t[i]);
      ops += 2;
    }
    bool moved = false;
    for (Index i = 1; i < k; ++i) {
      const double thr = 0.5 * (centroid[i - 1] + centroid[i]);
      ops += 2;
      Index ti = t[i];
      // walk toward the threshold, staying within the adjacent groups
      while (ti > t[i - 1] + 1 && (++ops, values[ti - 1] > thr)) --ti;
      while (ti < t[i + 1] - 1 && (++ops, values[ti] <= thr)) ++ti;
      if (ti != t[i]) {
        t[i] = ti;
        moved = true;
      }
    }
    if (stats) {
      ++stats->iterations;
      stats->ops_per_iteration.push_back(ops);
    }
    if (!moved) break;
  }

  // cluster-safety post-pass: no boundary inside a gap smaller than kClusterGap
  std::vector<Index> cuts(t.begin() + 1, t.end() - 1);
  bool merged = false;
  for (size_t c = 0; c < cuts.size();) {
    const Index i = cuts[c];
    if (values[i] - values[i - 1] >= kClusterGap) { ++c; continue; }
    const Index lo = c > 0 ? cuts[c - 1] + 1 : 1;
    const Index hi = c + 1 < cuts.size() ? cuts[c + 1] - 1 : n - 1;
    Index best = -1;
    for (Index d = 1; d <= hi - lo; ++d) {
      if (i - d >= lo && values[i - d] - values[i - d - 1] >= kClusterGap) { best = i - d; break; }
      if (i + d <= hi && values[i + d] - values[i + d - 1] >= kClusterGap) { best = i + d; break; }
    }
    if (best < 0) {
      cuts.erase(cuts.begin() + c);  // no adequate gap: merge the two slices
      merged = true;
    } else {
      cuts[c] = best;
      ++c;
    }
  }

  SpectrumPartition part;
  part.source = SpectrumPartition::Source::kmeans_from_priors;
  part.degenerate = merged;
  part.k = static_cast<Index>(cuts.size()) + 1;
  const double span = std::max(values[n - 1] - values[0], 1.0);
  part.boundaries.push_back(values[0] - 1e-3 * span);
  for (Index i : cuts) part.boundaries.push_back(0.5 * (values[i - 1] + values[i]));
  part.boundaries.push_back(values[n - 1] + 1e-3 * span);
  Index prev = 0;
  for (Index i : cuts) {
    part.expected_counts.push_back(i - prev);
    prev = i;
  }
  part.expected_counts.push_back(n - prev);
  part.check_invariants();
  return part;
}

}  // namespace bandeig
