#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bandeig/accuracy.hpp"
#include "bandeig/band_reduction.hpp"
#include "bandeig/banded_hermitian.hpp"
#include "bandeig/bounds.hpp"
#include "bandeig/contour.hpp"
#include "bandeig/dense_hermitian.hpp"
#include "bandeig/feast.hpp"
#include "bandeig/kmeans1d.hpp"
#include "bandeig/layout/redistribute.hpp"
#include "bandeig/parallel.hpp"
#include "bandeig/validate.hpp"

namespace bandeig {

struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_, const std::string& what)
      : std::runtime_error("[" + stage_ + "] " + what), stage(std::move(stage_)) {}
};

struct PipelineConfig {
  Index nev = 0;        // number of smallest eigenpairs wanted
  Index k = 1;          // spectrum slices
  Index n_bw = 64;      // semibandwidth after reduction
  Index n_b = 64;       // block size for the 2D block-cyclic layout
  Index n_e = 16;       // contour quadrature nodes (full circle, even)
  double eps = 1e-11;   // slice residual tolerance, relative to ||D||_F
  Index max_iter = 30;  // filter passes per slice
  Index grid_p = 2, grid_q = 2;
  bool use_grid = true;  // exercise the distributed-layout data paths
  double alpha = 1e-3, beta = 1e-3;
  std::uint64_t seed = 7;

  void validate(Index n) const {
    if (nev < 1 || nev > n) throw std::invalid_argument("PipelineConfig: 1 <= nev <= n required");
    if (k < 1) throw std::invalid_argument("PipelineConfig: k >= 1 required");
    if (n_bw < 1) throw std::invalid_argument("PipelineConfig: n_bw >= 1 required");
  }
};

/// Carry-over between successive solves of slowly varying matrices: the
/// previous banded-problem eigenpairs seed the next partition and subspaces.
template <class S>
struct ScfState {
  Index step = 0;
  std::vector<double> prev_values;  // ascending, banded problem
  MatrixX<S> prev_vectors;          // banded basis, matching columns
};

template <class S>
struct PipelineResult {
  EigenPairs<S> pairs;  // original basis, ascending, nev columns
  AccuracyReport accuracy;
  SpectrumPartition partition;
  std::vector<Index> slice_found;       // pairs reported per slice
  std::vector<Index> slice_iterations;  // filter passes per slice
  Index recovery_rounds = 0;
  Index inertia_calls = 0;
  bool warm_started = false;
  TrafficReport traffic;  // all simulated-layout phases, in order
};

namespace detail {

/// Per-slice count of ascending values against the partition boundaries
/// (interior slices half-open above, last slice closed).
inline std::vector<Index> counts_in_slices(const VectorX<double>& values,
                                           const SpectrumPartition& part) {
  std::vector<Index> counts(part.k, 0);
  for (Index j = 0; j < values.size(); ++j) {
    const double v = values(j);
    for (Index i = 0; i < part.k; ++i) {
      const bool upper_ok = i + 1 == part.k ? v <= part.boundaries[i + 1] : v < part.boundaries[i + 1];
      if (v >= part.boundaries[i] && upper_ok) {
        ++counts[i];
        break;
      }
    }
  }
  return counts;
}

/// Contiguous slice counts folded onto a rank vector: slice i lands on rank
/// floor(i * ranks / k), which keeps each rank's columns consecutive.
inline std::vector<Index> slice_counts_to_ranks(const std::vector<Index>& slice_counts,
                                                Index ranks) {
  std::vector<Index> counts(ranks, 0);
  const Index k = static_cast<Index>(slice_counts.size());
  for (Index i = 0; i < k; ++i) counts[i * ranks / k] += slice_counts[i];
  return counts;
}

}  // namespace detail

/// Full solve of one matrix: band reduction, slice partition (warm from the
/// previous step's values or cold from inertia bisection), contour-filtered
/// slice solves, count validation with bounded recovery, backtransform, and —
/// when enabled — the simulated block-cyclic data movement around the banded
/// stage, with its traffic accounted.
template <class S>
PipelineResult<S> solve_one(const DenseHermitian<S>& A, const PipelineConfig& cfg,
                            ScfState<S>* state = nullptr) {
  const Index n = A.n();
  cfg.validate(n);
  PipelineResult<S> result;

  if (n < 2) throw PipelineError("ingest", "matrix order >= 2 required");

  // stage 1: dense -> banded
  std::optional<std::pair<BandedHermitian<S>, BandReductionTransform<S>>> reduced;
  try {
    reduced.emplace(band_reduce(A, std::min<Index>(cfg.n_bw, n - 1)));
  } catch (const std::exception& e) {
    throw PipelineError("band-reduction", e.what());
  }
  BandedHermitian<S>& D = reduced->first;
  BandReductionTransform<S>& transform = reduced->second;

  ProcessGrid grid(cfg.grid_p, cfg.grid_q);
  if (cfg.use_grid) {
    // the banded matrix starts block-cyclically distributed and every rank
    // assembles the replicated compact band it will factor
    auto dist = BlockCyclicLayout<S>::scatter(D.to_dense().matrix(), cfg.n_b, cfg.n_b, grid);
    auto [gathered, traffic] = gather_band_to_compact(dist, D.semibandwidth());
    for (const auto& g : gathered)
      if ((g.bands() - D.bands()).template lpNorm<Eigen::Infinity>() != 0.0)
        throw PipelineError("band-gather", "replicated band disagrees with reference");
    for (auto& ph : traffic.phases) result.traffic.phases.push_back(std::move(ph));
  }

  // stage 2a: slice partition
  const bool warm = state && state->step > 0 &&
                    static_cast<Index>(state->prev_values.size()) >= cfg.nev;
  result.warm_started = warm;
  SpectrumPartition part;
  try {
    if (warm) {
      std::vector<double> priors(state->prev_values.begin(),
                                 state->prev_values.begin() + cfg.nev);
      part = kmeans1d(priors, std::min<Index>(cfg.k, cfg.nev));
      BoundConfig bc{cfg.alpha, cfg.beta, cfg.nev};
      auto [b0, bk] = compute_bounds(priors, cfg.nev, bc, D);
      part.boundaries.front() = b0;
      part.boundaries.back() = bk;
      part.check_invariants();
    } else {
      auto [glo, ghi] = D.gershgorin_bounds();
      const double pad = 1e-3 * std::max(1.0, ghi - glo);
      const double b0 = glo - pad;
      const double bk = gap_shift_above(D, cfg.nev, glo - pad, ghi + pad);
      part = inertia_bisection_partition(D, b0, bk, cfg.k);
    }
  } catch (const std::exception& e) {
    throw PipelineError("partition", e.what());
  }
  result.partition = part;

  // stage 2b: slice solves (independent; scheduled across workers)
  const Index k = part.k;
  std::vector<SliceResult<S>> slices(k);
  auto run_slice = [&](Index i, Index m0_override, int round) {
    ContourQuadrature q = make_contour(part.boundaries[i], part.boundaries[i + 1], cfg.n_e);
    SliceSolveConfig<S> scfg;
    scfg.m_i = part.expected_counts[i];
    // slices converge one decade below the reported tolerance so the merged
    // set keeps its cross-slice orthogonality margin
    scfg.tol = 0.1 * cfg.eps;
    scfg.max_iter = cfg.max_iter;
    scfg.include_upper = (i + 1 == k);
    scfg.seed = cfg.seed + 1000 * static_cast<std::uint64_t>(round) + static_cast<std::uint64_t>(i);
    if (warm) {
      // previous vectors whose values fell in this slice seed the subspace
      std::vector<Index> cols;
      for (Index j = 0; j < cfg.nev; ++j) {
        const double v = state->prev_values[j];
        const bool upper_ok = scfg.include_upper ? v <= part.boundaries[i + 1]
                                                 : v < part.boundaries[i + 1];
        if (v >= part.boundaries[i] && upper_ok) cols.push_back(j);
      }
      if (!cols.empty()) {
        MatrixX<S> X0(n, static_cast<Index>(cols.size()));
        for (size_t t = 0; t < cols.size(); ++t) X0.col(t) = state->prev_vectors.col(cols[t]);
        scfg.X0 = std::move(X0);
      }
    }
    Index m0 = m0_override > 0 ? m0_override : oversized_subspace(scfg.m_i);
    if (scfg.X0) m0 = std::max(m0, scfg.X0->cols());
    scfg.m0 = std::min(m0, n);
    return feast_slice(D, q, scfg);
  };
  try {
    parallel_for(static_cast<size_t>(k),
                 [&](size_t i) { slices[i] = run_slice(static_cast<Index>(i), -1, 0); });
  } catch (const std::exception& e) {
    throw PipelineError("slice-solve", e.what());
  }

  // stage 2c: count validation and bounded recovery
  ValidationOutcome<S> outcome;
  try {
    outcome = validate_counts<S>(slices, cfg.nev, D, part, [&](Index i, Index m0, int round) {
      return run_slice(i, m0, round);
    });
  } catch (const std::exception& e) {
    throw PipelineError("validation", e.what());
  }
  result.recovery_rounds = outcome.recovery_rounds;
  result.inertia_calls = outcome.inertia_calls;
  if (!outcome.ok) throw PipelineError("validation", outcome.message);
  for (const auto& s : slices) {
    result.slice_found.push_back(s.pairs.count());
    result.slice_iterations.push_back(s.iterations);
  }

  EigenPairs<S> banded_pairs = outcome.accepted;

  if (cfg.use_grid) {
    // the accepted vectors sit slice-owner-wise in irregular 1D blocks and
    // must reach the 2D block-cyclic layout of the backtransform (and back)
    auto slice_counts = detail::counts_in_slices(banded_pairs.values, part);
    auto rank_counts = detail::slice_counts_to_ranks(slice_counts, grid.ranks());
    // validation may have trimmed pairs outside every slice; patch the tail
    Index accounted = 0;
    for (Index c : rank_counts) accounted += c;
    if (accounted != banded_pairs.count()) rank_counts.back() += banded_pairs.count() - accounted;

    auto X1 = Irregular1DLayout<S>::scatter(banded_pairs.vectors, rank_counts);
    auto [X2, fwd] = redistribute_1d_to_2d(X1, cfg.n_b, cfg.n_b, grid);
    if ((X2.gather() - banded_pairs.vectors).norm() != 0.0)
      throw PipelineError("redistribute", "1d->2d round trip mismatch");
    auto [X1b, bwd] = redistribute_2d_to_1d(X2, rank_counts);
    if ((X1b.gather() - banded_pairs.vectors).norm() != 0.0)
      throw PipelineError("redistribute", "2d->1d round trip mismatch");
    for (auto& ph : fwd.phases) result.traffic.phases.push_back(std::move(ph));
    for (auto& ph : bwd.phases) result.traffic.phases.push_back(std::move(ph));
  }

  // stage 3: backtransform to the original basis
  try {
    result.pairs = backtransform(transform, banded_pairs);
  } catch (const std::exception& e) {
    throw PipelineError("backtransform", e.what());
  }
  result.accuracy = accuracy_report(A, result.pairs);

  if (state) {
    state->step += 1;
    state->prev_values.assign(banded_pairs.values.data(),
                              banded_pairs.values.data() + banded_pairs.count());
    state->prev_vectors = banded_pairs.vectors;
  }
  return result;
}

/// Drives a sequence of slowly varying matrices through solve_one with shared
/// warm-start state: step 0 cold, later steps seeded from the previous step.
template <class S>
std::vector<PipelineResult<S>> solve_sequence(const std::vector<DenseHermitian<S>>& steps,
                                              const PipelineConfig& cfg) {
  ScfState<S> state;
  std::vector<PipelineResult<S>> results;
  results.reserve(steps.size());
  for (const auto& A : steps) results.push_back(solve_one(A, cfg, &state));
  return results;
}

}  // namespace bandeig
