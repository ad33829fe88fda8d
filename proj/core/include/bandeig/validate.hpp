#pragma once

#include <sstream>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/eigen_pairs.hpp"
#include "bandeig/feast.hpp"
#include "bandeig/inertia.hpp"
#include "bandeig/kmeans1d.hpp"

namespace bandeig {

template <class S>
struct ValidationOutcome {
  EigenPairs<S> accepted;  // the nev smallest pairs, ascending
  Index recovery_rounds = 0;
  Index inertia_calls = 0;
  bool ok = false;
  std::string message;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Checks that the slices collectively produced nev pairs. On a deficit, the
/// exact per-slice counts are established with inertia at the slice
/// boundaries and deficient or unconverged slices are rerun through the
/// supplied callback with an enlarged subspace; at most two recovery rounds.
///
/// rerun(slice_index, m0, round) must redo one slice and return its result.
template <class S, class Rerun>
ValidationOutcome<S> validate_counts(std::vector<SliceResult<S>>& results, Index nev,
                                     const BandedHermitian<S>& D, const SpectrumPartition& part,
                                     Rerun&& rerun) {
  ValidationOutcome<S> out;
  auto total_found = [&]() {
    Index t = 0;
    for (const auto& r : results) t += r.pairs.count();
    return t;
  };

  for (int round = 1; round <= 2 && total_found() < nev; ++round) {
    out.recovery_rounds = round;
    // exact counts per slice from boundary inertia (one factorization per boundary)
    std::vector<Index> below(part.boundaries.size());
    for (size_t b = 0; b < part.boundaries.size(); ++b) {
      below[b] = inertia_robust(D, part.boundaries[b]).n_neg;
      ++out.inertia_calls;
    }
    for (Index i = 0; i < part.k; ++i) {
      const Index exact = below[i + 1] - below[i];
      if (results[i].pairs.count() >= exact && results[i].converged) continue;
      const Index m0 = oversized_subspace(exact) + 5 * (round - 1);
      results[i] = rerun(i, std::min<Index>(m0, D.n()), round);
    }
  }

  const Index nev0 = total_found();
  if (nev0 < nev) {
    std::ostringstream msg;
    msg << "validation: only " << nev0 << " of " << nev << " pairs recovered; deficient slices:";
    for (Index i = 0; i < part.k; ++i) {
      const Index exact = inertia_robust(D, part.boundaries[i + 1]).n_neg -
                          inertia_robust(D, part.boundaries[i]).n_neg;
      if (results[i].pairs.count() < exact)
        msg << " [slice " << i << ": found " << results[i].pairs.count() << ", exact " << exact
            << "]";
    }
    out.ok = false;
    out.message = msg.str();
    return out;
  }

  std::vector<EigenPairs<S>> parts;
  parts.reserve(results.size());
  for (const auto& r : results) parts.push_back(r.pairs);
  EigenPairs<S> merged = EigenPairs<S>::merge(parts);
  out.accepted = merged.head(nev);
  out.ok = true;
  return out;
}

}  // namespace bandeig
